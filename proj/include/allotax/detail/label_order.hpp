#ifndef ALLOTAX_DETAIL_LABEL_ORDER_HPP
#define ALLOTAX_DETAIL_LABEL_ORDER_HPP

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <string_view>
#include <utility>
#include <vector>

namespace allotax::detail {

// First eight bytes of a label packed big-endian, so that comparing keys as
// integers agrees with bytewise string order whenever the keys differ.
inline std::uint64_t label_prefix_key(std::string_view s) noexcept {
    std::uint64_t key = 0;
    const std::size_t n = std::min<std::size_t>(8, s.size());
    for (std::size_t i = 0; i < n; ++i) {
        key |= std::uint64_t{static_cast<unsigned char>(s[i])} << (56 - 8 * i);
    }
    return key;
}

/// Indices 0..n-1 ordered by ascending label (bytewise), stable on equal labels.
template <class LabelOf>
std::vector<std::uint32_t> order_by_label(std::size_t n, LabelOf&& label_of) {
    std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
    for (std::size_t i = 0; i < n; ++i) {
        keyed[i] = {label_prefix_key(label_of(i)), static_cast<std::uint32_t>(i)};
    }
    std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        const std::string_view la = label_of(a.second);
        const std::string_view lb = label_of(b.second);
        if (la.size() > 8 || lb.size() > 8) {
            const int c = la.compare(lb);
            if (c != 0) return c < 0;
        } else if (la.size() != lb.size()) {
            return la.size() < lb.size();
        }
        return a.second < b.second;
    });
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = keyed[i].second;
    return order;
}

}  // namespace allotax::detail

#endif
