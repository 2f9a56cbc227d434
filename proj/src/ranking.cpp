#include "allotax/ranking.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "allotax/detail/label_order.hpp"

namespace allotax {

std::vector<double> tied_ranks(std::span<const double> counts) {
    if (counts.empty()) throw EmptyInputError("cannot rank an empty sequence");
    const std::size_t n = counts.size();
    std::vector<std::pair<double, std::uint32_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = {counts[i], static_cast<std::uint32_t>(i)};
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    std::vector<double> ranks(n);
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && order[end].first == order[start].first) ++end;
        // positions start+1 .. end (1-based) share their mean
        const double rank = (static_cast<double>(start + 1) + static_cast<double>(end)) / 2;
        for (std::size_t i = start; i < end; ++i) ranks[order[i].second] = rank;
        start = end;
    }
    return ranks;
}

const TypeRecord* MergedLexicon::find(std::string_view label) const {
    const auto it = std::lower_bound(records.begin(), records.end(), label,
                                     [](const TypeRecord& r, std::string_view l) { return r.label < l; });
    if (it == records.end() || it->label != label) return nullptr;
    return &*it;
}

namespace {

struct PreparedSystem {
    std::vector<double> ranks;
    std::vector<double> sizes;
    std::vector<std::uint32_t> by_label;
    double total = 0;
};

PreparedSystem prepare(const RankedList& list) {
    PreparedSystem p;
    const std::size_t n = list.entries.size();
    p.sizes.resize(n);
    if (list.source_kind == SourceKind::ranks) {
        p.ranks.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            p.ranks[i] = list.entries[i].value;
            p.sizes[i] = 1.0 / list.entries[i].value;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) p.sizes[i] = list.entries[i].value;
        p.ranks = tied_ranks(p.sizes);
    }
    for (double s : p.sizes) p.total += s;
    p.by_label = detail::order_by_label(
        n, [&](std::size_t i) -> std::string_view { return list.entries[i].label; });
    return p;
}

}  // namespace

MergedLexicon merge_systems(RankedList a, RankedList b) {
    if (a.entries.empty() || b.entries.empty()) {
        throw EmptyInputError("both systems need at least one type");
    }
    const PreparedSystem pa = prepare(a);
    const PreparedSystem pb = prepare(b);

    MergedLexicon lex;
    lex.n1 = a.entries.size();
    lex.n2 = b.entries.size();
    lex.total_count_1 = pa.total;
    lex.total_count_2 = pb.total;
    lex.records.reserve(std::max(lex.n1, lex.n2));

    std::size_t ia = 0, ib = 0;
    while (ia < lex.n1 || ib < lex.n2) {
        int cmp;
        if (ia == lex.n1) {
            cmp = 1;
        } else if (ib == lex.n2) {
            cmp = -1;
        } else {
            cmp = a.entries[pa.by_label[ia]].label.compare(b.entries[pb.by_label[ib]].label);
        }
        TypeRecord rec;
        if (cmp <= 0) {
            const std::uint32_t k = pa.by_label[ia++];
            rec.label = std::move(a.entries[k].label);
            rec.rank_1 = pa.ranks[k];
            rec.count_1 = pa.sizes[k];
        }
        if (cmp >= 0) {
            const std::uint32_t k = pb.by_label[ib++];
            if (cmp > 0) rec.label = std::move(b.entries[k].label);
            rec.rank_2 = pb.ranks[k];
            rec.count_2 = pb.sizes[k];
        }
        rec.exclusivity = cmp < 0 ? Exclusivity::only_1 : cmp > 0 ? Exclusivity::only_2 : Exclusivity::shared;
        if (cmp < 0) ++lex.x1;
        if (cmp > 0) ++lex.x2;
        lex.records.push_back(std::move(rec));
    }

    const double last_2 = lex.last_rank_2();
    const double last_1 = lex.last_rank_1();
    for (auto& rec : lex.records) {
        if (rec.exclusivity == Exclusivity::only_1) rec.rank_2 = last_2;
        if (rec.exclusivity == Exclusivity::only_2) rec.rank_1 = last_1;
    }
    return lex;
}

}  // namespace allotax
