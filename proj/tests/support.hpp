#ifndef ALLOTAX_TESTS_SUPPORT_HPP
#define ALLOTAX_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "allotax/ingest.hpp"
#include "oracle.hpp"

namespace testing {

inline allotax::RankedList make_list(std::string name, std::vector<std::pair<std::string, double>> items,
                                     allotax::SourceKind kind = allotax::SourceKind::counts) {
    allotax::RankedList list;
    list.name = std::move(name);
    list.source_kind = kind;
    for (auto& [label, value] : items) list.entries.push_back({std::move(label), value});
    return list;
}

inline oracle::Counts to_counts(const allotax::RankedList& list) {
    oracle::Counts c;
    for (const auto& e : list.entries) c[e.label] = e.value;
    return c;
}

/// Merge example used throughout: {a:3, b:1} vs {a:2, c:2}.
inline allotax::RankedList example_a() { return make_list("A", {{"a", 3}, {"b", 1}}); }
inline allotax::RankedList example_b() { return make_list("B", {{"a", 2}, {"c", 2}}); }

/// Integer counts drawn from a Pareto(1, 1.1) tail, so ties are common at the bottom.
inline double heavy_tailed_count(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = std::pow(1.0 - u(rng), -1.0 / 1.1);
    return std::floor(std::min(x, 1e9));
}

struct SystemPair {
    allotax::RankedList a;
    allotax::RankedList b;
};

/// Two systems of 1..max_size types sharing a random fraction of their labels.
inline SystemPair random_pair(std::mt19937_64& rng, int max_size = 500) {
    std::uniform_int_distribution<int> size(1, max_size);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    const int n1 = size(rng), n2 = size(rng);
    const int shared = static_cast<int>(std::lround(frac(rng) * std::min(n1, n2)));
    SystemPair p;
    p.a.name = "A";
    p.b.name = "B";
    for (int i = 0; i < n1; ++i) {
        p.a.entries.push_back({i < shared ? "s" + std::to_string(i) : "a" + std::to_string(i), heavy_tailed_count(rng)});
    }
    for (int i = 0; i < n2; ++i) {
        p.b.entries.push_back({i < shared ? "s" + std::to_string(i) : "b" + std::to_string(i), heavy_tailed_count(rng)});
    }
    std::shuffle(p.a.entries.begin(), p.a.entries.end(), rng);
    std::shuffle(p.b.entries.begin(), p.b.entries.end(), rng);
    return p;
}

}  // namespace testing

#endif
