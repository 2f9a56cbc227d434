// Brute-force reference for rank-turbulence divergence, used only by tests.
//
// Deliberately shares no code with the library: ranks come from O(n^2)
// counting, systems are merged through std::map, the normalization is the raw
// sum over an explicitly constructed disjoint pair of systems, and all
// arithmetic is long double with the textbook formula.
#ifndef ALLOTAX_TESTS_ORACLE_HPP
#define ALLOTAX_TESTS_ORACLE_HPP

#include <cmath>
#include <map>
#include <string>

namespace oracle {

using Counts = std::map<std::string, long double>;
using Ranks = std::map<std::string, long double>;

// rank = 1 + #(strictly larger) + (#(equal, including itself) - 1) / 2
inline Ranks tied_ranks(const Counts& counts) {
    Ranks out;
    for (const auto& [label, c] : counts) {
        long double larger = 0, equal = 0;
        for (const auto& [other, d] : counts) {
            if (d > c) larger += 1;
            if (d == c) equal += 1;
        }
        out[label] = 1 + larger + (equal - 1) / 2;
    }
    return out;
}

enum class Limit { none, zero, infinity };

inline long double element(long double r1, long double r2, long double alpha, Limit limit = Limit::none) {
    if (limit == Limit::zero) return std::fabs(std::log(r1) - std::log(r2));
    if (limit == Limit::infinity) return r1 == r2 ? 0.0L : 1.0L / std::fmin(r1, r2);
    return (alpha + 1) / alpha * std::pow(std::fabs(std::pow(r1, -alpha) - std::pow(r2, -alpha)), 1 / (alpha + 1));
}

struct Pair {
    Ranks r1, r2;  // over the union
};

inline Pair merged_ranks(const Counts& a, const Counts& b) {
    const Ranks ra = tied_ranks(a), rb = tied_ranks(b);
    long double only_a = 0, only_b = 0;
    for (const auto& [l, c] : a) only_a += b.count(l) ? 0 : 1;
    for (const auto& [l, c] : b) only_b += a.count(l) ? 0 : 1;
    const long double last_b = static_cast<long double>(b.size()) + (only_a + 1) / 2;
    const long double last_a = static_cast<long double>(a.size()) + (only_b + 1) / 2;
    Pair p;
    for (const auto& [l, c] : a) {
        p.r1[l] = ra.at(l);
        p.r2[l] = b.count(l) ? rb.at(l) : last_b;
    }
    for (const auto& [l, c] : b) {
        p.r2[l] = rb.at(l);
        if (!a.count(l)) p.r1[l] = last_a;
    }
    return p;
}

inline long double raw_sum(const Counts& a, const Counts& b, long double alpha, Limit limit) {
    const Pair p = merged_ranks(a, b);
    long double s = 0;
    for (const auto& [l, r] : p.r1) s += element(r, p.r2.at(l), alpha, limit);
    return s;
}

inline long double normalization(const Counts& a, const Counts& b, long double alpha, Limit limit = Limit::none) {
    Counts a_only, b_only;
    for (const auto& [l, c] : a) a_only["1:" + l] = c;
    for (const auto& [l, c] : b) b_only["2:" + l] = c;
    return raw_sum(a_only, b_only, alpha, limit);
}

inline long double divergence(const Counts& a, const Counts& b, long double alpha, Limit limit = Limit::none) {
    return raw_sum(a, b, alpha, limit) / normalization(a, b, alpha, limit);
}

}  // namespace oracle

#endif
