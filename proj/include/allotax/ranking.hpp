#ifndef ALLOTAX_RANKING_HPP
#define ALLOTAX_RANKING_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "allotax/ingest.hpp"

namespace allotax {

enum class Exclusivity : std::uint8_t { shared, only_1, only_2 };

struct TypeRecord {
    std::string label;
    double rank_1 = 0;
    double rank_2 = 0;
    double count_1 = 0;  // 0 when absent from system 1
    double count_2 = 0;
    Exclusivity exclusivity = Exclusivity::shared;

    bool operator==(const TypeRecord&) const = default;
};

/// Union of two systems' types, sorted by ascending label, each carrying both ranks.
///
/// Types absent from one system share that system's tied last rank:
/// the fractional rank of the positions n + 1 ... n + x appended after its
/// n present types, where x is the number of types missing from it.
struct MergedLexicon {
    std::vector<TypeRecord> records;
    std::size_t n1 = 0, n2 = 0;  // types present in system 1 / 2
    std::size_t x1 = 0, x2 = 0;  // types exclusive to system 1 / 2
    double total_count_1 = 0, total_count_2 = 0;

    std::size_t size() const noexcept { return records.size(); }
    const TypeRecord* find(std::string_view label) const;
    /// Rank given to every type of system 1 that is absent from system 2.
    double last_rank_2() const noexcept { return static_cast<double>(n2) + (static_cast<double>(x1) + 1) / 2; }
    double last_rank_1() const noexcept { return static_cast<double>(n1) + (static_cast<double>(x2) + 1) / 2; }
};

/// Fractional (average) tied ranks, 1 for the largest count; aligned with the input.
std::vector<double> tied_ranks(std::span<const double> counts);

/// Merges two validated lists. Takes them by value so callers can move large inputs in.
///
/// For lists with source_kind == ranks the given ranks pass through
/// unchanged, and 1/rank stands in for the count wherever sizes are needed
/// (cell ordering, balance shares).
MergedLexicon merge_systems(RankedList a, RankedList b);

}  // namespace allotax

#endif
