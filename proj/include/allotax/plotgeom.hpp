#ifndef ALLOTAX_PLOTGEOM_HPP
#define ALLOTAX_PLOTGEOM_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "allotax/divergence.hpp"
#include "allotax/ranking.hpp"

namespace allotax {

/// (i, j) bins of (log10 r1, log10 r2); i indexes system 1's rank.
struct CellIndex {
    int i = 0;
    int j = 0;
    auto operator<=>(const CellIndex&) const = default;
};

struct Cell {
    std::uint64_t count = 0;
    std::string top_label;  // largest combined count in the cell, label ascending on ties

    bool operator==(const Cell&) const = default;
};

struct FlankLabel {
    CellIndex cell;
    std::string label;
    Side side;

    bool operator==(const FlankLabel&) const = default;
};

/// Point in (log10 r1, log10 r2) coordinates.
struct Point {
    double x = 0;
    double y = 0;
};

using Polyline = std::vector<Point>;

struct DiamondGrid {
    int k = 0;
    double log_rank_max = 1;
    std::map<CellIndex, Cell> cells;  // only non-empty cells
    std::vector<FlankLabel> labels;
    std::vector<Polyline> contours;

    std::uint64_t total_count() const noexcept;
};

struct WordshiftEntry {
    std::string label;
    double element = 0;
    double normalized_share = 0;
    Side side = Side::system_1;
    double rank_1 = 0;
    double rank_2 = 0;
};

struct BalanceStats {
    std::array<double, 2> count_share{};      // share of combined total counts
    std::array<double, 2> type_share{};       // n_i / |union|
    std::array<double, 2> exclusive_share{};  // x_i / |union|
};

inline constexpr int kDefaultCells = 60;
inline constexpr std::size_t kDefaultWordshiftLength = 30;
inline constexpr std::size_t kDefaultLabelsPerSide = 25;
inline constexpr int kDefaultContourLevels = 6;
inline constexpr int kContourSamplesPerDecade = 64;

/// max(1, ceil(log10 of the largest rank in either system)).
double log_rank_max(const MergedLexicon& lex);

/// Bins every record; k >= 2.
DiamondGrid build_diamond(const MergedLexicon& lex, int k);

/// Level curves of the element through (1, 10^(m * log_rank_max / levels)),
/// m = 1..levels, each emitted as the branch above the diagonal followed by
/// its mirror image below it.
std::vector<Polyline> contour_lines(Alpha alpha, double log_rank_max, int levels);

/// The n largest non-tie contributions, element descending, label ascending on ties.
std::vector<WordshiftEntry> wordshift(const DivergenceResult& result, const MergedLexicon& lex,
                                      std::size_t n);

BalanceStats balance(const MergedLexicon& lex);

/// Flank labels. Row i contributes the cell (i, j > i) farthest from the
/// diagonal (system 1 side); column j contributes the cell (i > j, j) farthest
/// from it (system 2 side). Over budget, every ceil(candidates / max)-th band is kept.
std::vector<FlankLabel> select_labels(const DiamondGrid& grid, std::size_t max_per_side);

}  // namespace allotax

#endif
