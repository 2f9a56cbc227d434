#include "allotax/plotgeom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace allotax {

std::uint64_t DiamondGrid::total_count() const noexcept {
    std::uint64_t total = 0;
    for (const auto& [idx, cell] : cells) total += cell.count;
    return total;
}

double log_rank_max(const MergedLexicon& lex) {
    double max_rank = 1;
    for (const auto& r : lex.records) max_rank = std::max({max_rank, r.rank_1, r.rank_2});
    return std::max(1.0, std::ceil(std::log10(max_rank)));
}

namespace {

int bin_of(double rank, int k, double lrm) {
    const int b = static_cast<int>(std::floor(k * std::log10(rank) / lrm));
    return std::clamp(b, 0, k - 1);
}

}  // namespace

DiamondGrid build_diamond(const MergedLexicon& lex, int k) {
    if (k < 2) throw std::invalid_argument("diamond grid needs at least 2 cells per axis");
    DiamondGrid grid;
    grid.k = k;
    grid.log_rank_max = log_rank_max(lex);

    const std::size_t cells = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    std::vector<std::uint64_t> counts(cells, 0);
    std::vector<std::int64_t> top(cells, -1);
    for (std::size_t r = 0; r < lex.size(); ++r) {
        const TypeRecord& rec = lex.records[r];
        const std::size_t idx = static_cast<std::size_t>(bin_of(rec.rank_1, k, grid.log_rank_max)) * k +
                                static_cast<std::size_t>(bin_of(rec.rank_2, k, grid.log_rank_max));
        ++counts[idx];
        // records are label-ordered, so a strict comparison keeps the smallest label on ties
        if (top[idx] < 0) {
            top[idx] = static_cast<std::int64_t>(r);
        } else {
            const TypeRecord& best = lex.records[static_cast<std::size_t>(top[idx])];
            if (rec.count_1 + rec.count_2 > best.count_1 + best.count_2) top[idx] = static_cast<std::int64_t>(r);
        }
    }
    for (std::size_t idx = 0; idx < cells; ++idx) {
        if (counts[idx] == 0) continue;
        const CellIndex ci{static_cast<int>(idx / k), static_cast<int>(idx % k)};
        grid.cells.emplace(ci, Cell{counts[idx], lex.records[static_cast<std::size_t>(top[idx])].label});
    }
    return grid;
}

namespace {

double element_at(double log_r1, double log_r2, Alpha alpha) {
    return rtd_element(std::pow(10.0, log_r1), std::pow(10.0, log_r2), alpha);
}

// Smallest y in (x, hi] with element(x, y) >= level, by bisection; the
// element grows monotonically with y above the diagonal for alpha < inf.
double solve_upper(double x, double hi, double level, Alpha alpha) {
    double lo = x;
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (element_at(x, mid, alpha) < level) lo = mid;
        else hi = mid;
    }
    return hi;
}

Polyline mirrored(const Polyline& line) {
    Polyline out;
    out.reserve(line.size());
    for (const Point& p : line) out.push_back(Point{p.y, p.x});
    return out;
}

Polyline infinite_alpha_branch(double level, double lrm) {
    // element = 1/min(r1, r2): the level set is min(r1, r2) = 1/level, an L
    // whose corner sits on the diagonal.
    const double u = std::log10(1.0 / level);
    Polyline line;
    if (u < 0 || u > lrm) return line;
    const int steps = std::max(1, static_cast<int>(std::ceil((lrm - u) * kContourSamplesPerDecade)));
    for (int s = 0; s <= steps; ++s) {
        line.push_back(Point{u, u + (lrm - u) * s / steps});
    }
    return line;
}

Polyline finite_alpha_branch(double level, double lrm, Alpha alpha) {
    Polyline line;
    const int steps = static_cast<int>(std::ceil(lrm * kContourSamplesPerDecade));
    for (int s = 0; s <= steps; ++s) {
        const double x = lrm * s / steps;
        if (element_at(x, lrm, alpha) < level) {
            // Curve leaves the square through the top edge between the
            // previous sample and this one; close it at the exact crossing.
            if (!line.empty()) {
                double a = lrm * (s - 1) / steps, b = x;
                for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, b); ++iter) {
                    const double mid = 0.5 * (a + b);
                    if (element_at(mid, lrm, alpha) >= level) a = mid;
                    else b = mid;
                }
                line.push_back(Point{a, solve_upper(a, lrm, level, alpha)});
            }
            break;
        }
        line.push_back(Point{x, solve_upper(x, lrm, level, alpha)});
    }
    return line;
}

}  // namespace

std::vector<Polyline> contour_lines(Alpha alpha, double lrm, int levels) {
    if (levels < 1) throw std::invalid_argument("contour levels must be at least 1");
    std::vector<Polyline> out;
    for (int m = 1; m <= levels; ++m) {
        const double anchor = m * lrm / levels;
        const double level = element_at(0.0, anchor, alpha);
        Polyline branch = alpha.kind() == Alpha::Kind::infinity ? infinite_alpha_branch(level, lrm)
                                                                 : finite_alpha_branch(level, lrm, alpha);
        if (branch.size() < 2) continue;
        Polyline mirror = mirrored(branch);
        out.push_back(std::move(branch));
        out.push_back(std::move(mirror));
    }
    return out;
}

std::vector<WordshiftEntry> wordshift(const DivergenceResult& result, const MergedLexicon& lex,
                                      std::size_t n) {
    if (n == 0) throw std::invalid_argument("wordshift length must be at least 1");
    std::vector<std::uint32_t> idx;
    for (std::size_t i = 0; i < result.contributions.size(); ++i) {
        if (result.contributions[i].side != Side::tie) idx.push_back(static_cast<std::uint32_t>(i));
    }
    const auto by_element = [&](std::uint32_t a, std::uint32_t b) {
        const double ea = result.contributions[a].element;
        const double eb = result.contributions[b].element;
        if (ea != eb) return ea > eb;
        return a < b;  // lexicon order is label order
    };
    const std::size_t take = std::min(n, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(), by_element);
    idx.resize(take);

    std::vector<WordshiftEntry> out;
    out.reserve(take);
    for (std::uint32_t i : idx) {
        const TypeRecord& rec = lex.records[i];
        out.push_back(WordshiftEntry{rec.label, result.contributions[i].element, result.normalized_share(i),
                                     result.contributions[i].side, rec.rank_1, rec.rank_2});
    }
    return out;
}

BalanceStats balance(const MergedLexicon& lex) {
    BalanceStats b;
    const double total = lex.total_count_1 + lex.total_count_2;
    if (total > 0) {
        b.count_share = {lex.total_count_1 / total, lex.total_count_2 / total};
    }
    const double size = static_cast<double>(lex.size());
    b.type_share = {static_cast<double>(lex.n1) / size, static_cast<double>(lex.n2) / size};
    b.exclusive_share = {static_cast<double>(lex.x1) / size, static_cast<double>(lex.x2) / size};
    return b;
}

std::vector<FlankLabel> select_labels(const DiamondGrid& grid, std::size_t max_per_side) {
    if (max_per_side == 0) throw std::invalid_argument("label budget must be at least 1");
    // band -> farthest off-diagonal cell
    std::map<int, CellIndex> side_1;  // keyed by row
    std::map<int, CellIndex> side_2;  // keyed by column
    for (const auto& [c, cell] : grid.cells) {
        if (c.i < c.j) {
            auto [it, inserted] = side_1.try_emplace(c.i, c);
            if (!inserted && c.j - c.i > it->second.j - it->second.i) it->second = c;
        } else if (c.i > c.j) {
            auto [it, inserted] = side_2.try_emplace(c.j, c);
            if (!inserted && c.i - c.j > it->second.i - it->second.j) it->second = c;
        }
    }

    std::vector<FlankLabel> out;
    const auto emit = [&](const std::map<int, CellIndex>& bands, Side side) {
        const std::size_t step = (bands.size() + max_per_side - 1) / max_per_side;
        std::size_t pos = 0;
        for (const auto& [band, c] : bands) {
            if (step <= 1 || pos % step == 0) out.push_back(FlankLabel{c, grid.cells.at(c).top_label, side});
            ++pos;
        }
    };
    emit(side_1, Side::system_1);
    emit(side_2, Side::system_2);
    return out;
}

}  // namespace allotax
