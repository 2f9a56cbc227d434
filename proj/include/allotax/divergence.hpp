#ifndef ALLOTAX_DIVERGENCE_HPP
#define ALLOTAX_DIVERGENCE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "allotax/ranking.hpp"

namespace allotax {

/// The tuning parameter 0 <= alpha <= infinity. Both endpoints are handled
/// by their closed-form limits rather than by the finite formula.
class Alpha {
public:
    enum class Kind : std::uint8_t { finite, zero, infinity };

    static Alpha finite(double value);
    static Alpha zero() noexcept { return Alpha(Kind::zero, 0.0); }
    static Alpha infinity() noexcept { return Alpha(Kind::infinity, 0.0); }

    /// Accepts decimal text ("0.17", "1e-3"), a fraction "p/q", and "inf"/"infinity".
    /// Text that evaluates to exactly 0 yields zero().
    static Alpha parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    /// Finite value; 0 for zero(), +inf for infinity().
    double value() const noexcept;
    /// Short human-readable form: "0", "inf", or up to 4 significant digits.
    std::string display() const;

    bool operator==(const Alpha&) const = default;

private:
    Alpha(Kind kind, double value) : kind_(kind), value_(value) {}
    Kind kind_;
    double value_;
};

enum class Side : std::uint8_t { system_1, system_2, tie };

std::string_view side_name(Side side) noexcept;

/// Which system ranks the type higher (smaller rank number).
inline Side side_of(double rank_1, double rank_2) noexcept {
    if (rank_1 < rank_2) return Side::system_1;
    if (rank_1 > rank_2) return Side::system_2;
    return Side::tie;
}

/// Summand of the divergence for one type, including the (alpha+1)/alpha prefactor.
/// Zero limit: |ln(r1/r2)|. Infinity limit: 1/min(r1, r2), or 0 when r1 == r2.
double rtd_element(double rank_1, double rank_2, Alpha alpha) noexcept;

/// Value of the unnormalized sum for the same two type sets if they shared no types.
double normalization(const MergedLexicon& lex, Alpha alpha);

struct Contribution {
    double element;
    Side side;
};

struct DivergenceResult {
    Alpha alpha = Alpha::zero();
    double total = 0;
    double normalization = 0;
    double element_sum = 0;
    /// One entry per lexicon record, in the lexicon's (label) order.
    std::vector<Contribution> contributions;

    /// Fraction of the summed elements due to record i; 0 when total is 0.
    double normalized_share(std::size_t i) const noexcept {
        return element_sum > 0 ? contributions[i].element / element_sum : 0.0;
    }
};

/// `threads` only splits the element evaluation; the reduction order is fixed,
/// so results are bit-identical for every thread count.
DivergenceResult rtd_total(const MergedLexicon& lex, Alpha alpha, unsigned threads = 1);

std::vector<DivergenceResult> alpha_sweep(const MergedLexicon& lex, std::span<const Alpha> alphas,
                                          unsigned threads = 1);

/// Pairwise (tree) summation with a fixed split rule.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace allotax

#endif
