#include "allotax/divergence.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace allotax {

Alpha Alpha::finite(double value) {
    if (!(value > 0) || !std::isfinite(value)) {
        throw AlphaParseError(fmt::format("alpha must be a positive finite number, got {}", value));
    }
    return Alpha(Kind::finite, value);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out,
                                           std::chars_format::general);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

Alpha Alpha::parse(std::string_view text) {
    const std::string_view t = trim(text);
    std::string lower(t);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "inf" || lower == "infinity" || lower == "+inf") return infinity();

    double value = 0;
    if (const auto slash = t.find('/'); slash != std::string_view::npos) {
        double p = 0, q = 0;
        if (!parse_number(trim(t.substr(0, slash)), p) || !parse_number(trim(t.substr(slash + 1)), q) ||
            q == 0) {
            throw AlphaParseError("invalid alpha fraction \"" + std::string(text) + "\"");
        }
        value = p / q;
    } else if (!parse_number(t, value)) {
        throw AlphaParseError("invalid alpha \"" + std::string(text) +
                              "\"; expected a number, p/q, or inf");
    }
    if (value < 0) throw AlphaParseError("alpha must be non-negative, got \"" + std::string(text) + "\"");
    if (value == 0) return zero();
    return finite(value);
}

double Alpha::value() const noexcept {
    switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::infinity: return std::numeric_limits<double>::infinity();
        case Kind::finite: break;
    }
    return value_;
}

std::string Alpha::display() const {
    switch (kind_) {
        case Kind::zero: return "0";
        case Kind::infinity: return "inf";
        case Kind::finite: break;
    }
    return fmt::format("{:.4g}", value_);
}

std::string_view side_name(Side side) noexcept {
    switch (side) {
        case Side::system_1: return "system_1";
        case Side::system_2: return "system_2";
        case Side::tie: return "tie";
    }
    return "tie";
}

double rtd_element(double rank_1, double rank_2, Alpha alpha) noexcept {
    if (rank_1 == rank_2) return 0.0;
    const double lo = std::min(rank_1, rank_2);
    const double hi = std::max(rank_1, rank_2);
    switch (alpha.kind()) {
        case Alpha::Kind::zero: return std::log(hi / lo);
        case Alpha::Kind::infinity: return 1.0 / lo;
        case Alpha::Kind::finite: break;
    }
    // |lo^-a - hi^-a| = lo^-a * (1 - (lo/hi)^a), evaluated in log space so that
    // neither the small-alpha cancellation nor the large-alpha underflow bites.
    const double a = alpha.value();
    const double log_diff = -a * std::log(lo) + std::log(-std::expm1(-a * std::log(hi / lo)));
    return (a + 1) / a * std::exp(log_diff / (a + 1));
}

double pairwise_sum(std::span<const double> values) noexcept {
    constexpr std::size_t kLeaf = 8;
    if (values.size() <= kLeaf) {
        double s = 0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

template <class Fn>
void for_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 4096) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
        pool.emplace_back(fn, begin, std::min(n, begin + chunk));
    }
    for (auto& t : pool) t.join();
}

std::vector<double> normalization_terms(const MergedLexicon& lex, Alpha alpha, unsigned threads) {
    // Disjoint hypothetical: every type of system 1 sits at rank r1 against
    // system 2's last rank n2 + (n1+1)/2, and symmetrically for system 2.
    const double n1 = static_cast<double>(lex.n1);
    const double n2 = static_cast<double>(lex.n2);
    const double last_2 = n2 + (n1 + 1) / 2;
    const double last_1 = n1 + (n2 + 1) / 2;
    std::vector<double> terms(lex.size());
    for_chunks(lex.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const TypeRecord& r = lex.records[i];
            double t = 0;
            if (r.exclusivity != Exclusivity::only_2) t += rtd_element(r.rank_1, last_2, alpha);
            if (r.exclusivity != Exclusivity::only_1) t += rtd_element(last_1, r.rank_2, alpha);
            terms[i] = t;
        }
    });
    return terms;
}

}  // namespace

double normalization(const MergedLexicon& lex, Alpha alpha) {
    const auto terms = normalization_terms(lex, alpha, 1);
    const double n = pairwise_sum(terms);
    assert(n > 0);
    return n;
}

DivergenceResult rtd_total(const MergedLexicon& lex, Alpha alpha, unsigned threads) {
    DivergenceResult result;
    result.alpha = alpha;
    result.contributions.resize(lex.size());

    std::vector<double> elements(lex.size());
    for_chunks(lex.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const TypeRecord& r = lex.records[i];
            const double e = rtd_element(r.rank_1, r.rank_2, alpha);
            elements[i] = e;
            result.contributions[i] = Contribution{e, side_of(r.rank_1, r.rank_2)};
        }
    });
    result.element_sum = pairwise_sum(elements);
    elements = normalization_terms(lex, alpha, threads);
    result.normalization = pairwise_sum(elements);
    if (!(result.normalization > 0)) {
        throw std::logic_error("normalization must be positive for non-empty systems");
    }
    result.total = result.element_sum / result.normalization;
    return result;
}

std::vector<DivergenceResult> alpha_sweep(const MergedLexicon& lex, std::span<const Alpha> alphas,
                                          unsigned threads) {
    if (alphas.empty()) throw std::invalid_argument("alpha sweep needs at least one alpha");
    std::vector<DivergenceResult> out;
    out.reserve(alphas.size());
    for (const Alpha& a : alphas) out.push_back(rtd_total(lex, a, threads));
    return out;
}

}  // namespace allotax
