// Acceptance suite: one PASS/FAIL line per criterion.
#include <fcntl.h>
#include <spawn.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "allotax/divergence.hpp"
#include "allotax/plotgeom.hpp"
#include "oracle.hpp"
#include "support.hpp"
#include "xml_check.hpp"

using namespace allotax;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

extern char** environ;

namespace {

const Alpha kAlphas[] = {Alpha::zero(), Alpha::finite(0.17), Alpha::finite(1.0 / 3), Alpha::finite(1),
                         Alpha::finite(3), Alpha::infinity()};

oracle::Limit limit_of(Alpha a) {
    switch (a.kind()) {
        case Alpha::Kind::zero: return oracle::Limit::zero;
        case Alpha::Kind::infinity: return oracle::Limit::infinity;
        default: return oracle::Limit::none;
    }
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

std::vector<testing::SystemPair> corpus(std::size_t n, std::uint64_t seed, int max_size = 500) {
    std::mt19937_64 rng(seed);
    std::vector<testing::SystemPair> pairs;
    pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pairs.push_back(testing::random_pair(rng, max_size));
    return pairs;
}

struct ProcessResult {
    int exit_code = -1;
    double seconds = 0;
    long max_rss_kib = 0;
};

ProcessResult run_process(const std::vector<std::string>& args, const fs::path& stdout_path) {
    std::vector<char*> argv;
    for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, stdout_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    ProcessResult result;
    const auto start = Clock::now();
    pid_t pid = 0;
    if (posix_spawn(&pid, argv[0], &actions, nullptr, argv.data(), environ) != 0) {
        posix_spawn_file_actions_destroy(&actions);
        return result;
    }
    posix_spawn_file_actions_destroy(&actions);
    int status = 0;
    rusage usage{};
    wait4(pid, &status, 0, &usage);
    result.seconds = seconds_since(start);
    result.max_rss_kib = usage.ru_maxrss;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome bounds(const std::vector<testing::SystemPair>& pairs) {
    const auto start = Clock::now();
    double lo = 1, hi = 0;
    for (const auto& p : pairs) {
        const MergedLexicon lex = merge_systems(p.a, p.b);
        for (const DivergenceResult& r : alpha_sweep(lex, kAlphas)) {
            lo = std::min(lo, r.total);
            hi = std::max(hi, r.total);
        }
    }
    const double t = seconds_since(start);
    return {lo >= 0 && hi <= 1 + 1e-12 && t < 30,
            fmt::format("{} pairs x 6 alpha, D in [{:.6g}, {:.15g}], {:.2f} s", pairs.size(), lo, hi, t)};
}

Outcome identity_saturation(const std::vector<testing::SystemPair>& pairs) {
    double worst_identity = 0, worst_disjoint = 0;
    for (const auto& p : pairs) {
        const MergedLexicon same = merge_systems(p.a, p.a);
        auto renamed = p.b;
        for (auto& e : renamed.entries) e.label = "other:" + e.label;
        const MergedLexicon disjoint = merge_systems(p.a, renamed);
        for (const Alpha alpha : kAlphas) {
            worst_identity = std::max(worst_identity, std::fabs(rtd_total(same, alpha).total));
            worst_disjoint = std::max(worst_disjoint, std::fabs(rtd_total(disjoint, alpha).total - 1));
        }
    }
    return {worst_identity == 0 && worst_disjoint <= 1e-9,
            fmt::format("max |D(identical)| = {:.3g}, max |D(disjoint) - 1| = {:.3g}", worst_identity, worst_disjoint)};
}

Outcome symmetry(const std::vector<testing::SystemPair>& pairs) {
    double worst = 0;
    for (const auto& p : pairs) {
        const auto ab = alpha_sweep(merge_systems(p.a, p.b), kAlphas);
        const auto ba = alpha_sweep(merge_systems(p.b, p.a), kAlphas);
        for (std::size_t k = 0; k < ab.size(); ++k) worst = std::max(worst, std::fabs(ab[k].total - ba[k].total));
    }
    return {worst <= 1e-12, fmt::format("max |D(a,b) - D(b,a)| = {:.3g}", worst)};
}

Outcome oracle_equivalence() {
    const MergedLexicon example = merge_systems(testing::example_a(), testing::example_b());
    const double d = rtd_total(example, Alpha::finite(1)).total;
    const double want = static_cast<double>(
        oracle::divergence(testing::to_counts(testing::example_a()), testing::to_counts(testing::example_b()), 1));
    std::mt19937_64 rng(2024);
    double worst = 0;
    int cases = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        auto p = testing::random_pair(rng, 10);
        const MergedLexicon lex = merge_systems(p.a, p.b);
        if (lex.size() > 20) continue;
        const auto a = testing::to_counts(p.a), b = testing::to_counts(p.b);
        for (const Alpha alpha : kAlphas) {
            const long double av = alpha.kind() == Alpha::Kind::finite ? alpha.value() : 0;
            const double expected = static_cast<double>(oracle::divergence(a, b, av, limit_of(alpha)));
            worst = std::max(worst, std::fabs(rtd_total(lex, alpha).total - expected));
            ++cases;
        }
    }
    const bool ok = std::fabs(d - 0.6147) <= 1e-4 && std::fabs(d - want) <= 1e-4 && worst <= 1e-10;
    return {ok, fmt::format("example D = {:.10f} (oracle {:.10f}); {} lexicon cases, max error {:.3g}", d, want,
                            cases, worst)};
}

Outcome limit_consistency() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> half_rank(2, 20000);
    double worst_zero = 0, worst_inf = 0;
    for (int i = 0; i < 10000; ++i) {
        const double r1 = half_rank(rng) / 2.0, r2 = half_rank(rng) / 2.0;
        worst_zero = std::max(worst_zero, std::fabs(rtd_element(r1, r2, Alpha::finite(1e-6)) -
                                                    rtd_element(r1, r2, Alpha::zero())));
        worst_inf = std::max(worst_inf, std::fabs(rtd_element(r1, r2, Alpha::finite(1e6)) -
                                                  rtd_element(r1, r2, Alpha::infinity())));
    }
    return {worst_zero <= 1e-4 && worst_inf <= 1e-4,
            fmt::format("10000 rank pairs, max gap {:.3g} at alpha=1e-6, {:.3g} at alpha=1e6", worst_zero, worst_inf)};
}

Outcome scale_invariance(const std::vector<testing::SystemPair>& pairs) {
    double drift = 0;
    bool ranks_equal = true;
    for (std::size_t n = 0; n < 200; ++n) {
        const auto& p = pairs[n];
        const MergedLexicon base = merge_systems(p.a, p.b);
        const auto d0 = alpha_sweep(base, kAlphas);
        for (double c : {1e-6, 3.0, 1e9}) {
            auto scaled = p.a;
            for (auto& e : scaled.entries) e.value *= c;
            const MergedLexicon lex = merge_systems(scaled, p.b);
            for (std::size_t i = 0; i < lex.size(); ++i) {
                ranks_equal = ranks_equal && lex.records[i].rank_1 == base.records[i].rank_1 &&
                              lex.records[i].rank_2 == base.records[i].rank_2;
            }
            const auto d = alpha_sweep(lex, kAlphas);
            for (std::size_t k = 0; k < d.size(); ++k) drift = std::max(drift, std::fabs(d[k].total - d0[k].total));
        }
    }
    return {ranks_equal && drift <= 1e-12,
            fmt::format("200 pairs x c in {{1e-6, 3, 1e9}}: ranks {}, max D drift {:.3g}",
                        ranks_equal ? "identical" : "CHANGED", drift)};
}

Outcome tied_rank_conservation() {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> size(1, 1000), small(1, 20), coin(0, 1);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = size(rng);
        std::vector<double> v(n);
        for (double& x : v) x = coin(rng) ? small(rng) : testing::heavy_tailed_count(rng);
        const auto ranks = tied_ranks(v);
        double sum = 0;
        for (double r : ranks) sum += r;
        if (sum != n * (n + 1.0) / 2) ++bad;
    }
    return {bad == 0, fmt::format("1000 vectors, {} with a wrong rank sum", bad)};
}

Outcome diamond(const std::vector<testing::SystemPair>& pairs) {
    int bad_mass = 0, bad_transpose = 0;
    for (const auto& p : pairs) {
        const MergedLexicon ab = merge_systems(p.a, p.b);
        const MergedLexicon ba = merge_systems(p.b, p.a);
        for (int k : {10, 60, 200}) {
            const DiamondGrid g = build_diamond(ab, k);
            const DiamondGrid t = build_diamond(ba, k);
            if (g.total_count() != ab.size()) ++bad_mass;
            bool same = g.cells.size() == t.cells.size();
            for (const auto& [c, cell] : g.cells) {
                const auto it = t.cells.find({c.j, c.i});
                same = same && it != t.cells.end() && it->second == cell;
            }
            if (!same) ++bad_transpose;
        }
    }
    return {bad_mass == 0 && bad_transpose == 0,
            fmt::format("{} pairs x k in {{10, 60, 200}}: {} mass violations, {} transpose violations", pairs.size(),
                        bad_mass, bad_transpose)};
}

void write_zipf(const fs::path& path, std::size_t n, std::size_t first_id, double exponent, std::uint64_t seed) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = first_id + i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> near(i, std::min(n - 1, i + 1000));
        std::swap(ids[i], ids[near(rng)]);
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs("types,counts\n", f);
    fmt::memory_buffer buf;
    for (std::size_t r = 0; r < n; ++r) {
        const auto count = static_cast<std::uint64_t>(1e10 / std::pow(static_cast<double>(r + 1), exponent));
        fmt::format_to(std::back_inserter(buf), "w{},{}\n", ids[r], count);
        if (buf.size() > (1 << 20)) {
            std::fwrite(buf.data(), 1, buf.size(), f);
            buf.clear();
        }
    }
    std::fwrite(buf.data(), 1, buf.size(), f);
    std::fclose(f);
}

Outcome desk_scale(const fs::path& work) {
    constexpr std::size_t n = 10'000'000;
    const fs::path a = work / "zipf_1.csv", b = work / "zipf_2.csv";
    write_zipf(a, n, 0, 1.0, 1);
    write_zipf(b, n, n / 4, 0.9, 2);
    const ProcessResult r = run_process({ALLOTAX_CLI, "compare", a.string(), b.string(), "--alpha", "1/3", "-o",
                                         (work / "zipf.svg").string()},
                                        work / "zipf.out");
    const double gib = r.max_rss_kib / (1024.0 * 1024.0);
    const auto svg_size = fs::exists(work / "zipf.svg") ? fs::file_size(work / "zipf.svg") : 0;
    const unsigned cores = std::thread::hardware_concurrency();
    fs::remove(a);
    fs::remove(b);
    return {r.exit_code == 0 && r.seconds <= 60 && gib <= 4,
            fmt::format("2 x 1e7 types: exit {}, {:.1f} s, peak {:.2f} GiB, svg {} bytes, {} core(s)", r.exit_code,
                        r.seconds, gib, svg_size, cores)};
}

Outcome cli_reproduction(const fs::path& work) {
    const fs::path data = ALLOTAX_DATA_DIR;
    std::string outputs[2];
    int codes[2];
    for (int run = 0; run < 2; ++run) {
        const fs::path out = work / fmt::format("boys_{}.svg", run);
        codes[run] = run_process({ALLOTAX_CLI, "compare", (data / "boys_1968.json").string(),
                                  (data / "boys_2018.json").string(), "--alpha", "0.17", "--title1",
                                  "Baby boy names 1968", "--title2", "Baby boy names 2018", "-o", out.string()},
                                 work / "boys.out")
                         .exit_code;
        outputs[run] = slurp(out);
    }
    const auto xml = testing::check_xml(outputs[0]);
    const bool ok = codes[0] == 0 && codes[1] == 0 && xml.well_formed && xml.root == "svg" && !outputs[0].empty() &&
                    outputs[0] == outputs[1];
    return {ok, fmt::format("exit {}/{}, well-formed {}, {} bytes, runs identical: {}", codes[0], codes[1],
                            xml.well_formed ? "yes" : xml.error, outputs[0].size(),
                            outputs[0] == outputs[1] ? "yes" : "no")};
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / fmt::format("allotax_acceptance_{}", ::getpid());
    fs::create_directories(work);
    const auto pairs = corpus(1000, 20240601);

    report("bounds", [&] { return bounds(pairs); });
    report("identity-and-saturation", [&] { return identity_saturation(pairs); });
    report("symmetry", [&] { return symmetry(pairs); });
    report("oracle-equivalence", oracle_equivalence);
    report("limit-consistency", limit_consistency);
    report("scale-invariance", [&] { return scale_invariance(pairs); });
    report("tied-rank-conservation", tied_rank_conservation);
    report("diamond-mass-and-transpose", [&] { return diamond(pairs); });
    report("desk-scale-performance", [&] { return desk_scale(work); });
    report("cli-reproduction", [&] { return cli_reproduction(work); });

    fs::remove_all(work);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
