// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 1 4 11     run a subset

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "sidon/sidon.hpp"

using namespace sidon;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Criterion = std::function<Verdict()>;

std::string fmt(double x, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

// 1. count_exact == count_oracle on n <= 24, 1 <= k <= 8, h in {2,3}, g in {1,2}.
Verdict oracle_equivalence() {
    std::size_t cells = 0;
    for (std::size_t h : {2u, 3u})
        for (std::uint64_t g : {1u, 2u})
            for (std::int64_t n = 1; n <= 24; ++n)
                for (std::int64_t k = 1; k <= std::min<std::int64_t>(8, n); ++k) {
                    const auto fast = count_exact(n, k, h, g);
                    const auto slow = count_oracle(n, k, h, g);
                    ++cells;
                    if (fast.count != slow.count)
                        return {false, "mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k) + " h=" +
                                           std::to_string(h) + " g=" + std::to_string(g) + ": " + fast.count.str() +
                                           " vs " + slow.count.str()};
                }
    return {true, std::to_string(cells) + " cells equal"};
}

// 2. B_2[g](k,n) > C(n,k)(1 - 4k^(2g+2)/n^g) wherever the right side is positive.
Verdict b2g_lower_bound_holds() {
    std::size_t informative = 0;
    for (std::int64_t g = 1; g <= 3; ++g)
        for (std::int64_t n = 1; n <= 40; ++n)
            for (std::int64_t k = 1; k <= std::min<std::int64_t>(8, n); ++k) {
                const auto b = b2g_lower_bound(n, k, g);
                if (!b.informative()) continue;
                ++informative;
                const auto c = count_exact(n, k, 2, static_cast<std::uint64_t>(g)).count;
                if (!(ExactRational(c) > b.bound_value))
                    return {false, "violated at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                       " g=" + std::to_string(g)};
            }
    return {true, std::to_string(informative) + " cells with positive bound, all strict"};
}

// 3. No B_h[g]-set of size cap(n,h,g) in {1..n}, n <= 30, h in {2,3}, g <= 2.
Verdict cardinality_cap() {
    std::size_t cells = 0;
    for (std::int64_t h = 2; h <= 3; ++h)
        for (std::int64_t g = 1; g <= 2; ++g)
            for (std::int64_t n = 1; n <= 30; ++n) {
                const auto cap = static_cast<std::int64_t>(bhg_cardinality_cap(n, h, g));
                const auto c = count_exact(n, cap, static_cast<std::size_t>(h), static_cast<std::uint64_t>(g)).count;
                ++cells;
                if (c != 0)
                    return {false, "found " + c.str() + " sets at n=" + std::to_string(n) + " h=" + std::to_string(h) +
                                       " g=" + std::to_string(g) + " cap=" + std::to_string(cap)};
            }
    // h = 1 is outside the bound's derivation: {1..n} is a B_1[1]-set of size n = cap.
    return {true, std::to_string(cells) + " cells empty (h = 1 excluded, see README)"};
}

// 4. C(n-j,k-j)/C(n,k) <= (k/n)^j for 0 <= j <= k <= n <= 60.
Verdict binomial_ratio_lemma() {
    std::size_t cases = 0;
    for (std::int64_t n = 1; n <= 60; ++n)
        for (std::int64_t k = 0; k <= n; ++k)
            for (std::int64_t j = 0; j <= k; ++j, ++cases)
                if (!binom_ratio_and_bound(n, k, j).holds)
                    return {false, "fails at n=" + std::to_string(n) + " k=" + std::to_string(k) + " j=" + std::to_string(j)};
    return {true, std::to_string(cases) + " exact comparisons"};
}

// 5. sum_m r_{A,h}(m) = C(k+h-1, h) on 1000 random A, k <= 10, h <= 4.
Verdict representation_sum_identity() {
    std::mt19937_64 rng(20240501);
    for (int t = 0; t < 1000; ++t) {
        const std::int64_t n = 10 + static_cast<std::int64_t>(rng() % 41);
        const std::int64_t k = static_cast<std::int64_t>(rng() % 11);
        const std::size_t h = 1 + rng() % 4;
        std::vector<value_type> all(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i + 1;
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(static_cast<std::size_t>(k));
        std::sort(all.begin(), all.end());
        const IntegerSet a(all, n);
        const auto total = BigCount(representation_table(a, h).total());
        if (total != binomial(k + static_cast<std::int64_t>(h) - 1, static_cast<std::int64_t>(h)))
            return {false, "identity fails for " + a.to_string() + " h=" + std::to_string(h)};
    }
    return {true, "1000 random sets"};
}

std::string describe(const std::vector<ScanPoint>& pts) {
    std::string s;
    for (const auto& p : pts)
        s += " n=" + std::to_string(p.estimate.n) + ":k=" + std::to_string(p.estimate.k) + ",p=" +
             fmt(p.estimate.p_hat()) + "±" + fmt(p.estimate.half_width(), 2);
    return s;
}

// 6. alpha = 0.2 scan: nondecreasing within 2x CI slack, final point above
//    its exact bound 1 - 4k^4/n minus the CI half-width.
Verdict subcritical_scan() {
    ScanConfig cfg{2, 1, 0.2, 1.0, {1000, 10000, 100000, 1000000}, 20000, 6};
    const auto pts = density_scan(cfg);
    for (const auto& p : pts)
        if (!p.ok()) return {false, p.error};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto& a = pts[i - 1].estimate;
        const auto& b = pts[i].estimate;
        const double slack = 2 * std::max(a.half_width(), b.half_width());
        if (b.p_hat() < a.p_hat() - slack) return {false, "decrease beyond slack:" + describe(pts)};
    }
    const auto& last = pts.back();
    const auto bound = ExactRational(1) - ExactRational(4 * pow(BigCount(last.estimate.k), 4), BigCount(last.estimate.n));
    if (ExactRational(last.estimate.p_hat() + last.estimate.half_width()) < bound)
        return {false, "final estimate below bound " + to_decimal(bound) + ":" + describe(pts)};
    return {true, describe(pts) + "; final bound " + to_decimal(bound)};
}

// 7. alpha = 0.35 scan: final estimate < 0.5 and decreasing within CI slack.
Verdict supercritical_scan() {
    ScanConfig cfg{2, 1, 0.35, 1.0, {1000, 10000, 100000, 1000000}, 20000, 7};
    const auto pts = density_scan(cfg);
    for (const auto& p : pts)
        if (!p.ok()) return {false, p.error};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto& a = pts[i - 1].estimate;
        const auto& b = pts[i].estimate;
        const double slack = 2 * std::max(a.half_width(), b.half_width());
        if (b.p_hat() > a.p_hat() + slack) return {false, "increase beyond slack:" + describe(pts)};
    }
    if (!(pts.back().estimate.p_hat() < 0.5)) return {false, "final estimate not below 0.5:" + describe(pts)};
    return {true, describe(pts)};
}

// 8. 95% Wilson CI covers the exact ratio in >= 93 of 100 seeds at (50,4,2,1).
Verdict calibration() {
    const auto exact = count_exact(50, 4, 2, 1).ratio();
    int covered = 0;
    for (std::uint64_t s = 0; s < 100; ++s) covered += estimate_probability(50, 4, 2, 1, 100000, 1000 + s).covers(exact);
    return {covered >= 93, std::to_string(covered) + "/100 intervals cover " + to_decimal(exact)};
}

// 9. kappa_hat = lambda_hat / Lambda^4 agrees within a factor 2 across Lambda.
Verdict threshold_scaling() {
    const auto r = threshold_experiment(2, 1, {0.5, 0.75, 1.0}, {10000, 100000, 1000000}, 50000, 9);
    std::string d;
    for (const auto& f : r.fits)
        d += " Lambda=" + fmt(f.scale) + ":lambda_hat=" + fmt(f.lambda_hat, 4) + ",kappa_hat=" + fmt(f.kappa_hat, 4);
    const auto spread = r.kappa_spread();
    if (!spread || r.fits.size() != 3) return {false, "fit incomplete:" + d};
    return {*spread <= 2.0, d + "; spread " + fmt(*spread, 4)};
}

// 10. Stochastic subcommands give byte-identical rows for any --jobs.
Verdict cli_determinism() {
    const std::vector<std::vector<std::string>> commands{
        {"estimate", "--n", "50", "--k", "4", "--trials", "20000", "--seed", "1"},
        {"scan", "--h", "2", "--g", "1", "--alpha", "0.2", "--c", "1", "--n", "1000,10000,100000", "--trials", "5000",
         "--seed", "7"},
        {"threshold", "--h", "2", "--lambda", "0.5,1", "--n", "10000,100000", "--trials", "5000", "--seed", "3"},
        {"threshold", "--h", "2", "--g", "2", "--lambda", "1", "--n", "1000", "--trials", "2000", "--seed", "5"},
    };
    for (const auto& base : commands) {
        std::string reference;
        for (const char* jobs : {"1", "4", "1", "3"}) {
            auto args = base;
            args.insert(args.end(), {"--no-cache", "--jobs", jobs});
            std::ostringstream out, err;
            if (cli::run(args, out, err) != 0) return {false, base[0] + " failed: " + err.str()};
            if (reference.empty()) reference = out.str();
            else if (out.str() != reference) return {false, base[0] + " differs with --jobs " + jobs};
        }
    }
    return {true, std::to_string(commands.size()) + " commands x 4 runs identical"};
}

// 11. decompose/recompose bijection for all A in {1..8}, h <= 4, and the
//     per-(m, r) triple count bound pi_r(h) m^(r-1) for h <= 4, m <= 40.
Verdict triples() {
    std::size_t reps = 0;
    for (unsigned mask = 1; mask < 256; ++mask) {
        std::vector<value_type> v;
        for (int b = 0; b < 8; ++b)
            if (mask & (1u << b)) v.push_back(b + 1);
        const IntegerSet a(v, 8);
        for (std::size_t h = 1; h <= 4; ++h) {
            std::set<std::pair<std::vector<std::size_t>, std::vector<value_type>>> seen;
            bool ok = true;
            for_each_tuple(a, h, [&](const std::vector<std::size_t>& idx, value_type sum) {
                Representation rep{{}, sum};
                for (auto i : idx) rep.summands.push_back(a.elements()[i]);
                const auto t = decompose(rep);
                ok = ok && t.fold() == h && t.target() == sum && recompose(t) == rep &&
                     seen.emplace(t.parts, t.distincts).second;
                ++reps;
                return ok;
            });
            if (!ok) return {false, "round trip fails for " + a.to_string() + " h=" + std::to_string(h)};
        }
    }
    // {1..40} contains every A ⊆ {1..n} restricted to summands <= m <= 40.
    const auto universe = IntegerSet::interval(40);
    std::size_t checks = 0;
    for (std::size_t h = 1; h <= 4; ++h)
        for (value_type m = 1; m <= 40; ++m)
            for (std::size_t r = 1; r <= h; ++r, ++checks) {
                const auto count = triple_count(universe, h, r, m);
                BigCount cap = BigCount(composition_count(h, r)) * pow(BigCount(m), static_cast<unsigned>(r - 1));
                if (BigCount(count) > cap)
                    return {false, "triple bound fails at h=" + std::to_string(h) + " m=" + std::to_string(m) +
                                       " r=" + std::to_string(r)};
            }
    return {true, std::to_string(reps) + " representations round-tripped; " + std::to_string(checks) + " bound checks"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, Criterion>> criteria{
        {"oracle equivalence (n<=24, k<=8, h in {2,3}, g in {1,2})", oracle_equivalence},
        {"B_2[g] lower bound strict (n<=40, k<=8, g<=3)", b2g_lower_bound_holds},
        {"cardinality cap census is empty (n<=30, h in {2,3}, g<=2)", cardinality_cap},
        {"binomial ratio lemma exhaustive (n<=60)", binomial_ratio_lemma},
        {"representation-sum identity (1000 random sets)", representation_sum_identity},
        {"subcritical density scan alpha=0.2", subcritical_scan},
        {"supercritical decay alpha=0.35", supercritical_scan},
        {"Monte Carlo calibration (50,4,2,1)", calibration},
        {"threshold scaling kappa_hat within 2x", threshold_scaling},
        {"CLI determinism across --jobs", cli_determinism},
        {"triple bijection and triple-count bound", triples},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %2d %s (%.1fs): %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first, secs, v.detail.c_str());
        std::fflush(stdout);
        failures += !v.pass;
    }
    return failures == 0 ? 0 : 1;
}
