#pragma once

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "output.hpp"
#include "sidon/sidon.hpp"
#include "sidon/version.hpp"

namespace sidon::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int negative = 1;
inline constexpr int usage = 2;
inline constexpr int refused = 3;
}  // namespace exit_code

struct GlobalOptions {
    std::string format = "csv";
    std::string out;
    std::string cache_dir = ".sidon-cache";
    bool no_cache = false;
    std::uint64_t budget = CensusOptions{}.node_budget;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
};

/// Parameters recorded in the manifest and used for the cache key: sorted
/// name=value pairs. Worker count and output location are excluded since
/// they do not change the data rows.
using Params = std::map<std::string, std::string>;

inline std::string canonical(const Params& p) {
    std::string s;
    for (const auto& [k, v] : p) s += k + "=" + v + ";";
    return s;
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

inline std::string join_doubles(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_decimal(v[i], 17);
    return s;
}

/// Result of one data-producing subcommand.
struct Outcome {
    std::string data;
    int code = exit_code::ok;
};

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    /// Writes data (to --out or stdout), the manifest and the cache entry.
    /// Reuses a verified cache entry when one exists.
    template <class Compute>
    int produce(const std::string& subcommand, Params params, const std::vector<std::string>& argv, Compute&& compute) {
        params["format"] = opts.format;
        params["subcommand"] = subcommand;
        const std::string key_src = canonical(params);
        const std::string key = hex64(fnv1a64(key_src));
        const std::filesystem::path dir(opts.cache_dir);
        const auto data_path = dir / (key + ".data");
        const auto manifest_path = dir / (key + ".manifest.json");
        const std::string started = utc_timestamp();

        std::optional<Outcome> outcome;
        if (!opts.no_cache) outcome = load_cached(key_src, data_path, manifest_path);
        const bool from_cache = outcome.has_value();
        if (!outcome) outcome = compute();

        nlohmann::json manifest{
            {"subcommand", subcommand},
            {"params", params},
            {"argv", argv},
            {"seed", opts.seed ? nlohmann::json(*opts.seed) : nlohmann::json(nullptr)},
            {"tool_version", sidon::version},
            {"start_timestamp", started},
            {"output_path", opts.out},
            {"cache_key", key},
            {"data_checksum", hex64(fnv1a64(outcome->data))},
            {"exit_code", outcome->code},
        };

        if (opts.out.empty()) {
            out_ << outcome->data;
        } else {
            std::ofstream f(opts.out, std::ios::binary);
            if (!f) throw parameter_error("cannot write " + opts.out);
            f << outcome->data;
            std::ofstream(opts.out + ".manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
        }
        // refused results are not cached
        if (!opts.no_cache && !from_cache && outcome->code != exit_code::refused) {
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (!ec) {
                std::ofstream(data_path, std::ios::binary) << outcome->data;
                std::ofstream(manifest_path, std::ios::binary) << manifest.dump(2) << '\n';
            } else {
                err_ << "warning: cannot create cache directory " << dir << '\n';
            }
        }
        return outcome->code;
    }

    Format format() const { return opts.format == "jsonl" ? Format::jsonl : Format::csv; }

    GlobalOptions opts;

private:
    std::optional<Outcome> load_cached(const std::string& key_src, const std::filesystem::path& data_path,
                                       const std::filesystem::path& manifest_path) {
        if (!std::filesystem::exists(manifest_path)) return std::nullopt;
        try {
            std::ifstream mf(manifest_path);
            const auto m = nlohmann::json::parse(mf);
            Params stored = m.at("params").get<Params>();
            if (canonical(stored) != key_src) return std::nullopt;  // hash collision
            std::ifstream df(data_path, std::ios::binary);
            std::string data((std::istreambuf_iterator<char>(df)), std::istreambuf_iterator<char>());
            if (!df.good() && !df.eof()) throw std::runtime_error("unreadable data");
            if (hex64(fnv1a64(data)) != m.at("data_checksum").get<std::string>()) {
                err_ << "warning: cache entry " << data_path.filename() << " failed its checksum; recomputing\n";
                return std::nullopt;
            }
            err_ << "cache hit: " << data_path.filename().string() << '\n';
            return Outcome{std::move(data), m.at("exit_code").get<int>()};
        } catch (const std::exception&) {
            err_ << "warning: cache entry " << manifest_path.filename() << " is corrupt; recomputing\n";
            return std::nullopt;
        }
    }

    std::ostream& out_;
    std::ostream& err_;
};


inline std::vector<Cell> estimate_cells(const Estimate& e) {
    return {Cell(e.n), Cell(e.k), Cell(e.h), Cell(e.g), Cell(e.trials), Cell(e.successes),
            Cell(to_decimal(e.p_exact())), Cell(to_decimal(e.ci.low)), Cell(to_decimal(e.ci.high)), Cell(e.seed)};
}

inline const std::vector<std::string> census_columns{"n", "k", "h", "g", "count", "binom", "ratio_num",
                                                     "ratio_den", "ratio_dec", "method", "elapsed_ms"};
inline const std::vector<std::string> estimate_columns{"n",         "k", "h", "g",     "trials",
                                                       "successes", "p_hat", "ci_low", "ci_high", "seed"};

inline std::vector<Cell> census_cells(const CensusRecord& r) {
    const auto q = r.ratio();
    const auto ms = std::chrono::duration<double, std::milli>(r.elapsed).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return {Cell(r.n), Cell(r.k), Cell(r.h), Cell(r.g), Cell(r.count.str()), Cell(r.binom.str()),
            Cell(numerator_str(q)), Cell(denominator_str(q)), Cell(to_decimal(q)), text(to_string(r.method)), Cell(buf)};
}

/// Prints the verdict; when negative, the first m with the most
/// representations (or `shown`, when given) and every representation of it.
inline int cmd_check(const std::string& literal, std::size_t h, std::uint64_t g, std::optional<value_type> shown,
                     std::ostream& out, std::ostream& err) {
    IntegerSet a;
    try {
        a = IntegerSet::parse(literal);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    }
    const bool verdict = is_bhg(a, h, g);
    const auto table = representation_table(a, h);
    const auto [m, r] = table.argmax();
    out << "set: " << a << '\n'
        << "h: " << h << '\n'
        << "g: " << g << '\n'
        << "size: " << a.size() << '\n'
        << "max_representations: " << r;
    if (r > 0) out << " at m=" << m;
    out << '\n' << "verdict: " << (verdict ? "" : "not ") << "a B_" << h << "[" << g << "]-set\n";
    if (!verdict || shown) {
        const value_type w = shown.value_or(m);
        out << "witness: m=" << w << " has " << table(w) << " representations\n";
        for_each_representation(a, h, w, [&](const Representation& rep) {
            out << "  ";
            for (std::size_t i = 0; i < rep.summands.size(); ++i) out << (i ? "+" : "") << rep.summands[i];
            out << '\n';
            return true;
        });
    }
    return verdict ? exit_code::ok : exit_code::negative;
}

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Runner runner(out, err);
    auto& o = runner.opts;

    CLI::App app{"Sidon / B_h[g]-set toolkit", "sidon"};
    app.set_help_flag("--help", "print this help and exit");
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    app.add_option("--out", o.out, "write data rows to PATH (manifest goes to PATH.manifest.json)");
    app.add_option("--cache-dir", o.cache_dir, "results cache directory");
    app.add_flag("--no-cache", o.no_cache, "always recompute");
    app.add_option("--budget", o.budget, "census node budget");
    app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "64-bit seed (required by stochastic subcommands)");
    app.set_version_flag("--version", std::string(sidon::version));

    std::size_t h = 2;
    std::uint64_t g = 1;

    auto* check = app.add_subcommand("check", "test whether a set is a B_h[g]-set");
    std::string literal;
    check->add_option("set", literal, "comma-separated increasing positive integers")->required();
    check->add_option("--h", h)->check(CLI::PositiveNumber);
    check->add_option("--g", g)->check(CLI::PositiveNumber);
    std::optional<value_type> shown_m;
    check->add_option("--m", shown_m, "list the representations of this m");

    auto* count = app.add_subcommand("count", "exact count of B_h[g]-sets of size k in {1..n}");
    std::vector<std::int64_t> ns, ks;
    std::string method = "backtrack";
    bool with_bounds = false;
    count->add_option("--n", ns, "universe size(s)")->required()->delimiter(',')->check(CLI::PositiveNumber);
    count->add_option("--k", ks, "set size(s)")->required()->delimiter(',')->check(CLI::NonNegativeNumber);
    count->add_option("--h", h)->check(CLI::PositiveNumber);
    count->add_option("--g", g)->check(CLI::PositiveNumber);
    count->add_option("--method", method)->check(CLI::IsMember({"backtrack", "oracle", "both"}));
    count->add_flag("--bounds", with_bounds, "append lower-bound and defect-scaling columns");

    auto* bound = app.add_subcommand("bound", "closed-form bounds");
    std::int64_t bn = 0, bk = 0, bj = 0;
    std::string kind = "b2g";
    bound->add_option("--n", bn)->required()->check(CLI::PositiveNumber);
    bound->add_option("--k", bk)->required()->check(CLI::NonNegativeNumber);
    bound->add_option("--g", g)->check(CLI::PositiveNumber);
    bound->add_option("--h", h)->check(CLI::PositiveNumber);
    bound->add_option("--j", bj)->check(CLI::NonNegativeNumber);
    bound->add_option("--kind", kind, "b2g, lemma or defect")->check(CLI::IsMember({"b2g", "lemma", "defect"}));

    auto* cap = app.add_subcommand("cap", "cardinality cap for B_h[g]-sets in {1..n}");
    std::int64_t cn = 0;
    cap->add_option("--n", cn)->required()->check(CLI::PositiveNumber);
    cap->add_option("--h", h)->check(CLI::PositiveNumber);
    cap->add_option("--g", g)->check(CLI::PositiveNumber);

    auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of P(random k-subset is B_h[g])");
    std::int64_t en = 0, ek = 0;
    std::uint64_t trials = 10000;
    estimate->add_option("--n", en)->required()->check(CLI::PositiveNumber);
    estimate->add_option("--k", ek)->required()->check(CLI::PositiveNumber);
    estimate->add_option("--h", h)->check(CLI::PositiveNumber);
    estimate->add_option("--g", g)->check(CLI::PositiveNumber);
    estimate->add_option("--trials", trials)->check(CLI::PositiveNumber);

    auto* scan = app.add_subcommand("scan", "density scan with k_n = round(c n^alpha)");
    double alpha = 0.2, c = 1.0;
    std::vector<std::int64_t> grid;
    scan->add_option("--h", h)->check(CLI::PositiveNumber);
    scan->add_option("--g", g)->check(CLI::PositiveNumber);
    scan->add_option("--alpha", alpha);
    scan->add_option("--c", c);
    scan->add_option("--n", grid)->required()->delimiter(',');
    scan->add_option("--trials", trials)->check(CLI::PositiveNumber);

    auto* threshold = app.add_subcommand("threshold", "threshold experiment with k_n = round(Lambda n^(1/2h))");
    std::vector<double> scales;
    threshold->add_option("--h", h)->check(CLI::PositiveNumber);
    threshold->add_option("--g", g)->check(CLI::PositiveNumber);
    threshold->add_option("--lambda", scales, "Lambda values")->required()->delimiter(',');
    threshold->add_option("--n", grid)->required()->delimiter(',');
    threshold->add_option("--trials", trials)->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage;
    }

    const auto require_seed = [&]() -> bool {
        if (o.seed) return true;
        err << "error: this subcommand requires --seed\n";
        return false;
    };

    try {
        if (*check) return cmd_check(literal, h, g, shown_m, out, err);

        if (*count) {
            Params p{{"n", join(ns)}, {"k", join(ks)}, {"h", std::to_string(h)}, {"g", std::to_string(g)},
                     {"method", method}, {"budget", std::to_string(o.budget)}, {"bounds", with_bounds ? "1" : "0"}};
            return runner.produce("count", p, args, [&] {
                CensusOptions copts;
                copts.node_budget = o.budget;
                copts.jobs = o.jobs;
                auto cols = census_columns;
                if (with_bounds)
                    cols.insert(cols.end(), {"bound_num", "bound_den", "bound_dec", "defect", "defect_scaling", "defect_constant"});
                Table t(cols);
                Outcome res;
                for (auto n : ns) {
                    for (auto k : ks) {
                        std::vector<CensusRecord> recs;
                        try {
                            if (method != "oracle") recs.push_back(count_exact(n, k, h, g, copts));
                            if (method != "backtrack") recs.push_back(count_oracle(n, k, h, g, copts));
                        } catch (const budget_exceeded& e) {
                            err << "refused: n=" << n << " k=" << k << ": " << e.what() << " (budget " << e.budget()
                                << ")\n";
                            res.code = exit_code::refused;
                            continue;
                        }
                        if (recs.size() == 2) {
                            const bool match = recs[0].count == recs[1].count;
                            err << "verdict: n=" << n << " k=" << k << ' ' << (match ? "match" : "MISMATCH") << '\n';
                            if (!match && res.code == exit_code::ok) res.code = exit_code::negative;
                        }
                        for (const auto& r : recs) {
                            auto row = census_cells(r);
                            if (with_bounds) {
                                std::vector<Cell> extra(6, Cell(""));
                                if (h == 2 && k >= 1 && k <= n) {
                                    const auto b = b2g_lower_bound(n, k, static_cast<std::int64_t>(g));
                                    extra[0] = Cell(numerator_str(b.bound_value));
                                    extra[1] = Cell(denominator_str(b.bound_value));
                                    extra[2] = Cell(to_decimal(b.bound_value));
                                }
                                extra[3] = Cell(BigCount(r.binom - r.count).str());
                                if (g == 1 && k >= 1) {
                                    const auto s = bh_defect_scaling(n, k, static_cast<std::int64_t>(h));
                                    extra[4] = Cell(to_decimal(s));
                                    if (r.binom > 0)
                                        extra[5] = Cell(to_decimal(ExactRational(r.binom - r.count, r.binom) / s));
                                }
                                row.insert(row.end(), extra.begin(), extra.end());
                            }
                            t.add(std::move(row));
                        }
                    }
                }
                res.data = t.render(runner.format());
                return res;
            });
        }

        if (*bound) {
            Params p{{"n", std::to_string(bn)}, {"k", std::to_string(bk)}, {"kind", kind}};
            if (kind == "b2g") p["g"] = std::to_string(g);
            if (kind == "lemma") p["j"] = std::to_string(bj);
            if (kind == "defect") p["h"] = std::to_string(h);
            return runner.produce("bound", p, args, [&] {
                Outcome res;
                if (kind == "b2g") {
                    const auto b = b2g_lower_bound(bn, bk, static_cast<std::int64_t>(g));
                    Table t({"n", "k", "g", "raw_num", "raw_den", "raw_dec", "binom", "bound_num", "bound_den", "bound_dec"});
                    t.add({Cell(bn), Cell(bk), Cell(g), Cell(numerator_str(b.raw_term)), Cell(denominator_str(b.raw_term)),
                           Cell(to_decimal(b.raw_term)), Cell(b.binom.str()), Cell(numerator_str(b.bound_value)),
                           Cell(denominator_str(b.bound_value)), Cell(to_decimal(b.bound_value))});
                    res.data = t.render(runner.format());
                } else if (kind == "lemma") {
                    const auto b = binom_ratio_and_bound(bn, bk, bj);
                    Table t({"n", "k", "j", "ratio_num", "ratio_den", "ratio_dec", "bound_num", "bound_den", "bound_dec", "holds"});
                    t.add({Cell(bn), Cell(bk), Cell(bj), Cell(numerator_str(b.ratio)), Cell(denominator_str(b.ratio)),
                           Cell(to_decimal(b.ratio)), Cell(numerator_str(b.bound)), Cell(denominator_str(b.bound)),
                           Cell(to_decimal(b.bound)), Cell(b.holds ? "true" : "false", true)});
                    res.data = t.render(runner.format());
                } else {
                    const auto s = bh_defect_scaling(bn, bk, static_cast<std::int64_t>(h));
                    Table t({"n", "k", "h", "scaling_num", "scaling_den", "scaling_dec"});
                    t.add({Cell(bn), Cell(bk), Cell(h), Cell(numerator_str(s)), Cell(denominator_str(s)), Cell(to_decimal(s))});
                    res.data = t.render(runner.format());
                }
                return res;
            });
        }

        if (*cap) {
            Params p{{"n", std::to_string(cn)}, {"h", std::to_string(h)}, {"g", std::to_string(g)}};
            return runner.produce("cap", p, args, [&] {
                Table t({"n", "h", "g", "cap"});
                t.add({Cell(cn), Cell(h), Cell(g),
                       Cell(bhg_cardinality_cap(cn, static_cast<std::int64_t>(h), static_cast<std::int64_t>(g)))});
                return Outcome{t.render(runner.format()), exit_code::ok};
            });
        }

        if (*estimate) {
            if (!require_seed()) return exit_code::usage;
            Params p{{"n", std::to_string(en)}, {"k", std::to_string(ek)}, {"h", std::to_string(h)},
                     {"g", std::to_string(g)}, {"trials", std::to_string(trials)}, {"seed", std::to_string(*o.seed)}};
            return runner.produce("estimate", p, args, [&] {
                const auto e = estimate_probability(en, ek, h, g, trials, *o.seed, o.jobs);
                Table t(estimate_columns);
                t.add(estimate_cells(e));
                return Outcome{t.render(runner.format()), exit_code::ok};
            });
        }

        if (*scan) {
            if (!require_seed()) return exit_code::usage;
            Params p{{"n", join(grid)}, {"h", std::to_string(h)}, {"g", std::to_string(g)},
                     {"alpha", to_decimal(alpha, 17)}, {"c", to_decimal(c, 17)}, {"trials", std::to_string(trials)},
                     {"seed", std::to_string(*o.seed)}};
            return runner.produce("scan", p, args, [&] {
                ScanConfig cfg{h, g, alpha, c, grid, trials, *o.seed};
                auto cols = estimate_columns;
                cols.insert(cols.end(), {"alpha", "c", "ratio_bound", "status"});
                Table t(cols);
                for (const auto& pt : density_scan(cfg, o.jobs)) {
                    auto row = estimate_cells(pt.estimate);
                    if (!pt.ok()) {
                        row[1] = row[5] = row[6] = row[7] = row[8] = Cell("");
                        err << "scan point n=" << pt.estimate.n << " failed: " << pt.error << '\n';
                    }
                    row.push_back(Cell(to_decimal(alpha, 17)));
                    row.push_back(Cell(to_decimal(c, 17)));
                    row.push_back(Cell(pt.ratio_bound ? to_decimal(*pt.ratio_bound) : ""));
                    row.push_back(text(pt.ok() ? "ok" : pt.error));
                    t.add(std::move(row));
                }
                return Outcome{t.render(runner.format()), exit_code::ok};
            });
        }

        if (*threshold) {
            if (!require_seed()) return exit_code::usage;
            Params p{{"n", join(grid)}, {"h", std::to_string(h)}, {"g", std::to_string(g)},
                     {"lambda", join_doubles(scales)}, {"trials", std::to_string(trials)},
                     {"seed", std::to_string(*o.seed)}};
            return runner.produce("threshold", p, args, [&] {
                const auto r = threshold_experiment(h, g, scales, grid, trials, *o.seed, o.jobs);
                Table t({"h", "g", "quantity", "probe", "lambda_param", "n", "k", "trials", "successes", "p_hat",
                         "ci_low", "ci_high", "seed", "lambda_hat", "kappa_hat"});
                const auto largest = *std::max_element(grid.begin(), grid.end());
                const std::string fitted = g == 1 ? "B_h" : "B_h[g]";
                for (const auto& rec : r.records) {
                    const auto& e = rec.estimate;
                    const double lh = rec.lambda_hat();
                    std::string kappa;
                    if (e.n == largest && rec.quantity == fitted) {
                        for (const auto& f : r.fits)
                            if (f.scale == rec.scale && !f.excluded) kappa = to_decimal(f.kappa_hat);
                    }
                    t.add({Cell(h), Cell(g), text(rec.quantity), text(r.conjecture_probe ? "conjecture probe" : ""),
                           Cell(to_decimal(rec.scale, 17)), Cell(e.n), Cell(e.k), Cell(e.trials), Cell(e.successes),
                           Cell(to_decimal(e.p_exact())), Cell(to_decimal(e.ci.low)), Cell(to_decimal(e.ci.high)),
                           Cell(e.seed), Cell(std::isfinite(lh) ? to_decimal(lh) : ""), Cell(kappa)});
                }
                for (const auto& w : r.warnings) err << "warning: " << w << '\n';
                if (auto s = r.kappa_spread())
                    err << "kappa_hat: min=" << to_decimal(*r.kappa_min()) << " max=" << to_decimal(*r.kappa_max())
                        << " spread=" << to_decimal(*s) << '\n';
                return Outcome{t.render(runner.format()), exit_code::ok};
            });
        }
    } catch (const parameter_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const budget_exceeded& e) {
        err << "refused: " << e.what() << '\n';
        return exit_code::refused;
    }
    return exit_code::usage;
}

}  // namespace sidon::cli
