#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "sidon/bounds.hpp"
#include "sidon/error.hpp"
#include "sidon/exact.hpp"
#include "sidon/incremental_checker.hpp"
#include "sidon/integer_set.hpp"
#include "sidon/representation.hpp"

namespace sidon {

enum class CensusMethod { backtrack, oracle };

inline const char* to_string(CensusMethod m) {
    return m == CensusMethod::backtrack ? "backtrack" : "oracle";
}

struct CensusOptions {
    /// Maximum number of search nodes (pushes) the backtracker may visit.
    std::uint64_t node_budget = 1'000'000'000;
    /// Maximum number of subsets the oracle may scan.
    std::uint64_t oracle_budget = 100'000'000;
    unsigned jobs = 1;
};

/// Exact number of B_h[g]-sets of size k in {1..n}.
struct CensusRecord {
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::size_t h = 0;
    std::uint64_t g = 0;
    BigCount count;
    BigCount binom;
    CensusMethod method = CensusMethod::backtrack;
    std::chrono::nanoseconds elapsed{0};

    /// count / C(n,k); zero when C(n,k) = 0.
    ExactRational ratio() const { return binom == 0 ? ExactRational(0) : ExactRational(count, binom); }
};

namespace detail {

inline void validate_census(std::int64_t n, std::int64_t k, std::size_t h, std::uint64_t g) {
    require(n >= 1, "census: n must be positive");
    require(k >= 0, "census: k must be nonnegative");
    require(h >= 1, "census: h must be at least 1");
    require(g >= 1, "census: g must be at least 1");
}

class NodeMeter {
public:
    explicit NodeMeter(std::uint64_t budget) : budget_(budget) {}

    // Called once per visited node. Flushes to the shared counter in batches.
    void tick(std::uint64_t& local) {
        if (++local < kBatch) return;
        flush(local);
    }

    void flush(std::uint64_t& local) {
        const auto total = used_.fetch_add(local) + local;
        local = 0;
        if (total > budget_) throw budget_exceeded("census: node budget exceeded", budget_, total);
    }

    std::uint64_t used() const { return used_.load(); }

private:
    static constexpr std::uint64_t kBatch = 1024;
    std::uint64_t budget_;
    std::atomic<std::uint64_t> used_{0};
};

// Extends the checker's current set by `remaining` more elements drawn from
// [from, n], calling leaf() on each qualifying completion. leaf() returning
// false stops the search; the function then returns false.
template <class Leaf>
bool extend(IncrementalChecker& chk, std::int64_t n, std::int64_t from, std::int64_t remaining,
            NodeMeter& meter, std::uint64_t& local, Leaf& leaf) {
    if (remaining == 0) return leaf(chk);
    for (std::int64_t a = from; a + remaining - 1 <= n; ++a) {
        meter.tick(local);
        const bool ok = chk.push(a);
        bool go_on = true;
        if (ok) go_on = extend(chk, n, a + 1, remaining - 1, meter, local, leaf);
        chk.pop();
        if (!go_on) return false;
    }
    return true;
}

template <class Task>
void run_tasks(std::size_t count, unsigned jobs, Task&& task) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                if (failed.load()) return;
                const auto i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed = true;
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Counts B_h[g]-sets of size k in {1..n} by depth-first extension in
/// increasing order, pruning any prefix the incremental checker rejects.
/// Work is split by the first two elements; each split owns its checker.
inline CensusRecord count_exact(std::int64_t n, std::int64_t k, std::size_t h, std::uint64_t g,
                                const CensusOptions& opts = {}) {
    detail::validate_census(n, k, h, g);
    const auto start = std::chrono::steady_clock::now();
    CensusRecord rec{n, k, h, g, 0, binomial(n, k), CensusMethod::backtrack, {}};

    if (k == 0) {
        rec.count = 1;
    } else if (k <= n) {
        const std::int64_t depth = std::min<std::int64_t>(k, 2);
        std::vector<std::vector<std::int64_t>> prefixes;
        for (std::int64_t a = 1; a + k - 1 <= n; ++a) {
            if (depth == 1) {
                prefixes.push_back({a});
                continue;
            }
            for (std::int64_t b = a + 1; b + k - 2 <= n; ++b) prefixes.push_back({a, b});
        }

        detail::NodeMeter meter(opts.node_budget);
        std::vector<std::uint64_t> partial(prefixes.size(), 0);
        detail::run_tasks(prefixes.size(), opts.jobs, [&](std::size_t i) {
            IncrementalChecker chk(n, h, g);
            std::uint64_t local = 0;
            bool ok = true;
            for (auto x : prefixes[i]) {
                meter.tick(local);
                ok = chk.push(x) && ok;
            }
            std::uint64_t found = 0;
            auto leaf = [&](const IncrementalChecker&) {
                ++found;
                return true;
            };
            if (ok) detail::extend(chk, n, prefixes[i].back() + 1, k - depth, meter, local, leaf);
            meter.flush(local);
            partial[i] = found;
        });
        for (auto c : partial) rec.count += c;
    }

    rec.elapsed = std::chrono::steady_clock::now() - start;
    return rec;
}

/// Calls visit(const IntegerSet&) once per B_h[g]-set of size k in {1..n},
/// in lexicographic order. If visit returns bool, false stops the walk.
template <class Visit>
void enumerate(std::int64_t n, std::int64_t k, std::size_t h, std::uint64_t g, Visit&& visit,
               const CensusOptions& opts = {}) {
    detail::validate_census(n, k, h, g);
    if (k > n) return;
    if (k == 0) {
        if constexpr (std::is_same_v<std::invoke_result_t<Visit&, const IntegerSet&>, bool>) (void)visit(IntegerSet({}, n));
        else visit(IntegerSet({}, n));
        return;
    }
    detail::NodeMeter meter(opts.node_budget);
    std::uint64_t local = 0;
    IncrementalChecker chk(n, h, g);
    auto leaf = [&](const IncrementalChecker& c) -> bool {
        IntegerSet a(c.elements(), n);
        if constexpr (std::is_same_v<std::invoke_result_t<Visit&, const IntegerSet&>, bool>) {
            return visit(std::as_const(a));
        } else {
            visit(std::as_const(a));
            return true;
        }
    };
    detail::extend(chk, n, 1, k, meter, local, leaf);
}

/// Scans every k-subset of {1..n} lexicographically and applies is_bhg.
/// Shares nothing with count_exact beyond IntegerSet.
inline CensusRecord count_oracle(std::int64_t n, std::int64_t k, std::size_t h, std::uint64_t g,
                                 const CensusOptions& opts = {}) {
    detail::validate_census(n, k, h, g);
    const auto start = std::chrono::steady_clock::now();
    CensusRecord rec{n, k, h, g, 0, binomial(n, k), CensusMethod::oracle, {}};
    if (rec.binom > opts.oracle_budget)
        throw budget_exceeded("oracle: too many subsets", opts.oracle_budget,
                              rec.binom > std::numeric_limits<std::uint64_t>::max()
                                  ? std::numeric_limits<std::uint64_t>::max()
                                  : rec.binom.convert_to<std::uint64_t>());
    if (k > n) {
        rec.elapsed = std::chrono::steady_clock::now() - start;
        return rec;
    }
    std::vector<value_type> cur(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
    std::uint64_t found = 0;
    for (;;) {
        if (is_bhg(IntegerSet(cur, n), h, g)) ++found;
        // next combination in lexicographic order
        std::int64_t i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + 1 + i) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (auto j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    rec.count = found;
    rec.elapsed = std::chrono::steady_clock::now() - start;
    return rec;
}

/// One cell of a census table. `record` is empty when the cell was refused.
struct CensusCell {
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::size_t h = 0;
    std::uint64_t g = 0;
    std::optional<CensusRecord> record;
    std::string error;
    /// Lower bound for B_2[g](k,n); only for h = 2.
    std::optional<BoundReport> bound;
    /// k^(2h)/n and (C(n,k) - count) / (C(n,k) k^(2h)/n); only for g = 1.
    std::optional<ExactRational> defect_scaling;
    std::optional<ExactRational> defect_constant;

    std::optional<BigCount> defect() const {
        if (!record) return std::nullopt;
        return record->binom - record->count;
    }
};

inline std::vector<CensusCell> census_table(const std::vector<std::int64_t>& n_values,
                                            const std::vector<std::int64_t>& k_values,
                                            std::size_t h, std::uint64_t g,
                                            const CensusOptions& opts = {}) {
    std::vector<CensusCell> out;
    for (auto n : n_values) {
        for (auto k : k_values) {
            CensusCell cell{n, k, h, g, std::nullopt, {}, std::nullopt, std::nullopt, std::nullopt};
            try {
                cell.record = count_exact(n, k, h, g, opts);
            } catch (const budget_exceeded& e) {
                cell.error = e.what();
            } catch (const parameter_error& e) {
                cell.error = e.what();
            }
            if (h == 2 && n >= 1 && k >= 1 && k <= n) cell.bound = b2g_lower_bound(n, k, static_cast<std::int64_t>(g));
            if (g == 1 && n >= 1 && k >= 1) {
                cell.defect_scaling = bh_defect_scaling(n, k, static_cast<std::int64_t>(h));
                if (cell.record && cell.record->binom > 0)
                    cell.defect_constant = ExactRational(*cell.defect(), cell.record->binom) / *cell.defect_scaling;
            }
            out.push_back(std::move(cell));
        }
    }
    return out;
}

}  // namespace sidon
