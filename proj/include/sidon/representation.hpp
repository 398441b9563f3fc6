#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "sidon/error.hpp"
#include "sidon/integer_set.hpp"

namespace sidon {

/// A nondecreasing h-tuple of elements of A together with its sum.
struct Representation {
    std::vector<value_type> summands;
    value_type target = 0;

    std::size_t fold() const noexcept { return summands.size(); }
    bool operator==(const Representation&) const = default;
};

namespace detail {

inline void require_fold(std::size_t h) {
    if (h == 0) throw parameter_error("fold order h must be at least 1");
}

inline void require_sum_fits(const IntegerSet& a, std::size_t h) {
    if (!a.empty()) (void)checked_mul(a.max(), static_cast<value_type>(h));
}

/// C(k + h - 1, h), saturating at UINT64_MAX.
inline std::uint64_t multiset_count_saturating(std::uint64_t k, std::uint64_t h) {
    if (k == 0) return h == 0 ? 1 : 0;
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= h; ++i) {
        r = r * (k + i - 1) / i;  // exact: r is C(k+i-1, i) after each step
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

// Lexicographic walk over nondecreasing tuples (indices into xs). `target`
// < 0 means "any sum"; otherwise branches that cannot reach it are cut.
template <class Visit>
bool walk_tuples(std::span<const value_type> xs, std::size_t h, value_type target,
                 std::vector<std::size_t>& idx, std::size_t depth, std::size_t from,
                 value_type partial, Visit& visit) {
    if (depth == h) {
        if (target < 0 || partial == target) return visit(std::as_const(idx), partial);
        return true;
    }
    const auto slots = static_cast<value_type>(h - depth);
    if (target >= 0 && depth + 1 == h) {
        const value_type need = target - partial;
        auto it = std::lower_bound(xs.begin() + static_cast<std::ptrdiff_t>(from), xs.end(), need);
        if (it == xs.end() || *it != need) return true;
        idx[depth] = static_cast<std::size_t>(it - xs.begin());
        return visit(std::as_const(idx), target);
    }
    for (std::size_t i = from; i < xs.size(); ++i) {
        if (target >= 0) {
            const value_type rest = target - partial;
            if (xs[i] * slots > rest) break;
            if (xs.back() * slots < rest) break;
        }
        idx[depth] = i;
        if (!walk_tuples(xs, h, target, idx, depth + 1, i, partial + xs[i], visit)) return false;
    }
    return true;
}

}  // namespace detail

/// Calls visit(indices, sum) for every nondecreasing h-tuple of A, in
/// lexicographic order. Returning false from visit stops the walk.
template <class Visit>
void for_each_tuple(const IntegerSet& a, std::size_t h, Visit&& visit) {
    detail::require_fold(h);
    detail::require_sum_fits(a, h);
    if (a.empty()) return;
    std::vector<std::size_t> idx(h);
    detail::walk_tuples(a.elements(), h, value_type{-1}, idx, 0, 0, 0, visit);
}

/// Calls visit(Representation) for every representation of m as a sum of
/// h elements of A, lexicographically. Returning false stops the walk.
template <class Visit>
void for_each_representation(const IntegerSet& a, std::size_t h, value_type m, Visit&& visit) {
    detail::require_fold(h);
    detail::require_sum_fits(a, h);
    if (a.empty() || m < 1) return;
    const auto xs = a.elements();
    std::vector<std::size_t> idx(h);
    auto adapter = [&](const std::vector<std::size_t>& ix, value_type sum) -> bool {
        Representation rep{{}, sum};
        rep.summands.reserve(h);
        for (auto i : ix) rep.summands.push_back(xs[i]);
        return visit(std::move(rep));
    };
    detail::walk_tuples(xs, h, m, idx, 0, 0, 0, adapter);
}

/// r_{A,h}(m): the number of nondecreasing h-tuples of A summing to m.
inline std::uint64_t representation_count(const IntegerSet& a, std::size_t h, value_type m) {
    detail::require_fold(h);
    detail::require_sum_fits(a, h);
    if (a.empty() || m < static_cast<value_type>(h)) return 0;
    std::uint64_t count = 0;
    std::vector<std::size_t> idx(h);
    auto tally = [&](const std::vector<std::size_t>&, value_type) {
        count = detail::checked_add(count, 1);
        return true;
    };
    detail::walk_tuples(a.elements(), h, m, idx, 0, 0, 0, tally);
    return count;
}

/// The full representation function of A at fold h, restricted to its
/// support hA. Entries are sorted by m.
class RepTable {
public:
    using entry = std::pair<value_type, std::uint64_t>;

    RepTable(std::size_t h, std::vector<entry> entries) : h_(h), entries_(std::move(entries)) {}

    std::size_t fold() const noexcept { return h_; }
    std::span<const entry> entries() const noexcept { return entries_; }
    std::size_t support_size() const noexcept { return entries_.size(); }

    std::uint64_t operator()(value_type m) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), m,
                                   [](const entry& e, value_type x) { return e.first < x; });
        return it != entries_.end() && it->first == m ? it->second : 0;
    }

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto& [m, r] : entries_) t = detail::checked_add(t, r);
        return t;
    }

    /// The first m attaining the maximal representation count.
    entry argmax() const {
        entry best{0, 0};
        for (const auto& e : entries_)
            if (e.second > best.second) best = e;
        return best;
    }

private:
    std::size_t h_;
    std::vector<entry> entries_;
};

namespace detail {

// All h-fold sums with multiplicity, sorted.
inline std::vector<value_type> sorted_hfold_sums(const IntegerSet& a, std::size_t h) {
    std::vector<value_type> sums;
    sums.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(multiset_count_saturating(a.size(), h), 1u << 24)));
    for_each_tuple(a, h, [&](const std::vector<std::size_t>&, value_type s) {
        sums.push_back(s);
        return true;
    });
    std::sort(sums.begin(), sums.end());
    return sums;
}

}  // namespace detail

inline RepTable representation_table(const IntegerSet& a, std::size_t h) {
    detail::require_fold(h);
    const auto sums = detail::sorted_hfold_sums(a, h);
    std::vector<RepTable::entry> entries;
    for (std::size_t i = 0; i < sums.size();) {
        std::size_t j = i;
        while (j < sums.size() && sums[j] == sums[i]) ++j;
        entries.emplace_back(sums[i], j - i);
        i = j;
    }
    return RepTable(h, std::move(entries));
}

/// hA as a set; its universe is h * n.
inline IntegerSet sumset(const IntegerSet& a, std::size_t h) {
    detail::require_fold(h);
    auto sums = detail::sorted_hfold_sums(a, h);
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    const value_type universe = detail::checked_mul(a.universe(), static_cast<value_type>(h));
    return IntegerSet(std::move(sums), universe);
}

/// True iff r_{A,h}(m) <= g for every m. Empty sets and singletons qualify.
inline bool is_bhg(const IntegerSet& a, std::size_t h, std::uint64_t g) {
    detail::require_fold(h);
    if (g == 0) throw parameter_error("g must be at least 1");
    if (a.size() <= 1) return true;
    if (g >= detail::multiset_count_saturating(a.size(), h)) return true;
    const auto sums = detail::sorted_hfold_sums(a, h);
    std::uint64_t run = 1;
    for (std::size_t i = 1; i < sums.size(); ++i) {
        run = sums[i] == sums[i - 1] ? run + 1 : 1;
        if (run > g) return false;
    }
    return true;
}

/// Sidon set: B_2[1].
inline bool is_sidon(const IntegerSet& a) { return is_bhg(a, 2, 1); }

}  // namespace sidon
