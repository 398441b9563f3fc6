#pragma once

#include <cstdint>
#include <vector>

#include "sidon/error.hpp"
#include "sidon/integer_set.hpp"

namespace sidon {

/// Tracks whether a growing set {a_1 < a_2 < ...} ⊆ {1..n} is still a
/// B_h[g]-set. push() adds a new largest element, pop() undoes the last push.
///
/// For h = 2 only the pair-sum multiset is kept (counts indexed by m in
/// [2, 2n]). For h >= 3 the tables r_{A,j} for j = 1..h are kept, and adding
/// a to A updates them as r'_j(m) = r_j(m) + r'_{j-1}(m - a).
/// The verdict after every push equals is_bhg on the current set.
class IncrementalChecker {
public:
    IncrementalChecker(value_type n, std::size_t h, std::uint64_t g)
        : n_(n), h_(h), g_(g) {
        detail::require(n >= 1, "IncrementalChecker: n must be positive");
        detail::require(h >= 1, "IncrementalChecker: h must be at least 1");
        detail::require(g >= 1, "IncrementalChecker: g must be at least 1");
        const auto width = static_cast<std::size_t>(detail::checked_mul(n, static_cast<value_type>(h))) + 1;
        tables_.assign(h + 1, std::vector<std::uint64_t>(h == 2 ? 0 : width, 0));
        tables_[0].assign(1, 1);
        if (h == 2) tables_[2].assign(width, 0);
    }

    std::size_t fold() const noexcept { return h_; }
    std::uint64_t bound() const noexcept { return g_; }
    std::size_t size() const noexcept { return elements_.size(); }
    const std::vector<value_type>& elements() const noexcept { return elements_; }

    /// Number of m with r_{A,h}(m) > g.
    std::uint64_t violations() const noexcept { return violations_; }
    bool ok() const noexcept { return violations_ == 0; }

    bool push(value_type a) {
        if (a < 1 || a > n_) throw parameter_error("IncrementalChecker::push: element outside [1, n]");
        if (!elements_.empty() && a <= elements_.back())
            throw parameter_error("IncrementalChecker::push: elements must be strictly increasing");
        elements_.push_back(a);
        if (h_ == 2) {
            auto& pairs = tables_[2];
            for (value_type b : elements_) bump(pairs[static_cast<std::size_t>(b + a)]);
        } else {
            update(a, +1);
        }
        return ok();
    }

    void pop() {
        if (elements_.empty()) throw parameter_error("IncrementalChecker::pop: nothing to pop");
        const value_type a = elements_.back();
        if (h_ == 2) {
            auto& pairs = tables_[2];
            for (value_type b : elements_) drop(pairs[static_cast<std::size_t>(b + a)]);
        } else {
            update(a, -1);
        }
        elements_.pop_back();
    }

private:
    void bump(std::uint64_t& slot, std::uint64_t by = 1) {
        const bool was_over = slot > g_;
        slot = detail::checked_add(slot, by);
        if (!was_over && slot > g_) ++violations_;
    }
    void drop(std::uint64_t& slot, std::uint64_t by = 1) {
        const bool was_over = slot > g_;
        slot -= by;
        if (was_over && slot <= g_) --violations_;
    }

    // Support of r_{A,j} (after the push) lies in [j * min, j * a].
    void update(value_type a, int sign) {
        const value_type lo = elements_.front();
        if (sign > 0) {
            for (std::size_t j = 1; j <= h_; ++j) apply(j, a, lo);
        } else {
            for (std::size_t j = h_; j >= 1; --j) apply(j, a, lo, true);
        }
    }

    void apply(std::size_t j, value_type a, value_type lo, bool undo = false) {
        auto& dst = tables_[j];
        const auto& src = tables_[j - 1];
        const auto jj = static_cast<value_type>(j - 1);
        if (j == 1) {
            auto& slot = dst[static_cast<std::size_t>(a)];
            if (undo) {
                if (h_ == 1) drop(slot); else --slot;
            } else {
                if (h_ == 1) bump(slot); else ++slot;
            }
            return;
        }
        for (value_type s = jj * lo; s <= jj * a; ++s) {
            const auto c = src[static_cast<std::size_t>(s)];
            if (c == 0) continue;
            auto& slot = dst[static_cast<std::size_t>(s + a)];
            if (j == h_) {
                undo ? drop(slot, c) : bump(slot, c);
            } else {
                slot = undo ? slot - c : slot + c;
            }
        }
    }

    value_type n_;
    std::size_t h_;
    std::uint64_t g_;
    std::vector<value_type> elements_;
    std::vector<std::vector<std::uint64_t>> tables_;
    std::uint64_t violations_ = 0;
};

}  // namespace sidon
