#pragma once

#include <cstdint>
#include <vector>

#include "sidon/error.hpp"
#include "sidon/integer_set.hpp"
#include "sidon/representation.hpp"

namespace sidon {

/// Canonical form of one representation m = a_1 + ... + a_h: the r distinct
/// summands a'_1 < ... < a'_r, and how many times each occurs (parts).
struct RepTriple {
    std::vector<std::size_t> parts;
    std::vector<value_type> distincts;

    std::size_t r() const noexcept { return parts.size(); }

    std::size_t fold() const noexcept {
        std::size_t h = 0;
        for (auto p : parts) h += p;
        return h;
    }

    value_type target() const {
        value_type m = 0;
        for (std::size_t j = 0; j < parts.size(); ++j)
            m += detail::checked_mul(static_cast<value_type>(parts[j]), distincts[j]);
        return m;
    }

    bool operator==(const RepTriple&) const = default;
};

/// Run-length encoding of the nondecreasing summands.
inline RepTriple decompose(const Representation& rep) {
    RepTriple t;
    for (std::size_t i = 0; i < rep.summands.size(); ++i) {
        if (i && rep.summands[i] < rep.summands[i - 1])
            throw parameter_error("decompose: summands must be nondecreasing");
        if (i && rep.summands[i] == rep.summands[i - 1]) {
            ++t.parts.back();
        } else {
            t.parts.push_back(1);
            t.distincts.push_back(rep.summands[i]);
        }
    }
    return t;
}

inline Representation recompose(const RepTriple& t) {
    if (t.parts.empty() || t.parts.size() != t.distincts.size())
        throw parameter_error("recompose: malformed triple");
    Representation rep;
    for (std::size_t j = 0; j < t.parts.size(); ++j) {
        if (t.parts[j] == 0) throw parameter_error("recompose: parts must be positive");
        if (t.distincts[j] < 1) throw parameter_error("recompose: summands must be positive");
        if (j && t.distincts[j] <= t.distincts[j - 1])
            throw parameter_error("recompose: distinct summands must be strictly increasing");
        rep.summands.insert(rep.summands.end(), t.parts[j], t.distincts[j]);
    }
    rep.target = t.target();
    return rep;
}

/// Checks a triple against an expected fold h, rejecting parts that do not sum to h.
inline Representation recompose(const RepTriple& t, std::size_t h) {
    if (t.fold() != h) throw parameter_error("recompose: parts do not sum to h");
    return recompose(t);
}

/// All r-tuples of positive integers summing to h, lexicographically.
inline std::vector<std::vector<std::size_t>> compositions(std::size_t h, std::size_t r) {
    if (r < 1 || r > h) throw parameter_error("compositions: need 1 <= r <= h");
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(r);
    auto rec = [&](auto& self, std::size_t pos, std::size_t left) -> void {
        if (pos + 1 == r) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        // leave at least one unit for each later slot
        for (std::size_t p = 1; p + (r - pos - 1) <= left; ++p) {
            cur[pos] = p;
            self(self, pos + 1, left - p);
        }
    };
    rec(rec, 0, h);
    return out;
}

/// pi_r(h) = C(h-1, r-1).
inline std::uint64_t composition_count(std::size_t h, std::size_t r) {
    if (r < 1 || r > h) return 0;
    return detail::multiset_count_saturating(r, h - r);
}

/// Number of triples with exactly r distinct summands drawn from A whose
/// weighted sum is m. Enumerates compositions and increasing tuples directly,
/// without going through representations.
inline std::uint64_t triple_count(const IntegerSet& a, std::size_t h, std::size_t r, value_type m) {
    detail::require_fold(h);
    if (r < 1 || r > h) throw parameter_error("triple_count: need 1 <= r <= h");
    const auto xs = a.elements();
    std::uint64_t total = 0;
    for (const auto& parts : compositions(h, r)) {
        auto rec = [&](auto& self, std::size_t j, std::size_t from, value_type left) -> void {
            if (j == r) {
                if (left == 0) total = detail::checked_add(total, 1);
                return;
            }
            const auto w = static_cast<value_type>(parts[j]);
            for (std::size_t i = from; i < xs.size(); ++i) {
                if (w * xs[i] > left) break;
                self(self, j + 1, i + 1, left - w * xs[i]);
            }
        };
        rec(rec, 0, 0, m);
    }
    return total;
}

}  // namespace sidon
