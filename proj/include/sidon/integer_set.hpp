#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sidon/error.hpp"

namespace sidon {

using value_type = std::int64_t;

/// A finite set of positive integers inside the universe {1, ..., n},
/// stored as a strictly increasing sequence. The empty set is allowed.
class IntegerSet {
public:
    IntegerSet() = default;

    /// Universe defaults to the largest element (or 1 for the empty set).
    explicit IntegerSet(std::vector<value_type> elements)
        : IntegerSet(std::move(elements), 0) {}

    IntegerSet(std::vector<value_type> elements, value_type universe)
        : elements_(std::move(elements)) {
        if (universe == 0) universe = elements_.empty() ? 1 : elements_.back();
        universe_ = universe;
        validate();
    }

    IntegerSet(std::initializer_list<value_type> elements)
        : IntegerSet(std::vector<value_type>(elements)) {}

    /// {1, ..., n}
    static IntegerSet interval(value_type n) {
        detail::require(n >= 1, "interval: n must be positive");
        std::vector<value_type> v(static_cast<std::size_t>(n));
        for (value_type i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i + 1;
        return IntegerSet(std::move(v), n);
    }

    /// Parses "1,2,5,11". Whitespace around items is ignored.
    static IntegerSet parse(std::string_view literal, value_type universe = 0) {
        std::vector<value_type> v;
        std::size_t pos = 0;
        while (pos <= literal.size()) {
            auto comma = literal.find(',', pos);
            if (comma == std::string_view::npos) comma = literal.size();
            auto item = literal.substr(pos, comma - pos);
            while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
            while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
            if (item.empty()) throw parameter_error("set literal: empty item");
            value_type x = 0;
            for (char c : item) {
                if (c < '0' || c > '9') throw parameter_error("set literal: not a positive integer: " + std::string(item));
                x = detail::checked_mul(x, 10);
                x += c - '0';
            }
            v.push_back(x);
            pos = comma + 1;
        }
        return IntegerSet(std::move(v), universe);
    }

    std::span<const value_type> elements() const noexcept { return elements_; }
    std::size_t size() const noexcept { return elements_.size(); }
    bool empty() const noexcept { return elements_.empty(); }
    value_type universe() const noexcept { return universe_; }
    value_type min() const { return elements_.front(); }
    value_type max() const { return elements_.back(); }

    bool contains(value_type x) const {
        return std::binary_search(elements_.begin(), elements_.end(), x);
    }

    /// {a + t : a in A}; the universe grows with the shift.
    IntegerSet translated(value_type t) const {
        std::vector<value_type> v(elements_);
        for (auto& x : v) x += t;
        const value_type universe = std::max<value_type>(universe_ + t, v.empty() ? 1 : v.back());
        return IntegerSet(std::move(v), universe);
    }

    auto begin() const noexcept { return elements_.begin(); }
    auto end() const noexcept { return elements_.end(); }

    bool operator==(const IntegerSet&) const = default;

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(elements_[i]);
        }
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const IntegerSet& a) {
        return os << '{' << a.to_string() << '}';
    }

private:
    void validate() const {
        detail::require(universe_ >= 1, "IntegerSet: universe bound must be positive");
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (elements_[i] < 1 || elements_[i] > universe_)
                throw parameter_error("IntegerSet: element outside [1, n]");
            if (i && elements_[i] <= elements_[i - 1])
                throw parameter_error("IntegerSet: elements must be strictly increasing");
        }
    }

    std::vector<value_type> elements_;
    value_type universe_ = 1;
};

}  // namespace sidon
