#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sidon {

/// Invalid arguments or violated preconditions.
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Arithmetic that would not fit in the machine integer used to hold it.
class overflow_error : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// Raised by the census when an instance needs more work than allowed.
class budget_exceeded : public std::runtime_error {
public:
    budget_exceeded(std::string what, std::uint64_t budget, std::uint64_t used)
        : std::runtime_error(std::move(what)), budget_(budget), used_(used) {}

    std::uint64_t budget() const noexcept { return budget_; }
    std::uint64_t used() const noexcept { return used_; }

private:
    std::uint64_t budget_;
    std::uint64_t used_;
};

namespace detail {

inline void require(bool cond, const char* msg) {
    if (!cond) throw parameter_error(msg);
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw overflow_error("64-bit count overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("64-bit sum overflow");
    return r;
}

}  // namespace detail
}  // namespace sidon
