#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace fstsp {

/// Duration in minutes with a fixed resolution of 1e-6 minute.
///
/// All schedule arithmetic is exact integer arithmetic on ticks, so timelines
/// and objective values are bit-stable across runs and platforms. Conversion
/// to double happens only at the LP boundary.
class Minutes {
public:
    static constexpr std::int64_t kTicksPerMinute = 1'000'000;

    constexpr Minutes() = default;

    static constexpr Minutes from_ticks(std::int64_t t) { return Minutes(t); }

    /// Rounds to the nearest tick.
    static Minutes from_minutes(double m) {
        return Minutes(static_cast<std::int64_t>(std::llround(m * kTicksPerMinute)));
    }

    constexpr std::int64_t ticks() const { return ticks_; }
    constexpr double minutes() const { return static_cast<double>(ticks_) / kTicksPerMinute; }

    constexpr Minutes& operator+=(Minutes o) { ticks_ += o.ticks_; return *this; }
    constexpr Minutes& operator-=(Minutes o) { ticks_ -= o.ticks_; return *this; }
    friend constexpr Minutes operator+(Minutes a, Minutes b) { return Minutes(a.ticks_ + b.ticks_); }
    friend constexpr Minutes operator-(Minutes a, Minutes b) { return Minutes(a.ticks_ - b.ticks_); }
    friend constexpr Minutes operator*(std::int64_t k, Minutes a) { return Minutes(k * a.ticks_); }
    friend constexpr auto operator<=>(Minutes, Minutes) = default;

    /// Fixed six-decimal rendering, e.g. "12.345678".
    std::string str() const;

private:
    constexpr explicit Minutes(std::int64_t t) : ticks_(t) {}
    std::int64_t ticks_ = 0;
};

constexpr Minutes max(Minutes a, Minutes b) { return a < b ? b : a; }
constexpr Minutes min(Minutes a, Minutes b) { return a < b ? a : b; }

}  // namespace fstsp
