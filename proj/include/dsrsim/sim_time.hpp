#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>

namespace dsrsim {

// Simulation clock value. Stored as integer microseconds so that event
// ordering and tie-breaking are exact on every platform.
class SimTime {
public:
    constexpr SimTime() = default;

    static constexpr SimTime from_us(std::int64_t us) { return SimTime{us}; }

    static SimTime from_seconds(double s) {
        return SimTime{static_cast<std::int64_t>(std::llround(s * 1e6))};
    }

    constexpr std::int64_t us() const { return us_; }
    constexpr double seconds() const { return static_cast<double>(us_) / 1e6; }

    friend constexpr auto operator<=>(SimTime, SimTime) = default;

    friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.us_ + b.us_}; }
    friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.us_ - b.us_}; }
    SimTime& operator+=(SimTime b) { us_ += b.us_; return *this; }

    // Fixed 6-decimal rendering, e.g. "12.345678"; used by trace/audit lines.
    std::string str() const {
        char buf[32];
        std::int64_t s = us_ / 1000000;
        std::int64_t frac = us_ % 1000000;
        if (frac < 0) { s -= 1; frac += 1000000; }
        std::snprintf(buf, sizeof buf, "%lld.%06lld",
                      static_cast<long long>(s), static_cast<long long>(frac));
        return buf;
    }

private:
    constexpr explicit SimTime(std::int64_t us) : us_(us) {}
    std::int64_t us_ = 0;
};

constexpr SimTime operator""_us(unsigned long long v) {
    return SimTime::from_us(static_cast<std::int64_t>(v));
}

} // namespace dsrsim
