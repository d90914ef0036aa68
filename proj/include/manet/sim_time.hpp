#pragma once

#include <cmath>
#include <cstdint>

namespace manet {

/// Simulation time in integer microsecond ticks.
using SimTime = std::int64_t;

inline constexpr SimTime kTicksPerSecond = 1'000'000;

inline SimTime Seconds(double s)
{
    return static_cast<SimTime>(std::llround(s * static_cast<double>(kTicksPerSecond)));
}

inline constexpr SimTime MilliSeconds(std::int64_t ms) { return ms * 1000; }

inline constexpr double ToSeconds(SimTime t)
{
    return static_cast<double>(t) / static_cast<double>(kTicksPerSecond);
}

} // namespace manet
