#pragma once

#include <chrono>
#include <cstdint>

namespace tadsim {

// Simulated time. The engine clock and every scheduled instant use integer
// nanoseconds so event ordering and residency sums are exact.
using SimTime = std::chrono::nanoseconds;

// Adaptation arithmetic runs in fractional milliseconds.
using Millis = std::chrono::duration<double, std::milli>;

using NodeId = std::uint32_t;

inline constexpr SimTime to_sim_time(Millis ms)
{
    return std::chrono::round<SimTime>(ms);
}

inline constexpr Millis to_millis(SimTime t)
{
    return std::chrono::duration_cast<Millis>(t);
}

inline constexpr double to_seconds(SimTime t)
{
    return std::chrono::duration<double>(t).count();
}

inline constexpr SimTime from_ms(double ms)
{
    return to_sim_time(Millis{ms});
}

inline constexpr SimTime from_us(double us)
{
    return std::chrono::round<SimTime>(std::chrono::duration<double, std::micro>{us});
}

inline constexpr SimTime from_seconds(double s)
{
    return std::chrono::round<SimTime>(std::chrono::duration<double>{s});
}

} // namespace tadsim
