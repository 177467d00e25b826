#include "tadsim/sim/radio.hpp"

#include "tadsim/errors.hpp"

namespace tadsim::sim {

std::string_view to_string(RadioMode mode) noexcept
{
    switch (mode)
    {
    case RadioMode::Off: return "OFF";
    case RadioMode::Sleep: return "SLEEP";
    case RadioMode::Rx: return "RX";
    case RadioMode::Tx: return "TX";
    case RadioMode::Switching: return "SWITCHING";
    }
    return "?";
}

void Radio::flush(SimTime now)
{
    if (now < since_)
        throw SimulationFault("radio accounting went backwards in time");
    const SimTime elapsed = now - since_;
    residency_[static_cast<std::size_t>(mode_)] += elapsed;
    ledger_.accrue(mode_, elapsed);
    since_ = now;
}

void Radio::enter(RadioMode mode, SimTime now)
{
    flush(now);
    if (mode == RadioMode::Rx && mode_ != RadioMode::Rx)
        rx_since_ = now;
    mode_ = mode;
}

SimTime Radio::total_residency() const noexcept
{
    SimTime total{};
    for (auto t : residency_)
        total += t;
    return total;
}

} // namespace tadsim::sim
