#include "tadsim/energy/ledger.hpp"

#include "tadsim/errors.hpp"
#include "tadsim/sim/radio.hpp"

namespace tadsim::energy {

void PowerProfile::validate() const
{
    if (!(p_sleep_mw > 0.0))
        throw ConfigError("p_sleep must be positive");
    if (!(p_sleep_mw < p_rx_mw))
        throw ConfigError("p_sleep must be below p_rx");
    if (!(p_sleep_mw < p_tx_mw))
        throw ConfigError("p_sleep must be below p_tx");
}

std::string_view to_string(LedgerState s) noexcept
{
    switch (s)
    {
    case LedgerState::Off: return "OFF";
    case LedgerState::Sleep: return "SLEEP";
    case LedgerState::Rx: return "RX";
    case LedgerState::Tx: return "TX";
    }
    return "?";
}

LedgerState ledger_state_for(sim::RadioMode mode) noexcept
{
    switch (mode)
    {
    case sim::RadioMode::Off: return LedgerState::Off;
    case sim::RadioMode::Sleep: return LedgerState::Sleep;
    case sim::RadioMode::Rx: return LedgerState::Rx;
    case sim::RadioMode::Tx: return LedgerState::Tx;
    case sim::RadioMode::Switching: return LedgerState::Rx;
    }
    return LedgerState::Rx;
}

void EnergyLedger::accrue(LedgerState state, SimTime duration)
{
    if (duration < SimTime::zero())
        throw SimulationFault("negative duration accrued to energy ledger");
    time_[index(state)] += duration;
}

double EnergyLedger::power_mw(LedgerState state) const noexcept
{
    switch (state)
    {
    case LedgerState::Off: return 0.0;
    case LedgerState::Sleep: return profile_.p_sleep_mw;
    case LedgerState::Rx: return profile_.p_rx_mw;
    case LedgerState::Tx: return profile_.p_tx_mw;
    }
    return 0.0;
}

double EnergyLedger::energy_mj(LedgerState state) const noexcept
{
    // ms * mW = uJ
    return time(state).count() * power_mw(state) / 1000.0;
}

double EnergyLedger::total_energy_mj() const noexcept
{
    double total = 0.0;
    for (auto s : kLedgerStates)
        total += energy_mj(s);
    return total;
}

SimTime EnergyLedger::total_time() const noexcept
{
    SimTime total{};
    for (auto t : time_)
        total += t;
    return total;
}

} // namespace tadsim::energy
