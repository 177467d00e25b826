#pragma once

#include "tadsim/time.hpp"

#include <array>
#include <cstdint>
#include <string_view>

namespace tadsim::sim {
enum class RadioMode : std::uint8_t;
}

namespace tadsim::energy {

// Transceiver power draw per state, in mW. Switching is billed at p_rx.
// Defaults are the per-state energy/time ratios of the reference
// measurements (Tx ~56.6 mW, Rx ~54.2 mW, sleep ~0.065 mW).
struct PowerProfile
{
    double p_sleep_mw = 0.065;
    double p_rx_mw = 54.2;
    double p_tx_mw = 56.6;

    // Throws ConfigError unless 0 < p_sleep < p_rx and 0 < p_sleep < p_tx.
    void validate() const;

    friend bool operator==(const PowerProfile&, const PowerProfile&) = default;
};

enum class LedgerState : std::uint8_t
{
    Off,
    Sleep,
    Rx,
    Tx,
};

inline constexpr std::array kLedgerStates{LedgerState::Off, LedgerState::Sleep, LedgerState::Rx, LedgerState::Tx};

std::string_view to_string(LedgerState s) noexcept;

// Folds radio modes onto billing states: Switching -> Rx, the rest map
// one-to-one.
LedgerState ledger_state_for(sim::RadioMode mode) noexcept;

// Time and energy per radio state for one node. Energy is derived from the
// accumulated integer time on every query, so energy == time * power holds
// exactly.
class EnergyLedger
{
  public:
    EnergyLedger() = default;
    explicit EnergyLedger(PowerProfile profile) : profile_(profile) {}

    // Throws SimulationFault on negative duration.
    void accrue(LedgerState state, SimTime duration);
    void accrue(sim::RadioMode mode, SimTime duration) { accrue(ledger_state_for(mode), duration); }

    SimTime residency(LedgerState state) const noexcept { return time_[index(state)]; }
    Millis time(LedgerState state) const noexcept { return to_millis(residency(state)); }

    // mJ. Off draws nothing.
    double energy_mj(LedgerState state) const noexcept;
    double total_energy_mj() const noexcept;
    SimTime total_time() const noexcept;

    double power_mw(LedgerState state) const noexcept;
    const PowerProfile& profile() const noexcept { return profile_; }

  private:
    static constexpr std::size_t index(LedgerState s) noexcept { return static_cast<std::size_t>(s); }

    PowerProfile profile_{};
    std::array<SimTime, 4> time_{};
};

} // namespace tadsim::energy
