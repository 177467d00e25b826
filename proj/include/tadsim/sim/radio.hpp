#pragma once

#include "tadsim/energy/ledger.hpp"
#include "tadsim/time.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace tadsim::sim {

enum class RadioMode : std::uint8_t
{
    Off,
    Sleep,
    Rx,
    Tx,
    Switching,
};

inline constexpr std::array kRadioModes{RadioMode::Off, RadioMode::Sleep, RadioMode::Rx, RadioMode::Tx,
                                        RadioMode::Switching};

std::string_view to_string(RadioMode mode) noexcept;

// Transceiver state of one node plus its residency bookkeeping. Only the
// simulator mutates it; MAC code sees it through NodeContext.
class Radio
{
  public:
    Radio(energy::PowerProfile profile, RadioMode initial = RadioMode::Sleep)
        : mode_(initial), ledger_(profile)
    {
    }

    RadioMode mode() const noexcept { return mode_; }
    std::optional<RadioMode> switch_target() const noexcept { return switch_target_; }

    // Start of the current uninterrupted Rx period; meaningful only in Rx.
    SimTime rx_since() const noexcept { return rx_since_; }

    // Close the open residency interval at `now`.
    void flush(SimTime now);
    void enter(RadioMode mode, SimTime now);

    SimTime residency(RadioMode mode) const noexcept { return residency_[static_cast<std::size_t>(mode)]; }
    SimTime total_residency() const noexcept;
    const energy::EnergyLedger& ledger() const noexcept { return ledger_; }

  private:
    friend class Simulator;

    RadioMode mode_;
    std::optional<RadioMode> switch_target_;
    std::optional<RadioMode> queued_target_;
    SimTime since_{};
    SimTime rx_since_{};
    SimTime tx_busy_until_{};
    std::array<SimTime, kRadioModes.size()> residency_{};
    energy::EnergyLedger ledger_;
};

} // namespace tadsim::sim
