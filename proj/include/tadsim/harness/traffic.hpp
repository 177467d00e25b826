#pragma once

#include "tadsim/mac/fsm.hpp"
#include "tadsim/time.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tadsim::harness {

struct PeriodChange
{
    SimTime at{};
    Millis period{};

    friend bool operator==(const PeriodChange&, const PeriodChange&) = default;
};

struct TrafficSpec
{
    enum class Kind : std::uint8_t
    {
        Static,
        Variable,
    };

    Kind kind = Kind::Static;
    // Static period, or the base period of random variable traffic.
    Millis period{500.0};
    // First arrival; when unset it is drawn uniformly from [0, period).
    std::optional<Millis> offset;

    // Variable traffic: an explicit piecewise schedule if non-empty; the first
    // entry must start at 0. Otherwise the period is redrawn uniformly from
    // [min_factor, max_factor] x period every change_every.
    std::vector<PeriodChange> schedule;
    SimTime change_every = std::chrono::seconds(100);
    double min_factor = 0.5;
    double max_factor = 2.0;

    // Human-readable violations, prefixed with `where`.
    void collect_violations(const std::string& where, std::vector<std::string>& out) const;

    friend bool operator==(const TrafficSpec&, const TrafficSpec&) = default;
};

// Periodic arrivals whose period may change over time. The period in force
// at an arrival decides the gap to the next one.
class PeriodicArrivals final : public mac::ArrivalProcess
{
  public:
    PeriodicArrivals(TrafficSpec spec, std::uint64_t seed);

    std::optional<SimTime> next() override;

    // Period in force at time t.
    Millis period_at(SimTime t);
    // Start times of every period segment generated so far.
    std::vector<SimTime> change_points() const;

  private:
    TrafficSpec spec_;
    std::mt19937_64 rng_;
    std::vector<Millis> drawn_; // variable-random segment periods, lazily drawn
    std::optional<SimTime> last_;
};

std::unique_ptr<mac::ArrivalProcess> make_arrivals(const TrafficSpec& spec, std::uint64_t seed);

} // namespace tadsim::harness
