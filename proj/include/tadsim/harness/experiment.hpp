#pragma once

#include "tadsim/harness/report.hpp"
#include "tadsim/harness/scenario.hpp"
#include "tadsim/sim/simulator.hpp"

#include <functional>

namespace tadsim::harness {

// Optional probes into a run. Tests use them to observe the channel and to
// inspect the simulator once the horizon is reached.
struct RunHooks
{
    sim::Simulator::TransmitObserver on_transmit;
    sim::Simulator::DeliveryObserver on_delivery;
    std::function<void(const sim::Simulator&, const sim::SimulationReport&)> on_finish;
};

// Stream ids for derive_seed. Traffic has its own stream so arrivals do not
// depend on the protocol.
inline constexpr std::uint64_t kTrafficStream = 1;
inline constexpr std::uint64_t kMacStream = 2;

// Builds the star network of `s`, runs it to the horizon and summarises it.
// Throws ValidationError for an invalid scenario.
ExperimentReport run_experiment(const Scenario& s, const RunHooks& hooks = {});

} // namespace tadsim::harness
