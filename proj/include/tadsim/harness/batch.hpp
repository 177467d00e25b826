#pragma once

#include "tadsim/harness/experiment.hpp"

#include <cstdint>
#include <vector>

namespace tadsim::harness {

// Runs each scenario on a pool of `threads` workers (0 = hardware
// concurrency). Results come back in input order whatever the thread count.
// The first failure is rethrown after all workers stop.
std::vector<ExperimentReport> run_all(const std::vector<Scenario>& scenarios, unsigned threads = 0);

// One copy of `base` per seed in [first, first + count).
std::vector<Scenario> seed_range(const Scenario& base, std::uint64_t first, std::size_t count);

struct SweepAxes
{
    std::vector<double> initial_interval_ms;
    std::vector<double> alpha;
    std::vector<unsigned> tsr_length;
};

// Cartesian product over the non-empty axes; empty axes keep base's value.
std::vector<Scenario> sweep_grid(const Scenario& base, const SweepAxes& axes);

// One row per run: seed, protocol, knobs, coordinator sleep fraction,
// per-node averages and convergence extremes.
std::string summary_csv(const std::vector<ExperimentReport>& reports);

} // namespace tadsim::harness
