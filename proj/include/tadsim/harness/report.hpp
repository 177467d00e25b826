#pragma once

#include "tadsim/time.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tadsim::harness {

struct NodeSummary
{
    NodeId id = 0;
    std::string role;
    // Keyed by ledger state: off, sleep, rx, tx.
    std::map<std::string, double> time_ms;
    std::map<std::string, double> energy_mj;
    // Keyed by radio mode, exact nanoseconds.
    std::map<std::string, std::int64_t> residency_ns;
    double total_energy_mj = 0.0;
    std::map<std::string, std::uint64_t> counters;
    std::uint64_t arrivals = 0;
    std::uint64_t arrival_hash = 0;

    double fraction(const std::string& state, double horizon_ms) const { return time_ms.at(state) / horizon_ms; }

    friend bool operator==(const NodeSummary&, const NodeSummary&) = default;
};

struct IntervalSample
{
    std::uint64_t wakeup_index = 0;
    double sim_time_s = 0.0;
    NodeId node_id = 0;
    double i_wu_ms = 0.0;

    friend bool operator==(const IntervalSample&, const IntervalSample&) = default;
};

struct TsrSample
{
    std::uint64_t wakeup_index = 0;
    double sim_time_s = 0.0;
    NodeId node_id = 0;
    bool data = false;
    std::string tsr;
    double x1 = 0.0;
    double x2 = 0.0;
    double mu = 0.0;
    double e = 0.0;
    double i_wu_ms = 0.0;
    bool deferred = false;

    friend bool operator==(const TsrSample&, const TsrSample&) = default;
};

struct ConvergenceResult
{
    NodeId node_id = 0;
    std::optional<std::uint64_t> wakeups;

    friend bool operator==(const ConvergenceResult&, const ConvergenceResult&) = default;
};

struct ExperimentReport
{
    nlohmann::json scenario;
    std::string protocol;
    std::uint64_t seed = 0;
    double horizon_s = 0.0;
    std::uint64_t events = 0;
    std::map<std::string, std::uint64_t> channel;
    std::vector<NodeSummary> nodes;
    std::vector<IntervalSample> intervals;
    std::vector<TsrSample> tsr;
    std::vector<ConvergenceResult> convergence;

    const NodeSummary& node(NodeId id) const;
    // Interval history of one transmitter, starting with the initial value.
    std::vector<double> interval_history(NodeId id) const;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

// Network-level averages of one run, normalised to one second.
struct NetworkProfile
{
    double sleep_ms = 0.0;
    double rx_ms = 0.0;
    double tx_ms = 0.0;
    double energy_mj = 0.0;
};

// Mean over all nodes, coordinator included.
NetworkProfile per_node_profile(const ExperimentReport& r);

// First index i with |h[k+1] - h[k]| <= epsilon for every k in [i, i+window-1];
// nullopt when no such stretch exists.
std::optional<std::size_t> detect_convergence(std::span<const double> history, double epsilon, std::size_t window);

nlohmann::json to_json(const ExperimentReport& r);
// Throws IoError when the document does not have the report layout.
ExperimentReport report_from_json(const nlohmann::json& doc);

} // namespace tadsim::harness
