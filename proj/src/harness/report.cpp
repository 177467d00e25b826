#include "tadsim/harness/report.hpp"

#include "tadsim/errors.hpp"

#include <cmath>

namespace tadsim::harness {

using nlohmann::json;

const NodeSummary& ExperimentReport::node(NodeId id) const
{
    for (const auto& n : nodes)
        if (n.id == id)
            return n;
    throw std::out_of_range("no node " + std::to_string(id) + " in report");
}

std::vector<double> ExperimentReport::interval_history(NodeId id) const
{
    std::vector<double> h;
    for (const auto& s : intervals)
        if (s.node_id == id)
            h.push_back(s.i_wu_ms);
    return h;
}

NetworkProfile per_node_profile(const ExperimentReport& r)
{
    NetworkProfile p;
    if (r.nodes.empty() || !(r.horizon_s > 0.0))
        return p;
    for (const auto& n : r.nodes)
    {
        p.sleep_ms += n.time_ms.at("sleep");
        p.rx_ms += n.time_ms.at("rx");
        p.tx_ms += n.time_ms.at("tx");
        p.energy_mj += n.total_energy_mj;
    }
    const double k = static_cast<double>(r.nodes.size()) * r.horizon_s;
    p.sleep_ms /= k;
    p.rx_ms /= k;
    p.tx_ms /= k;
    p.energy_mj /= k;
    return p;
}

std::optional<std::size_t> detect_convergence(std::span<const double> history, double epsilon, std::size_t window)
{
    // run = number of consecutive steps ending at k that are within epsilon.
    std::size_t run = 0;
    for (std::size_t k = 0; k + 1 < history.size(); ++k)
    {
        run = std::abs(history[k + 1] - history[k]) <= epsilon ? run + 1 : 0;
        if (run == window)
            return k + 1 - window;
    }
    return std::nullopt;
}

namespace {

json node_json(const NodeSummary& n)
{
    return {
        {"id", n.id},
        {"role", n.role},
        {"time_ms", n.time_ms},
        {"energy_mj", n.energy_mj},
        {"residency_ns", n.residency_ns},
        {"total_energy_mj", n.total_energy_mj},
        {"counters", n.counters},
        {"arrivals", n.arrivals},
        {"arrival_hash", n.arrival_hash},
    };
}

} // namespace

json to_json(const ExperimentReport& r)
{
    json j;
    j["scenario"] = r.scenario;
    j["protocol"] = r.protocol;
    j["seed"] = r.seed;
    j["horizon_s"] = r.horizon_s;
    j["events"] = r.events;
    j["channel"] = r.channel;
    json nodes = json::array();
    for (const auto& n : r.nodes)
        nodes.push_back(node_json(n));
    j["nodes"] = nodes;
    json iv = json::array();
    for (const auto& s : r.intervals)
        iv.push_back({{"wakeup_index", s.wakeup_index}, {"sim_time", s.sim_time_s}, {"node_id", s.node_id}, {"i_wu_ms", s.i_wu_ms}});
    j["intervals"] = iv;
    json tsr = json::array();
    for (const auto& s : r.tsr)
        tsr.push_back({
            {"wakeup_index", s.wakeup_index},
            {"sim_time", s.sim_time_s},
            {"node_id", s.node_id},
            {"data", s.data},
            {"tsr", s.tsr},
            {"x1", s.x1},
            {"x2", s.x2},
            {"mu", s.mu},
            {"e", s.e},
            {"i_wu_ms", s.i_wu_ms},
            {"deferred", s.deferred},
        });
    j["tsr"] = tsr;
    json conv = json::array();
    for (const auto& c : r.convergence)
        conv.push_back({{"node_id", c.node_id}, {"wakeups", c.wakeups ? json(*c.wakeups) : json(nullptr)}});
    j["convergence"] = conv;
    return j;
}

ExperimentReport report_from_json(const json& j)
{
    try
    {
        ExperimentReport r;
        r.scenario = j.at("scenario");
        r.protocol = j.at("protocol").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.horizon_s = j.at("horizon_s").get<double>();
        r.events = j.at("events").get<std::uint64_t>();
        r.channel = j.at("channel").get<std::map<std::string, std::uint64_t>>();
        for (const auto& n : j.at("nodes"))
        {
            NodeSummary s;
            s.id = n.at("id").get<NodeId>();
            s.role = n.at("role").get<std::string>();
            s.time_ms = n.at("time_ms").get<std::map<std::string, double>>();
            s.energy_mj = n.at("energy_mj").get<std::map<std::string, double>>();
            s.residency_ns = n.at("residency_ns").get<std::map<std::string, std::int64_t>>();
            s.total_energy_mj = n.at("total_energy_mj").get<double>();
            s.counters = n.at("counters").get<std::map<std::string, std::uint64_t>>();
            s.arrivals = n.at("arrivals").get<std::uint64_t>();
            s.arrival_hash = n.at("arrival_hash").get<std::uint64_t>();
            r.nodes.push_back(std::move(s));
        }
        for (const auto& s : j.at("intervals"))
            r.intervals.push_back({s.at("wakeup_index").get<std::uint64_t>(), s.at("sim_time").get<double>(),
                                   s.at("node_id").get<NodeId>(), s.at("i_wu_ms").get<double>()});
        for (const auto& s : j.at("tsr"))
            r.tsr.push_back({s.at("wakeup_index").get<std::uint64_t>(), s.at("sim_time").get<double>(),
                             s.at("node_id").get<NodeId>(), s.at("data").get<bool>(), s.at("tsr").get<std::string>(),
                             s.at("x1").get<double>(), s.at("x2").get<double>(), s.at("mu").get<double>(),
                             s.at("e").get<double>(), s.at("i_wu_ms").get<double>(), s.at("deferred").get<bool>()});
        for (const auto& c : j.at("convergence"))
        {
            ConvergenceResult res{c.at("node_id").get<NodeId>(), std::nullopt};
            if (!c.at("wakeups").is_null())
                res.wakeups = c.at("wakeups").get<std::uint64_t>();
            r.convergence.push_back(res);
        }
        return r;
    }
    catch (const json::exception& e)
    {
        throw IoError(std::string("malformed report document: ") + e.what());
    }
}

} // namespace tadsim::harness
