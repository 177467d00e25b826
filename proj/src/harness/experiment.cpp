#include "tadsim/harness/experiment.hpp"

#include "tadsim/mac/bmac.hpp"
#include "tadsim/mac/lmac.hpp"
#include "tadsim/mac/tadmac.hpp"

#include <algorithm>
#include <cctype>

namespace tadsim::harness {

namespace {

constexpr NodeId kCoordinator = 0;

std::string lower(std::string_view name)
{
    std::string out(name);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

class NoArrivals final : public mac::ArrivalProcess
{
  public:
    std::optional<SimTime> next() override { return std::nullopt; }
};

std::unique_ptr<mac::ArrivalProcess> traffic_for(const Scenario& s, NodeId id)
{
    if (id == kCoordinator)
        return std::make_unique<NoArrivals>();
    return make_arrivals(s.transmitters.at(id - 1).traffic, sim::derive_seed(s.seed, id, kTrafficStream));
}

std::vector<mac::MacNode*> build(const Scenario& s, sim::Simulator& engine)
{
    std::vector<mac::MacNode*> macs;
    const auto n = static_cast<NodeId>(s.transmitters.size());
    auto add = [&](std::unique_ptr<mac::MacNode> node) {
        macs.push_back(node.get());
        engine.add_node(std::move(node));
    };
    for (NodeId id = 0; id <= n; ++id)
    {
        switch (s.protocol)
        {
        case Protocol::TadMac:
            if (id == kCoordinator)
            {
                std::vector<NodeId> neighbors;
                for (NodeId t = 1; t <= n; ++t)
                    neighbors.push_back(t);
                add(std::make_unique<mac::TadReceiverNode>(mac::TadReceiver(id, neighbors, s.tad, s.phy),
                                                           traffic_for(s, id)));
            }
            else
                add(std::make_unique<mac::TadTransmitterNode>(mac::TadTransmitter(id, kCoordinator, s.tad, s.phy),
                                                              traffic_for(s, id)));
            break;
        case Protocol::Bmac:
            add(std::make_unique<mac::FsmNode<mac::BmacMac>>(
                mac::BmacMac(id, kCoordinator, s.bmac, s.phy, sim::derive_seed(s.seed, id, kMacStream)),
                traffic_for(s, id)));
            break;
        case Protocol::Lmac:
            add(std::make_unique<mac::FsmNode<mac::LmacMac>>(mac::LmacMac(id, kCoordinator, id, s.lmac, s.phy),
                                                             traffic_for(s, id)));
            break;
        }
    }
    engine.connect_star();
    return macs;
}

void summarise_tad(const Scenario& s, const mac::TadReceiver& rx, ExperimentReport& out)
{
    const double eps = s.epsilon().count();
    for (const auto& [id, entry] : rx.schedule().entries())
    {
        out.intervals.push_back({0, 0.0, id, entry.interval.history.front().count()});
    }
    for (const auto& rec : rx.records())
    {
        out.intervals.push_back({rec.index, to_seconds(rec.time), rec.node, rec.i_wu.count()});
        out.tsr.push_back({rec.index, to_seconds(rec.time), rec.node, rec.data,
                           adaptive::TsrRegister::from_word(s.tad.tsr_length, rec.tsr_word).to_string(), rec.x1,
                           rec.x2, rec.mu, rec.e, rec.i_wu.count(), rec.deferred});
    }
    // Group the samples per node, keeping wake-up order within each node.
    std::stable_sort(out.intervals.begin(), out.intervals.end(),
                     [](const IntervalSample& a, const IntervalSample& b) { return a.node_id < b.node_id; });
    std::stable_sort(out.tsr.begin(), out.tsr.end(),
                     [](const TsrSample& a, const TsrSample& b) { return a.node_id < b.node_id; });
    for (const auto& [id, entry] : rx.schedule().entries())
    {
        const auto h = out.interval_history(id);
        const auto idx = detect_convergence(h, eps, s.convergence.window);
        out.convergence.push_back({id, idx ? std::optional<std::uint64_t>(*idx) : std::nullopt});
    }
}

} // namespace

ExperimentReport run_experiment(const Scenario& s, const RunHooks& hooks)
{
    s.validate();
    sim::EngineConfig cfg;
    cfg.phy = s.phy;
    cfg.power = s.power;
    cfg.seed = s.seed;
    cfg.max_events_without_advance = s.max_events_without_advance;
    sim::Simulator engine(cfg);
    const auto macs = build(s, engine);
    if (hooks.on_transmit)
        engine.set_transmit_observer(hooks.on_transmit);
    if (hooks.on_delivery)
        engine.set_delivery_observer(hooks.on_delivery);

    const auto result = engine.run_until(from_seconds(s.horizon_s));
    if (hooks.on_finish)
        hooks.on_finish(engine, result);

    ExperimentReport out;
    out.scenario = to_json(s);
    out.protocol = std::string(to_string(s.protocol));
    out.seed = s.seed;
    out.horizon_s = s.horizon_s;
    out.events = result.events;
    out.channel = {
        {"transmissions", result.channel.transmissions}, {"delivered", result.channel.delivered},
        {"corrupted", result.channel.corrupted},         {"undeliverable", result.channel.undeliverable},
        {"collisions", result.channel.collisions},       {"in_flight", result.channel.in_flight},
    };
    for (const auto& nr : result.nodes)
    {
        NodeSummary n;
        n.id = nr.id;
        const auto* mac = macs.at(nr.id);
        n.role = mac->role();
        for (auto st : energy::kLedgerStates)
        {
            const std::string key = lower(energy::to_string(st));
            n.time_ms[key] = nr.ledger.time(st).count();
            n.energy_mj[key] = nr.ledger.energy_mj(st);
        }
        for (auto m : sim::kRadioModes)
            n.residency_ns[lower(sim::to_string(m))] = nr.residency[static_cast<std::size_t>(m)].count();
        n.total_energy_mj = nr.ledger.total_energy_mj();
        n.counters = mac->counters().values;
        n.arrivals = mac->traffic_digest().count;
        n.arrival_hash = mac->traffic_digest().hash;
        out.nodes.push_back(std::move(n));
    }
    if (s.protocol == Protocol::TadMac)
        summarise_tad(s, static_cast<const mac::TadReceiverNode*>(macs.front())->fsm(), out);
    return out;
}

} // namespace tadsim::harness
