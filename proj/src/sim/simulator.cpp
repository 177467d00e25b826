#include "tadsim/sim/simulator.hpp"

#include "tadsim/errors.hpp"

#include <algorithm>
#include <string>

namespace tadsim::sim {

namespace {

constexpr std::uint64_t kNodeRngStream = 0x6d6163; // "mac"

std::string at_time(SimTime t)
{
    return std::to_string(t.count()) + " ns";
}

} // namespace

std::uint64_t derive_seed(std::uint64_t seed, NodeId node, std::uint64_t stream) noexcept
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(seed) ^ node) ^ stream);
}

double uniform01(std::mt19937_64& rng) noexcept
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// NodeContext

SimTime NodeContext::now() const noexcept
{
    return sim_.now();
}

const PhyParams& NodeContext::phy() const noexcept
{
    return sim_.config().phy;
}

TimerHandle NodeContext::arm_timer(SimTime delay, std::uint32_t tag)
{
    return sim_.arm_timer(id_, sim_.now() + delay, tag);
}

TimerHandle NodeContext::arm_timer_at(SimTime at, std::uint32_t tag)
{
    return sim_.arm_timer(id_, at, tag);
}

void NodeContext::cancel(TimerHandle& handle)
{
    if (handle)
        sim_.cancel_timer(handle);
    handle = {};
}

void NodeContext::switch_radio(RadioMode target)
{
    sim_.switch_radio(id_, target);
}

RadioMode NodeContext::radio_mode() const
{
    return sim_.radio(id_).mode();
}

SimTime NodeContext::transmit(const Packet& pkt)
{
    return sim_.transmit(id_, pkt);
}

bool NodeContext::channel_busy() const
{
    return sim_.channel_busy(id_);
}

std::mt19937_64& NodeContext::rng()
{
    return sim_.rng(id_);
}

// Simulator

Simulator::Simulator(EngineConfig config) : config_(std::move(config))
{
    config_.phy.validate();
    config_.power.validate();
}

NodeId Simulator::add_node(std::unique_ptr<Node> node)
{
    if (started_)
        throw SimulationFault("nodes must be added before the simulation starts");
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Hosted{std::move(node), Radio(config_.power),
                            std::mt19937_64(derive_seed(config_.seed, id, kNodeRngStream)), {}});
    return id;
}

void Simulator::connect(NodeId a, NodeId b)
{
    if (a == b)
        return;
    auto link = [](std::vector<NodeId>& v, NodeId x) {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x)
            v.insert(it, x);
    };
    link(nodes_.at(a).neighbors, b);
    link(nodes_.at(b).neighbors, a);
}

void Simulator::connect_star()
{
    for (NodeId id = 1; id < nodes_.size(); ++id)
        connect(0, id);
}

bool Simulator::in_range(NodeId listener, NodeId source) const
{
    const auto& n = nodes_.at(source).neighbors;
    return std::binary_search(n.begin(), n.end(), listener);
}

void Simulator::schedule(SimEvent ev)
{
    if (ev.time < now_)
        throw SimulationFault("event scheduled in the past: " + at_time(ev.time) + " < clock " + at_time(now_));
    ev.seq = next_seq_++;
    queue_.push(std::move(ev));
}

TimerHandle Simulator::arm_timer(NodeId id, SimTime at, std::uint32_t tag)
{
    const TimerHandle handle{next_token_++};
    schedule(SimEvent{at, 0, EventKind::Timer, id, TimerPayload{tag, handle.token}});
    return handle;
}

void Simulator::cancel_timer(TimerHandle handle)
{
    cancelled_.insert(handle.token);
}

void Simulator::switch_radio(NodeId id, RadioMode target)
{
    Radio& radio = nodes_.at(id).radio;
    if (target == RadioMode::Switching)
        throw SimulationFault("cannot request the switching state");
    if (radio.mode_ == RadioMode::Switching)
    {
        radio.queued_target_ = target;
        return;
    }
    if (radio.mode_ == RadioMode::Tx && now_ < radio.tx_busy_until_)
        throw SimulationFault("node " + std::to_string(id) + " left TX during a transmission");
    if (radio.mode_ == target)
    {
        schedule(SimEvent{now_, 0, EventKind::RadioSwitchDone, id, SwitchPayload{target}});
        return;
    }
    begin_switch(id, target);
}

void Simulator::begin_switch(NodeId id, RadioMode target)
{
    Radio& radio = nodes_[id].radio;
    radio.enter(RadioMode::Switching, now_);
    radio.switch_target_ = target;
    schedule(SimEvent{now_ + config_.phy.switch_delay, 0, EventKind::RadioSwitchDone, id, SwitchPayload{target}});
}

void Simulator::handle_switch_done(NodeId id, RadioMode target)
{
    Radio& radio = nodes_[id].radio;
    NodeContext ctx(*this, id);
    if (radio.mode_ != RadioMode::Switching)
    {
        // Zero-delay acknowledgment of a request for the current mode.
        nodes_[id].node->on_radio_switched(ctx, radio.mode_);
        return;
    }
    radio.enter(target, now_);
    radio.switch_target_.reset();
    if (radio.queued_target_)
    {
        const RadioMode next = *radio.queued_target_;
        radio.queued_target_.reset();
        if (next != target)
        {
            begin_switch(id, next);
            return;
        }
    }
    nodes_[id].node->on_radio_switched(ctx, target);
}

SimTime Simulator::transmit(NodeId id, const Packet& pkt)
{
    Radio& radio = nodes_.at(id).radio;
    if (radio.mode_ != RadioMode::Tx)
        throw SimulationFault("node " + std::to_string(id) + " transmitted while its radio is " +
                              std::string(to_string(radio.mode_)));
    if (now_ < radio.tx_busy_until_)
        throw SimulationFault("node " + std::to_string(id) + " started a transmission while still sending");
    if (pkt.source != id)
        throw SimulationFault("packet source does not match the transmitting node");
    if (pkt.airtime <= SimTime::zero())
        throw SimulationFault("packet airtime must be positive");

    const SimTime prop = config_.phy.propagation_delay;
    Transmission t{pkt, now_, now_ + pkt.airtime + prop};
    radio.tx_busy_until_ = now_ + pkt.airtime;
    ++counters_.transmissions;

    // Collision: overlapping arrival windows at any node hearing both senders.
    const auto& mine = nodes_[id].neighbors;
    for (auto& [other_id, other] : in_flight_)
    {
        const bool overlap = t.start + prop < other.end && other.start + prop < t.end;
        if (!overlap)
            continue;
        const NodeId other_src = other.packet.source;
        const auto& theirs = nodes_[other_src].neighbors;
        const bool common = std::any_of(mine.begin(), mine.end(), [&](NodeId l) {
            return l != other_src && std::binary_search(theirs.begin(), theirs.end(), l);
        });
        if (common)
        {
            t.corrupted = true;
            other.corrupted = true;
            ++counters_.collisions;
        }
    }

    if (on_transmit_)
        on_transmit_(now_, pkt);

    t.pending = mine.size();
    if (t.pending == 0)
    {
        classify(t);
        return radio.tx_busy_until_;
    }
    const std::uint64_t tid = next_transmission_++;
    const SimTime end = t.end;
    in_flight_.emplace(tid, std::move(t));
    for (NodeId listener : mine)
        schedule(SimEvent{end, 0, EventKind::Delivery, listener, DeliveryPayload{tid}});
    return radio.tx_busy_until_;
}

bool Simulator::channel_busy(NodeId id) const
{
    const SimTime prop = config_.phy.propagation_delay;
    for (const auto& [tid, t] : in_flight_)
    {
        if (t.packet.source == id || !in_range(id, t.packet.source))
            continue;
        if (t.start + prop <= now_ && now_ < t.end)
            return true;
    }
    return false;
}

void Simulator::handle_delivery(NodeId listener, std::uint64_t id)
{
    auto it = in_flight_.find(id);
    if (it == in_flight_.end())
        throw SimulationFault("delivery for unknown transmission");
    Transmission& t = it->second;
    const Radio& radio = nodes_[listener].radio;
    const bool listening =
        radio.mode_ == RadioMode::Rx && radio.rx_since_ <= t.start + config_.phy.propagation_delay;
    const bool deliver = !t.corrupted && listening;
    const Packet pkt = t.packet;
    if (deliver)
        t.delivered_any = true;
    if (--t.pending == 0)
    {
        classify(t);
        in_flight_.erase(it);
    }
    if (deliver)
    {
        if (on_delivery_)
            on_delivery_(now_, listener, pkt);
        NodeContext ctx(*this, listener);
        nodes_[listener].node->on_packet(ctx, pkt);
    }
}

void Simulator::classify(const Transmission& t)
{
    if (t.corrupted)
        ++counters_.corrupted;
    else if (t.delivered_any)
        ++counters_.delivered;
    else
        ++counters_.undeliverable;
}

void Simulator::dispatch(const SimEvent& ev)
{
    switch (ev.kind)
    {
    case EventKind::Timer: {
        const auto& timer = std::get<TimerPayload>(ev.payload);
        if (cancelled_.erase(timer.token) > 0)
            return;
        NodeContext ctx(*this, ev.target);
        nodes_.at(ev.target).node->on_timer(ctx, timer.tag);
        return;
    }
    case EventKind::Delivery:
        handle_delivery(ev.target, std::get<DeliveryPayload>(ev.payload).transmission);
        return;
    case EventKind::RadioSwitchDone:
        handle_switch_done(ev.target, std::get<SwitchPayload>(ev.payload).target);
        return;
    }
}

void Simulator::start_nodes()
{
    started_ = true;
    for (NodeId id = 0; id < nodes_.size(); ++id)
    {
        NodeContext ctx(*this, id);
        nodes_[id].node->start(ctx);
    }
}

SimulationReport Simulator::run_until(SimTime t_end)
{
    if (t_end <= SimTime::zero())
        throw SimulationFault("run horizon must be positive");
    if (t_end < now_)
        throw SimulationFault("run horizon is before the current clock");
    if (!started_)
        start_nodes();

    std::uint64_t at_same_time = 0;
    while (!queue_.empty() && queue_.top().time <= t_end)
    {
        SimEvent ev = queue_.top();
        queue_.pop();
        if (ev.time < now_)
            throw SimulationFault("event queue yielded an event before the clock");
        if (ev.time == now_)
        {
            if (++at_same_time > config_.max_events_without_advance)
                throw SimulationFault("livelock: " + std::to_string(at_same_time) +
                                      " events executed without the clock advancing at " + at_time(now_));
        }
        else
        {
            at_same_time = 1;
        }
        now_ = ev.time;
        ++events_;
        dispatch(ev);
    }
    now_ = t_end;

    SimulationReport report;
    report.end_time = now_;
    report.events = events_;
    report.channel = counters_;
    report.channel.in_flight = in_flight_.size();
    for (NodeId id = 0; id < nodes_.size(); ++id)
    {
        Radio& radio = nodes_[id].radio;
        radio.flush(now_);
        NodeResult r;
        r.id = id;
        r.residency = radio.residency_;
        r.ledger = radio.ledger_;
        report.nodes.push_back(std::move(r));
    }
    return report;
}

} // namespace tadsim::sim
