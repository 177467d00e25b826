#pragma once

#include "tadsim/energy/ledger.hpp"
#include "tadsim/sim/packet.hpp"
#include "tadsim/sim/radio.hpp"
#include "tadsim/time.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <unordered_set>
#include <variant>
#include <vector>

namespace tadsim::sim {

class Simulator;
class NodeContext;

enum class EventKind : std::uint8_t
{
    Timer,
    Delivery,
    RadioSwitchDone,
};

struct TimerPayload
{
    std::uint32_t tag = 0;
    std::uint64_t token = 0;
};

struct DeliveryPayload
{
    std::uint64_t transmission = 0;
};

struct SwitchPayload
{
    RadioMode target = RadioMode::Sleep;
};

struct SimEvent
{
    SimTime time{};
    std::uint64_t seq = 0; // assigned by Simulator::schedule
    EventKind kind = EventKind::Timer;
    NodeId target = 0;
    std::variant<TimerPayload, DeliveryPayload, SwitchPayload> payload;
};

struct TimerHandle
{
    std::uint64_t token = 0;
    explicit operator bool() const noexcept { return token != 0; }
};

// A hosted protocol instance. Handlers run on the simulator thread, one at a
// time, in (time, seq) order.
class Node
{
  public:
    virtual ~Node() = default;

    virtual void start(NodeContext& ctx) = 0;
    virtual void on_timer(NodeContext& ctx, std::uint32_t tag) = 0;
    virtual void on_packet(NodeContext& ctx, const Packet& pkt) = 0;
    virtual void on_radio_switched(NodeContext& ctx, RadioMode mode) = 0;
};

// Per-node view of the simulator handed to Node callbacks.
class NodeContext
{
  public:
    NodeContext(Simulator& sim, NodeId id) : sim_(sim), id_(id) {}

    NodeId id() const noexcept { return id_; }
    SimTime now() const noexcept;
    const PhyParams& phy() const noexcept;

    TimerHandle arm_timer(SimTime delay, std::uint32_t tag);
    TimerHandle arm_timer_at(SimTime at, std::uint32_t tag);
    // No-op on an empty handle; resets the handle.
    void cancel(TimerHandle& handle);

    // Always answered by on_radio_switched, even if already in `target`.
    void switch_radio(RadioMode target);
    RadioMode radio_mode() const;

    // Returns the instant the last bit leaves the sender.
    SimTime transmit(const Packet& pkt);
    bool channel_busy() const;

    std::mt19937_64& rng();

  private:
    Simulator& sim_;
    NodeId id_;
};

struct ChannelCounters
{
    std::uint64_t transmissions = 0;
    std::uint64_t delivered = 0;
    std::uint64_t corrupted = 0;
    std::uint64_t undeliverable = 0;
    std::uint64_t collisions = 0;
    // Still on the air when the report was taken; not yet classified.
    std::uint64_t in_flight = 0;

    friend bool operator==(const ChannelCounters&, const ChannelCounters&) = default;
};

struct NodeResult
{
    NodeId id = 0;
    std::array<SimTime, kRadioModes.size()> residency{};
    energy::EnergyLedger ledger;
};

struct SimulationReport
{
    SimTime end_time{};
    std::uint64_t events = 0;
    ChannelCounters channel;
    std::vector<NodeResult> nodes;
};

struct EngineConfig
{
    PhyParams phy;
    energy::PowerProfile power;
    std::uint64_t seed = 1;
    std::uint64_t max_events_without_advance = 10'000'000;
};

// Deterministic discrete-event core: event queue, clock, radios and an ideal
// shared medium with collision detection.
class Simulator
{
  public:
    using TransmitObserver = std::function<void(SimTime, const Packet&)>;
    using DeliveryObserver = std::function<void(SimTime, NodeId, const Packet&)>;

    explicit Simulator(EngineConfig config);
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    // Nodes get consecutive ids from 0 in insertion order.
    NodeId add_node(std::unique_ptr<Node> node);
    void connect(NodeId a, NodeId b);
    // Node 0 hears everyone; every other node hears only node 0.
    void connect_star();

    Node& node(NodeId id) { return *nodes_.at(id).node; }
    const Radio& radio(NodeId id) const { return nodes_.at(id).radio; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    bool in_range(NodeId listener, NodeId source) const;

    SimTime now() const noexcept { return now_; }
    const EngineConfig& config() const noexcept { return config_; }
    const ChannelCounters& channel_counters() const noexcept { return counters_; }
    std::size_t in_flight() const noexcept { return in_flight_.size(); }

    // Throws SimulationFault when ev.time is before the clock.
    void schedule(SimEvent ev);

    // Runs events with time <= t_end, then closes radio accounting at t_end.
    SimulationReport run_until(SimTime t_end);

    void set_transmit_observer(TransmitObserver fn) { on_transmit_ = std::move(fn); }
    void set_delivery_observer(DeliveryObserver fn) { on_delivery_ = std::move(fn); }

    // Engine half of NodeContext.
    TimerHandle arm_timer(NodeId id, SimTime at, std::uint32_t tag);
    void cancel_timer(TimerHandle handle);
    void switch_radio(NodeId id, RadioMode target);
    SimTime transmit(NodeId id, const Packet& pkt);
    bool channel_busy(NodeId id) const;
    std::mt19937_64& rng(NodeId id) { return nodes_.at(id).rng; }

  private:
    struct Hosted
    {
        std::unique_ptr<Node> node;
        Radio radio;
        std::mt19937_64 rng;
        std::vector<NodeId> neighbors; // sorted
    };

    struct Transmission
    {
        Packet packet;
        SimTime start{};
        SimTime end{}; // last bit reaches listeners
        bool corrupted = false;
        bool delivered_any = false;
        std::size_t pending = 0;
    };

    struct Later
    {
        bool operator()(const SimEvent& a, const SimEvent& b) const noexcept
        {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    void dispatch(const SimEvent& ev);
    void handle_delivery(NodeId listener, std::uint64_t id);
    void handle_switch_done(NodeId id, RadioMode target);
    void begin_switch(NodeId id, RadioMode target);
    void classify(const Transmission& t);
    void start_nodes();

    EngineConfig config_;
    std::vector<Hosted> nodes_;
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
    std::unordered_set<std::uint64_t> cancelled_;
    std::map<std::uint64_t, Transmission> in_flight_;
    ChannelCounters counters_;
    SimTime now_{};
    std::uint64_t next_seq_ = 0;
    std::uint64_t next_token_ = 1;
    std::uint64_t next_transmission_ = 1;
    std::uint64_t events_ = 0;
    bool started_ = false;
    TransmitObserver on_transmit_;
    DeliveryObserver on_delivery_;
};

// splitmix64-based stream derivation, so each (seed, node, stream) triple gets
// an independent generator.
std::uint64_t derive_seed(std::uint64_t seed, NodeId node, std::uint64_t stream) noexcept;

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double uniform01(std::mt19937_64& rng) noexcept;

} // namespace tadsim::sim
