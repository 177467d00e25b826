#pragma once

#include "tadsim/sim/packet.hpp"
#include "tadsim/sim/radio.hpp"
#include "tadsim/sim/simulator.hpp"
#include "tadsim/time.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tadsim::mac {

// Side effects a MAC state machine asks its host to perform. The state
// machines never touch the simulator directly, which keeps them testable in
// isolation.
struct SwitchRadio
{
    sim::RadioMode mode;
    friend bool operator==(const SwitchRadio&, const SwitchRadio&) = default;
};

// Restarting a timer tag replaces any pending instance of it.
struct StartTimer
{
    std::uint32_t tag;
    SimTime delay;
    friend bool operator==(const StartTimer&, const StartTimer&) = default;
};

struct StartTimerAt
{
    std::uint32_t tag;
    SimTime at;
    friend bool operator==(const StartTimerAt&, const StartTimerAt&) = default;
};

struct CancelTimer
{
    std::uint32_t tag;
    friend bool operator==(const CancelTimer&, const CancelTimer&) = default;
};

struct Send
{
    sim::Packet packet;
    friend bool operator==(const Send&, const Send&) = default;
};

using Action = std::variant<SwitchRadio, StartTimer, StartTimerAt, CancelTimer, Send>;
using Actions = std::vector<Action>;

// Tag 0 is reserved for the host's traffic generator.
inline constexpr std::uint32_t kTrafficTimerTag = 0;

// Upper-layer packet arrivals for one node.
class ArrivalProcess
{
  public:
    virtual ~ArrivalProcess() = default;
    // Next absolute arrival time, strictly increasing; nullopt when exhausted.
    virtual std::optional<SimTime> next() = 0;
};

// Digest of the upper-layer arrival sequence a node observed.
struct TrafficDigest
{
    std::uint64_t count = 0;
    std::uint64_t hash = 0xcbf29ce484222325ULL; // FNV-1a over arrival ns

    void add(SimTime t) noexcept;
    friend bool operator==(const TrafficDigest&, const TrafficDigest&) = default;
};

struct MacCounters
{
    std::map<std::string, std::uint64_t> values;

    std::uint64_t get(const std::string& name) const
    {
        auto it = values.find(name);
        return it == values.end() ? 0 : it->second;
    }
};

// Common interface of every hosted MAC protocol instance.
class MacNode : public sim::Node
{
  public:
    explicit MacNode(std::unique_ptr<ArrivalProcess> traffic) : traffic_(std::move(traffic)) {}

    virtual std::string role() const = 0;
    virtual MacCounters counters() const = 0;
    const TrafficDigest& traffic_digest() const noexcept { return digest_; }

  protected:
    // Arms the first arrival; subclasses call this from start().
    void start_traffic(sim::NodeContext& ctx);
    // Handles the traffic tag; returns the payload id of the arrival.
    std::uint64_t take_arrival(sim::NodeContext& ctx);

  private:
    void arm_next(sim::NodeContext& ctx);

    std::unique_ptr<ArrivalProcess> traffic_;
    TrafficDigest digest_;
    std::uint64_t next_payload_ = 1;
};

// Hosts a state machine exposing
//   Actions start(SimTime)
//   Actions on_timer(SimTime, uint32_t tag, bool channel_busy)
//   Actions on_packet(SimTime, const Packet&)
//   Actions on_radio(SimTime, RadioMode)
//   Actions on_upper_data(SimTime, uint64_t payload)
//   std::string role() const; MacCounters counters() const
// and executes the actions it returns against the simulator.
template <class Fsm>
class FsmNode final : public MacNode
{
  public:
    FsmNode(Fsm fsm, std::unique_ptr<ArrivalProcess> traffic)
        : MacNode(std::move(traffic)), fsm_(std::move(fsm))
    {
    }

    Fsm& fsm() noexcept { return fsm_; }
    const Fsm& fsm() const noexcept { return fsm_; }

    std::string role() const override { return fsm_.role(); }
    MacCounters counters() const override { return fsm_.counters(); }

    void start(sim::NodeContext& ctx) override
    {
        start_traffic(ctx);
        execute(ctx, fsm_.start(ctx.now()));
    }

    void on_timer(sim::NodeContext& ctx, std::uint32_t tag) override
    {
        if (tag == kTrafficTimerTag)
        {
            const auto payload = take_arrival(ctx);
            execute(ctx, fsm_.on_upper_data(ctx.now(), payload));
            return;
        }
        timers_.erase(tag);
        execute(ctx, fsm_.on_timer(ctx.now(), tag, ctx.channel_busy()));
    }

    void on_packet(sim::NodeContext& ctx, const sim::Packet& pkt) override
    {
        execute(ctx, fsm_.on_packet(ctx.now(), pkt));
    }

    void on_radio_switched(sim::NodeContext& ctx, sim::RadioMode mode) override
    {
        execute(ctx, fsm_.on_radio(ctx.now(), mode));
    }

  private:
    void execute(sim::NodeContext& ctx, const Actions& actions)
    {
        for (const auto& a : actions)
        {
            if (auto* s = std::get_if<SwitchRadio>(&a))
                ctx.switch_radio(s->mode);
            else if (auto* t = std::get_if<StartTimer>(&a))
                rearm(ctx, t->tag, ctx.now() + t->delay);
            else if (auto* ta = std::get_if<StartTimerAt>(&a))
                rearm(ctx, ta->tag, ta->at);
            else if (auto* c = std::get_if<CancelTimer>(&a))
                cancel(ctx, c->tag);
            else if (auto* p = std::get_if<Send>(&a))
                ctx.transmit(p->packet);
        }
    }

    void rearm(sim::NodeContext& ctx, std::uint32_t tag, SimTime at)
    {
        cancel(ctx, tag);
        timers_[tag] = ctx.arm_timer_at(at, tag);
    }

    void cancel(sim::NodeContext& ctx, std::uint32_t tag)
    {
        if (auto it = timers_.find(tag); it != timers_.end())
        {
            ctx.cancel(it->second);
            timers_.erase(it);
        }
    }

    Fsm fsm_;
    std::map<std::uint32_t, sim::TimerHandle> timers_;
};

// Bounded FIFO of upper-layer payload ids; overflow drops the oldest entry.
class PayloadQueue
{
  public:
    explicit PayloadQueue(std::size_t capacity) : capacity_(capacity) {}

    // Returns true if an old payload was dropped to make room.
    bool push(std::uint64_t payload);
    std::uint64_t front() const;
    void pop();
    bool empty() const noexcept { return items_.empty(); }
    std::size_t size() const noexcept { return items_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }

  private:
    std::size_t capacity_;
    std::deque<std::uint64_t> items_;
};

} // namespace tadsim::mac
