#include "tadsim/errors.hpp"
#include "tadsim/sim/simulator.hpp"

#include <doctest.h>

#include <functional>
#include <vector>

using namespace tadsim;
using namespace tadsim::sim;

namespace {

// Node whose behaviour is supplied per test.
struct Scripted final : Node
{
    std::function<void(NodeContext&)> on_start;
    std::function<void(NodeContext&, std::uint32_t)> timer;
    std::function<void(NodeContext&, RadioMode)> radio;
    std::vector<Packet> received;

    void start(NodeContext& ctx) override
    {
        if (on_start)
            on_start(ctx);
    }
    void on_timer(NodeContext& ctx, std::uint32_t tag) override
    {
        if (timer)
            timer(ctx, tag);
    }
    void on_packet(NodeContext&, const Packet& pkt) override { received.push_back(pkt); }
    void on_radio_switched(NodeContext& ctx, RadioMode mode) override
    {
        if (radio)
            radio(ctx, mode);
    }
};

Packet data_from(NodeId src, NodeId dst, SimTime airtime)
{
    return Packet{PacketKind::Data, src, dst, dst, airtime, 1};
}

// A sender that switches to TX, sends once at `when`, then sleeps.
std::unique_ptr<Scripted> sender(SimTime when, NodeId self, NodeId dst, SimTime airtime = from_ms(2.0))
{
    auto n = std::make_unique<Scripted>();
    n->on_start = [=](NodeContext& ctx) { ctx.arm_timer_at(when, 1); };
    n->timer = [=](NodeContext& ctx, std::uint32_t tag) {
        if (tag == 1)
            ctx.switch_radio(RadioMode::Tx);
        if (tag == 2)
            ctx.switch_radio(RadioMode::Sleep);
    };
    n->radio = [=](NodeContext& ctx, RadioMode m) {
        if (m == RadioMode::Tx)
        {
            const SimTime done = ctx.transmit(data_from(self, dst, airtime));
            ctx.arm_timer_at(done, 2);
        }
    };
    return n;
}

std::unique_ptr<Scripted> listener(RadioMode mode)
{
    auto n = std::make_unique<Scripted>();
    n->on_start = [=](NodeContext& ctx) { ctx.switch_radio(mode); };
    return n;
}

} // namespace

TEST_CASE("scheduling in the past is a fault, at the present is fine")
{
    Simulator sim({});
    sim.add_node(std::make_unique<Scripted>());
    sim.run_until(from_ms(10.0));
    CHECK_THROWS_AS(sim.schedule(SimEvent{from_ms(5.0), 0, EventKind::Timer, 0, TimerPayload{}}), SimulationFault);
    CHECK_NOTHROW(sim.schedule(SimEvent{from_ms(10.0), 0, EventKind::Timer, 0, TimerPayload{}}));
}

TEST_CASE("same-time timers fire in the order they were armed")
{
    Simulator sim({});
    auto n = std::make_unique<Scripted>();
    std::vector<std::uint32_t> order;
    n->on_start = [](NodeContext& ctx) {
        for (std::uint32_t tag : {5u, 3u, 9u})
            ctx.arm_timer_at(from_ms(1.0), tag);
    };
    n->timer = [&](NodeContext&, std::uint32_t tag) { order.push_back(tag); };
    sim.add_node(std::move(n));
    sim.run_until(from_ms(2.0));
    CHECK(order == std::vector<std::uint32_t>{5, 3, 9});
}

TEST_CASE("cancelled timers do not fire")
{
    Simulator sim({});
    auto n = std::make_unique<Scripted>();
    int fired = 0;
    n->on_start = [](NodeContext& ctx) {
        auto h = ctx.arm_timer(from_ms(1.0), 1);
        ctx.cancel(h);
        CHECK_FALSE(h);
    };
    n->timer = [&](NodeContext&, std::uint32_t) { ++fired; };
    sim.add_node(std::move(n));
    sim.run_until(from_ms(2.0));
    CHECK(fired == 0);
}

TEST_CASE("a listener in RX for the whole airtime gets the packet")
{
    Simulator sim({});
    sim.add_node(listener(RadioMode::Rx));
    sim.add_node(sender(from_ms(5.0), 1, 0));
    sim.connect_star();
    auto* rx = static_cast<Scripted*>(&sim.node(0));
    const auto r = sim.run_until(from_ms(20.0));
    CHECK(rx->received.size() == 1);
    CHECK(r.channel.delivered == 1);
    CHECK(r.channel.transmissions == 1);
}

TEST_CASE("a sleeping listener gets nothing")
{
    Simulator sim({});
    sim.add_node(listener(RadioMode::Sleep));
    sim.add_node(sender(from_ms(5.0), 1, 0));
    sim.connect_star();
    const auto r = sim.run_until(from_ms(20.0));
    CHECK(static_cast<Scripted*>(&sim.node(0))->received.empty());
    CHECK(r.channel.undeliverable == 1);
}

TEST_CASE("a listener that turns on mid-packet misses it")
{
    Simulator sim({});
    auto late = std::make_unique<Scripted>();
    late->on_start = [](NodeContext& ctx) { ctx.arm_timer_at(from_ms(5.5), 1); };
    late->timer = [](NodeContext& ctx, std::uint32_t) { ctx.switch_radio(RadioMode::Rx); };
    sim.add_node(std::move(late));
    sim.add_node(sender(from_ms(5.0), 1, 0));
    sim.connect_star();
    const auto r = sim.run_until(from_ms(20.0));
    CHECK(static_cast<Scripted*>(&sim.node(0))->received.empty());
    CHECK(r.channel.undeliverable == 1);
}

TEST_CASE("overlapping packets at a common listener both fail and count one collision")
{
    Simulator sim({});
    sim.add_node(listener(RadioMode::Rx));
    sim.add_node(sender(from_ms(5.0), 1, 0));
    sim.add_node(sender(from_ms(6.0), 2, 0));
    sim.connect_star();
    const auto r = sim.run_until(from_ms(20.0));
    CHECK(static_cast<Scripted*>(&sim.node(0))->received.empty());
    CHECK(r.channel.collisions == 1);
    CHECK(r.channel.corrupted == 2);
    CHECK(r.channel.delivered + r.channel.corrupted + r.channel.undeliverable == r.channel.transmissions);
}

TEST_CASE("back-to-back packets do not collide")
{
    Simulator sim({});
    sim.add_node(listener(RadioMode::Rx));
    // 2 ms airtime starting at 5 ms; the second starts after the first's last bit arrives.
    sim.add_node(sender(from_ms(5.0), 1, 0));
    sim.add_node(sender(from_ms(7.0) + from_us(1.0), 2, 0));
    sim.connect_star();
    const auto r = sim.run_until(from_ms(20.0));
    CHECK(r.channel.collisions == 0);
    CHECK(static_cast<Scripted*>(&sim.node(0))->received.size() == 2);
}

TEST_CASE("transmitting outside TX is a fault")
{
    Simulator sim({});
    auto n = std::make_unique<Scripted>();
    n->on_start = [](NodeContext& ctx) { ctx.transmit(data_from(0, 1, from_ms(1.0))); };
    sim.add_node(std::move(n));
    sim.add_node(std::make_unique<Scripted>());
    sim.connect(0, 1);
    CHECK_THROWS_AS(sim.run_until(from_ms(1.0)), SimulationFault);
}

TEST_CASE("radio switches take the configured delay and are billed as RX")
{
    EngineConfig cfg;
    Simulator sim(cfg);
    SimTime reached{};
    auto n = std::make_unique<Scripted>();
    n->on_start = [](NodeContext& ctx) { ctx.switch_radio(RadioMode::Rx); };
    n->radio = [&](NodeContext& ctx, RadioMode) { reached = ctx.now(); };
    sim.add_node(std::move(n));
    const auto r = sim.run_until(from_ms(10.0));
    CHECK(reached == cfg.phy.switch_delay);
    const auto& node = r.nodes.at(0);
    CHECK(node.residency[static_cast<std::size_t>(RadioMode::Switching)] == cfg.phy.switch_delay);
    CHECK(node.ledger.residency(energy::LedgerState::Rx) == from_ms(10.0));
}

TEST_CASE("asking for the current mode is answered without delay")
{
    Simulator sim({});
    int answers = 0;
    auto n = std::make_unique<Scripted>();
    n->on_start = [](NodeContext& ctx) { ctx.switch_radio(RadioMode::Sleep); };
    n->radio = [&](NodeContext& ctx, RadioMode m) {
        CHECK(m == RadioMode::Sleep);
        CHECK(ctx.now() == SimTime::zero());
        ++answers;
    };
    sim.add_node(std::move(n));
    sim.run_until(from_ms(1.0));
    CHECK(answers == 1);
}

TEST_CASE("radio residency adds up to the horizon exactly")
{
    Simulator sim({});
    sim.add_node(listener(RadioMode::Rx));
    sim.add_node(sender(from_ms(3.0), 1, 0));
    sim.add_node(sender(from_ms(3.5), 2, 0));
    sim.connect_star();
    const SimTime horizon = from_ms(1234.567);
    const auto r = sim.run_until(horizon);
    for (const auto& n : r.nodes)
    {
        SimTime sum{};
        for (auto t : n.residency)
            sum += t;
        CHECK(sum == horizon);
        CHECK(n.ledger.total_time() == horizon);
    }
}

TEST_CASE("a node stuck rescheduling at the same instant trips the livelock guard")
{
    EngineConfig cfg;
    cfg.max_events_without_advance = 1000;
    Simulator sim(cfg);
    auto n = std::make_unique<Scripted>();
    n->on_start = [](NodeContext& ctx) { ctx.arm_timer(SimTime::zero(), 1); };
    n->timer = [](NodeContext& ctx, std::uint32_t) { ctx.arm_timer(SimTime::zero(), 1); };
    sim.add_node(std::move(n));
    CHECK_THROWS_AS(sim.run_until(from_ms(1.0)), SimulationFault);
}

TEST_CASE("derived seeds are stable and distinct")
{
    CHECK(derive_seed(1, 0, 1) == derive_seed(1, 0, 1));
    CHECK(derive_seed(1, 0, 1) != derive_seed(1, 1, 1));
    CHECK(derive_seed(1, 0, 1) != derive_seed(1, 0, 2));
    CHECK(derive_seed(1, 0, 1) != derive_seed(2, 0, 1));
    std::mt19937_64 rng(derive_seed(42, 3, 1));
    for (int i = 0; i < 1000; ++i)
    {
        const double u = uniform01(rng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}
