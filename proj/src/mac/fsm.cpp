#include "tadsim/mac/fsm.hpp"

#include "tadsim/errors.hpp"

namespace tadsim::mac {

void TrafficDigest::add(SimTime t) noexcept
{
    ++count;
    auto v = static_cast<std::uint64_t>(t.count());
    for (int i = 0; i < 8; ++i)
    {
        hash ^= (v >> (8 * i)) & 0xffu;
        hash *= 0x100000001b3ULL;
    }
}

void MacNode::start_traffic(sim::NodeContext& ctx)
{
    if (traffic_)
        arm_next(ctx);
}

std::uint64_t MacNode::take_arrival(sim::NodeContext& ctx)
{
    digest_.add(ctx.now());
    const auto payload = next_payload_++;
    arm_next(ctx);
    return payload;
}

void MacNode::arm_next(sim::NodeContext& ctx)
{
    if (auto at = traffic_->next())
    {
        if (*at < ctx.now())
            throw SimulationFault("traffic arrival times must not decrease");
        ctx.arm_timer_at(*at, kTrafficTimerTag);
    }
}

bool PayloadQueue::push(std::uint64_t payload)
{
    if (capacity_ == 0)
        return true;
    bool dropped = false;
    if (items_.size() >= capacity_)
    {
        items_.pop_front();
        dropped = true;
    }
    items_.push_back(payload);
    return dropped;
}

std::uint64_t PayloadQueue::front() const
{
    if (items_.empty())
        throw SimulationFault("front() on an empty payload queue");
    return items_.front();
}

void PayloadQueue::pop()
{
    if (items_.empty())
        throw SimulationFault("pop() on an empty payload queue");
    items_.pop_front();
}

} // namespace tadsim::mac
