#include "tadsim/mac/lmac.hpp"

#include "tadsim/errors.hpp"

#include <algorithm>

namespace tadsim::mac {

using sim::PacketKind;
using sim::RadioMode;

void LmacConfig::validate() const
{
    if (frame_slots == 0)
        throw ConfigError("L-MAC frame needs at least one slot");
    if (slot_duration <= SimTime::zero())
        throw ConfigError("L-MAC slot duration must be positive");
    if (header_listen <= SimTime::zero() || header_listen >= slot_duration)
        throw ConfigError("L-MAC header listen window must be positive and shorter than a slot");
    if (queue_capacity == 0)
        throw ConfigError("L-MAC queue capacity must be positive");
}

std::string_view to_string(LmacMode m) noexcept
{
    switch (m)
    {
    case LmacMode::Sleep: return "SLEEP";
    case LmacMode::ListenSlotHeader: return "LISTEN_SLOT_HEADER";
    case LmacMode::SendInSlot: return "SEND_IN_SLOT";
    case LmacMode::ReceiveInSlot: return "RECEIVE_IN_SLOT";
    }
    return "?";
}

LmacMac::LmacMac(NodeId self, NodeId sink, unsigned own_slot, LmacConfig config, sim::PhyParams phy)
    : self_(self), sink_(sink), own_slot_(own_slot), config_(config), phy_(phy), pending_(config.queue_capacity)
{
    config_.validate();
    if (own_slot_ >= config_.frame_slots)
        throw ConfigError("L-MAC slot index " + std::to_string(own_slot_) + " outside the frame");
}

Actions LmacMac::start(SimTime now)
{
    return {StartTimerAt{kLmacSlotTimer, now}};
}

Actions LmacMac::on_timer(SimTime now, std::uint32_t tag, bool)
{
    switch (tag)
    {
    case kLmacSlotTimer: {
        current_slot_ = static_cast<unsigned>(slot_counter_ % config_.frame_slots);
        ++slot_counter_;
        slot_start_ = now;
        header_sent_ = false;
        sending_data_ = false;
        Actions out{StartTimer{kLmacSlotTimer, config_.slot_duration}, CancelTimer{kLmacHeaderTimer},
                    CancelTimer{kLmacSlotEndTimer}, CancelTimer{kLmacTxDoneTimer}};
        if (current_slot_ == own_slot_)
        {
            mode_ = LmacMode::SendInSlot;
            out.push_back(SwitchRadio{RadioMode::Tx});
        }
        else
        {
            mode_ = LmacMode::ListenSlotHeader;
            out.push_back(SwitchRadio{RadioMode::Rx});
        }
        return out;
    }
    case kLmacHeaderTimer:
        if (mode_ == LmacMode::ListenSlotHeader)
            return sleep();
        return {};
    case kLmacSlotEndTimer:
        if (mode_ == LmacMode::ReceiveInSlot)
            return sleep();
        return {};
    case kLmacTxDoneTimer:
        if (mode_ != LmacMode::SendInSlot)
            throw SimulationFault("L-MAC transmit-complete outside its own slot");
        if (sending_data_)
        {
            pending_.pop();
            sending_data_ = false;
        }
        return send_next_or_sleep(now);
    default:
        throw SimulationFault("L-MAC got unknown timer " + std::to_string(tag));
    }
}

Actions LmacMac::send_next_or_sleep(SimTime now)
{
    const SimTime data_air = phy_.airtime(PacketKind::Data);
    const SimTime slot_end = slot_start_ + config_.slot_duration - phy_.switch_delay;
    if (!pending_.empty() && now + data_air + phy_.propagation_delay <= slot_end)
    {
        sending_data_ = true;
        ++data_sent_;
        sim::Packet data{PacketKind::Data, self_, sink_, sink_, data_air, pending_.front()};
        return {Send{data}, StartTimer{kLmacTxDoneTimer, data_air}};
    }
    return sleep();
}

Actions LmacMac::on_packet(SimTime now, const sim::Packet& pkt)
{
    if (pkt.kind == PacketKind::SlotHeader && mode_ == LmacMode::ListenSlotHeader)
    {
        ++headers_heard_;
        if (pkt.target == self_)
        {
            mode_ = LmacMode::ReceiveInSlot;
            const SimTime slot_end = slot_start_ + config_.slot_duration - phy_.switch_delay;
            return {CancelTimer{kLmacHeaderTimer}, StartTimerAt{kLmacSlotEndTimer, std::max(now, slot_end)}};
        }
        Actions out{CancelTimer{kLmacHeaderTimer}};
        for (auto& a : sleep())
            out.push_back(std::move(a));
        return out;
    }
    if (pkt.kind == PacketKind::Data && pkt.destination == self_ && mode_ == LmacMode::ReceiveInSlot)
        ++data_received_;
    return {};
}

Actions LmacMac::on_radio(SimTime, RadioMode radio)
{
    if (mode_ == LmacMode::ListenSlotHeader && radio == RadioMode::Rx)
        return {StartTimer{kLmacHeaderTimer, config_.header_listen}};
    if (mode_ == LmacMode::SendInSlot && radio == RadioMode::Tx && !header_sent_)
    {
        header_sent_ = true;
        ++headers_sent_;
        const NodeId announced = pending_.empty() ? sim::kBroadcast : sink_;
        sim::Packet header{PacketKind::SlotHeader, self_, sim::kBroadcast, announced,
                           phy_.airtime(PacketKind::SlotHeader)};
        return {Send{header}, StartTimer{kLmacTxDoneTimer, header.airtime}};
    }
    return {};
}

Actions LmacMac::on_upper_data(SimTime, std::uint64_t payload)
{
    if (pending_.push(payload))
        ++drops_;
    return {};
}

Actions LmacMac::sleep()
{
    mode_ = LmacMode::Sleep;
    return {SwitchRadio{RadioMode::Sleep}};
}

MacCounters LmacMac::counters() const
{
    return MacCounters{{
        {"headers_sent", headers_sent_},
        {"headers_heard", headers_heard_},
        {"data_sent", data_sent_},
        {"data_received", data_received_},
        {"drops", drops_},
        {"queued", pending_.size()},
    }};
}

} // namespace tadsim::mac
