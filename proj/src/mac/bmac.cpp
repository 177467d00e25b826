#include "tadsim/mac/bmac.hpp"

#include "tadsim/errors.hpp"
#include "tadsim/mac/tadmac.hpp"

namespace tadsim::mac {

using sim::PacketKind;
using sim::RadioMode;

void BmacConfig::validate() const
{
    if (check_interval <= SimTime::zero())
        throw ConfigError("B-MAC check interval must be positive");
    if (preamble_length < check_interval)
        throw ConfigError("B-MAC preamble must be at least one check interval long");
    if (sample_duration <= SimTime::zero() || sample_duration >= check_interval)
        throw ConfigError("B-MAC sample duration must be positive and shorter than the check interval");
    if (max_backoff < SimTime::zero())
        throw ConfigError("B-MAC backoff must not be negative");
    if (queue_capacity == 0 || max_retries == 0)
        throw ConfigError("B-MAC queue capacity and retry limit must be positive");
}

std::string_view to_string(BmacMode m) noexcept
{
    switch (m)
    {
    case BmacMode::Sleep: return "SLEEP";
    case BmacMode::ChannelSample: return "CHANNEL_SAMPLE";
    case BmacMode::SendPreamble: return "SEND_PREAMBLE";
    case BmacMode::SendData: return "SEND_DATA";
    case BmacMode::Receive: return "RECEIVE";
    case BmacMode::WaitAck: return "WAIT_ACK";
    case BmacMode::SendAck: return "SEND_ACK";
    }
    return "?";
}

BmacMac::BmacMac(NodeId self, NodeId sink, BmacConfig config, sim::PhyParams phy, std::uint64_t seed)
    : self_(self), sink_(sink), config_(config), phy_(phy), rng_(seed), pending_(config.queue_capacity)
{
    config_.validate();
}

SimTime BmacMac::random_delay(SimTime max)
{
    return SimTime{static_cast<SimTime::rep>(sim::uniform01(rng_) * static_cast<double>(max.count()))};
}

Actions BmacMac::start(SimTime)
{
    return {StartTimer{kBmacSampleTimer, random_delay(config_.check_interval)}};
}

Actions BmacMac::on_timer(SimTime, std::uint32_t tag, bool channel_busy)
{
    switch (tag)
    {
    case kBmacSampleTimer: {
        Actions out{StartTimer{kBmacSampleTimer, config_.check_interval}};
        if (mode_ == BmacMode::Sleep)
        {
            ++samples_;
            mode_ = BmacMode::ChannelSample;
            sampling_for_send_ = false;
            out.push_back(SwitchRadio{RadioMode::Rx});
        }
        return out;
    }
    case kBmacSampleDoneTimer:
        if (mode_ != BmacMode::ChannelSample)
            throw SimulationFault("B-MAC sample completed in " + std::string(to_string(mode_)));
        if (sampling_for_send_)
        {
            if (channel_busy)
            {
                ++busy_cca_;
                return backoff();
            }
            mode_ = BmacMode::SendPreamble;
            return {SwitchRadio{RadioMode::Tx}};
        }
        if (channel_busy)
        {
            ++wakes_on_activity_;
            mode_ = BmacMode::Receive;
            return {StartTimer{kBmacReceiveTimer, config_.sample_duration}};
        }
        return go_idle();
    case kBmacTxDoneTimer:
        if (mode_ == BmacMode::SendPreamble)
        {
            mode_ = BmacMode::SendData;
            sim::Packet data{PacketKind::Data, self_, sink_, sink_, phy_.airtime(PacketKind::Data), pending_.front()};
            ++data_sent_;
            return {Send{data}, StartTimer{kBmacTxDoneTimer, data.airtime}};
        }
        if (mode_ == BmacMode::SendData)
        {
            mode_ = BmacMode::WaitAck;
            return {SwitchRadio{RadioMode::Rx}, StartTimer{kBmacAckTimer, ack_wait_timeout(phy_)}};
        }
        if (mode_ == BmacMode::SendAck)
            return go_idle();
        throw SimulationFault("B-MAC transmit-complete in " + std::string(to_string(mode_)));
    case kBmacReceiveTimer:
        if (mode_ != BmacMode::Receive)
            return {};
        // Stay awake while anything is on the air; give up once it goes quiet.
        if (channel_busy)
            return {StartTimer{kBmacReceiveTimer, config_.sample_duration}};
        return go_idle();
    case kBmacAckTimer:
        if (mode_ != BmacMode::WaitAck)
            throw SimulationFault("B-MAC ACK timeout in " + std::string(to_string(mode_)));
        ++ack_timeouts_;
        if (++retries_ >= config_.max_retries)
        {
            pending_.pop();
            ++drops_;
            retries_ = 0;
        }
        if (pending_.empty())
            return go_idle();
        return backoff();
    case kBmacBackoffTimer:
        backoff_pending_ = false;
        if (mode_ == BmacMode::Sleep && !pending_.empty())
            return begin_send();
        return {};
    default:
        throw SimulationFault("B-MAC got unknown timer " + std::to_string(tag));
    }
}

Actions BmacMac::on_packet(SimTime, const sim::Packet& pkt)
{
    if (pkt.kind == PacketKind::Data && pkt.destination == self_ && mode_ == BmacMode::Receive)
    {
        ++data_received_;
        ack_to_ = pkt.source;
        ack_payload_ = pkt.payload_id;
        mode_ = BmacMode::SendAck;
        return {CancelTimer{kBmacReceiveTimer}, SwitchRadio{RadioMode::Tx}};
    }
    if (pkt.kind == PacketKind::Ack && pkt.destination == self_ && mode_ == BmacMode::WaitAck &&
        pkt.payload_id == pending_.front())
    {
        ++acked_;
        pending_.pop();
        retries_ = 0;
        Actions out{CancelTimer{kBmacAckTimer}};
        for (auto& a : go_idle())
            out.push_back(std::move(a));
        return out;
    }
    return {};
}

Actions BmacMac::on_radio(SimTime, RadioMode radio)
{
    if (mode_ == BmacMode::ChannelSample && radio == RadioMode::Rx)
        return {StartTimer{kBmacSampleDoneTimer, config_.sample_duration}};
    if (mode_ == BmacMode::SendPreamble && radio == RadioMode::Tx)
    {
        ++preambles_;
        sim::Packet preamble{PacketKind::Preamble, self_, sink_, sink_, config_.preamble_length, pending_.front()};
        return {Send{preamble}, StartTimer{kBmacTxDoneTimer, preamble.airtime}};
    }
    if (mode_ == BmacMode::SendAck && radio == RadioMode::Tx)
    {
        sim::Packet ack{PacketKind::Ack, self_, ack_to_, ack_to_, phy_.airtime(PacketKind::Ack), ack_payload_};
        return {Send{ack}, StartTimer{kBmacTxDoneTimer, ack.airtime}};
    }
    return {};
}

Actions BmacMac::on_upper_data(SimTime, std::uint64_t payload)
{
    if (pending_.push(payload))
        ++drops_;
    if (mode_ == BmacMode::Sleep && !backoff_pending_)
        return begin_send();
    return {};
}

Actions BmacMac::begin_send()
{
    mode_ = BmacMode::ChannelSample;
    sampling_for_send_ = true;
    return {SwitchRadio{RadioMode::Rx}};
}

Actions BmacMac::go_idle()
{
    if (!pending_.empty() && !backoff_pending_)
        return begin_send();
    mode_ = BmacMode::Sleep;
    return {SwitchRadio{RadioMode::Sleep}};
}

Actions BmacMac::backoff()
{
    mode_ = BmacMode::Sleep;
    backoff_pending_ = true;
    return {SwitchRadio{RadioMode::Sleep}, StartTimer{kBmacBackoffTimer, random_delay(config_.max_backoff)}};
}

MacCounters BmacMac::counters() const
{
    return MacCounters{{
        {"samples", samples_},
        {"wakes_on_activity", wakes_on_activity_},
        {"preambles", preambles_},
        {"data_sent", data_sent_},
        {"data_received", data_received_},
        {"acked", acked_},
        {"ack_timeouts", ack_timeouts_},
        {"drops", drops_},
        {"busy_cca", busy_cca_},
        {"queued", pending_.size()},
    }};
}

} // namespace tadsim::mac
