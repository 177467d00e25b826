#include "tadsim/mac/tadmac.hpp"

#include "tadsim/errors.hpp"

#include <algorithm>

namespace tadsim::mac {

using adaptive::Half;
using sim::PacketKind;
using sim::RadioMode;

void TadConfig::validate() const
{
    adapt.validate();
    if (tsr_length < 4 || tsr_length > 32 || tsr_length % 2 != 0)
        throw ConfigError("tsr_length must be an even number in [4, 32]");
    if (!(initial_interval >= adapt.i_min && initial_interval <= adapt.i_max))
        throw ConfigError("initial interval must lie in [i_min, i_max]");
    if (cca_duration <= SimTime::zero())
        throw ConfigError("CCA duration must be positive");
    if (queue_capacity == 0)
        throw ConfigError("queue capacity must be positive");
    if (max_retries == 0)
        throw ConfigError("max_retries must be positive");
}

SimTime data_wait_timeout(const sim::PhyParams& phy)
{
    return 2 * (phy.airtime(PacketKind::WakeupBeacon) + phy.propagation_delay + phy.airtime(PacketKind::Data));
}

SimTime ack_wait_timeout(const sim::PhyParams& phy)
{
    return 2 * (phy.switch_delay + phy.airtime(PacketKind::Ack) + 2 * phy.propagation_delay);
}

std::string_view to_string(ReceiverMode m) noexcept
{
    switch (m)
    {
    case ReceiverMode::Sleep: return "SLEEP";
    case ReceiverMode::Cca: return "CCA";
    case ReceiverMode::SendWb: return "SEND_WB";
    case ReceiverMode::WaitData: return "WAIT_DATA";
    case ReceiverMode::SendAck: return "SEND_ACK";
    }
    return "?";
}

std::string_view to_string(TransmitterMode m) noexcept
{
    switch (m)
    {
    case TransmitterMode::Sleep: return "SLEEP";
    case TransmitterMode::WaitWb: return "WAIT_WB";
    case TransmitterMode::SendData: return "SEND_DATA";
    case TransmitterMode::WaitAck: return "WAIT_ACK";
    }
    return "?";
}

// WakeupSchedule

void WakeupSchedule::add(NodeId id, SimTime first_wake, Millis initial_interval)
{
    entries_.insert_or_assign(id, Entry{first_wake, adaptive::IntervalState::starting_at(initial_interval)});
}

NodeId WakeupSchedule::nearest() const
{
    if (entries_.empty())
        throw SimulationFault("wake-up schedule is empty");
    // std::map iterates in ascending id order, so strict < keeps the lowest id on ties.
    auto best = entries_.begin();
    for (auto it = std::next(best); it != entries_.end(); ++it)
        if (it->second.next_wake < best->second.next_wake)
            best = it;
    return best->first;
}

// TadReceiver

TadReceiver::TadReceiver(NodeId self, std::vector<NodeId> neighbors, TadConfig config, sim::PhyParams phy)
    : self_(self),
      config_(std::move(config)),
      phy_(phy),
      data_timeout_(data_wait_timeout(phy_)),
      bank_(config_.tsr_length, config_.tsr_init)
{
    config_.validate();
    if (neighbors.empty())
        throw ConfigError("receiver needs at least one neighbour");
    for (NodeId n : neighbors)
    {
        bank_.add_neighbor(n);
        schedule_.add(n, to_sim_time(config_.initial_interval), config_.initial_interval);
        polls_[n] = 0;
    }
}

Actions TadReceiver::start(SimTime now)
{
    return sleep_or_wake(now);
}

Actions TadReceiver::on_timer(SimTime now, std::uint32_t tag, bool channel_busy)
{
    switch (tag)
    {
    case kWakeupTimer: return on_wakeup(now);
    case kCcaTimer: return on_cca_done(now, channel_busy);
    case kTxDoneTimer: return on_tx_done(now);
    case kDataWaitTimer: return on_data_timeout(now);
    default: throw SimulationFault("receiver got unknown timer " + std::to_string(tag));
    }
}

Actions TadReceiver::on_packet(SimTime now, const sim::Packet& pkt)
{
    if (pkt.kind == PacketKind::Data && pkt.destination == self_)
        return on_data_received(now, pkt);
    return {};
}

Actions TadReceiver::on_radio(SimTime, RadioMode radio)
{
    if (mode_ == ReceiverMode::Cca && radio == RadioMode::Rx)
        return {StartTimer{kCcaTimer, config_.cca_duration}};
    if (mode_ == ReceiverMode::SendWb && radio == RadioMode::Tx)
    {
        sim::Packet wb{PacketKind::WakeupBeacon, self_, sim::kBroadcast, *target_, phy_.airtime(PacketKind::WakeupBeacon)};
        return {Send{wb}, StartTimer{kTxDoneTimer, wb.airtime}};
    }
    if (mode_ == ReceiverMode::SendAck && radio == RadioMode::Tx)
    {
        sim::Packet ack{PacketKind::Ack, self_, *target_, *target_, phy_.airtime(PacketKind::Ack), ack_payload_};
        return {Send{ack}, StartTimer{kTxDoneTimer, ack.airtime}};
    }
    return {};
}

Actions TadReceiver::on_upper_data(SimTime, std::uint64_t)
{
    return {};
}

Actions TadReceiver::on_wakeup(SimTime now)
{
    if (mode_ != ReceiverMode::Sleep)
        throw SimulationFault("receiver woke up while in " + std::string(to_string(mode_)));
    const NodeId chosen = schedule_.nearest();
    const SimTime due = schedule_.at(chosen).next_wake;
    if (now < due)
        throw SimulationFault("receiver woke up before its earliest scheduled wake-up");
    deferred_ = now > due;
    if (deferred_)
        ++deferred_wakeups_;
    target_ = chosen;
    armed_wakeup_.reset();
    ++wakeups_;
    mode_ = ReceiverMode::Cca;
    return {SwitchRadio{RadioMode::Rx}};
}

Actions TadReceiver::on_cca_done(SimTime, bool channel_busy)
{
    if (mode_ != ReceiverMode::Cca)
        throw SimulationFault("CCA completed outside the CCA state");
    if (channel_busy)
    {
        ++busy_cca_;
        return {StartTimer{kCcaTimer, config_.cca_duration}};
    }
    mode_ = ReceiverMode::SendWb;
    return {SwitchRadio{RadioMode::Tx}};
}

Actions TadReceiver::on_tx_done(SimTime now)
{
    switch (mode_)
    {
    case ReceiverMode::SendWb:
        mode_ = ReceiverMode::WaitData;
        return {SwitchRadio{RadioMode::Rx}, StartTimer{kDataWaitTimer, data_timeout_}};
    case ReceiverMode::SendAck:
        return sleep_or_wake(now);
    default:
        throw SimulationFault("receiver transmit-complete in " + std::string(to_string(mode_)));
    }
}

Actions TadReceiver::on_data_received(SimTime now, const sim::Packet& pkt)
{
    if (mode_ != ReceiverMode::WaitData || !target_ || pkt.source != *target_)
    {
        ++anomalies_;
        return {};
    }
    ++data_received_;
    record_outcome(now, true);
    ack_payload_ = pkt.payload_id;
    mode_ = ReceiverMode::SendAck;
    return {CancelTimer{kDataWaitTimer}, SwitchRadio{RadioMode::Tx}};
}

Actions TadReceiver::on_data_timeout(SimTime now)
{
    if (mode_ != ReceiverMode::WaitData)
        throw SimulationFault("data-wait timeout in " + std::string(to_string(mode_)));
    ++timeouts_;
    record_outcome(now, false);
    return sleep_or_wake(now);
}

void TadReceiver::record_outcome(SimTime now, bool data)
{
    const NodeId id = *target_;
    auto& reg = bank_.at(id);
    reg.push(data);
    ++tsr_pushes_;

    const double x1 = adaptive::weighted_value(adaptive::half_stats(reg, Half::First), reg.length());
    const double x2 = adaptive::weighted_value(adaptive::half_stats(reg, Half::Second), reg.length());
    const double mu = adaptive::update_factor(x1, x2, config_.adapt.alpha);
    const double e = adaptive::error_term(reg, config_.error_policy);

    auto& entry = schedule_.at(id);
    entry.interval = adaptive::next_interval(std::move(entry.interval), mu, e, config_.adapt);
    entry.next_wake = now + to_sim_time(entry.interval.i_wu);

    records_.push_back(WakeupRecord{++polls_[id], now, id, data, reg.word(), x1, x2, mu, e, entry.interval.i_wu, deferred_});
}

Actions TadReceiver::sleep_or_wake(SimTime now)
{
    mode_ = ReceiverMode::Sleep;
    target_.reset();
    const SimTime next = schedule_.earliest();
    if (next <= now)
        return on_wakeup(now); // missed while busy: fire right away
    armed_wakeup_ = next;
    return {SwitchRadio{RadioMode::Sleep}, StartTimerAt{kWakeupTimer, next}};
}

MacCounters TadReceiver::counters() const
{
    return MacCounters{{
        {"wakeups", wakeups_},
        {"tsr_pushes", tsr_pushes_},
        {"anomalies", anomalies_},
        {"busy_cca", busy_cca_},
        {"data_received", data_received_},
        {"data_timeouts", timeouts_},
        {"deferred_wakeups", deferred_wakeups_},
    }};
}

// TadTransmitter

TadTransmitter::TadTransmitter(NodeId self, NodeId coordinator, TadConfig config, sim::PhyParams phy)
    : self_(self), coordinator_(coordinator), config_(std::move(config)), phy_(phy), pending_(config_.queue_capacity)
{
    config_.validate();
}

Actions TadTransmitter::start(SimTime)
{
    return {};
}

Actions TadTransmitter::on_timer(SimTime now, std::uint32_t tag, bool)
{
    switch (tag)
    {
    case kTxDoneTimer:
        if (mode_ != TransmitterMode::SendData)
            throw SimulationFault("transmitter transmit-complete in " + std::string(to_string(mode_)));
        mode_ = TransmitterMode::WaitAck;
        return {SwitchRadio{RadioMode::Rx}, StartTimer{kAckWaitTimer, ack_wait_timeout(phy_)}};
    case kAckWaitTimer:
        return on_ack_timeout(now);
    default:
        throw SimulationFault("transmitter got unknown timer " + std::to_string(tag));
    }
}

Actions TadTransmitter::on_packet(SimTime now, const sim::Packet& pkt)
{
    switch (pkt.kind)
    {
    case PacketKind::WakeupBeacon: return on_beacon(now, pkt);
    case PacketKind::Ack: return on_ack(now, pkt);
    default: return {};
    }
}

Actions TadTransmitter::on_radio(SimTime, RadioMode radio)
{
    if (mode_ == TransmitterMode::SendData && radio == RadioMode::Tx)
    {
        sim::Packet data{PacketKind::Data, self_, coordinator_, coordinator_, phy_.airtime(PacketKind::Data),
                         pending_.front()};
        ++data_sent_;
        return {Send{data}, StartTimer{kTxDoneTimer, data.airtime}};
    }
    return {};
}

Actions TadTransmitter::on_upper_data(SimTime, std::uint64_t payload)
{
    if (pending_.push(payload))
    {
        ++drops_;
        ++overflow_drops_;
    }
    if (mode_ == TransmitterMode::Sleep)
    {
        mode_ = TransmitterMode::WaitWb;
        return {SwitchRadio{RadioMode::Rx}};
    }
    return {};
}

Actions TadTransmitter::on_beacon(SimTime, const sim::Packet& pkt)
{
    if (mode_ != TransmitterMode::WaitWb || pkt.kind != PacketKind::WakeupBeacon)
        return {};
    ++beacons_heard_;
    if (pkt.target != self_)
        return {};
    ++beacons_for_me_;
    mode_ = TransmitterMode::SendData;
    return {SwitchRadio{RadioMode::Tx}};
}

Actions TadTransmitter::on_ack(SimTime, const sim::Packet& pkt)
{
    if (mode_ != TransmitterMode::WaitAck || pkt.kind != PacketKind::Ack || pkt.destination != self_ ||
        pkt.payload_id != pending_.front())
        return {};
    ++acked_;
    pending_.pop();
    retries_ = 0;
    Actions out{CancelTimer{kAckWaitTimer}};
    for (auto& a : finish_payload())
        out.push_back(std::move(a));
    return out;
}

Actions TadTransmitter::on_ack_timeout(SimTime)
{
    if (mode_ != TransmitterMode::WaitAck)
        throw SimulationFault("ACK timeout in " + std::string(to_string(mode_)));
    ++ack_timeouts_;
    if (++retries_ >= config_.max_retries)
    {
        pending_.pop();
        ++drops_;
        ++retry_drops_;
        retries_ = 0;
    }
    return finish_payload();
}

Actions TadTransmitter::finish_payload()
{
    if (!pending_.empty())
    {
        mode_ = TransmitterMode::WaitWb;
        return {};
    }
    mode_ = TransmitterMode::Sleep;
    return {SwitchRadio{RadioMode::Sleep}};
}

MacCounters TadTransmitter::counters() const
{
    return MacCounters{{
        {"drops", drops_},
        {"overflow_drops", overflow_drops_},
        {"retry_drops", retry_drops_},
        {"beacons_heard", beacons_heard_},
        {"beacons_for_me", beacons_for_me_},
        {"data_sent", data_sent_},
        {"acked", acked_},
        {"ack_timeouts", ack_timeouts_},
        {"queued", pending_.size()},
    }};
}

} // namespace tadsim::mac
