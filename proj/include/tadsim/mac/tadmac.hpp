#pragma once

#include "tadsim/adaptive/adaptation.hpp"
#include "tadsim/adaptive/tsr.hpp"
#include "tadsim/mac/fsm.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tadsim::mac {

struct TadConfig
{
    adaptive::AdaptParams adapt;
    unsigned tsr_length = 8;
    adaptive::TsrInit tsr_init = adaptive::TsrInit::Alternating;
    adaptive::ErrorPolicy error_policy;
    Millis initial_interval{100.0};
    SimTime cca_duration = from_ms(1.0);
    std::size_t queue_capacity = 16;
    unsigned max_retries = 3;

    void validate() const;
};

// 2 x (beacon airtime + propagation delay + data airtime).
SimTime data_wait_timeout(const sim::PhyParams& phy);
// 2 x (switch delay + ack airtime + 2 x propagation delay).
SimTime ack_wait_timeout(const sim::PhyParams& phy);

enum class ReceiverMode : std::uint8_t
{
    Sleep,
    Cca,
    SendWb,
    WaitData,
    SendAck,
};

enum class TransmitterMode : std::uint8_t
{
    Sleep,
    WaitWb,
    SendData,
    WaitAck,
};

std::string_view to_string(ReceiverMode m) noexcept;
std::string_view to_string(TransmitterMode m) noexcept;

enum TadTimer : std::uint32_t
{
    kWakeupTimer = 1,
    kCcaTimer,
    kTxDoneTimer,
    kDataWaitTimer,
    kAckWaitTimer,
};

// Per-neighbour wake-up bookkeeping held by the receiver.
class WakeupSchedule
{
  public:
    struct Entry
    {
        SimTime next_wake{};
        adaptive::IntervalState interval;
    };

    void add(NodeId id, SimTime first_wake, Millis initial_interval);

    // Entry with the earliest next_wake; ties go to the lowest node id.
    NodeId nearest() const;
    SimTime earliest() const { return entries_.at(nearest()).next_wake; }

    Entry& at(NodeId id) { return entries_.at(id); }
    const Entry& at(NodeId id) const { return entries_.at(id); }
    bool contains(NodeId id) const { return entries_.contains(id); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::map<NodeId, Entry>& entries() const noexcept { return entries_; }

  private:
    std::map<NodeId, Entry> entries_;
};

// One completed poll of a neighbour: the TSR outcome and the adaptation step
// it produced.
struct WakeupRecord
{
    std::uint64_t index = 0; // 1-based, per neighbour
    SimTime time{};          // when the outcome was known
    NodeId node = 0;
    bool data = false;
    std::uint64_t tsr_word = 0;
    double x1 = 0.0;
    double x2 = 0.0;
    double mu = 0.0;
    double e = 0.0;
    Millis i_wu{};
    bool deferred = false; // woke later than scheduled because the radio was busy
};

// Receive-node state machine: wake at the nearest per-neighbour wake-up
// time, beacon that neighbour, record data/no-data in its TSR and adapt its
// interval.
class TadReceiver
{
  public:
    TadReceiver(NodeId self, std::vector<NodeId> neighbors, TadConfig config, sim::PhyParams phy);

    Actions start(SimTime now);
    Actions on_timer(SimTime now, std::uint32_t tag, bool channel_busy);
    Actions on_packet(SimTime now, const sim::Packet& pkt);
    Actions on_radio(SimTime now, sim::RadioMode mode);
    Actions on_upper_data(SimTime now, std::uint64_t payload);

    // Protocol steps. Each throws SimulationFault when called in a mode its
    // edge does not start from.
    Actions on_wakeup(SimTime now);
    Actions on_cca_done(SimTime now, bool channel_busy);
    Actions on_tx_done(SimTime now);
    Actions on_data_received(SimTime now, const sim::Packet& pkt);
    Actions on_data_timeout(SimTime now);

    ReceiverMode mode() const noexcept { return mode_; }
    std::optional<NodeId> target() const noexcept { return target_; }
    const WakeupSchedule& schedule() const noexcept { return schedule_; }
    const adaptive::TsrBank& bank() const noexcept { return bank_; }
    const std::vector<WakeupRecord>& records() const noexcept { return records_; }
    const TadConfig& config() const noexcept { return config_; }
    // Wake-up instant armed when the receiver last went to sleep.
    std::optional<SimTime> armed_wakeup() const noexcept { return armed_wakeup_; }

    std::string role() const { return "coordinator"; }
    MacCounters counters() const;

  private:
    void record_outcome(SimTime now, bool data);
    Actions sleep_or_wake(SimTime now);

    NodeId self_;
    TadConfig config_;
    sim::PhyParams phy_;
    SimTime data_timeout_;
    ReceiverMode mode_ = ReceiverMode::Sleep;
    WakeupSchedule schedule_;
    adaptive::TsrBank bank_;
    std::map<NodeId, std::uint64_t> polls_;
    std::vector<WakeupRecord> records_;
    std::optional<NodeId> target_;
    std::optional<SimTime> armed_wakeup_;
    bool deferred_ = false;
    std::uint64_t ack_payload_ = 0;

    std::uint64_t wakeups_ = 0;
    std::uint64_t tsr_pushes_ = 0;
    std::uint64_t anomalies_ = 0;
    std::uint64_t busy_cca_ = 0;
    std::uint64_t data_received_ = 0;
    std::uint64_t timeouts_ = 0;
    std::uint64_t deferred_wakeups_ = 0;
};

// Transmit-node state machine: on upper-layer data, listen until a beacon
// names this node, send the head of the queue, wait for the acknowledgment.
class TadTransmitter
{
  public:
    TadTransmitter(NodeId self, NodeId coordinator, TadConfig config, sim::PhyParams phy);

    Actions start(SimTime now);
    Actions on_timer(SimTime now, std::uint32_t tag, bool channel_busy);
    Actions on_packet(SimTime now, const sim::Packet& pkt);
    Actions on_radio(SimTime now, sim::RadioMode mode);

    Actions on_upper_data(SimTime now, std::uint64_t payload);
    Actions on_beacon(SimTime now, const sim::Packet& pkt);
    Actions on_ack(SimTime now, const sim::Packet& pkt);
    Actions on_ack_timeout(SimTime now);

    TransmitterMode mode() const noexcept { return mode_; }
    const PayloadQueue& pending() const noexcept { return pending_; }
    std::uint64_t drops() const noexcept { return drops_; }
    unsigned retries() const noexcept { return retries_; }

    std::string role() const { return "transmitter"; }
    MacCounters counters() const;

  private:
    Actions finish_payload();

    NodeId self_;
    NodeId coordinator_;
    TadConfig config_;
    sim::PhyParams phy_;
    TransmitterMode mode_ = TransmitterMode::Sleep;
    PayloadQueue pending_;
    unsigned retries_ = 0;

    std::uint64_t drops_ = 0;
    std::uint64_t overflow_drops_ = 0;
    std::uint64_t retry_drops_ = 0;
    std::uint64_t beacons_heard_ = 0;
    std::uint64_t beacons_for_me_ = 0;
    std::uint64_t data_sent_ = 0;
    std::uint64_t acked_ = 0;
    std::uint64_t ack_timeouts_ = 0;
};

using TadReceiverNode = FsmNode<TadReceiver>;
using TadTransmitterNode = FsmNode<TadTransmitter>;

} // namespace tadsim::mac
