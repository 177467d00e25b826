#pragma once

#include "tadsim/mac/fsm.hpp"

#include <random>

namespace tadsim::mac {

struct BmacConfig
{
    // Long LPL cycle. With four busy hidden senders nodes end up
    // transmitting ~80% of the time and almost never sleep.
    SimTime check_interval = from_ms(500.0);
    SimTime preamble_length = from_ms(510.0);
    SimTime sample_duration = from_ms(10.0);
    SimTime max_backoff = from_ms(10.0);
    std::size_t queue_capacity = 16;
    unsigned max_retries = 3;

    // Throws ConfigError; enforces preamble_length >= check_interval.
    void validate() const;
};

enum class BmacMode : std::uint8_t
{
    Sleep,
    ChannelSample,
    SendPreamble,
    SendData,
    Receive,
    WaitAck,
    SendAck,
};

std::string_view to_string(BmacMode m) noexcept;

enum BmacTimer : std::uint32_t
{
    kBmacSampleTimer = 1,
    kBmacSampleDoneTimer,
    kBmacTxDoneTimer,
    kBmacReceiveTimer,
    kBmacAckTimer,
    kBmacBackoffTimer,
};

// Simplified B-MAC low-power listening. Every node samples the channel every
// check interval; a sender precedes each data frame with a preamble at least
// one check interval long, then waits for an acknowledgment.
class BmacMac
{
  public:
    BmacMac(NodeId self, NodeId sink, BmacConfig config, sim::PhyParams phy, std::uint64_t seed);

    Actions start(SimTime now);
    Actions on_timer(SimTime now, std::uint32_t tag, bool channel_busy);
    Actions on_packet(SimTime now, const sim::Packet& pkt);
    Actions on_radio(SimTime now, sim::RadioMode mode);
    Actions on_upper_data(SimTime now, std::uint64_t payload);

    BmacMode mode() const noexcept { return mode_; }
    const PayloadQueue& pending() const noexcept { return pending_; }
    const BmacConfig& config() const noexcept { return config_; }

    std::string role() const { return self_ == sink_ ? "coordinator" : "transmitter"; }
    MacCounters counters() const;

  private:
    Actions begin_send();
    Actions go_idle();
    Actions backoff();
    SimTime random_delay(SimTime max);

    NodeId self_;
    NodeId sink_;
    BmacConfig config_;
    sim::PhyParams phy_;
    std::mt19937_64 rng_;
    BmacMode mode_ = BmacMode::Sleep;
    PayloadQueue pending_;
    bool sampling_for_send_ = false;
    bool backoff_pending_ = false;
    unsigned retries_ = 0;
    NodeId ack_to_ = 0;
    std::uint64_t ack_payload_ = 0;

    std::uint64_t samples_ = 0;
    std::uint64_t wakes_on_activity_ = 0;
    std::uint64_t preambles_ = 0;
    std::uint64_t data_sent_ = 0;
    std::uint64_t data_received_ = 0;
    std::uint64_t acked_ = 0;
    std::uint64_t ack_timeouts_ = 0;
    std::uint64_t drops_ = 0;
    std::uint64_t busy_cca_ = 0;
};

using BmacNode = FsmNode<BmacMac>;

} // namespace tadsim::mac
