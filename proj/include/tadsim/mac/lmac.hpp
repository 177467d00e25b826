#pragma once

#include "tadsim/mac/fsm.hpp"

namespace tadsim::mac {

struct LmacConfig
{
    unsigned frame_slots = 32;
    SimTime slot_duration = from_ms(30.0);
    // How long a node listens for a header at the start of a foreign slot.
    SimTime header_listen = from_ms(15.0);
    std::size_t queue_capacity = 16;

    void validate() const;
};

enum class LmacMode : std::uint8_t
{
    Sleep,
    ListenSlotHeader,
    SendInSlot,
    ReceiveInSlot,
};

std::string_view to_string(LmacMode m) noexcept;

enum LmacTimer : std::uint32_t
{
    kLmacSlotTimer = 1,
    kLmacHeaderTimer,
    kLmacTxDoneTimer,
    kLmacSlotEndTimer,
};

// Simplified L-MAC: fixed TDMA frame, one owned slot per node. The owner
// sends a header in its slot (naming the receiver when it has data) followed
// by as many queued frames as fit; every other node listens to each slot's
// header and sleeps through slots not addressed to it.
class LmacMac
{
  public:
    LmacMac(NodeId self, NodeId sink, unsigned own_slot, LmacConfig config, sim::PhyParams phy);

    Actions start(SimTime now);
    Actions on_timer(SimTime now, std::uint32_t tag, bool channel_busy);
    Actions on_packet(SimTime now, const sim::Packet& pkt);
    Actions on_radio(SimTime now, sim::RadioMode mode);
    Actions on_upper_data(SimTime now, std::uint64_t payload);

    LmacMode mode() const noexcept { return mode_; }
    unsigned own_slot() const noexcept { return own_slot_; }
    unsigned current_slot() const noexcept { return current_slot_; }
    const PayloadQueue& pending() const noexcept { return pending_; }

    std::string role() const { return self_ == sink_ ? "coordinator" : "transmitter"; }
    MacCounters counters() const;

  private:
    Actions send_next_or_sleep(SimTime now);
    Actions sleep();

    NodeId self_;
    NodeId sink_;
    unsigned own_slot_;
    LmacConfig config_;
    sim::PhyParams phy_;
    LmacMode mode_ = LmacMode::Sleep;
    PayloadQueue pending_;
    std::uint64_t slot_counter_ = 0;
    unsigned current_slot_ = 0;
    SimTime slot_start_{};
    bool header_sent_ = false;
    bool sending_data_ = false;

    std::uint64_t headers_sent_ = 0;
    std::uint64_t headers_heard_ = 0;
    std::uint64_t data_sent_ = 0;
    std::uint64_t data_received_ = 0;
    std::uint64_t drops_ = 0;
};

using LmacNode = FsmNode<LmacMac>;

} // namespace tadsim::mac
