#pragma once

#include "tadsim/time.hpp"

#include <cstdint>
#include <limits>
#include <string_view>

namespace tadsim::sim {

inline constexpr NodeId kBroadcast = std::numeric_limits<NodeId>::max();

enum class PacketKind : std::uint8_t
{
    WakeupBeacon, // receiver-initiated poll, carries the polled node id
    Data,
    Ack,
    Preamble,     // low-power-listening wake-up preamble
    SlotHeader,   // TDMA slot control header
};

std::string_view to_string(PacketKind kind) noexcept;

struct Packet
{
    PacketKind kind = PacketKind::Data;
    NodeId source = 0;
    NodeId destination = kBroadcast;
    // Polled node (beacons) or announced receiver (slot headers).
    NodeId target = kBroadcast;
    SimTime airtime{};
    // Upper-layer payload sequence number, for data and its acknowledgment.
    std::uint64_t payload_id = 0;

    friend bool operator==(const Packet&, const Packet&) = default;
};

// Physical-layer timing shared by every node in a scenario.
struct PhyParams
{
    double bitrate_bps = 250'000.0;
    unsigned beacon_bytes = 12;
    unsigned data_bytes = 48;
    unsigned ack_bytes = 11;
    unsigned header_bytes = 12;
    SimTime switch_delay = from_us(200.0);
    SimTime propagation_delay = from_us(1.0);

    void validate() const;

    SimTime airtime_for_bytes(unsigned bytes) const;
    SimTime airtime(PacketKind kind) const;
};

} // namespace tadsim::sim
