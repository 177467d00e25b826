#include "tadsim/sim/packet.hpp"

#include "tadsim/errors.hpp"

#include <cmath>

namespace tadsim::sim {

std::string_view to_string(PacketKind kind) noexcept
{
    switch (kind)
    {
    case PacketKind::WakeupBeacon: return "WB";
    case PacketKind::Data: return "DATA";
    case PacketKind::Ack: return "ACK";
    case PacketKind::Preamble: return "PREAMBLE";
    case PacketKind::SlotHeader: return "HEADER";
    }
    return "?";
}

void PhyParams::validate() const
{
    if (!(bitrate_bps > 0.0))
        throw ConfigError("bitrate must be positive");
    if (beacon_bytes == 0 || data_bytes == 0 || ack_bytes == 0 || header_bytes == 0)
        throw ConfigError("packet sizes must be positive");
    if (switch_delay < SimTime::zero())
        throw ConfigError("switch delay must not be negative");
    if (propagation_delay <= SimTime::zero())
        throw ConfigError("propagation delay must be positive");
}

SimTime PhyParams::airtime_for_bytes(unsigned bytes) const
{
    const double seconds = bytes * 8.0 / bitrate_bps;
    return std::chrono::round<SimTime>(std::chrono::duration<double>(seconds));
}

SimTime PhyParams::airtime(PacketKind kind) const
{
    switch (kind)
    {
    case PacketKind::WakeupBeacon: return airtime_for_bytes(beacon_bytes);
    case PacketKind::Data: return airtime_for_bytes(data_bytes);
    case PacketKind::Ack: return airtime_for_bytes(ack_bytes);
    case PacketKind::SlotHeader: return airtime_for_bytes(header_bytes);
    case PacketKind::Preamble: break;
    }
    throw SimulationFault("preamble airtime is set by the MAC, not by packet size");
}

} // namespace tadsim::sim
