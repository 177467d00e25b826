#pragma once

#include "tadsim/energy/ledger.hpp"
#include "tadsim/harness/traffic.hpp"
#include "tadsim/mac/bmac.hpp"
#include "tadsim/mac/lmac.hpp"
#include "tadsim/mac/tadmac.hpp"
#include "tadsim/sim/packet.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tadsim::harness {

enum class Protocol : std::uint8_t
{
    TadMac,
    Bmac,
    Lmac,
};

std::string_view to_string(Protocol p) noexcept;
// Throws ConfigError for unknown names.
Protocol protocol_from_string(std::string_view name);

struct ConvergenceCriterion
{
    // Unset means "one t_ref of the scenario".
    std::optional<Millis> epsilon;
    std::size_t window = 10;

    friend bool operator==(const ConvergenceCriterion&, const ConvergenceCriterion&) = default;
};

struct TransmitterSpec
{
    TrafficSpec traffic;
};

// One star network: node 0 is the coordinator, nodes 1..N are transmitters.
struct Scenario
{
    Protocol protocol = Protocol::TadMac;
    std::uint64_t seed = 1;
    double horizon_s = 1000.0;
    std::vector<TransmitterSpec> transmitters;

    mac::TadConfig tad;
    mac::BmacConfig bmac;
    mac::LmacConfig lmac;
    sim::PhyParams phy;
    energy::PowerProfile power;
    ConvergenceCriterion convergence;
    std::uint64_t max_events_without_advance = 10'000'000;

    // Throws ValidationError listing every violated constraint.
    void validate() const;

    Millis epsilon() const { return convergence.epsilon.value_or(tad.adapt.t_ref); }

    // The evaluation network: 4 transmitters with identical static traffic.
    static Scenario star(Protocol protocol, std::size_t transmitters, Millis period);
};

// Every key written explicitly, so the output loads back to the same scenario.
nlohmann::json to_json(const Scenario& s);
// Rejects unknown keys and wrong types; collects every problem before throwing
// ValidationError. Missing keys keep their defaults.
Scenario scenario_from_json(const nlohmann::json& doc);
// Throws IoError naming the path when the file cannot be read or parsed.
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const TrafficSpec& t);

} // namespace tadsim::harness
