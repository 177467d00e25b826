#include "tadsim/harness/scenario.hpp"

#include "tadsim/errors.hpp"

#include <fstream>
#include <set>
#include <type_traits>

namespace tadsim::harness {

using nlohmann::json;

std::string_view to_string(Protocol p) noexcept
{
    switch (p)
    {
    case Protocol::TadMac: return "tadmac";
    case Protocol::Bmac: return "bmac";
    case Protocol::Lmac: return "lmac";
    }
    return "?";
}

Protocol protocol_from_string(std::string_view name)
{
    for (auto p : {Protocol::TadMac, Protocol::Bmac, Protocol::Lmac})
        if (to_string(p) == name)
            return p;
    throw ConfigError("unknown protocol '" + std::string(name) + "' (expected tadmac, bmac or lmac)");
}

namespace {

// Reads the known keys of one JSON object and remembers which it consumed,
// so the leftovers can be reported as unknown.
class Reader
{
  public:
    Reader(const json& obj, std::string where, std::vector<std::string>& errors)
        : obj_(obj), where_(std::move(where)), errors_(errors)
    {
        if (!obj_.is_object())
            fail("", "must be an object");
    }

    Reader(const Reader&) = delete;
    Reader& operator=(const Reader&) = delete;

    ~Reader()
    {
        if (!obj_.is_object())
            return;
        for (const auto& [key, _] : obj_.items())
            if (!seen_.contains(key))
                errors_.push_back(path(key) + ": unknown key");
    }

    const json* find(const std::string& key)
    {
        seen_.insert(key);
        if (!obj_.is_object())
            return nullptr;
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    template <class T>
    void get(const std::string& key, T& out)
    {
        const json* v = find(key);
        if (!v)
            return;
        if constexpr (std::is_same_v<T, bool>)
        {
            if (!v->is_boolean())
                return fail(key, "must be a boolean");
            out = v->get<bool>();
        }
        else if constexpr (std::is_unsigned_v<T>)
        {
            if (!v->is_number_unsigned())
                return fail(key, "must be a non-negative integer");
            const auto raw = v->get<std::uint64_t>();
            if (raw > std::numeric_limits<T>::max())
                return fail(key, "is too large");
            out = static_cast<T>(raw);
        }
        else if constexpr (std::is_floating_point_v<T>)
        {
            if (!v->is_number())
                return fail(key, "must be a number");
            out = v->get<double>();
        }
        else
        {
            if (!v->is_string())
                return fail(key, "must be a string");
            out = v->get<std::string>();
        }
    }

    void millis(const std::string& key, Millis& out)
    {
        double v = out.count();
        get(key, v);
        out = Millis{v};
    }

    void ms_time(const std::string& key, SimTime& out)
    {
        double v = to_millis(out).count();
        get(key, v);
        out = from_ms(v);
    }

    void us_time(const std::string& key, SimTime& out)
    {
        double v = std::chrono::duration<double, std::micro>(out).count();
        get(key, v);
        out = from_us(v);
    }

    void s_time(const std::string& key, SimTime& out)
    {
        double v = to_seconds(out);
        get(key, v);
        out = from_seconds(v);
    }

    std::string path(const std::string& key) const { return key.empty() ? where_ : where_ + "." + key; }

    void fail(const std::string& key, const std::string& what) { errors_.push_back(path(key) + ": " + what); }

  private:
    const json& obj_;
    std::string where_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

TrafficSpec read_traffic(const json& doc, const std::string& where, TrafficSpec t, std::vector<std::string>& errors)
{
    Reader r(doc, where, errors);
    std::string kind = t.kind == TrafficSpec::Kind::Static ? "static" : "variable";
    r.get("kind", kind);
    if (kind == "static")
        t.kind = TrafficSpec::Kind::Static;
    else if (kind == "variable")
        t.kind = TrafficSpec::Kind::Variable;
    else
        r.fail("kind", "must be 'static' or 'variable'");
    r.millis("period_ms", t.period);
    if (const json* off = r.find("offset_ms"))
    {
        if (off->is_null())
            t.offset.reset();
        else if (off->is_number())
            t.offset = Millis{off->get<double>()};
        else
            r.fail("offset_ms", "must be a number or null");
    }
    if (const json* sched = r.find("schedule"))
    {
        t.schedule.clear();
        if (!sched->is_array())
            r.fail("schedule", "must be an array");
        else
            for (std::size_t i = 0; i < sched->size(); ++i)
            {
                PeriodChange c;
                Reader cr((*sched)[i], r.path("schedule") + "[" + std::to_string(i) + "]", errors);
                cr.s_time("at_s", c.at);
                cr.millis("period_ms", c.period);
                t.schedule.push_back(c);
            }
    }
    r.s_time("change_every_s", t.change_every);
    r.get("min_factor", t.min_factor);
    r.get("max_factor", t.max_factor);
    return t;
}

void read_tad(const json& doc, mac::TadConfig& c, std::vector<std::string>& errors)
{
    Reader r(doc, "tadmac", errors);
    r.get("alpha", c.adapt.alpha);
    r.millis("t_ref_ms", c.adapt.t_ref);
    r.millis("i_min_ms", c.adapt.i_min);
    r.millis("i_max_ms", c.adapt.i_max);
    r.millis("initial_interval_ms", c.initial_interval);
    r.get("tsr_length", c.tsr_length);
    std::string init = c.tsr_init == adaptive::TsrInit::Alternating ? "alternating" : "zeros";
    r.get("tsr_init", init);
    if (init == "alternating")
        c.tsr_init = adaptive::TsrInit::Alternating;
    else if (init == "zeros")
        c.tsr_init = adaptive::TsrInit::Zeros;
    else
        r.fail("tsr_init", "must be 'alternating' or 'zeros'");
    std::string policy = c.error_policy.name();
    r.get("error_policy", policy);
    try
    {
        c.error_policy = adaptive::ErrorPolicy::by_name(policy);
    }
    catch (const ConfigError& e)
    {
        r.fail("error_policy", e.what());
    }
    r.ms_time("cca_ms", c.cca_duration);
    r.get("queue_capacity", c.queue_capacity);
    r.get("max_retries", c.max_retries);
}

void read_bmac(const json& doc, mac::BmacConfig& c, std::vector<std::string>& errors)
{
    Reader r(doc, "bmac", errors);
    r.ms_time("check_interval_ms", c.check_interval);
    r.ms_time("preamble_ms", c.preamble_length);
    r.ms_time("sample_ms", c.sample_duration);
    r.ms_time("max_backoff_ms", c.max_backoff);
    r.get("queue_capacity", c.queue_capacity);
    r.get("max_retries", c.max_retries);
}

void read_lmac(const json& doc, mac::LmacConfig& c, std::vector<std::string>& errors)
{
    Reader r(doc, "lmac", errors);
    r.get("frame_slots", c.frame_slots);
    r.ms_time("slot_ms", c.slot_duration);
    r.ms_time("header_listen_ms", c.header_listen);
    r.get("queue_capacity", c.queue_capacity);
}

void read_phy(const json& doc, sim::PhyParams& p, std::vector<std::string>& errors)
{
    Reader r(doc, "phy", errors);
    r.get("bitrate_bps", p.bitrate_bps);
    r.get("beacon_bytes", p.beacon_bytes);
    r.get("data_bytes", p.data_bytes);
    r.get("ack_bytes", p.ack_bytes);
    r.get("header_bytes", p.header_bytes);
    r.ms_time("switch_delay_ms", p.switch_delay);
    r.us_time("propagation_delay_us", p.propagation_delay);
}

void read_power(const json& doc, energy::PowerProfile& p, std::vector<std::string>& errors)
{
    Reader r(doc, "power", errors);
    r.get("p_sleep_mw", p.p_sleep_mw);
    r.get("p_rx_mw", p.p_rx_mw);
    r.get("p_tx_mw", p.p_tx_mw);
}

template <class F>
void check(std::vector<std::string>& out, const std::string& where, F&& validate)
{
    try
    {
        validate();
    }
    catch (const std::exception& e)
    {
        out.push_back(where + ": " + e.what());
    }
}

double ms(SimTime t)
{
    return to_millis(t).count();
}

} // namespace

void Scenario::validate() const
{
    std::vector<std::string> v;
    if (transmitters.empty())
        v.push_back("transmitters: at least one transmitter is required");
    if (!(horizon_s > 0.0))
        v.push_back("horizon_s: must be positive");
    for (std::size_t i = 0; i < transmitters.size(); ++i)
        transmitters[i].traffic.collect_violations("transmitters[" + std::to_string(i) + "].traffic", v);
    check(v, "phy", [&] { phy.validate(); });
    check(v, "power", [&] { power.validate(); });
    switch (protocol)
    {
    case Protocol::TadMac: check(v, "tadmac", [&] { tad.validate(); }); break;
    case Protocol::Bmac: check(v, "bmac", [&] { bmac.validate(); }); break;
    case Protocol::Lmac:
        check(v, "lmac", [&] { lmac.validate(); });
        if (transmitters.size() + 1 > lmac.frame_slots)
            v.push_back("lmac.frame_slots: every node needs its own slot");
        break;
    }
    if (convergence.epsilon && !(convergence.epsilon->count() > 0.0))
        v.push_back("convergence.epsilon_ms: must be positive");
    if (convergence.window < 2)
        v.push_back("convergence.window: must be at least 2");
    if (max_events_without_advance == 0)
        v.push_back("engine.max_events_without_advance: must be positive");
    if (!v.empty())
        throw ValidationError(std::move(v));
}

Scenario Scenario::star(Protocol protocol, std::size_t transmitters, Millis period)
{
    Scenario s;
    s.protocol = protocol;
    TrafficSpec t;
    t.period = period;
    s.transmitters.assign(transmitters, TransmitterSpec{t});
    return s;
}

json to_json(const TrafficSpec& t)
{
    json j;
    j["kind"] = t.kind == TrafficSpec::Kind::Static ? "static" : "variable";
    j["period_ms"] = t.period.count();
    j["offset_ms"] = t.offset ? json(t.offset->count()) : json(nullptr);
    json sched = json::array();
    for (const auto& c : t.schedule)
        sched.push_back({{"at_s", to_seconds(c.at)}, {"period_ms", c.period.count()}});
    j["schedule"] = sched;
    j["change_every_s"] = to_seconds(t.change_every);
    j["min_factor"] = t.min_factor;
    j["max_factor"] = t.max_factor;
    return j;
}

json to_json(const Scenario& s)
{
    json j;
    j["protocol"] = to_string(s.protocol);
    j["seed"] = s.seed;
    j["horizon_s"] = s.horizon_s;
    json tx = json::array();
    for (const auto& t : s.transmitters)
        tx.push_back({{"traffic", to_json(t.traffic)}});
    j["transmitters"] = tx;
    const auto& a = s.tad;
    j["tadmac"] = {
        {"alpha", a.adapt.alpha},
        {"t_ref_ms", a.adapt.t_ref.count()},
        {"i_min_ms", a.adapt.i_min.count()},
        {"i_max_ms", a.adapt.i_max.count()},
        {"initial_interval_ms", a.initial_interval.count()},
        {"tsr_length", a.tsr_length},
        {"tsr_init", a.tsr_init == adaptive::TsrInit::Alternating ? "alternating" : "zeros"},
        {"error_policy", a.error_policy.name()},
        {"cca_ms", ms(a.cca_duration)},
        {"queue_capacity", a.queue_capacity},
        {"max_retries", a.max_retries},
    };
    j["bmac"] = {
        {"check_interval_ms", ms(s.bmac.check_interval)},
        {"preamble_ms", ms(s.bmac.preamble_length)},
        {"sample_ms", ms(s.bmac.sample_duration)},
        {"max_backoff_ms", ms(s.bmac.max_backoff)},
        {"queue_capacity", s.bmac.queue_capacity},
        {"max_retries", s.bmac.max_retries},
    };
    j["lmac"] = {
        {"frame_slots", s.lmac.frame_slots},
        {"slot_ms", ms(s.lmac.slot_duration)},
        {"header_listen_ms", ms(s.lmac.header_listen)},
        {"queue_capacity", s.lmac.queue_capacity},
    };
    j["phy"] = {
        {"bitrate_bps", s.phy.bitrate_bps},
        {"beacon_bytes", s.phy.beacon_bytes},
        {"data_bytes", s.phy.data_bytes},
        {"ack_bytes", s.phy.ack_bytes},
        {"header_bytes", s.phy.header_bytes},
        {"switch_delay_ms", ms(s.phy.switch_delay)},
        {"propagation_delay_us", std::chrono::duration<double, std::micro>(s.phy.propagation_delay).count()},
    };
    j["power"] = {{"p_sleep_mw", s.power.p_sleep_mw}, {"p_rx_mw", s.power.p_rx_mw}, {"p_tx_mw", s.power.p_tx_mw}};
    j["convergence"] = {
        {"epsilon_ms", s.convergence.epsilon ? json(s.convergence.epsilon->count()) : json(nullptr)},
        {"window", s.convergence.window},
    };
    j["engine"] = {{"max_events_without_advance", s.max_events_without_advance}};
    return j;
}

Scenario scenario_from_json(const json& doc)
{
    Scenario s;
    std::vector<std::string> errors;
    {
        Reader r(doc, "scenario", errors);
        std::string protocol{to_string(s.protocol)};
        r.get("protocol", protocol);
        try
        {
            s.protocol = protocol_from_string(protocol);
        }
        catch (const ConfigError& e)
        {
            r.fail("protocol", e.what());
        }
        r.get("seed", s.seed);
        r.get("horizon_s", s.horizon_s);

        // A shared traffic block applies to every transmitter unless one
        // overrides it.
        TrafficSpec shared;
        if (const json* t = r.find("traffic"))
            shared = read_traffic(*t, "traffic", shared, errors);
        if (const json* tx = r.find("transmitters"))
        {
            if (tx->is_number_unsigned())
                s.transmitters.assign(tx->get<std::size_t>(), TransmitterSpec{shared});
            else if (tx->is_array())
                for (std::size_t i = 0; i < tx->size(); ++i)
                {
                    const std::string where = "transmitters[" + std::to_string(i) + "]";
                    Reader tr((*tx)[i], where, errors);
                    TransmitterSpec spec{shared};
                    if (const json* t = tr.find("traffic"))
                        spec.traffic = read_traffic(*t, where + ".traffic", shared, errors);
                    s.transmitters.push_back(spec);
                }
            else
                r.fail("transmitters", "must be a count or an array of transmitter objects");
        }
        if (const json* t = r.find("tadmac"))
            read_tad(*t, s.tad, errors);
        if (const json* t = r.find("bmac"))
            read_bmac(*t, s.bmac, errors);
        if (const json* t = r.find("lmac"))
            read_lmac(*t, s.lmac, errors);
        if (const json* t = r.find("phy"))
            read_phy(*t, s.phy, errors);
        if (const json* t = r.find("power"))
            read_power(*t, s.power, errors);
        if (const json* t = r.find("convergence"))
        {
            Reader cr(*t, "convergence", errors);
            if (const json* eps = cr.find("epsilon_ms"))
            {
                if (eps->is_null())
                    s.convergence.epsilon.reset();
                else if (eps->is_number())
                    s.convergence.epsilon = Millis{eps->get<double>()};
                else
                    cr.fail("epsilon_ms", "must be a number or null");
            }
            cr.get("window", s.convergence.window);
        }
        if (const json* t = r.find("engine"))
        {
            Reader er(*t, "engine", errors);
            er.get("max_events_without_advance", s.max_events_without_advance);
        }
    }
    if (!errors.empty())
    {
        // Report semantic problems alongside the structural ones.
        try
        {
            s.validate();
        }
        catch (const ValidationError& e)
        {
            errors.insert(errors.end(), e.violations().begin(), e.violations().end());
        }
        throw ValidationError(std::move(errors));
    }
    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scenario file " + path.string());
    json doc;
    try
    {
        doc = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw IoError("cannot parse scenario file " + path.string() + ": " + e.what());
    }
    return scenario_from_json(doc);
}

} // namespace tadsim::harness
