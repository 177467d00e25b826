#include "tadsim/harness/export.hpp"

#include "tadsim/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tadsim::harness {

namespace fs = std::filesystem;

Format format_from_string(std::string_view name)
{
    if (name == "csv")
        return Format::Csv;
    if (name == "json")
        return Format::Json;
    throw ConfigError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << body;
    out.flush();
    if (!out)
        throw IoError("write failed for " + path.string());
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

std::string intervals_csv(const ExperimentReport& r)
{
    std::ostringstream o;
    o << "wakeup_index,sim_time,node_id,i_wu_ms\n";
    for (const auto& s : r.intervals)
        o << s.wakeup_index << ',' << num(s.sim_time_s) << ',' << s.node_id << ',' << num(s.i_wu_ms) << '\n';
    return o.str();
}

std::string energy_csv(const ExperimentReport& r)
{
    std::ostringstream o;
    o << "node_id,state,time_ms,energy_mj\n";
    for (const auto& n : r.nodes)
        for (const char* st : {"sleep", "rx", "tx", "off"})
            o << n.id << ',' << st << ',' << num(n.time_ms.at(st)) << ',' << num(n.energy_mj.at(st)) << '\n';
    return o.str();
}

std::string counters_csv(const ExperimentReport& r)
{
    std::ostringstream o;
    o << "scope,counter,value\n";
    for (const auto& [k, v] : r.channel)
        o << "channel," << k << ',' << v << '\n';
    for (const auto& n : r.nodes)
    {
        const std::string scope = "node" + std::to_string(n.id);
        for (const auto& [k, v] : n.counters)
            o << scope << ',' << k << ',' << v << '\n';
        o << scope << ",arrivals," << n.arrivals << '\n';
    }
    return o.str();
}

std::string tsr_csv(const ExperimentReport& r)
{
    std::ostringstream o;
    o << "wakeup_index,sim_time,node_id,data,tsr,x1,x2,mu,e,i_wu_ms,deferred\n";
    for (const auto& s : r.tsr)
        o << s.wakeup_index << ',' << num(s.sim_time_s) << ',' << s.node_id << ',' << (s.data ? 1 : 0) << ','
          << s.tsr << ',' << num(s.x1) << ',' << num(s.x2) << ',' << num(s.mu) << ',' << num(s.e) << ','
          << num(s.i_wu_ms) << ',' << (s.deferred ? 1 : 0) << '\n';
    return o.str();
}

std::string convergence_csv(const ExperimentReport& r)
{
    std::ostringstream o;
    o << "node_id,wakeups_to_convergence\n";
    for (const auto& c : r.convergence)
        o << c.node_id << ',' << (c.wakeups ? std::to_string(*c.wakeups) : std::string()) << '\n';
    return o.str();
}

} // namespace

std::string dump(const ExperimentReport& r)
{
    return to_json(r).dump();
}

void export_report(const ExperimentReport& r, Format format, const fs::path& dir)
{
    ensure_dir(dir);
    if (format == Format::Json)
    {
        write_file(dir / "report.json", to_json(r).dump(1) + "\n");
        return;
    }
    write_file(dir / "intervals.csv", intervals_csv(r));
    write_file(dir / "energy.csv", energy_csv(r));
    write_file(dir / "counters.csv", counters_csv(r));
    write_file(dir / "tsr.csv", tsr_csv(r));
    write_file(dir / "convergence.csv", convergence_csv(r));
}

ExperimentReport load_report(const fs::path& file)
{
    std::ifstream in(file);
    if (!in)
        throw IoError("cannot open report " + file.string());
    try
    {
        return report_from_json(nlohmann::json::parse(in));
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw IoError("cannot parse report " + file.string() + ": " + e.what());
    }
}

} // namespace tadsim::harness
