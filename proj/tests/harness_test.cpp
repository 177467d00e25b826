#include "tadsim/errors.hpp"
#include "tadsim/harness/batch.hpp"
#include "tadsim/harness/export.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace tadsim;
using namespace tadsim::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p)
{
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("tadsim_test_" + name);
    fs::remove_all(dir);
    return dir;
}

Scenario quick(Protocol p = Protocol::TadMac)
{
    auto s = Scenario::star(p, 2, Millis{300.0});
    s.horizon_s = 30.0;
    return s;
}

} // namespace

TEST_CASE("detect_convergence examples")
{
    const std::vector<double> flat(30, 100.0);
    CHECK(detect_convergence(flat, 1.0, 10) == 0u);

    std::vector<double> growing;
    for (int i = 0; i < 50; ++i)
        growing.push_back(100.0 + 2.0 * i);
    CHECK_FALSE(detect_convergence(growing, 1.0, 10).has_value());

    // changes of 3 up to index 17, flat afterwards
    std::vector<double> fixture;
    for (int i = 0; i <= 17; ++i)
        fixture.push_back(50.0 + 3.0 * i);
    for (int i = 0; i < 15; ++i)
        fixture.push_back(fixture.back());
    CHECK(detect_convergence(fixture, 1.0, 10) == 17u);

    // too short to hold a full window
    CHECK_FALSE(detect_convergence(std::vector<double>(10, 1.0), 1.0, 10).has_value());
    CHECK(detect_convergence(std::vector<double>(11, 1.0), 1.0, 10) == 0u);
}

TEST_CASE("a larger epsilon never moves convergence later")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> step(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial)
    {
        std::vector<double> h{100.0};
        for (int i = 0; i < 80; ++i)
            h.push_back(h.back() + step(rng) * (i < 40 ? 1.0 : 0.2));
        std::optional<std::size_t> prev;
        for (double eps : {0.1, 0.3, 0.6, 1.0, 2.0, 3.0})
        {
            const auto idx = detect_convergence(h, eps, 10);
            if (prev)
            {
                REQUIRE(idx.has_value());
                REQUIRE(*idx <= *prev);
            }
            if (idx)
                prev = idx;
        }
    }
}

TEST_CASE("traffic specs are validated")
{
    std::vector<std::string> v;
    TrafficSpec t;
    t.period = Millis{0.0};
    t.collect_violations("t", v);
    CHECK(v.size() == 1);

    v.clear();
    TrafficSpec var;
    var.kind = TrafficSpec::Kind::Variable;
    var.schedule = {{SimTime::zero(), Millis{100.0}}, {from_seconds(10.0), Millis{200.0}},
                    {from_seconds(5.0), Millis{-1.0}}};
    var.collect_violations("t", v);
    CHECK(v.size() == 2);
}

TEST_CASE("piecewise traffic follows its schedule")
{
    TrafficSpec t;
    t.kind = TrafficSpec::Kind::Variable;
    t.offset = Millis{0.0};
    t.schedule = {{SimTime::zero(), Millis{100.0}}, {from_seconds(1.0), Millis{250.0}}};
    PeriodicArrivals a(t, 1);
    std::vector<SimTime> times;
    for (int i = 0; i < 14; ++i)
        times.push_back(*a.next());
    CHECK(times[0] == SimTime::zero());
    CHECK(times[10] == from_seconds(1.0));
    CHECK(times[11] == from_seconds(1.25));
    CHECK(a.change_points() == std::vector<SimTime>{from_seconds(1.0)});
}

TEST_CASE("random variable traffic stays inside its factor band")
{
    TrafficSpec t;
    t.kind = TrafficSpec::Kind::Variable;
    t.period = Millis{200.0};
    t.change_every = from_seconds(10.0);
    PeriodicArrivals a(t, 99);
    SimTime last = *a.next();
    while (last < from_seconds(200.0))
    {
        const SimTime next = *a.next();
        const double gap = to_millis(next - last).count();
        REQUIRE(gap >= 100.0 - 1e-6);
        REQUIRE(gap <= 400.0 + 1e-6);
        last = next;
    }
    CHECK(a.change_points().size() >= 19);
}

TEST_CASE("scenario files reject unknown keys and list every problem")
{
    const auto doc = nlohmann::json::parse(R"({
        "protocol": "tadmac",
        "horizon_s": -1,
        "transmitters": 2,
        "colour": "blue",
        "tadmac": {"alpha": 2.0, "tsr_lenght": 8},
        "traffic": {"kind": "static", "period_ms": 0}
    })");
    try
    {
        scenario_from_json(doc);
        FAIL("expected a validation error");
    }
    catch (const ValidationError& e)
    {
        const auto& v = e.violations();
        auto mentions = [&](const std::string& s) {
            return std::any_of(v.begin(), v.end(), [&](const std::string& m) { return m.find(s) != std::string::npos; });
        };
        CHECK(mentions("colour"));
        CHECK(mentions("tsr_lenght"));
        CHECK(mentions("horizon_s"));
        CHECK(mentions("alpha"));
        CHECK(mentions("period"));
    }
}

TEST_CASE("scenario JSON round-trips")
{
    auto s = quick();
    s.seed = 17;
    s.tad.adapt.alpha = 0.25;
    s.transmitters[1].traffic.kind = TrafficSpec::Kind::Variable;
    s.transmitters[1].traffic.offset = Millis{12.5};
    const auto back = scenario_from_json(to_json(s));
    CHECK(to_json(back) == to_json(s));
    CHECK(back.seed == 17);
    CHECK(back.transmitters[1].traffic == s.transmitters[1].traffic);
    CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse(R"({"protocol": "smac"})")), ValidationError);
}

TEST_CASE("loading a missing scenario names the file")
{
    try
    {
        load_scenario("/nonexistent/dir/scenario.json");
        FAIL("expected an I/O error");
    }
    catch (const IoError& e)
    {
        CHECK(std::string(e.what()).find("/nonexistent/dir/scenario.json") != std::string::npos);
    }
}

TEST_CASE("CSV export writes one file per trace with stable headers")
{
    const auto r = run_experiment(quick());
    const auto dir = scratch("csv");
    export_report(r, Format::Csv, dir);
    CHECK(first_line(dir / "intervals.csv") == "wakeup_index,sim_time,node_id,i_wu_ms");
    CHECK(first_line(dir / "energy.csv") == "node_id,state,time_ms,energy_mj");
    CHECK(first_line(dir / "counters.csv") == "scope,counter,value");
    CHECK(first_line(dir / "tsr.csv").rfind("wakeup_index,sim_time,node_id,data,tsr", 0) == 0);
    CHECK(first_line(dir / "convergence.csv") == "node_id,wakeups_to_convergence");

    std::ifstream energy(dir / "energy.csv");
    std::string line;
    std::size_t rows = 0;
    std::getline(energy, line);
    while (std::getline(energy, line))
        ++rows;
    CHECK(rows == r.nodes.size() * 4);

    std::ifstream iv(dir / "intervals.csv");
    rows = 0;
    std::getline(iv, line);
    while (std::getline(iv, line))
        ++rows;
    CHECK(rows == r.intervals.size());
    fs::remove_all(dir);
}

TEST_CASE("JSON export round-trips to an equal report")
{
    const auto r = run_experiment(quick());
    const auto dir = scratch("json");
    export_report(r, Format::Json, dir);
    const auto back = load_report(dir / "report.json");
    CHECK(back == r);
    CHECK(dump(back) == dump(r));
    CHECK(back.scenario.at("seed") == r.seed);
    fs::remove_all(dir);
}

TEST_CASE("export to an unwritable place names the path")
{
    const auto r = run_experiment(quick());
    const auto blocker = scratch("blocker");
    {
        std::ofstream f(blocker);
        f << "file, not a directory";
    }
    try
    {
        export_report(r, Format::Csv, blocker / "out");
        FAIL("expected an I/O error");
    }
    catch (const IoError& e)
    {
        CHECK(std::string(e.what()).find(blocker.string()) != std::string::npos);
    }
    fs::remove(blocker);
    CHECK_THROWS_AS(format_from_string("xml"), ConfigError);
}

TEST_CASE("traffic seen by the upper layer does not depend on the protocol")
{
    std::vector<std::pair<std::uint64_t, std::uint64_t>> per_protocol[3];
    int i = 0;
    for (auto p : {Protocol::TadMac, Protocol::Bmac, Protocol::Lmac})
    {
        auto s = quick(p);
        s.transmitters[1].traffic.kind = TrafficSpec::Kind::Variable;
        s.transmitters[1].traffic.change_every = from_seconds(5.0);
        const auto r = run_experiment(s);
        for (const auto& n : r.nodes)
            per_protocol[i].emplace_back(n.arrivals, n.arrival_hash);
        ++i;
    }
    CHECK(per_protocol[0] == per_protocol[1]);
    CHECK(per_protocol[0] == per_protocol[2]);
    CHECK(per_protocol[0][1].first > 0);
}

TEST_CASE("the same seed gives the same bytes; another seed does not")
{
    const auto a = dump(run_experiment(quick()));
    const auto b = dump(run_experiment(quick()));
    CHECK(a == b);
    auto other = quick();
    other.seed = 2;
    CHECK(dump(run_experiment(other)) != a);
}

TEST_CASE("batch results do not depend on the thread count")
{
    const auto scenarios = seed_range(quick(), 1, 6);
    const auto one = run_all(scenarios, 1);
    const auto many = run_all(scenarios, 4);
    REQUIRE(one.size() == 6);
    for (std::size_t i = 0; i < one.size(); ++i)
    {
        CHECK(one[i].seed == i + 1);
        CHECK(dump(one[i]) == dump(many[i]));
    }
    CHECK(summary_csv(one) == summary_csv(many));
}

TEST_CASE("sweep grids cover the product of the axes")
{
    SweepAxes axes;
    axes.initial_interval_ms = {50.0, 100.0, 150.0};
    axes.alpha = {0.25, 0.75};
    const auto grid = sweep_grid(quick(), axes);
    CHECK(grid.size() == 6);
    CHECK(grid[1].tad.adapt.alpha == 0.75);
    CHECK(grid[1].tad.initial_interval.count() == 50.0);
    CHECK(grid[5].tad.tsr_length == 8);
}

TEST_CASE("a bad scenario in a batch is reported before anything runs")
{
    auto bad = quick();
    bad.horizon_s = 0.0;
    CHECK_THROWS_AS(run_all({quick(), bad}, 2), ValidationError);
}
