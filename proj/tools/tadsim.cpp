// tadsim: run, batch, sweep and re-render star-network MAC experiments.

#include "tadsim/errors.hpp"
#include "tadsim/harness/batch.hpp"
#include "tadsim/harness/experiment.hpp"
#include "tadsim/harness/export.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tadsim;
using namespace tadsim::harness;

namespace {

void print_summary(const ExperimentReport& r)
{
    const auto p = per_node_profile(r);
    const double horizon_ms = r.horizon_s * 1000.0;
    std::printf("%s seed %llu, %.0f s, %llu events\n", r.protocol.c_str(), (unsigned long long)r.seed, r.horizon_s,
                (unsigned long long)r.events);
    std::printf("  coordinator sleep fraction %.4f\n", r.node(0).fraction("sleep", horizon_ms));
    std::printf("  per node ms/s  sleep %.2f  rx %.2f  tx %.2f  energy %.3f mJ/s\n", p.sleep_ms, p.rx_ms, p.tx_ms,
                p.energy_mj);
    std::printf("  channel  tx %llu  delivered %llu  collisions %llu\n",
                (unsigned long long)r.channel.at("transmissions"), (unsigned long long)r.channel.at("delivered"),
                (unsigned long long)r.channel.at("collisions"));
    for (const auto& c : r.convergence)
    {
        if (c.wakeups)
            std::printf("  node %u converged after %llu wakeups\n", static_cast<unsigned>(c.node_id),
                        (unsigned long long)*c.wakeups);
        else
            std::printf("  node %u did not converge\n", static_cast<unsigned>(c.node_id));
    }
}

void write_text(const fs::path& file, const std::string& text)
{
    std::ofstream out(file, std::ios::binary);
    out << text;
    if (!out)
        throw IoError("cannot write " + file.string());
}

// Reports go to out/run-<k>/, plus one summary.csv row per run.
void export_many(const std::vector<ExperimentReport>& reports, Format fmt, const fs::path& out)
{
    for (std::size_t k = 0; k < reports.size(); ++k)
        export_report(reports[k], fmt, out / ("run-" + std::to_string(k)));
    write_text(out / "summary.csv", summary_csv(reports));
    std::printf("%zu runs written to %s\n", reports.size(), out.string().c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete-event simulator for traffic-adaptive duty-cycled MAC protocols"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string format = "json";
    unsigned threads = 0;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Override the scenario seed (first seed for batch)");
        sub->add_option("--out-dir", out_dir, "Directory for exported reports")->capture_default_str();
        sub->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
    };

    std::string config;
    auto* run = app.add_subcommand("run", "Run one scenario");
    run->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    common(run);

    std::size_t count = 100;
    auto* batch = app.add_subcommand("batch", "Run one scenario over a range of seeds");
    batch->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    batch->add_option("--count", count, "Number of seeds")->capture_default_str()->check(CLI::PositiveNumber);
    batch->add_option("--threads", threads, "Worker threads, 0 = all cores")->capture_default_str();
    common(batch);

    SweepAxes axes;
    auto* sweep = app.add_subcommand("sweep", "Run a grid over initial interval, alpha and TSR length");
    sweep->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--initial-interval-ms", axes.initial_interval_ms, "Initial wake-up intervals")->delimiter(',');
    sweep->add_option("--alpha", axes.alpha, "Alpha values")->delimiter(',');
    sweep->add_option("--tsr-length", axes.tsr_length, "TSR lengths")->delimiter(',');
    sweep->add_option("--threads", threads, "Worker threads, 0 = all cores")->capture_default_str();
    common(sweep);

    std::string stored;
    auto* report = app.add_subcommand("report", "Summarise and re-export a stored JSON report");
    report->add_option("report", stored, "report.json from an earlier run")->required()->check(CLI::ExistingFile);
    bool no_export = false;
    report->add_flag("--summary-only", no_export, "Print the summary without writing files");
    common(report);

    CLI11_PARSE(app, argc, argv);

    try
    {
        const auto fmt = format_from_string(format);
        const fs::path out{out_dir};
        if (*run)
        {
            auto s = load_scenario(config);
            if (seed)
                s.seed = *seed;
            const auto r = run_experiment(s);
            export_report(r, fmt, out);
            print_summary(r);
        }
        else if (*batch)
        {
            auto s = load_scenario(config);
            const auto runs = seed_range(s, seed.value_or(s.seed), count);
            export_many(run_all(runs, threads), fmt, out);
        }
        else if (*sweep)
        {
            auto s = load_scenario(config);
            if (seed)
                s.seed = *seed;
            export_many(run_all(sweep_grid(s, axes), threads), fmt, out);
        }
        else if (*report)
        {
            const auto r = load_report(stored);
            print_summary(r);
            if (!no_export)
                export_report(r, fmt, out);
        }
    }
    catch (const ValidationError& e)
    {
        std::cerr << "tadsim: " << e.what() << '\n';
        return 2;
    }
    catch (const ConfigError& e)
    {
        std::cerr << "tadsim: configuration error: " << e.what() << '\n';
        return 2;
    }
    catch (const IoError& e)
    {
        std::cerr << "tadsim: " << e.what() << '\n';
        return 3;
    }
    catch (const SimulationFault& e)
    {
        std::cerr << "tadsim: simulation fault: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
