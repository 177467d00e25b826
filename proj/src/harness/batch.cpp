#include "tadsim/harness/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace tadsim::harness {

std::vector<ExperimentReport> run_all(const std::vector<Scenario>& scenarios, unsigned threads)
{
    for (const auto& s : scenarios)
        s.validate();
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, scenarios.size())));

    std::vector<ExperimentReport> out(scenarios.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= scenarios.size())
                return;
            try
            {
                out[i] = run_experiment(scenarios[i]);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = scenarios.size();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

std::vector<Scenario> seed_range(const Scenario& base, std::uint64_t first, std::size_t count)
{
    std::vector<Scenario> out;
    for (std::size_t i = 0; i < count; ++i)
    {
        Scenario s = base;
        s.seed = first + i;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Scenario> sweep_grid(const Scenario& base, const SweepAxes& axes)
{
    auto or_base = []<class T>(const std::vector<T>& v, T fallback) { return v.empty() ? std::vector<T>{fallback} : v; };
    const auto inits = or_base(axes.initial_interval_ms, base.tad.initial_interval.count());
    const auto alphas = or_base(axes.alpha, base.tad.adapt.alpha);
    const auto lengths = or_base(axes.tsr_length, base.tad.tsr_length);
    std::vector<Scenario> out;
    for (double init : inits)
        for (double alpha : alphas)
            for (unsigned len : lengths)
            {
                Scenario s = base;
                s.tad.initial_interval = Millis{init};
                s.tad.adapt.alpha = alpha;
                s.tad.tsr_length = len;
                out.push_back(std::move(s));
            }
    return out;
}

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string summary_csv(const std::vector<ExperimentReport>& reports)
{
    std::ostringstream o;
    o << "seed,protocol,initial_interval_ms,alpha,tsr_length,coordinator_sleep_fraction,"
         "sleep_ms_per_s,rx_ms_per_s,tx_ms_per_s,energy_mj_per_s,collisions,converged,min_convergence,"
         "max_convergence\n";
    for (const auto& r : reports)
    {
        const auto p = per_node_profile(r);
        const auto& tad = r.scenario.at("tadmac");
        const double horizon_ms = r.horizon_s * 1000.0;
        std::size_t converged = 0;
        std::uint64_t lo = UINT64_MAX, hi = 0;
        for (const auto& c : r.convergence)
            if (c.wakeups)
            {
                ++converged;
                lo = std::min(lo, *c.wakeups);
                hi = std::max(hi, *c.wakeups);
            }
        o << r.seed << ',' << r.protocol << ',' << num(tad.at("initial_interval_ms").get<double>()) << ','
          << num(tad.at("alpha").get<double>()) << ',' << tad.at("tsr_length").get<unsigned>() << ','
          << num(r.node(0).fraction("sleep", horizon_ms)) << ',' << num(p.sleep_ms) << ',' << num(p.rx_ms) << ','
          << num(p.tx_ms) << ',' << num(p.energy_mj) << ',' << r.channel.at("collisions") << ',' << converged
          << ',' << (converged ? std::to_string(lo) : "") << ',' << (converged ? std::to_string(hi) : "") << '\n';
    }
    return o.str();
}

} // namespace tadsim::harness
