#include "tadsim/harness/traffic.hpp"

#include "tadsim/errors.hpp"
#include "tadsim/sim/simulator.hpp"

#include <algorithm>

namespace tadsim::harness {

void TrafficSpec::collect_violations(const std::string& where, std::vector<std::string>& out) const
{
    if (!(period.count() > 0.0))
        out.push_back(where + ": period must be positive");
    if (offset && offset->count() < 0.0)
        out.push_back(where + ": offset must not be negative");
    if (kind != Kind::Variable)
        return;
    if (!schedule.empty())
    {
        if (schedule.front().at != SimTime::zero())
            out.push_back(where + ": schedule must start at 0 s");
        for (std::size_t i = 0; i < schedule.size(); ++i)
        {
            if (!(schedule[i].period.count() > 0.0))
                out.push_back(where + ": schedule period " + std::to_string(i) + " must be positive");
            if (i > 0 && !(schedule[i - 1].at < schedule[i].at))
                out.push_back(where + ": schedule change points must be strictly increasing");
        }
        return;
    }
    if (change_every <= SimTime::zero())
        out.push_back(where + ": change_every must be positive");
    if (!(min_factor > 0.0 && min_factor <= max_factor))
        out.push_back(where + ": factors must satisfy 0 < min_factor <= max_factor");
}

PeriodicArrivals::PeriodicArrivals(TrafficSpec spec, std::uint64_t seed) : spec_(std::move(spec)), rng_(seed)
{
    std::vector<std::string> violations;
    spec_.collect_violations("traffic", violations);
    if (!violations.empty())
        throw ValidationError(std::move(violations));
}

Millis PeriodicArrivals::period_at(SimTime t)
{
    if (spec_.kind == TrafficSpec::Kind::Static)
        return spec_.period;
    if (!spec_.schedule.empty())
    {
        auto it = std::upper_bound(spec_.schedule.begin(), spec_.schedule.end(), t,
                                   [](SimTime v, const PeriodChange& c) { return v < c.at; });
        return std::prev(it)->period;
    }
    const auto segment = static_cast<std::size_t>(t / spec_.change_every);
    while (drawn_.size() <= segment)
    {
        const double u = sim::uniform01(rng_);
        drawn_.push_back(spec_.period * (spec_.min_factor + u * (spec_.max_factor - spec_.min_factor)));
    }
    return drawn_[segment];
}

std::vector<SimTime> PeriodicArrivals::change_points() const
{
    std::vector<SimTime> points;
    if (spec_.kind == TrafficSpec::Kind::Static)
        return points;
    if (!spec_.schedule.empty())
    {
        for (std::size_t i = 1; i < spec_.schedule.size(); ++i)
            points.push_back(spec_.schedule[i].at);
        return points;
    }
    for (std::size_t k = 1; k < drawn_.size(); ++k)
        points.push_back(spec_.change_every * static_cast<SimTime::rep>(k));
    return points;
}

std::optional<SimTime> PeriodicArrivals::next()
{
    if (!last_)
    {
        // The offset draw comes first so it does not depend on later draws.
        const Millis offset = spec_.offset ? *spec_.offset : spec_.period * sim::uniform01(rng_);
        last_ = to_sim_time(offset);
        return last_;
    }
    const SimTime gap = std::max(to_sim_time(period_at(*last_)), SimTime{1});
    *last_ += gap;
    return last_;
}

std::unique_ptr<mac::ArrivalProcess> make_arrivals(const TrafficSpec& spec, std::uint64_t seed)
{
    return std::make_unique<PeriodicArrivals>(spec, seed);
}

} // namespace tadsim::harness
