#include "tadsim/adaptive/adaptation.hpp"

#include "tadsim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tadsim::adaptive {

namespace {

double zero_error(const TsrRegister&)
{
    return 0.0;
}

struct PolicyEntry
{
    std::string_view name;
    ErrorPolicy::Fn fn;
};

constexpr std::array kPolicies{
    PolicyEntry{"zero", &zero_error},
};

} // namespace

void AdaptParams::validate() const
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw ConfigError("alpha must be in [0, 1]");
    if (!(t_ref.count() > 0.0))
        throw ConfigError("t_ref must be positive");
    if (!(i_min.count() > 0.0))
        throw ConfigError("i_min must be positive");
    if (!(i_min <= i_max))
        throw ConfigError("i_min must not exceed i_max");
}

double weighted_value(const HalfStats& stats, unsigned length) noexcept
{
    const double half = static_cast<double>(length) / 2.0;
    return (stats.n0 / half) * stats.nc0 - (stats.n1 / half) * stats.nc1;
}

double update_factor(double x1, double x2, double alpha) noexcept
{
    return alpha * x1 + (1.0 - alpha) * x2;
}

double update_factor(const TsrRegister& reg, double alpha) noexcept
{
    const double x1 = weighted_value(half_stats(reg, Half::First), reg.length());
    const double x2 = weighted_value(half_stats(reg, Half::Second), reg.length());
    return update_factor(x1, x2, alpha);
}

IntervalState next_interval(IntervalState state, double mu, double e, const AdaptParams& params)
{
    if (!std::isfinite(mu) || !std::isfinite(e))
        throw SimulationFault("non-finite interval update factor");
    const Millis raw = state.i_wu + (mu + e) * params.t_ref;
    state.i_wu = std::clamp(raw, params.i_min, params.i_max);
    state.history.push_back(state.i_wu);
    return state;
}

ErrorPolicy ErrorPolicy::by_name(std::string_view name)
{
    for (const auto& p : kPolicies)
        if (p.name == name)
            return ErrorPolicy(std::string(p.name), p.fn);
    throw ConfigError("unknown error policy '" + std::string(name) + "'");
}

std::vector<std::string> ErrorPolicy::registered_names()
{
    std::vector<std::string> names;
    for (const auto& p : kPolicies)
        names.emplace_back(p.name);
    return names;
}

} // namespace tadsim::adaptive
