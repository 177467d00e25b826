#pragma once

#include "tadsim/adaptive/tsr.hpp"
#include "tadsim/time.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tadsim::adaptive {

struct AdaptParams
{
    double alpha = 0.5;
    Millis t_ref{1.0};
    Millis i_min{10.0};
    Millis i_max{2000.0};

    // Throws ConfigError on the first out-of-range field.
    void validate() const;
};

struct IntervalState
{
    Millis i_wu{100.0};
    // Every value i_wu has taken, starting with the initial one.
    std::vector<Millis> history;

    static IntervalState starting_at(Millis initial)
    {
        return IntervalState{initial, {initial}};
    }
};

// Signed, weighted run statistic of one register half:
// (n0 / (L/2)) * nc0 - (n1 / (L/2)) * nc1.
double weighted_value(const HalfStats& stats, unsigned length) noexcept;

double update_factor(double x1, double x2, double alpha) noexcept;

// update_factor over both halves of a register.
double update_factor(const TsrRegister& reg, double alpha) noexcept;

// i_wu + (mu + e) * t_ref, clamped to [i_min, i_max], appended to history.
IntervalState next_interval(IntervalState state, double mu, double e, const AdaptParams& params);

// Correlation-error term of the interval update. Selected by name at
// configuration time; "zero" is the only registered policy.
class ErrorPolicy
{
  public:
    using Fn = double (*)(const TsrRegister&);

    ErrorPolicy() : ErrorPolicy(by_name("zero")) {}

    // Throws ConfigError for unregistered names.
    static ErrorPolicy by_name(std::string_view name);
    static std::vector<std::string> registered_names();

    double operator()(const TsrRegister& reg) const { return fn_(reg); }
    const std::string& name() const noexcept { return name_; }

  private:
    ErrorPolicy(std::string name, Fn fn) : name_(std::move(name)), fn_(fn) {}

    std::string name_;
    Fn fn_;
};

inline double error_term(const TsrRegister& reg, const ErrorPolicy& policy)
{
    return policy(reg);
}

} // namespace tadsim::adaptive
