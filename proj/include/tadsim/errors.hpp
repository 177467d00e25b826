#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tadsim {

// Broken engine or state-machine contract. The simulation cannot continue.
class SimulationFault : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

// Rejected configuration value (unknown policy, bad parameter range).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Scenario validation failure. Carries every violated constraint, not just
// the first one found.
class ValidationError : public std::runtime_error
{
  public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

  private:
    std::vector<std::string> violations_;
};

class IoError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace tadsim
