#include "tadsim/errors.hpp"

namespace tadsim {

namespace {

std::string join(const std::vector<std::string>& v)
{
    std::string msg = "invalid scenario";
    for (const auto& s : v)
        msg += "\n  " + s;
    return msg;
}

} // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations))
{
}

} // namespace tadsim
