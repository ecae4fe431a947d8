#include "robustgame/search.hpp"

#include <cmath>

#include "robustgame/errors.hpp"

namespace robustgame {

void TerminationCondition::validate() const {
  if (max_iterations && *max_iterations == 0) throw ConfigError("max iterations must be positive");
  if (max_seconds && !(*max_seconds > 0.0)) throw ConfigError("max seconds must be positive");
  if (epsilon && !(*epsilon > 0.0 && *epsilon <= 1.0)) throw ConfigError("epsilon must lie in (0, 1]");
}

std::optional<std::size_t> TerminationCondition::patience() const {
  if (!epsilon) return std::nullopt;
  return static_cast<std::size_t>(std::ceil(1.0 / *epsilon));
}

}  // namespace robustgame
