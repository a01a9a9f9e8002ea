#pragma once

#include <string>
#include <vector>

#include "scenario.hpp"

namespace cstarmod::harness {

std::vector<std::string> demo_names();

/// Run a prepackaged scenario (seed defaults to 0) whose expected outcome is
/// embedded; the report self-verifies against it. Unknown names raise
/// ConfigError.
RunOutcome run_demo(const std::string& name, const RunOptions& options);

} // namespace cstarmod::harness
