#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "distfobs/observernet.hpp"
#include "distfobs/sysmodel.hpp"

namespace distfobs {

enum class SimMode { proposed, naive };

// A fully described experiment: the model plus run options.  Everything an
// invocation needs travels in one JSON document; CLI flags override.
struct Scenario {
    SystemModel model;
    Vector x0;                 // defaults to all-ones
    long horizon = 100;
    double rho = 0.2;
    ToleranceConfig tol;
    SimMode mode = SimMode::proposed;
    std::optional<NaiveParams> naive;
    // Initial estimates in observer coordinates (length r* per node);
    // naive mode: one scalar per node.  Default: zeros.
    std::optional<std::vector<Vector>> initial_estimates;
    std::optional<long> precision_bits;  // simulation arithmetic override
    std::uint64_t seed = 0x6f627330ULL;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);

}  // namespace distfobs
