#pragma once

#include "json.hpp"

#include "distfobs/decomp.hpp"
#include "distfobs/observernet.hpp"
#include "distfobs/scenario.hpp"

namespace distfobs {

// `check`: validation, centralized existence conditions, leader-set survey.
// Never throws on negative findings — they are results, not failures.
struct CheckReport {
    ValidationReport validation;
    bool darouach_rank = false;
    bool darouach_detect = false;
    // Random-modulus grid cross-validation of the pencil condition.
    int grid_samples = 0;
    bool grid_all_hold = false;
    bool grid_consistent = false;  // detect verdict implies grid verdict
    std::vector<MinimalLeaderSet> minimal_sets;
    bool feasible = false;
    int r_star = 0;  // least order over minimal sets (0 when infeasible)
    int detectable_dim = 0;

    nlohmann::json to_json() const;
};

CheckReport run_check(const Scenario& sc);

// `analyze`: full design pipeline on the chosen functional leader set.
struct AnalysisReport {
    LeaderSelection selection;
    FunctionalDecomposition functional;
    StaircaseDecomposition staircase;
    ObserverDesign design;
    ErrorDynamics error_dynamics;

    nlohmann::json to_json() const;
};

AnalysisReport run_analyze(const Scenario& sc);

// Shared guard: throws ValidationError listing every problem found.
void require_valid(const SystemModel& m, const ToleranceConfig& tol);

}  // namespace distfobs
