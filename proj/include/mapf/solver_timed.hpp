#pragma once

#include <optional>

#include "mapf/model.hpp"
#include "mapf/search.hpp"

namespace mapf {

struct TimedConfig {
    int horizon = 0;
    bool follow = true;  // unweighted only; weighted problems use their sigma mode
    Limits limits;
};

struct TimedResult {
    Verdict verdict = Verdict::unsat;
    std::optional<Plan> plan;
    int horizon = 0;  // for iterative deepening: least feasible, or last horizon tried
    SearchStats stats;
};

TimedResult solve_timed(const Problem& p, const TimedConfig& cfg);
TimedResult solve_wtimed(const WeightedProblem& wp, const TimedConfig& cfg);

// Iterative deepening from the largest single-agent distance up to max_n.
// `cfg.limits` bounds the whole run, `cfg.horizon` is ignored.
TimedResult solve_timed_id(const Problem& p, int max_n, const TimedConfig& cfg);
TimedResult solve_wtimed_id(const WeightedProblem& wp, int max_n, const TimedConfig& cfg);

// Exhaustive enumeration of joint strolls, checked with the verifier.
// Throws std::length_error outside the guarded sizes.
Verdict brute_force_oracle(const Problem& p, int n, bool follow);
Verdict brute_force_oracle(const WeightedProblem& wp, int n);

}  // namespace mapf
