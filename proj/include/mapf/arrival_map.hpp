#pragma once

#include <map>
#include <string>

#include "mapf/event_order.hpp"
#include "mapf/model.hpp"

namespace mapf {

struct ArrivalTimeMapping {
    std::map<Event, int> alpha;

    int at(const Event& e) const { return alpha.at(e); }
    int makespan() const;
    bool operator==(const ArrivalTimeMapping&) const = default;
};

using DepartureTimes = std::map<Event, int>;

// Throws std::invalid_argument unless m is path-based.
DepartureTimes departure_times(const ArrivalTimeMapping& m, const WeightedProblem& wp);

bool check_path_based_amap(const ArrivalTimeMapping& m, const WeightedProblem& wp);
ConflictReport check_conflicts_amap(const ArrivalTimeMapping& m, const WeightedProblem& wp);

// Requires a path-based mapping whose start events are at time 0.
Plan amap_to_plan(const ArrivalTimeMapping& m, const WeightedProblem& wp);
// Throws on excess length or non-path-based plans.
ArrivalTimeMapping plan_to_amap(const WeightedProblem& wp, const Plan& plan);

bool check_vf_sufficient(const ArrivalTimeMapping& m, const WeightedProblem& wp);
bool check_swap_sufficient(const ArrivalTimeMapping& m, const WeightedProblem& wp);

// Throws std::invalid_argument when the event sets differ.
bool compatible(const ArrivalTimeMapping& m1, const ArrivalTimeMapping& m2);
ArrivalTimeMapping minimal_compatible_amap(const ArrivalTimeMapping& m, const WeightedProblem& wp);

// One `(a,u)=i` line per event.
std::string dump_witness(const ArrivalTimeMapping& m, const Problem& p);

}  // namespace mapf
