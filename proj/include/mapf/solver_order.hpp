#pragma once

#include <deque>
#include <optional>
#include <set>
#include <vector>

#include "mapf/arrival_map.hpp"
#include "mapf/event_order.hpp"
#include "mapf/model.hpp"
#include "mapf/search.hpp"

namespace mapf {

// Simple paths from an agent's start to its goal in nondecreasing length
// (sum of durations), produced lazily (Yen's algorithm).
class PathEnumerator {
public:
    PathEnumerator(const Graph& g, std::span<const int> delta, VertexId from, VertexId to, std::size_t budget);

    // The k-th path, computing it on demand; nullopt when there are no more
    // paths or the budget is spent (see budget_exhausted()).
    const std::vector<VertexId>* get(std::size_t k);
    bool budget_exhausted() const { return budget_hit_; }
    int cost(std::size_t k) const { return costs_.at(k); }

private:
    bool extend();

    const Graph& g_;
    std::vector<int> delta_;
    VertexId from_, to_;
    std::size_t budget_;
    bool budget_hit_ = false;
    bool done_ = false;
    std::deque<std::vector<VertexId>> paths_;  // stable references
    std::vector<int> costs_;
    std::set<std::pair<int, std::vector<VertexId>>> candidates_;
};

struct EnumeratedPaths {
    std::vector<std::vector<VertexId>> paths;
    bool budget_exhausted = false;
};

EnumeratedPaths enumerate_paths(const Problem& p, AgentId a, std::size_t budget);

// One vertex sequence per agent.
using PathChoice = std::vector<std::vector<VertexId>>;

// Agent `first` departs `vertex` before agent `second` arrives there.
struct Resolve {
    AgentId first;
    AgentId second;
    VertexId vertex;
    auto operator<=>(const Resolve&) const = default;
};

struct SharedVertex {
    AgentId a;
    AgentId b;  // a < b
    VertexId vertex;
    auto operator<=>(const SharedVertex&) const = default;
};

struct ForcedResolves {
    std::vector<Resolve> forced;
    std::vector<SharedVertex> open;
    bool contradictory = false;  // some pair is forced both ways
};

ForcedResolves forced_resolves(const Problem& p, const PathChoice& choice);

struct OrderConfig {
    Limits limits;
    std::size_t path_budget = 10000;
    std::uint64_t seed = 0;  // nonzero: shuffle agents with equal path lengths
};

struct OrderSolution {
    PathChoice paths;
    std::vector<Resolve> resolves;
    std::optional<OrderedEventSet> order;        // acyclicity engine and follow-aware unit DL
    std::optional<ArrivalTimeMapping> mapping;   // difference-logic engine
    Plan plan;
};

struct OrderResult {
    Verdict verdict = Verdict::unsat;
    std::optional<OrderSolution> solution;
    SearchStats stats;
};

OrderResult solve_order_ac(const Problem& p, const OrderConfig& cfg = {});
OrderResult solve_order_dl(const WeightedProblem& wp, const OrderConfig& cfg = {});
OrderResult solve_order_dl_unweighted(const Problem& p, bool follow, const OrderConfig& cfg = {});

// Generating pairs of the order induced by paths and resolves: consecutive
// path vertices, and for resolve(a,b,u) a's successor of u before b@u.
std::vector<EventPair> order_generators(const Problem& p, const PathChoice& paths, const std::vector<Resolve>& resolves);

}  // namespace mapf
