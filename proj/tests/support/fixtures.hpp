#pragma once

#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "mapf/arrival_map.hpp"
#include "mapf/event_order.hpp"
#include "mapf/io.hpp"
#include "mapf/model.hpp"
#include "mapf/rng.hpp"

namespace fx {

using namespace mapf;

std::string data_path(const std::string& name);

// Seven-cell tree with agents a: v0_2 -> v1_3 and b: v1_0 -> v0_0.
const Instance& tree();
// The three candidate plans of lengths 4, 5 and 6.
Plan tree_plan(int length);

VertexId vid(const Problem& p, const std::string& name);
Stroll stroll_of(const Problem& p, AgentId a, std::initializer_list<const char*> names);
Event ev(const Problem& p, const std::string& agent, const std::string& vertex);

// Agent chains of the shortest tree routes.
std::vector<EventPair> tree_chains();
// Chains plus one extra pair, closed transitively.
OrderedEventSet tree_order(const std::string& a1, const std::string& v1, const std::string& a2,
                           const std::string& v2);
inline OrderedEventSet tree_minimal_order() { return tree_order("a", "v1_2", "b", "v1_1"); }

// Three-vertex weighted graph: (x,y) takes 2, (y,x) takes 3, (z,y) takes 1.
WeightedProblem three_vertex(std::initializer_list<std::tuple<const char*, const char*, const char*>> agents,
                     SigmaMode sigma);

ArrivalTimeMapping amap(const Problem& p, std::initializer_list<std::tuple<const char*, const char*, int>> entries);

// Connected undirected graph with `n` vertices named v0..v(n-1) plus
// `extra` additional random edges.
Graph random_connected_graph(SplitMix64& rng, int n, int extra);

// Agents with distinct random starts and goals.
Problem random_problem(SplitMix64& rng, const Graph& g, int agents);

// Random simple path from `from` to `to` via a randomized DFS, or empty.
std::vector<VertexId> random_simple_path(SplitMix64& rng, const Graph& g, VertexId from, VertexId to);

// Path-based plan following one random simple path per agent with random
// waits; durations from `delta` (unit when empty). Trailing steps in which
// every agent already sits at its goal are dropped.
std::optional<Plan> random_path_plan(SplitMix64& rng, const Problem& p, const std::vector<int>& delta,
                                     int max_wait);

// Independent check for the DAG engine: does `v` reach `u` in `edges`?
bool reaches(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t from,
             std::size_t to);

// Batch positive-cycle detection (Bellman-Ford on longest paths).
bool diff_feasible(std::size_t vars, const std::vector<std::tuple<std::size_t, long long, std::size_t>>& cs);

// Least fixpoint above `start` by raising targets of violated constraints;
// nullopt if it does not settle within the iteration cap.
std::optional<std::vector<long long>> raise_to_feasible(
    std::vector<long long> start, const std::vector<std::tuple<std::size_t, long long, std::size_t>>& cs);

// Exhaustive order oracle: is there a tuple of simple paths and an
// orientation of every shared vertex giving an acyclic, conflict-free
// path-based order? nullopt when the enumeration exceeds `cap` cases.
std::optional<bool> path_based_plan_exists(const Problem& p, std::size_t cap = 200000);

}  // namespace fx
