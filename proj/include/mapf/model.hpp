#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mapf {

using VertexId = std::uint32_t;
using AgentId = std::uint32_t;

struct Edge {
    VertexId from;
    VertexId to;
    auto operator<=>(const Edge&) const = default;
};

// Directed graph over named vertices. Vertex ids are dense indices in
// insertion order; callers that want lexicographic iteration insert names
// sorted (the parser and generator both do).
class Graph {
public:
    Graph() = default;
    explicit Graph(const std::vector<std::string>& names);

    VertexId add_vertex(std::string name);
    // Returns the edge index; inserting an existing edge returns its index.
    std::size_t add_edge(VertexId u, VertexId v);

    std::size_t num_vertices() const { return names_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::string& name(VertexId v) const { return names_.at(v); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<VertexId> find(std::string_view name) const;

    std::span<const VertexId> out(VertexId v) const { return out_[v]; }
    std::span<const VertexId> in(VertexId v) const { return in_[v]; }
    const std::vector<Edge>& edges() const { return edges_; }
    bool has_edge(VertexId u, VertexId v) const { return edge_index(u, v).has_value(); }
    std::optional<std::size_t> edge_index(VertexId u, VertexId v) const;

private:
    static std::uint64_t key(VertexId u, VertexId v) { return (std::uint64_t{u} << 32) | v; }

    std::vector<std::string> names_;
    std::unordered_map<std::string, VertexId> by_name_;
    std::vector<std::vector<VertexId>> out_;
    std::vector<std::vector<VertexId>> in_;
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, std::size_t> edge_ids_;
};

struct Problem {
    Graph graph;
    std::vector<std::string> agents;
    std::vector<VertexId> start;
    std::vector<VertexId> goal;

    std::size_t num_agents() const { return agents.size(); }
    std::optional<AgentId> find_agent(std::string_view name) const;
};

enum class SigmaKind { vertex_follow, edge_follow, safety };

struct SigmaMode {
    SigmaKind kind = SigmaKind::vertex_follow;
    int d = 0;

    static SigmaMode vf() { return {SigmaKind::vertex_follow, 0}; }
    static SigmaMode ef() { return {SigmaKind::edge_follow, 0}; }
    static SigmaMode sf(int d) { return {SigmaKind::safety, d}; }

    // "vf", "ef" or "sf:D".
    static SigmaMode parse(std::string_view text);
    std::string to_string() const;
    bool operator==(const SigmaMode&) const = default;
};

struct WeightedProblem {
    Problem problem;
    std::vector<int> delta;  // indexed like problem.graph.edges()
    SigmaMode sigma;

    int duration(VertexId u, VertexId v) const;
    int safety(VertexId u, VertexId v) const;

    // Unit durations everywhere.
    static WeightedProblem unit(const Problem& p, SigmaMode sigma);
};

// A problem as read from a file: durations are present only for weighted
// inputs, and the safety mode is chosen by the caller.
struct Instance {
    Problem problem;
    std::optional<std::vector<int>> delta;
    std::map<std::string, std::string> meta;

    bool weighted() const { return delta.has_value(); }
    WeightedProblem with_sigma(SigmaMode sigma) const;
};

// A stroll position: an original vertex (step == 0, from == to) or the
// auxiliary vertex `step` units into edge (from, to).
struct Position {
    VertexId from = 0;
    VertexId to = 0;
    int step = 0;

    static Position at(VertexId v) { return {v, v, 0}; }
    static Position transit(VertexId u, VertexId v, int k) { return {u, v, k}; }
    bool is_vertex() const { return step == 0; }
    VertexId vertex() const { return from; }
    auto operator<=>(const Position&) const = default;
};

struct Stroll {
    AgentId agent = 0;
    std::vector<Position> positions;

    std::size_t length() const { return positions.empty() ? 0 : positions.size() - 1; }
};

// strolls[a] belongs to agent a.
struct Plan {
    std::vector<Stroll> strolls;

    std::size_t length() const { return strolls.empty() ? 0 : strolls.front().length(); }
    bool operator==(const Plan& o) const;
};

Stroll make_stroll(AgentId agent, std::span<const VertexId> vertices);

struct Move {
    int depart;
    int arrive;
    auto operator<=>(const Move&) const = default;
};

enum class ConflictKind { vertex, swap, follow, sigma_follow };

const char* to_string(ConflictKind kind);

// For vertex conflicts `vertex` is the shared vertex and `index` the time.
// For swap conflicts agent `a` traverses (vertex, other) over [index,
// index_end] and agent `b` the reverse edge over [b_index, b_index_end].
// For (sigma-)follow conflicts agent `a` arrives at `vertex` at `index` and
// agent `b` departed it towards `other` at `b_index`.
struct Conflict {
    ConflictKind kind;
    AgentId a;
    AgentId b;
    VertexId vertex;
    VertexId other;
    int index;
    int index_end;
    int b_index;
    int b_index_end;
    bool operator==(const Conflict&) const = default;
};

struct ConflictReport {
    std::vector<Conflict> conflicts;

    bool empty() const { return conflicts.empty(); }
    std::size_t count(ConflictKind kind) const;
};

std::string describe(const Problem& p, const Conflict& c);

std::vector<std::string> validate_problem(const Problem& p);
std::vector<std::string> validate_problem(const WeightedProblem& wp);

// Vertices of the expanded graph: the original vertices first, followed by
// the auxiliary positions of each edge in edge order.
struct ExpandedGraph {
    Graph graph;
    std::vector<Position> positions;  // indexed by expanded vertex id
    std::map<Position, VertexId> ids;
};

ExpandedGraph expand_weighted_graph(const Graph& g, std::span<const int> delta);

std::vector<Move> moves_of(const Stroll& s, const WeightedProblem& wp);
// Structural variant: every change of original vertex is a move.
std::vector<Move> moves_of(const Stroll& s);

bool is_path_like(const Stroll& s);

int sigma_value(const WeightedProblem& wp, VertexId u, VertexId v);

// Throws std::invalid_argument on length mismatch or wrong endpoints.
ConflictReport verify_plan(const Problem& p, const Plan& plan, bool follow);
ConflictReport verify_wplan(const WeightedProblem& wp, const Plan& plan);

// Edge-weighted single-target distances (unit weights when delta is empty);
// unreachable vertices get -1.
std::vector<int> distances_to(const Graph& g, std::span<const int> delta, VertexId target);
std::vector<int> distances_from(const Graph& g, std::span<const int> delta, VertexId source);

}  // namespace mapf
