#include "mapf/model.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace mapf {

Graph::Graph(const std::vector<std::string>& names) {
    for (const auto& n : names) add_vertex(n);
}

VertexId Graph::add_vertex(std::string name) {
    if (by_name_.count(name)) throw std::invalid_argument("duplicate vertex " + name);
    auto id = static_cast<VertexId>(names_.size());
    by_name_.emplace(name, id);
    names_.push_back(std::move(name));
    out_.emplace_back();
    in_.emplace_back();
    return id;
}

std::size_t Graph::add_edge(VertexId u, VertexId v) {
    if (u >= names_.size() || v >= names_.size()) throw std::out_of_range("edge endpoint out of range");
    if (auto it = edge_ids_.find(key(u, v)); it != edge_ids_.end()) return it->second;
    std::size_t id = edges_.size();
    edges_.push_back({u, v});
    edge_ids_.emplace(key(u, v), id);
    out_[u].push_back(v);
    in_[v].push_back(u);
    return id;
}

std::optional<VertexId> Graph::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Graph::edge_index(VertexId u, VertexId v) const {
    auto it = edge_ids_.find(key(u, v));
    if (it == edge_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<AgentId> Problem::find_agent(std::string_view name) const {
    for (AgentId a = 0; a < agents.size(); ++a)
        if (agents[a] == name) return a;
    return std::nullopt;
}

SigmaMode SigmaMode::parse(std::string_view text) {
    if (text == "vf") return vf();
    if (text == "ef") return ef();
    if (text.starts_with("sf:")) {
        std::string rest(text.substr(3));
        std::size_t used = 0;
        int d = -1;
        try {
            d = std::stoi(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == rest.size() && !rest.empty() && d >= 0) return sf(d);
    }
    throw std::invalid_argument("bad sigma mode '" + std::string(text) + "' (expected vf, ef or sf:D)");
}

std::string SigmaMode::to_string() const {
    switch (kind) {
        case SigmaKind::vertex_follow: return "vf";
        case SigmaKind::edge_follow: return "ef";
        case SigmaKind::safety: return "sf:" + std::to_string(d);
    }
    return "?";
}

int WeightedProblem::duration(VertexId u, VertexId v) const {
    auto e = problem.graph.edge_index(u, v);
    if (!e) throw std::invalid_argument("no edge " + problem.graph.name(u) + "->" + problem.graph.name(v));
    return delta.at(*e);
}

int WeightedProblem::safety(VertexId u, VertexId v) const { return sigma_value(*this, u, v); }

WeightedProblem WeightedProblem::unit(const Problem& p, SigmaMode sigma) {
    return {p, std::vector<int>(p.graph.num_edges(), 1), sigma};
}

WeightedProblem Instance::with_sigma(SigmaMode sigma) const {
    if (delta) return {problem, *delta, sigma};
    return WeightedProblem::unit(problem, sigma);
}

bool Plan::operator==(const Plan& o) const {
    if (strolls.size() != o.strolls.size()) return false;
    for (std::size_t i = 0; i < strolls.size(); ++i)
        if (strolls[i].agent != o.strolls[i].agent || strolls[i].positions != o.strolls[i].positions) return false;
    return true;
}

Stroll make_stroll(AgentId agent, std::span<const VertexId> vertices) {
    Stroll s{agent, {}};
    for (auto v : vertices) s.positions.push_back(Position::at(v));
    return s;
}

const char* to_string(ConflictKind kind) {
    switch (kind) {
        case ConflictKind::vertex: return "vertex";
        case ConflictKind::swap: return "swap";
        case ConflictKind::follow: return "follow";
        case ConflictKind::sigma_follow: return "sigma-follow";
    }
    return "?";
}

std::size_t ConflictReport::count(ConflictKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(conflicts.begin(), conflicts.end(), [&](const Conflict& c) { return c.kind == kind; }));
}

std::string describe(const Problem& p, const Conflict& c) {
    const auto& g = p.graph;
    const auto& a = p.agents.at(c.a);
    const auto& b = p.agents.at(c.b);
    auto num = [](int x) { return std::to_string(x); };
    switch (c.kind) {
        case ConflictKind::vertex:
            return "vertex conflict: " + a + " and " + b + " at " + g.name(c.vertex) + " at " + num(c.index);
        case ConflictKind::swap:
            return "swap conflict: " + a + " " + g.name(c.vertex) + "->" + g.name(c.other) + " over (" +
                   num(c.index) + "," + num(c.index_end) + "], " + b + " reverse over (" + num(c.b_index) + "," +
                   num(c.b_index_end) + "]";
        case ConflictKind::follow:
        case ConflictKind::sigma_follow:
            return std::string(to_string(c.kind)) + " conflict: " + a + " arrives at " + g.name(c.vertex) + " at " +
                   num(c.index) + ", " + b + " departed it towards " + g.name(c.other) + " at " + num(c.b_index);
    }
    return "conflict";
}

std::vector<std::string> validate_problem(const Problem& p) {
    std::vector<std::string> errors;
    const auto nv = p.graph.num_vertices();
    for (const auto& e : p.graph.edges())
        if (e.from == e.to) errors.push_back("reflexive edge at " + p.graph.name(e.from));
    if (p.start.size() != p.agents.size() || p.goal.size() != p.agents.size()) {
        errors.push_back("start/goal not defined for every agent");
        return errors;
    }
    std::set<std::string> names;
    for (const auto& a : p.agents)
        if (!names.insert(a).second) errors.push_back("duplicate agent " + a);
    std::map<VertexId, AgentId> starts, goals;
    for (AgentId a = 0; a < p.agents.size(); ++a) {
        if (p.start[a] >= nv) errors.push_back("dangling vertex reference in start of " + p.agents[a]);
        else if (auto [it, fresh] = starts.emplace(p.start[a], a); !fresh)
            errors.push_back("duplicate start " + p.graph.name(p.start[a]) + " for " + p.agents[it->second] +
                             " and " + p.agents[a]);
        if (p.goal[a] >= nv) errors.push_back("dangling vertex reference in goal of " + p.agents[a]);
        else if (auto [it, fresh] = goals.emplace(p.goal[a], a); !fresh)
            errors.push_back("duplicate goal " + p.graph.name(p.goal[a]) + " for " + p.agents[it->second] + " and " +
                             p.agents[a]);
    }
    return errors;
}

std::vector<std::string> validate_problem(const WeightedProblem& wp) {
    auto errors = validate_problem(wp.problem);
    const auto& g = wp.problem.graph;
    if (wp.delta.size() != g.num_edges()) {
        errors.push_back("durations not defined on exactly the edge set");
    } else {
        for (std::size_t e = 0; e < wp.delta.size(); ++e)
            if (wp.delta[e] < 1)
                errors.push_back("non-positive duration on " + g.name(g.edges()[e].from) + "->" +
                                 g.name(g.edges()[e].to));
    }
    if (wp.sigma.kind == SigmaKind::safety && wp.sigma.d < 0) errors.push_back("negative safety period");
    return errors;
}

ExpandedGraph expand_weighted_graph(const Graph& g, std::span<const int> delta) {
    ExpandedGraph x;
    auto add = [&](const Position& pos, std::string name) {
        auto id = x.graph.add_vertex(std::move(name));
        x.positions.push_back(pos);
        x.ids.emplace(pos, id);
        return id;
    };
    for (VertexId v = 0; v < g.num_vertices(); ++v) add(Position::at(v), g.name(v));
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        auto [u, v] = g.edges()[e];
        for (int k = 1; k < delta[e]; ++k)
            add(Position::transit(u, v, k), "aux(" + g.name(u) + "," + g.name(v) + "," + std::to_string(k) + ")");
    }
    for (VertexId v = 0; v < g.num_vertices(); ++v) x.graph.add_edge(v, v);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
        auto [u, v] = g.edges()[e];
        VertexId prev = u;
        for (int k = 1; k < delta[e]; ++k) {
            VertexId cur = x.ids.at(Position::transit(u, v, k));
            x.graph.add_edge(prev, cur);
            prev = cur;
        }
        x.graph.add_edge(prev, v);
    }
    return x;
}

std::vector<Move> moves_of(const Stroll& s) {
    std::vector<Move> moves;
    int last = -1;
    for (int i = 0; i < static_cast<int>(s.positions.size()); ++i) {
        if (!s.positions[i].is_vertex()) continue;
        if (last >= 0 && s.positions[last].vertex() != s.positions[i].vertex()) moves.push_back({last, i});
        last = i;
    }
    return moves;
}

std::vector<Move> moves_of(const Stroll& s, const WeightedProblem& wp) {
    auto moves = moves_of(s);
    std::erase_if(moves, [&](const Move& m) {
        return !wp.problem.graph.has_edge(s.positions[m.depart].vertex(), s.positions[m.arrive].vertex());
    });
    return moves;
}

bool is_path_like(const Stroll& s) {
    std::map<Position, std::pair<std::size_t, std::size_t>> span;  // first index, count
    for (std::size_t i = 0; i < s.positions.size(); ++i) {
        auto [it, fresh] = span.try_emplace(s.positions[i], i, 0);
        auto& [first, count] = it->second;
        ++count;
        if (i - first + 1 != count) return false;
    }
    return true;
}

int sigma_value(const WeightedProblem& wp, VertexId u, VertexId v) {
    switch (wp.sigma.kind) {
        case SigmaKind::vertex_follow: return wp.duration(u, v);
        case SigmaKind::edge_follow: return wp.duration(u, v) - 1;
        case SigmaKind::safety: return wp.sigma.d;
    }
    return 0;
}

namespace {

void check_shape(const Problem& p, const Plan& plan) {
    if (plan.strolls.size() != p.num_agents()) throw std::invalid_argument("plan does not cover every agent");
    const auto n = plan.length();
    for (AgentId a = 0; a < plan.strolls.size(); ++a) {
        const auto& s = plan.strolls[a];
        if (s.agent != a) throw std::invalid_argument("stroll order does not match agents");
        if (s.positions.empty() || s.length() != n) throw std::invalid_argument("plan length mismatch");
        if (s.positions.front() != Position::at(p.start[a]))
            throw std::invalid_argument("stroll of " + p.agents[a] + " does not begin at its start");
        if (s.positions.back() != Position::at(p.goal[a]))
            throw std::invalid_argument("stroll of " + p.agents[a] + " does not end at its goal");
    }
}

bool step_ok(const WeightedProblem& wp, const Position& x, const Position& y) {
    const auto& g = wp.problem.graph;
    if (x.is_vertex()) {
        if (y == x) return true;
        if (y.is_vertex()) return g.has_edge(x.vertex(), y.vertex()) && wp.duration(x.vertex(), y.vertex()) == 1;
        return y.from == x.vertex() && y.step == 1 && g.has_edge(y.from, y.to) && wp.duration(y.from, y.to) > 1;
    }
    if (!g.has_edge(x.from, x.to)) return false;
    int d = wp.duration(x.from, x.to);
    if (x.step + 1 < d) return y == Position::transit(x.from, x.to, x.step + 1);
    return y == Position::at(x.to);
}

void check_steps(const WeightedProblem& wp, const Plan& plan) {
    for (const auto& s : plan.strolls)
        for (std::size_t i = 0; i + 1 < s.positions.size(); ++i)
            if (!step_ok(wp, s.positions[i], s.positions[i + 1]))
                throw std::invalid_argument("stroll of " + wp.problem.agents[s.agent] + " leaves the graph at step " +
                                            std::to_string(i));
}

void add_vertex_conflicts(const Plan& plan, ConflictReport& report) {
    const auto n = static_cast<int>(plan.length());
    const auto k = plan.strolls.size();
    for (int i = 0; i <= n; ++i)
        for (AgentId a = 0; a < k; ++a)
            for (AgentId b = a + 1; b < k; ++b) {
                const auto& pa = plan.strolls[a].positions[i];
                if (pa.is_vertex() && pa == plan.strolls[b].positions[i])
                    report.conflicts.push_back({ConflictKind::vertex, a, b, pa.vertex(), pa.vertex(), i, i, i, i});
            }
}

}  // namespace

ConflictReport verify_plan(const Problem& p, const Plan& plan, bool follow) {
    check_shape(p, plan);
    auto unit = WeightedProblem::unit(p, SigmaMode::sf(0));
    for (const auto& s : plan.strolls)
        for (const auto& pos : s.positions)
            if (!pos.is_vertex()) throw std::invalid_argument("unweighted plan contains an auxiliary position");
    check_steps(unit, plan);

    ConflictReport report;
    add_vertex_conflicts(plan, report);
    const auto n = static_cast<int>(plan.length());
    const auto k = plan.strolls.size();
    for (int i = 0; i < n; ++i) {
        for (AgentId a = 0; a < k; ++a) {
            VertexId a0 = plan.strolls[a].positions[i].vertex(), a1 = plan.strolls[a].positions[i + 1].vertex();
            if (a0 == a1) continue;
            for (AgentId b = 0; b < k; ++b) {
                if (b == a) continue;
                VertexId b0 = plan.strolls[b].positions[i].vertex(), b1 = plan.strolls[b].positions[i + 1].vertex();
                if (b0 == b1) continue;
                if (a < b && a1 == b0 && a0 == b1)
                    report.conflicts.push_back({ConflictKind::swap, a, b, a0, a1, i, i + 1, i, i + 1});
                if (follow && a1 == b0)
                    report.conflicts.push_back({ConflictKind::follow, a, b, a1, b1, i + 1, i + 1, i, i + 1});
            }
        }
    }
    return report;
}

ConflictReport verify_wplan(const WeightedProblem& wp, const Plan& plan) {
    const auto& p = wp.problem;
    check_shape(p, plan);
    check_steps(wp, plan);

    ConflictReport report;
    add_vertex_conflicts(plan, report);
    const auto k = plan.strolls.size();
    std::vector<std::vector<Move>> moves(k);
    for (AgentId a = 0; a < k; ++a) moves[a] = moves_of(plan.strolls[a], wp);
    auto at = [&](AgentId a, int i) { return plan.strolls[a].positions[i].vertex(); };
    auto in_half_open = [](int x, int lo, int hi) { return lo < x && x <= hi; };

    for (AgentId a = 0; a < k; ++a)
        for (AgentId b = a + 1; b < k; ++b)
            for (const auto& ma : moves[a])
                for (const auto& mb : moves[b]) {
                    if (at(a, ma.depart) != at(b, mb.arrive) || at(a, ma.arrive) != at(b, mb.depart)) continue;
                    if (in_half_open(ma.arrive, mb.depart, mb.arrive) || in_half_open(mb.arrive, ma.depart, ma.arrive))
                        report.conflicts.push_back({ConflictKind::swap, a, b, at(a, ma.depart), at(a, ma.arrive),
                                                    ma.depart, ma.arrive, mb.depart, mb.arrive});
                }

    for (AgentId a = 0; a < k; ++a)
        for (AgentId b = 0; b < k; ++b) {
            if (a == b) continue;
            for (const auto& ma : moves[a])
                for (const auto& mb : moves[b]) {
                    VertexId w = at(a, ma.arrive);
                    if (w != at(b, mb.depart)) continue;
                    int s = sigma_value(wp, w, at(b, mb.arrive));
                    if (in_half_open(ma.arrive, mb.depart, mb.depart + s))
                        report.conflicts.push_back({ConflictKind::sigma_follow, a, b, w, at(b, mb.arrive), ma.arrive,
                                                    ma.arrive, mb.depart, mb.arrive});
                }
        }
    return report;
}

namespace {

std::vector<int> dijkstra(const Graph& g, std::span<const int> delta, VertexId root, bool reverse) {
    std::vector<int> dist(g.num_vertices(), -1);
    if (root >= g.num_vertices()) return dist;
    using Item = std::pair<int, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[root] = 0;
    queue.push({0, root});
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d != dist[v]) continue;
        for (auto w : reverse ? g.in(v) : g.out(v)) {
            auto e = reverse ? g.edge_index(w, v) : g.edge_index(v, w);
            int len = delta.empty() ? 1 : delta[*e];
            if (dist[w] < 0 || d + len < dist[w]) {
                dist[w] = d + len;
                queue.push({dist[w], w});
            }
        }
    }
    return dist;
}

}  // namespace

std::vector<int> distances_to(const Graph& g, std::span<const int> delta, VertexId target) {
    return dijkstra(g, delta, target, true);
}

std::vector<int> distances_from(const Graph& g, std::span<const int> delta, VertexId source) {
    return dijkstra(g, delta, source, false);
}

}  // namespace mapf
