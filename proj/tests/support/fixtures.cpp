#include "fixtures.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace fx {

std::string data_path(const std::string& name) { return std::string(MAPF_TEST_DATA) + "/" + name; }

const Instance& tree() {
    static const Instance inst = parse_instance(read_file(data_path("tree.lp")));
    return inst;
}

VertexId vid(const Problem& p, const std::string& name) {
    auto v = p.graph.find(name);
    if (!v) throw std::invalid_argument("no vertex " + name);
    return *v;
}

Stroll stroll_of(const Problem& p, AgentId a, std::initializer_list<const char*> names) {
    std::vector<VertexId> vs;
    for (const char* n : names) vs.push_back(vid(p, n));
    return make_stroll(a, vs);
}

Plan tree_plan(int length) {
    const auto& p = tree().problem;
    switch (length) {
        case 4:
            return {{stroll_of(p, 0, {"v0_2", "v0_1", "v1_1", "v1_2", "v1_3"}),
                     stroll_of(p, 1, {"v1_0", "v1_1", "v0_1", "v0_0", "v0_0"})}};
        case 5:
            return {{stroll_of(p, 0, {"v0_2", "v0_1", "v1_1", "v1_2", "v1_3", "v1_3"}),
                     stroll_of(p, 1, {"v1_0", "v1_0", "v1_0", "v1_1", "v0_1", "v0_0"})}};
        case 6:
            return {{stroll_of(p, 0, {"v0_2", "v0_1", "v1_1", "v1_2", "v1_3", "v1_3", "v1_3"}),
                     stroll_of(p, 1, {"v1_0", "v1_0", "v1_0", "v1_0", "v1_1", "v0_1", "v0_0"})}};
    }
    throw std::invalid_argument("no such plan");
}

Event ev(const Problem& p, const std::string& agent, const std::string& vertex) {
    return {*p.find_agent(agent), vid(p, vertex)};
}

std::vector<EventPair> tree_chains() {
    const auto& p = tree().problem;
    std::vector<EventPair> pairs;
    auto chain = [&](const char* a, std::vector<const char*> vs) {
        for (std::size_t i = 0; i + 1 < vs.size(); ++i) pairs.emplace_back(ev(p, a, vs[i]), ev(p, a, vs[i + 1]));
    };
    chain("a", {"v0_2", "v0_1", "v1_1", "v1_2", "v1_3"});
    chain("b", {"v1_0", "v1_1", "v0_1", "v0_0"});
    return pairs;
}

OrderedEventSet tree_order(const std::string& a1, const std::string& v1, const std::string& a2,
                           const std::string& v2) {
    const auto& p = tree().problem;
    auto pairs = tree_chains();
    std::vector<Event> events;
    for (auto [x, y] : pairs) events.insert(events.end(), {x, y});
    if (!a1.empty()) pairs.emplace_back(ev(p, a1, v1), ev(p, a2, v2));
    return OrderedEventSet(events, pairs);
}

WeightedProblem three_vertex(std::initializer_list<std::tuple<const char*, const char*, const char*>> agents,
                     SigmaMode sigma) {
    WeightedProblem wp;
    auto& g = wp.problem.graph;
    for (const char* v : {"x", "y", "z"}) g.add_vertex(v);
    g.add_edge(0, 1);
    g.add_edge(1, 0);
    g.add_edge(2, 1);
    wp.delta = {2, 3, 1};
    wp.sigma = sigma;
    for (auto [name, s, t] : agents) {
        wp.problem.agents.push_back(name);
        wp.problem.start.push_back(*g.find(s));
        wp.problem.goal.push_back(*g.find(t));
    }
    return wp;
}

ArrivalTimeMapping amap(const Problem& p, std::initializer_list<std::tuple<const char*, const char*, int>> entries) {
    ArrivalTimeMapping m;
    for (auto [a, v, t] : entries) m.alpha[ev(p, a, v)] = t;
    return m;
}

Graph random_connected_graph(SplitMix64& rng, int n, int extra) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    Graph g(names);
    auto link = [&](VertexId u, VertexId v) {
        g.add_edge(u, v);
        g.add_edge(v, u);
    };
    for (int i = 1; i < n; ++i) link(static_cast<VertexId>(i), static_cast<VertexId>(rng.below(i)));
    for (int e = 0; e < extra && n > 1; ++e) {
        auto u = static_cast<VertexId>(rng.below(n)), v = static_cast<VertexId>(rng.below(n));
        if (u != v) link(u, v);
    }
    return g;
}

Problem random_problem(SplitMix64& rng, const Graph& g, int agents) {
    Problem p;
    p.graph = g;
    std::vector<VertexId> starts(g.num_vertices()), goals(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) starts[v] = goals[v] = v;
    rng.shuffle(starts);
    rng.shuffle(goals);
    for (int a = 0; a < agents; ++a) {
        p.agents.push_back("a" + std::to_string(a));
        p.start.push_back(starts[a]);
        p.goal.push_back(goals[a]);
    }
    return p;
}

std::vector<VertexId> random_simple_path(SplitMix64& rng, const Graph& g, VertexId from, VertexId to) {
    std::vector<char> seen(g.num_vertices(), 0);
    std::vector<VertexId> path;
    std::function<bool(VertexId)> dfs = [&](VertexId v) {
        seen[v] = 1;
        path.push_back(v);
        if (v == to) return true;
        std::vector<VertexId> next(g.out(v).begin(), g.out(v).end());
        rng.shuffle(next);
        for (auto w : next)
            if (!seen[w] && dfs(w)) return true;
        path.pop_back();
        return false;
    };
    dfs(from);
    return path;
}

std::optional<Plan> random_path_plan(SplitMix64& rng, const Problem& p, const std::vector<int>& delta,
                                     int max_wait) {
    std::vector<std::vector<Position>> strolls;
    for (AgentId a = 0; a < p.num_agents(); ++a) {
        auto path = random_simple_path(rng, p.graph, p.start[a], p.goal[a]);
        if (path.empty()) return std::nullopt;
        std::vector<Position> s{Position::at(path[0])};
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            int wait = static_cast<int>(rng.below(max_wait + 1));
            for (int k = 0; k < wait; ++k) s.push_back(s.back());
            auto e = *p.graph.edge_index(path[i], path[i + 1]);
            int d = delta.empty() ? 1 : delta[e];
            for (int k = 1; k < d; ++k) s.push_back(Position::transit(path[i], path[i + 1], k));
            s.push_back(Position::at(path[i + 1]));
        }
        strolls.push_back(std::move(s));
    }
    std::size_t n = 0;
    for (const auto& s : strolls) n = std::max(n, s.size() - 1);
    Plan plan;
    for (AgentId a = 0; a < p.num_agents(); ++a) {
        auto& s = strolls[a];
        while (s.size() <= n) s.push_back(s.back());
        plan.strolls.push_back({a, std::move(s)});
    }
    return plan;
}

bool reaches(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges, std::size_t from,
             std::size_t to) {
    std::vector<std::vector<std::size_t>> out(nodes);
    for (auto [u, v] : edges) out[u].push_back(v);
    std::vector<char> seen(nodes, 0);
    std::vector<std::size_t> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (auto w : out[v])
            if (!seen[w]) seen[w] = 1, stack.push_back(w);
    }
    return false;
}

bool diff_feasible(std::size_t vars, const std::vector<std::tuple<std::size_t, long long, std::size_t>>& cs) {
    std::vector<long long> dist(vars, 0);
    for (std::size_t round = 0; round <= vars; ++round) {
        bool changed = false;
        for (auto [x, d, y] : cs)
            if (dist[x] + d > dist[y]) dist[y] = dist[x] + d, changed = true;
        if (!changed) return true;
    }
    return false;
}

std::optional<std::vector<long long>> raise_to_feasible(
    std::vector<long long> value, const std::vector<std::tuple<std::size_t, long long, std::size_t>>& cs) {
    for (std::size_t round = 0; round <= value.size() + 1; ++round) {
        bool changed = false;
        for (auto [x, d, y] : cs)
            if (value[x] + d > value[y]) value[y] = value[x] + d, changed = true;
        if (!changed) return value;
    }
    return std::nullopt;
}

std::optional<bool> path_based_plan_exists(const Problem& p, std::size_t cap) {
    const auto k = p.num_agents();
    std::vector<std::vector<std::vector<VertexId>>> options(k);
    for (AgentId a = 0; a < k; ++a) {
        std::vector<VertexId> path{p.start[a]};
        std::vector<char> on(p.graph.num_vertices(), 0);
        on[p.start[a]] = 1;
        std::function<void(VertexId)> dfs = [&](VertexId v) {
            if (v == p.goal[a]) {
                options[a].push_back(path);
                return;
            }
            for (auto w : p.graph.out(v)) {
                if (on[w]) continue;
                on[w] = 1;
                path.push_back(w);
                dfs(w);
                path.pop_back();
                on[w] = 0;
            }
        };
        dfs(p.start[a]);
        if (options[a].empty()) return false;
    }
    std::size_t cases = 0;
    std::vector<std::size_t> pick(k, 0);
    for (;;) {
        // Shared (agent, agent, vertex) triples for this tuple.
        std::vector<std::tuple<AgentId, AgentId, VertexId>> shared;
        std::vector<Event> events;
        std::vector<EventPair> chains;
        std::vector<std::map<VertexId, VertexId>> succ(k);
        for (AgentId a = 0; a < k; ++a) {
            const auto& path = options[a][pick[a]];
            for (std::size_t i = 0; i < path.size(); ++i) {
                events.push_back({a, path[i]});
                if (i + 1 < path.size()) {
                    chains.push_back({{a, path[i]}, {a, path[i + 1]}});
                    succ[a][path[i]] = path[i + 1];
                }
            }
        }
        for (AgentId a = 0; a < k; ++a)
            for (AgentId b = a + 1; b < k; ++b)
                for (auto u : options[a][pick[a]])
                    for (auto w : options[b][pick[b]])
                        if (u == w) shared.emplace_back(a, b, u);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << shared.size()); ++mask) {
            if (++cases > cap) return std::nullopt;
            auto pairs = chains;
            bool ok = true;
            for (std::size_t i = 0; i < shared.size() && ok; ++i) {
                auto [a, b, u] = shared[i];
                AgentId first = (mask >> i) & 1 ? b : a, second = first == a ? b : a;
                auto it = succ[first].find(u);
                if (it == succ[first].end()) ok = false;  // first never leaves u
                else pairs.push_back({{first, it->second}, {second, u}});
            }
            if (!ok) continue;
            try {
                OrderedEventSet o(events, pairs);
                // Start events happen at time 0, so nothing may precede them.
                bool starts_first = true;
                for (AgentId a = 0; a < k; ++a)
                    for (const auto& e : o.events()) starts_first &= !o.precedes(e, {a, p.start[a]});
                if (starts_first && check_path_based(o, p) && check_conflict_free(o, p)) return true;
            } catch (const std::invalid_argument&) {
            }
        }
        std::size_t i = 0;
        while (i < k && ++pick[i] == options[i].size()) pick[i++] = 0;
        if (i == k) return false;
    }
}

}  // namespace fx
