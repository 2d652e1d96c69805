#include "mapf/arrival_map.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace mapf {

int ArrivalTimeMapping::makespan() const {
    int n = 0;
    for (const auto& [e, t] : alpha) n = std::max(n, t);
    return n;
}

namespace {

using Chains = std::map<AgentId, std::vector<Event>>;

Chains chains_of(const ArrivalTimeMapping& m) {
    Chains chains;
    for (const auto& [e, t] : m.alpha) chains[e.agent].push_back(e);
    for (auto& [a, chain] : chains)
        std::stable_sort(chain.begin(), chain.end(),
                         [&](const Event& x, const Event& y) { return m.at(x) < m.at(y); });
    return chains;
}

std::map<Event, Event> successors(const Chains& chains) {
    std::map<Event, Event> next;
    for (const auto& [a, chain] : chains)
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) next.emplace(chain[k], chain[k + 1]);
    return next;
}

}  // namespace

bool check_path_based_amap(const ArrivalTimeMapping& m, const WeightedProblem& wp) {
    const auto& p = wp.problem;
    auto chains = chains_of(m);
    for (const auto& [e, t] : m.alpha)
        if (e.agent >= p.num_agents() || e.vertex >= p.graph.num_vertices() || t < 0) return false;
    for (AgentId a = 0; a < p.num_agents(); ++a) {
        auto it = chains.find(a);
        if (it == chains.end()) return false;
        const auto& chain = it->second;
        if (chain.front().vertex != p.start[a] || chain.back().vertex != p.goal[a]) return false;
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
            auto u = chain[k].vertex, v = chain[k + 1].vertex;
            if (m.at(chain[k]) == m.at(chain[k + 1])) return false;
            if (!p.graph.has_edge(u, v)) return false;
            if (m.at(chain[k]) + wp.duration(u, v) > m.at(chain[k + 1])) return false;
        }
    }
    return true;
}

DepartureTimes departure_times(const ArrivalTimeMapping& m, const WeightedProblem& wp) {
    if (!check_path_based_amap(m, wp)) throw std::invalid_argument("arrival time mapping is not path-based");
    const int n = m.makespan();
    auto next = successors(chains_of(m));
    DepartureTimes beta;
    for (const auto& [e, t] : m.alpha) {
        auto it = next.find(e);
        beta[e] = it == next.end() ? n : m.at(it->second) - wp.duration(e.vertex, it->second.vertex);
    }
    return beta;
}

ConflictReport check_conflicts_amap(const ArrivalTimeMapping& m, const WeightedProblem& wp) {
    auto beta = departure_times(m, wp);
    auto next = successors(chains_of(m));
    std::map<VertexId, std::vector<Event>> at_vertex;
    for (const auto& [e, t] : m.alpha) at_vertex[e.vertex].push_back(e);
    auto in_half_open = [](int x, int lo, int hi) { return lo < x && x <= hi; };

    ConflictReport report;
    for (const auto& [v, events] : at_vertex)
        for (const auto& x : events)
            for (const auto& y : events) {
                if (x.agent == y.agent) continue;
                int ax = m.at(x), ay = m.at(y), by = beta.at(y);
                if (ay <= ax && ax <= by)
                    report.conflicts.push_back({ConflictKind::vertex, x.agent, y.agent, v, v, ax, ax, ay, by});
            }

    for (const auto& [xu, xv] : next)
        for (const auto& [yv, yu] : next) {
            if (xu.agent == yv.agent || xu.vertex != yu.vertex || xv.vertex != yv.vertex) continue;
            int arrive = m.at(xv);
            if (in_half_open(arrive, beta.at(yv), m.at(yu)))
                report.conflicts.push_back({ConflictKind::swap, xu.agent, yv.agent, xu.vertex, xv.vertex,
                                            beta.at(xu), arrive, beta.at(yv), m.at(yu)});
        }

    for (const auto& [yv, yw] : next) {
        int depart = beta.at(yv);
        int safe_until = depart + sigma_value(wp, yv.vertex, yw.vertex);
        for (const auto& x : at_vertex[yv.vertex]) {
            if (x.agent == yv.agent) continue;
            if (in_half_open(m.at(x), depart, safe_until))
                report.conflicts.push_back({ConflictKind::sigma_follow, x.agent, yv.agent, yv.vertex, yw.vertex,
                                            m.at(x), m.at(x), depart, safe_until});
        }
    }
    return report;
}

Plan amap_to_plan(const ArrivalTimeMapping& m, const WeightedProblem& wp) {
    auto beta = departure_times(m, wp);
    auto chains = chains_of(m);
    const int n = m.makespan();
    Plan plan;
    for (AgentId a = 0; a < wp.problem.num_agents(); ++a) {
        const auto& chain = chains.at(a);
        if (m.at(chain.front()) != 0)
            throw std::invalid_argument("start event of " + wp.problem.agents[a] + " is not at time 0");
        Stroll s{a, {}};
        for (std::size_t k = 0; k < chain.size(); ++k) {
            auto u = chain[k].vertex;
            for (int i = m.at(chain[k]); i <= beta.at(chain[k]); ++i) s.positions.push_back(Position::at(u));
            if (k + 1 == chain.size()) break;
            auto v = chain[k + 1].vertex;
            for (int i = beta.at(chain[k]) + 1; i < m.at(chain[k + 1]); ++i)
                s.positions.push_back(Position::transit(u, v, i - beta.at(chain[k])));
        }
        if (s.length() != static_cast<std::size_t>(n)) throw std::logic_error("stroll length disagrees with makespan");
        plan.strolls.push_back(std::move(s));
    }
    return plan;
}

ArrivalTimeMapping plan_to_amap(const WeightedProblem& wp, const Plan& plan) {
    const auto& p = wp.problem;
    if (plan.strolls.size() != p.num_agents()) throw std::invalid_argument("plan does not cover every agent");
    for (const auto& s : plan.strolls)
        if (!is_path_like(s)) throw std::invalid_argument("plan is not path-based");
    const auto n = plan.length();
    if (n > 0 && std::all_of(plan.strolls.begin(), plan.strolls.end(), [&](const Stroll& s) {
            return s.positions[n - 1] == Position::at(p.goal[s.agent]);
        }))
        throw std::invalid_argument("plan has excess length");
    ArrivalTimeMapping m;
    for (const auto& s : plan.strolls)
        for (std::size_t i = 0; i < s.positions.size(); ++i)
            if (s.positions[i].is_vertex()) m.alpha.try_emplace(Event{s.agent, s.positions[i].vertex()}, static_cast<int>(i));
    return m;
}

bool check_vf_sufficient(const ArrivalTimeMapping& m, const WeightedProblem& wp) {
    auto beta = departure_times(m, wp);
    auto next = successors(chains_of(m));
    // x leaves u, and its safety period passes, before y arrives.
    auto clears = [&](const Event& x, const Event& y) {
        auto it = next.find(x);
        return it != next.end() && beta.at(x) + sigma_value(wp, x.vertex, it->second.vertex) < m.at(y);
    };
    for (const auto& [x, tx] : m.alpha)
        for (const auto& [y, ty] : m.alpha)
            if (x < y && x.vertex == y.vertex && x.agent != y.agent && !clears(x, y) && !clears(y, x)) return false;
    return true;
}

bool check_swap_sufficient(const ArrivalTimeMapping& m, const WeightedProblem& wp) {
    auto beta = departure_times(m, wp);
    auto next = successors(chains_of(m));
    auto clears = [&](const Event& x, const Event& y) {
        auto it = next.find(x);
        return it != next.end() && beta.at(x) + sigma_value(wp, x.vertex, it->second.vertex) < m.at(y);
    };
    // For x moving u->v and y moving v->u, one of them has to have cleared
    // the other's source vertex (its own target) before the other arrives there.
    for (const auto& [xu, xv] : next)
        for (const auto& [yv, yu] : next) {
            if (xu.agent == yv.agent || xu.vertex != yu.vertex || xv.vertex != yv.vertex) continue;
            if (!clears(xv, yv) && !clears(yu, xu)) return false;
        }
    return true;
}

bool compatible(const ArrivalTimeMapping& m1, const ArrivalTimeMapping& m2) {
    if (m1.alpha.size() != m2.alpha.size() ||
        !std::equal(m1.alpha.begin(), m1.alpha.end(), m2.alpha.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first; }))
        throw std::invalid_argument("compatibility needs identical event sets");
    for (const auto& [x, tx] : m1.alpha)
        for (const auto& [y, ty] : m1.alpha)
            if ((x.agent == y.agent || x.vertex == y.vertex) && (tx < ty) != (m2.at(x) < m2.at(y))) return false;
    return true;
}

ArrivalTimeMapping minimal_compatible_amap(const ArrivalTimeMapping& m, const WeightedProblem& wp) {
    if (!check_conflicts_amap(m, wp).empty()) throw std::invalid_argument("mapping has conflicts");
    auto next = successors(chains_of(m));
    struct Arc {
        Event from;
        int weight;
        Event to;
    };
    std::vector<Arc> arcs;
    for (const auto& [u, v] : next) arcs.push_back({u, wp.duration(u.vertex, v.vertex), v});
    for (const auto& [x, tx] : m.alpha)
        for (const auto& [y, ty] : m.alpha) {
            if (x.vertex != y.vertex || x.agent == y.agent || tx >= ty) continue;
            auto it = next.find(x);
            if (it == next.end()) throw std::invalid_argument("mapping has a vertex conflict");
            auto w = it->second.vertex;
            arcs.push_back({it->second, sigma_value(wp, x.vertex, w) - wp.duration(x.vertex, w) + 1, y});
        }

    ArrivalTimeMapping least;
    for (const auto& [e, t] : m.alpha) least.alpha[e] = 0;
    for (std::size_t round = 0;; ++round) {
        bool changed = false;
        for (const auto& arc : arcs) {
            int need = least.alpha[arc.from] + arc.weight;
            if (need > least.alpha[arc.to]) {
                least.alpha[arc.to] = need;
                changed = true;
            }
        }
        if (!changed) break;
        if (round > m.alpha.size()) throw std::logic_error("resolution constraints are infeasible");
    }
    return least;
}

std::string dump_witness(const ArrivalTimeMapping& m, const Problem& p) {
    std::string out;
    for (const auto& [e, t] : m.alpha)
        out += "(" + p.agents[e.agent] + "," + p.graph.name(e.vertex) + ")=" + std::to_string(t) + "\n";
    return out;
}

}  // namespace mapf
