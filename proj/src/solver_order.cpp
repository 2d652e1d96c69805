#include "mapf/solver_order.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

#include "mapf/dag.hpp"
#include "mapf/diff_logic.hpp"
#include "mapf/rng.hpp"

namespace mapf {

namespace {

bool enters(const std::vector<VertexId>& path, VertexId u) {
    auto it = std::find(path.begin(), path.end(), u);
    return it != path.end() && it != path.begin();
}

// Orientations forced by the start and goal rules for agents x, y sharing u:
// {x first forced, y first forced}.
std::pair<bool, bool> forced_at(const Problem& p, AgentId x, const std::vector<VertexId>& px, AgentId y,
                                const std::vector<VertexId>& py, VertexId u) {
    bool x_first = (p.start[x] == u && enters(py, u)) || (p.goal[y] == u && enters(px, u));
    bool y_first = (p.start[y] == u && enters(px, u)) || (p.goal[x] == u && enters(py, u));
    return {x_first, y_first};
}

}  // namespace

ForcedResolves forced_resolves(const Problem& p, const PathChoice& choice) {
    ForcedResolves out;
    for (AgentId a = 0; a < choice.size(); ++a)
        for (AgentId b = a + 1; b < choice.size(); ++b)
            for (auto u : choice[a]) {
                if (std::find(choice[b].begin(), choice[b].end(), u) == choice[b].end()) continue;
                auto [a_first, b_first] = forced_at(p, a, choice[a], b, choice[b], u);
                if (a_first && b_first) out.contradictory = true;
                if (a_first) out.forced.push_back({a, b, u});
                if (b_first) out.forced.push_back({b, a, u});
                if (!a_first && !b_first) out.open.push_back({a, b, u});
            }
    std::sort(out.forced.begin(), out.forced.end());
    std::sort(out.open.begin(), out.open.end());
    return out;
}

std::vector<EventPair> order_generators(const Problem& p, const PathChoice& paths, const std::vector<Resolve>& resolves) {
    std::vector<EventPair> rel;
    for (AgentId a = 0; a < paths.size(); ++a)
        for (std::size_t i = 0; i + 1 < paths[a].size(); ++i)
            rel.emplace_back(Event{a, paths[a][i]}, Event{a, paths[a][i + 1]});
    for (const auto& r : resolves) {
        const auto& path = paths.at(r.first);
        auto it = std::find(path.begin(), path.end(), r.vertex);
        if (it == path.end() || it + 1 == path.end())
            throw std::invalid_argument("resolve for " + p.agents[r.first] + " without a departure");
        rel.emplace_back(Event{r.first, *(it + 1)}, Event{r.second, r.vertex});
    }
    return rel;
}

namespace {

struct AcEngine {
    using Mark = DagState::Mark;
    DagState dag;
    explicit AcEngine(std::size_t nodes) : dag(nodes) {}
    bool add(std::size_t from, std::int64_t, std::size_t to) { return dag.add_edge(from, to).accepted; }
    void touch(std::size_t) {}
    bool anchor(std::size_t, std::size_t) { return true; }
    Mark checkpoint() { return dag.checkpoint(); }
    void rollback(const Mark& m) { dag.rollback(m); }
};

struct DlEngine {
    using Mark = DiffSystem::Mark;
    DiffSystem ds;
    explicit DlEngine(std::size_t nodes) { ds.reserve_vars(nodes); }
    bool add(std::size_t from, std::int64_t w, std::size_t to) { return ds.add(from, w, to).accepted; }
    void touch(std::size_t v) { ds.add(v, 0, v); }
    // Start no later than goal; keeps stationary agents in the witness.
    bool anchor(std::size_t start, std::size_t goal) { return ds.add(start, 0, goal).accepted; }
    Mark checkpoint() { return ds.checkpoint(); }
    void rollback(const Mark& m) { ds.rollback(m); }
};

// Backtracking over per-agent simple paths and the orientation of every
// shared vertex. `guard` adds the opposing-move rule: for x moving u->v and
// y moving v->u, x must leave v before y gets there or y must leave u before
// x gets there.
template <class Engine>
class OrderSearch {
public:
    OrderSearch(const WeightedProblem& wp, bool guard, const OrderConfig& cfg, Budget& budget)
        : wp_(wp), p_(wp.problem), k_(p_.num_agents()), nv_(p_.graph.num_vertices()), guard_(guard),
          budget_(budget), engine_(k_ * nv_) {
        for (AgentId a = 0; a < k_; ++a)
            enums_.emplace_back(p_.graph, wp_.delta, p_.start[a], p_.goal[a], cfg.path_budget);
        path_.assign(k_, nullptr);
        pos_.assign(k_, std::vector<int>(nv_, -1));
        cost_.assign(k_, std::vector<int>(nv_, 0));
        visitors_.resize(nv_);

        std::vector<std::pair<int, AgentId>> keyed;
        for (AgentId a = 0; a < k_; ++a) {
            auto* first = enums_[a].get(0);
            keyed.emplace_back(first ? enums_[a].cost(0) : std::numeric_limits<int>::max(), a);
        }
        if (cfg.seed != 0) {
            SplitMix64 rng(cfg.seed);
            rng.shuffle(keyed);
        }
        std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
        for (auto [c, a] : keyed) order_.push_back(a);
    }

    Verdict run() { return dfs(0); }

    std::uint64_t backtracks() const { return backtracks_; }
    Engine& engine() { return engine_; }

    PathChoice paths() const {
        PathChoice out;
        for (AgentId a = 0; a < k_; ++a) out.push_back(*path_[a]);
        return out;
    }

    std::vector<Resolve> resolves() const {
        std::vector<Resolve> out;
        for (const auto& [key, first] : decided_) {
            auto [a, b, u] = unpack(key);
            out.push_back({first, first == a ? b : a, u});
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    struct Guard {
        AgentId x;  // moves u->v; the other agent of the pair moves v->u
        VertexId u;
        VertexId v;
    };

    struct Mark {
        typename Engine::Mark engine;
        std::size_t decisions, open, visits, assigned, guards;
    };

    std::uint64_t pack(AgentId a, AgentId b, VertexId u) const {
        if (a > b) std::swap(a, b);
        return (std::uint64_t{a} * k_ + b) * nv_ + u;
    }
    std::tuple<AgentId, AgentId, VertexId> unpack(std::uint64_t key) const {
        auto u = static_cast<VertexId>(key % nv_);
        key /= nv_;
        return {static_cast<AgentId>(key / k_), static_cast<AgentId>(key % k_), u};
    }
    std::uint64_t pair_key(AgentId a, AgentId b) const {
        if (a > b) std::swap(a, b);
        return std::uint64_t{a} * k_ + b;
    }
    std::size_t var(AgentId a, VertexId v) const { return std::size_t{a} * nv_ + v; }

    Mark checkpoint() {
        return {engine_.checkpoint(), decision_trail_.size(), open_.size(), visit_trail_.size(),
                assigned_.size(), guard_trail_.size()};
    }

    void rollback(const Mark& m) {
        engine_.rollback(m.engine);
        while (decision_trail_.size() > m.decisions) {
            decided_.erase(decision_trail_.back());
            decision_trail_.pop_back();
        }
        open_.resize(m.open);
        while (visit_trail_.size() > m.visits) {
            visitors_[visit_trail_.back()].pop_back();
            visit_trail_.pop_back();
        }
        while (assigned_.size() > m.assigned) {
            AgentId a = assigned_.back();
            assigned_.pop_back();
            for (auto v : *path_[a]) pos_[a][v] = -1;
            path_[a] = nullptr;
        }
        while (guard_trail_.size() > m.guards) {
            guards_[guard_trail_.back()].pop_back();
            guard_trail_.pop_back();
        }
    }

    std::optional<AgentId> decided(AgentId a, AgentId b, VertexId u) const {
        auto it = decided_.find(pack(a, b, u));
        if (it == decided_.end()) return std::nullopt;
        return it->second;
    }

    // Records that `first` leaves u before `second` arrives, then follows
    // the guards this decision triggers.
    bool decide(AgentId first, AgentId second, VertexId u) {
        std::deque<std::tuple<AgentId, AgentId, VertexId>> work{{first, second, u}};
        while (!work.empty()) {
            auto [x, y, w] = work.front();
            work.pop_front();
            if (auto d = decided(x, y, w)) {
                if (*d != x) return false;
                continue;
            }
            int i = pos_[x][w];
            if (i < 0 || i + 1 >= static_cast<int>(path_[x]->size())) return false;
            VertexId next = (*path_[x])[i + 1];
            auto key = pack(x, y, w);
            decided_.emplace(key, x);
            decision_trail_.push_back(key);
            std::int64_t weight = sigma_value(wp_, w, next) - wp_.duration(w, next) + 1;
            if (!engine_.add(var(x, next), weight, var(y, w))) return false;
            if (!guard_) continue;
            auto git = guards_.find(pair_key(x, y));
            if (git == guards_.end()) continue;
            for (const auto& g : git->second) {
                AgentId gx = g.x, gy = gx == x ? y : x;
                if (w != g.u && w != g.v) continue;
                auto at_v = decided(gx, gy, g.v), at_u = decided(gx, gy, g.u);
                bool bad_v = at_v && *at_v == gy, bad_u = at_u && *at_u == gx;
                if (bad_v && bad_u) return false;
                if (bad_v && !at_u) work.emplace_back(gy, gx, g.u);
                if (bad_u && !at_v) work.emplace_back(gx, gy, g.v);
            }
        }
        return true;
    }

    bool assign(AgentId a, const std::vector<VertexId>* path) {
        path_[a] = path;
        assigned_.push_back(a);
        const auto& pa = *path;
        int c = 0;
        for (std::size_t i = 0; i < pa.size(); ++i) {
            pos_[a][pa[i]] = static_cast<int>(i);
            cost_[a][pa[i]] = c;
            if (i + 1 < pa.size()) c += wp_.duration(pa[i], pa[i + 1]);
        }
        engine_.touch(var(a, pa.front()));
        for (std::size_t i = 0; i + 1 < pa.size(); ++i)
            if (!engine_.add(var(a, pa[i]), wp_.duration(pa[i], pa[i + 1]), var(a, pa[i + 1]))) return false;
        if (!engine_.anchor(var(a, pa.front()), var(a, pa.back()))) return false;

        if (guard_)
            for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
                VertexId u = pa[i], v = pa[i + 1];
                for (AgentId b : visitors_[v]) {
                    int j = pos_[b][v];
                    if (j + 1 < static_cast<int>(path_[b]->size()) && (*path_[b])[j + 1] == u) {
                        auto key = pair_key(a, b);
                        guards_[key].push_back({a, u, v});
                        guard_trail_.push_back(key);
                    }
                }
            }

        std::vector<std::tuple<AgentId, AgentId, VertexId>> forced;
        for (auto u : pa)
            for (AgentId b : visitors_[u]) {
                auto [a_first, b_first] = forced_at(p_, a, pa, b, *path_[b], u);
                if (a_first && b_first) return false;
                if (a_first) forced.emplace_back(a, b, u);
                else if (b_first) forced.emplace_back(b, a, u);
                else open_.push_back({std::min(a, b), std::max(a, b), u});
            }
        for (auto u : pa) {
            visitors_[u].push_back(a);
            visit_trail_.push_back(u);
        }
        for (auto [x, y, u] : forced)
            if (!decide(x, y, u)) return false;
        return true;
    }

    Verdict dfs(std::size_t level) {
        if (!budget_.tick()) return Verdict::limit;

        const SharedVertex* pick = nullptr;
        int best = std::numeric_limits<int>::max();
        for (const auto& s : open_) {
            if (decided(s.a, s.b, s.vertex)) continue;
            int est = std::min(cost_[s.a][s.vertex], cost_[s.b][s.vertex]);
            if (est < best) {
                best = est;
                pick = &s;
            }
        }

        bool limited = false;
        if (pick) {
            auto s = *pick;
            AgentId first = s.a, second = s.b;
            if (cost_[s.b][s.vertex] < cost_[s.a][s.vertex]) std::swap(first, second);
            for (auto [x, y] : {std::pair{first, second}, std::pair{second, first}}) {
                auto mark = checkpoint();
                if (decide(x, y, s.vertex)) {
                    auto v = dfs(level);
                    if (v == Verdict::sat) return v;
                    if (v == Verdict::limit) limited = true;
                }
                rollback(mark);
                ++backtracks_;
                if (budget_.exhausted()) return Verdict::limit;
            }
            return limited ? Verdict::limit : Verdict::unsat;
        }

        if (level == k_) return Verdict::sat;
        AgentId a = order_[level];
        for (std::size_t idx = 0;; ++idx) {
            const auto* path = enums_[a].get(idx);
            if (!path) break;
            auto mark = checkpoint();
            if (assign(a, path)) {
                auto v = dfs(level + 1);
                if (v == Verdict::sat) return v;
                if (v == Verdict::limit) limited = true;
            }
            rollback(mark);
            ++backtracks_;
            if (budget_.exhausted()) return Verdict::limit;
        }
        if (enums_[a].budget_exhausted()) limited = true;
        return limited ? Verdict::limit : Verdict::unsat;
    }

    const WeightedProblem& wp_;
    const Problem& p_;
    AgentId k_;
    std::size_t nv_;
    bool guard_;
    Budget& budget_;
    Engine engine_;
    std::vector<PathEnumerator> enums_;
    std::vector<AgentId> order_;

    std::vector<const std::vector<VertexId>*> path_;
    std::vector<std::vector<int>> pos_;
    std::vector<std::vector<int>> cost_;
    std::vector<AgentId> assigned_;
    std::vector<std::vector<AgentId>> visitors_;
    std::vector<VertexId> visit_trail_;
    std::unordered_map<std::uint64_t, AgentId> decided_;
    std::vector<std::uint64_t> decision_trail_;
    std::vector<SharedVertex> open_;
    std::unordered_map<std::uint64_t, std::vector<Guard>> guards_;
    std::vector<std::uint64_t> guard_trail_;
    std::uint64_t backtracks_ = 0;
};

void require_valid(const std::vector<std::string>& errors) {
    if (!errors.empty()) throw std::invalid_argument("invalid problem: " + errors.front());
}

std::vector<Event> events_of(const PathChoice& paths) {
    std::vector<Event> events;
    for (AgentId a = 0; a < paths.size(); ++a)
        for (auto v : paths[a]) events.push_back({a, v});
    return events;
}

enum class Output { order, mapping, both };

template <class Engine>
OrderResult solve_with(const WeightedProblem& wp, bool guard, Output output, const OrderConfig& cfg) {
    require_valid(validate_problem(wp));
    Budget budget(cfg.limits);
    OrderSearch<Engine> search(wp, guard, cfg, budget);
    OrderResult result;
    result.verdict = search.run();
    if (result.verdict == Verdict::sat) {
        OrderSolution sol;
        sol.paths = search.paths();
        sol.resolves = search.resolves();
        const auto& p = wp.problem;
        if (output != Output::mapping)
            sol.order = OrderedEventSet(events_of(sol.paths), order_generators(p, sol.paths, sol.resolves));
        if constexpr (std::is_same_v<Engine, DlEngine>) {
            auto values = search.engine().ds.witness();
            ArrivalTimeMapping m;
            for (const auto& e : events_of(sol.paths))
                m.alpha[e] = static_cast<int>(values.at(std::size_t{e.agent} * p.graph.num_vertices() + e.vertex));
            sol.mapping = std::move(m);
        }
        sol.plan = sol.mapping ? amap_to_plan(*sol.mapping, wp) : order_to_plan(*sol.order, p);
        result.solution = std::move(sol);
    }
    result.stats = {budget.nodes(), search.backtracks(), budget.elapsed_ms()};
    return result;
}

}  // namespace

OrderResult solve_order_ac(const Problem& p, const OrderConfig& cfg) {
    return solve_with<AcEngine>(WeightedProblem::unit(p, SigmaMode::sf(1)), false, Output::order, cfg);
}

OrderResult solve_order_dl(const WeightedProblem& wp, const OrderConfig& cfg) {
    return solve_with<DlEngine>(wp, true, Output::mapping, cfg);
}

OrderResult solve_order_dl_unweighted(const Problem& p, bool follow, const OrderConfig& cfg) {
    auto wp = WeightedProblem::unit(p, follow ? SigmaMode::sf(1) : SigmaMode::sf(0));
    return solve_with<DlEngine>(wp, !follow, follow ? Output::both : Output::mapping, cfg);
}

}  // namespace mapf
