#include "mapf/solver_timed.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace mapf {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::sat: return "sat";
        case Verdict::unsat: return "unsat";
        case Verdict::limit: return "limit";
    }
    return "?";
}

namespace {

constexpr int unreachable = std::numeric_limits<int>::max() / 4;
constexpr std::size_t memo_cap = 4'000'000;

// Depth-first search over timesteps. Agents are positioned on original
// vertices or in transit along an edge; conflicts are checked as moves are
// chosen, one agent at a time, against the agents already placed.
class TimedSearch {
public:
    TimedSearch(const WeightedProblem& wp, int horizon, Budget& budget)
        : wp_(wp), p_(wp.problem), n_(horizon), k_(p_.num_agents()), budget_(budget) {
        for (AgentId a = 0; a < k_; ++a) {
            auto d = distances_to(p_.graph, wp_.delta, p_.goal[a]);
            for (auto& x : d)
                if (x < 0) x = unreachable;
            dist_.push_back(std::move(d));
        }
        for (AgentId a = 0; a < k_; ++a) loc_.push_back(Position::at(p_.start[a]));
        recent_.resize(k_);
        next_.resize(k_);
        departing_.resize(k_);
        arriving_.resize(k_);
    }

    Verdict run() {
        history_.push_back(loc_);
        return dfs(0);
    }

    Plan plan() const {
        Plan plan;
        for (AgentId a = 0; a < k_; ++a) {
            Stroll s{a, {}};
            for (const auto& row : history_) s.positions.push_back(row[a]);
            plan.strolls.push_back(std::move(s));
        }
        return plan;
    }

    std::uint64_t backtracks() const { return backtracks_; }

private:
    struct Departure {
        VertexId from;
        int time;
        int sigma;
    };

    int remaining(AgentId a, const Position& pos) const {
        if (pos.is_vertex()) return dist_[a][pos.vertex()];
        return wp_.duration(pos.from, pos.to) - pos.step + dist_[a][pos.to];
    }

    std::string key(int t) const {
        std::vector<std::int32_t> words{t};
        for (AgentId a = 0; a < k_; ++a) {
            words.push_back(static_cast<std::int32_t>(loc_[a].from));
            words.push_back(static_cast<std::int32_t>(loc_[a].to));
            words.push_back(loc_[a].step);
            words.push_back(static_cast<std::int32_t>(recent_[a].size()));
            for (const auto& d : recent_[a]) {
                words.push_back(static_cast<std::int32_t>(d.from));
                words.push_back(t - d.time);
                words.push_back(d.sigma);
            }
        }
        std::string out(words.size() * sizeof(std::int32_t), '\0');
        std::memcpy(out.data(), words.data(), out.size());
        return out;
    }

    Verdict dfs(int t) {
        if (t == n_) {
            for (AgentId a = 0; a < k_; ++a)
                if (loc_[a] != Position::at(p_.goal[a])) return Verdict::unsat;
            return Verdict::sat;
        }
        if (!budget_.tick()) return Verdict::limit;
        for (AgentId a = 0; a < k_; ++a)
            if (remaining(a, loc_[a]) > n_ - t) return Verdict::unsat;
        auto state = key(t);
        if (failed_.count(state)) return Verdict::unsat;
        auto verdict = choose(0, t);
        if (verdict == Verdict::unsat) {
            ++backtracks_;
            if (failed_.size() < memo_cap) failed_.insert(std::move(state));
        }
        return verdict;
    }

    struct Option {
        Position next;
        bool departs;
        bool arrives;
        int rank;
    };

    std::vector<Option> options(AgentId a) const {
        const auto& pos = loc_[a];
        if (!pos.is_vertex()) {
            if (pos.step + 1 < wp_.duration(pos.from, pos.to))
                return {{Position::transit(pos.from, pos.to, pos.step + 1), false, false, 0}};
            return {{Position::at(pos.to), false, true, 0}};
        }
        std::vector<Option> out;
        auto u = pos.vertex();
        for (auto w : p_.graph.out(u)) {
            int d = wp_.duration(u, w);
            Position next = d == 1 ? Position::at(w) : Position::transit(u, w, 1);
            out.push_back({next, true, d == 1, remaining(a, next)});
        }
        std::stable_sort(out.begin(), out.end(), [&](const Option& x, const Option& y) {
            return x.rank != y.rank ? x.rank < y.rank : x.next.to < y.next.to;
        });
        // Waiting goes after every move that is at least as good.
        Option wait{pos, false, false, dist_[a][u]};
        auto it = std::find_if(out.begin(), out.end(), [&](const Option& o) { return o.rank > wait.rank; });
        out.insert(it, wait);
        return out;
    }

    bool fits(AgentId i, const Option& opt, int t) const {
        if (remaining(i, opt.next) > n_ - t - 1) return false;
        if (opt.next.is_vertex())
            for (AgentId j = 0; j < i; ++j)
                if (next_[j] == opt.next) return false;

        const auto& here = loc_[i];
        if (opt.departs) {
            VertexId u = here.vertex(), w = opt.next.is_vertex() ? opt.next.vertex() : opt.next.to;
            int arrive = t + wp_.duration(u, w);
            for (AgentId c = 0; c < k_; ++c) {
                if (c == i) continue;
                const auto& lc = loc_[c];
                if (!lc.is_vertex() && lc.from == w && lc.to == u) {
                    int k = t - lc.step, l = k + wp_.duration(w, u);
                    if ((k < arrive && arrive <= l) || (t < l && l <= arrive)) return false;
                }
            }
            int sigma = sigma_value(wp_, u, w);
            for (AgentId j = 0; j < i; ++j) {
                if (departing_[j] && departing_[j]->from == w && next_[j].to == u) return false;
                if (arriving_[j] && next_[j] == Position::at(u) && sigma >= 1) return false;
            }
        }
        if (opt.arrives) {
            VertexId v = opt.next.vertex();
            for (AgentId c = 0; c < k_; ++c) {
                if (c == i) continue;
                for (const auto& d : recent_[c])
                    if (d.from == v && d.time < t + 1 && t + 1 <= d.time + d.sigma) return false;
                if (c < i && departing_[c] && departing_[c]->from == v && departing_[c]->sigma >= 1) return false;
            }
        }
        return true;
    }

    Verdict choose(AgentId i, int t) {
        if (i == k_) return advance(t);
        bool limited = false;
        for (const auto& opt : options(i)) {
            if (!fits(i, opt, t)) continue;
            next_[i] = opt.next;
            arriving_[i] = opt.arrives;
            departing_[i].reset();
            if (opt.departs) {
                VertexId u = loc_[i].vertex(), w = opt.next.is_vertex() ? opt.next.vertex() : opt.next.to;
                departing_[i] = Departure{u, t, sigma_value(wp_, u, w)};
            }
            auto verdict = choose(i + 1, t);
            if (verdict == Verdict::sat) return verdict;
            if (verdict == Verdict::limit) limited = true;
            if (budget_.exhausted()) return Verdict::limit;
        }
        return limited ? Verdict::limit : Verdict::unsat;
    }

    Verdict advance(int t) {
        // Deeper levels reuse the per-step choice buffers.
        auto saved_loc = loc_;
        auto saved_recent = recent_;
        auto saved_next = next_;
        auto saved_departing = departing_;
        auto saved_arriving = arriving_;
        for (AgentId a = 0; a < k_; ++a) {
            auto& list = recent_[a];
            if (departing_[a]) list.push_back(*departing_[a]);
            std::erase_if(list, [&](const Departure& d) { return d.time + d.sigma < t + 2; });
        }
        loc_ = next_;
        history_.push_back(loc_);
        auto verdict = dfs(t + 1);
        if (verdict == Verdict::sat) return verdict;
        history_.pop_back();
        loc_ = std::move(saved_loc);
        recent_ = std::move(saved_recent);
        next_ = std::move(saved_next);
        departing_ = std::move(saved_departing);
        arriving_ = std::move(saved_arriving);
        return verdict;
    }

    const WeightedProblem& wp_;
    const Problem& p_;
    int n_;
    AgentId k_;
    Budget& budget_;
    std::vector<std::vector<int>> dist_;
    std::vector<Position> loc_;
    std::vector<std::vector<Departure>> recent_;
    std::vector<std::vector<Position>> history_;
    std::unordered_set<std::string> failed_;
    std::vector<Position> next_;
    std::vector<std::optional<Departure>> departing_;
    std::vector<bool> arriving_;
    std::uint64_t backtracks_ = 0;
};

void require_valid(const std::vector<std::string>& errors) {
    if (!errors.empty()) throw std::invalid_argument("invalid problem: " + errors.front());
}

TimedResult run_timed(const WeightedProblem& wp, int horizon, Budget& budget) {
    TimedResult result;
    result.horizon = horizon;
    if (horizon < 0) return result;
    TimedSearch search(wp, horizon, budget);
    result.verdict = search.run();
    if (result.verdict == Verdict::sat) result.plan = search.plan();
    result.stats.backtracks = search.backtracks();
    return result;
}

TimedResult deepen(const WeightedProblem& wp, int max_n, const Limits& limits) {
    Budget budget(limits);
    TimedResult result;
    int lower = 0;
    for (AgentId a = 0; a < wp.problem.num_agents(); ++a) {
        int d = distances_to(wp.problem.graph, wp.delta, wp.problem.goal[a])[wp.problem.start[a]];
        if (d < 0) lower = std::numeric_limits<int>::max();
        else lower = std::max(lower, d);
    }
    std::uint64_t backtracks = 0;
    result.horizon = max_n;
    for (int n = lower; n <= max_n && lower != std::numeric_limits<int>::max(); ++n) {
        auto r = run_timed(wp, n, budget);
        backtracks += r.stats.backtracks;
        if (r.verdict != Verdict::unsat) {
            result = std::move(r);
            break;
        }
    }
    result.stats = {budget.nodes(), backtracks, budget.elapsed_ms()};
    return result;
}

WeightedProblem unit_view(const Problem& p, bool follow) {
    return WeightedProblem::unit(p, follow ? SigmaMode::sf(1) : SigmaMode::sf(0));
}

}  // namespace

TimedResult solve_wtimed(const WeightedProblem& wp, const TimedConfig& cfg) {
    require_valid(validate_problem(wp));
    Budget budget(cfg.limits);
    auto result = run_timed(wp, cfg.horizon, budget);
    result.stats.nodes = budget.nodes();
    result.stats.wall_ms = budget.elapsed_ms();
    return result;
}

TimedResult solve_timed(const Problem& p, const TimedConfig& cfg) {
    require_valid(validate_problem(p));
    return solve_wtimed(unit_view(p, cfg.follow), cfg);
}

TimedResult solve_wtimed_id(const WeightedProblem& wp, int max_n, const TimedConfig& cfg) {
    require_valid(validate_problem(wp));
    return deepen(wp, max_n, cfg.limits);
}

TimedResult solve_timed_id(const Problem& p, int max_n, const TimedConfig& cfg) {
    require_valid(validate_problem(p));
    return deepen(unit_view(p, cfg.follow), max_n, cfg.limits);
}

namespace {

constexpr std::size_t oracle_max_vertices = 24;
constexpr std::size_t oracle_max_agents = 3;
constexpr int oracle_max_n = 8;
constexpr double oracle_max_combinations = 5e7;

// Every walk of exactly n steps from the agent's start to its goal in the
// expanded graph.
std::vector<std::vector<Position>> all_strolls(const ExpandedGraph& x, VertexId from, VertexId to, int n) {
    std::vector<std::vector<Position>> out;
    std::vector<VertexId> walk{from};
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(walk.size()) == n + 1) {
            if (walk.back() == to) {
                std::vector<Position> s;
                for (auto v : walk) s.push_back(x.positions[v]);
                out.push_back(std::move(s));
            }
            return;
        }
        for (auto w : x.graph.out(walk.back())) {
            walk.push_back(w);
            self(self);
            walk.pop_back();
        }
    };
    rec(rec);
    return out;
}

Verdict oracle(const WeightedProblem& wp, int n, const auto& clean) {
    const auto& p = wp.problem;
    require_valid(validate_problem(wp));
    auto x = expand_weighted_graph(p.graph, wp.delta);
    if (x.graph.num_vertices() > oracle_max_vertices || p.num_agents() > oracle_max_agents || n > oracle_max_n)
        throw std::length_error("brute-force oracle size guard exceeded");
    if (n < 0) return Verdict::unsat;
    std::vector<std::vector<std::vector<Position>>> options;
    double combinations = 1;
    for (AgentId a = 0; a < p.num_agents(); ++a) {
        options.push_back(all_strolls(x, p.start[a], p.goal[a], n));
        combinations *= static_cast<double>(options.back().size());
    }
    if (combinations > oracle_max_combinations) throw std::length_error("brute-force oracle size guard exceeded");
    Plan plan;
    for (AgentId a = 0; a < p.num_agents(); ++a) plan.strolls.push_back({a, {}});
    auto rec = [&](auto&& self, AgentId a) -> bool {
        if (a == p.num_agents()) return clean(plan);
        for (const auto& s : options[a]) {
            plan.strolls[a].positions = s;
            if (self(self, a + 1)) return true;
        }
        return false;
    };
    return rec(rec, 0) ? Verdict::sat : Verdict::unsat;
}

}  // namespace

Verdict brute_force_oracle(const Problem& p, int n, bool follow) {
    auto wp = WeightedProblem::unit(p, SigmaMode::sf(0));
    return oracle(wp, n, [&](const Plan& plan) { return verify_plan(p, plan, follow).empty(); });
}

Verdict brute_force_oracle(const WeightedProblem& wp, int n) {
    return oracle(wp, n, [&](const Plan& plan) { return verify_wplan(wp, plan).empty(); });
}

}  // namespace mapf
