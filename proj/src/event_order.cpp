#include "mapf/event_order.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mapf {

OrderedEventSet::OrderedEventSet(std::vector<Event> events, std::span<const EventPair> relation) {
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    events_ = std::move(events);
    const auto n = events_.size();
    const auto words = (n + 63) / 64;

    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const auto& [x, y] : relation) {
        auto i = index_of(x), j = index_of(y);
        if (!i || !j) throw std::invalid_argument("order pair references an unknown event");
        if (*i == *j) throw std::invalid_argument("order is not irreflexive");
        succ[*i].push_back(*j);
        ++indegree[*j];
    }

    std::vector<std::size_t> topo;
    topo.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) topo.push_back(i);
    for (std::size_t h = 0; h < topo.size(); ++h)
        for (auto j : succ[topo[h]])
            if (--indegree[j] == 0) topo.push_back(j);
    if (topo.size() != n) throw std::invalid_argument("order contains a cycle");

    closure_.assign(n, std::vector<std::uint64_t>(words, 0));
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        auto& row = closure_[*it];
        for (auto j : succ[*it]) {
            row[j / 64] |= std::uint64_t{1} << (j % 64);
            for (std::size_t w = 0; w < words; ++w) row[w] |= closure_[j][w];
        }
    }

    std::vector<std::uint64_t> reach(words);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(reach.begin(), reach.end(), 0);
        for (std::size_t j = 0; j < n; ++j)
            if (test(i, j))
                for (std::size_t w = 0; w < words; ++w) reach[w] |= closure_[j][w];
        for (std::size_t j = 0; j < n; ++j)
            if (test(i, j) && !((reach[j / 64] >> (j % 64)) & 1U)) cover_.emplace_back(events_[i], events_[j]);
    }
}

std::optional<std::size_t> OrderedEventSet::index_of(const Event& e) const {
    auto it = std::lower_bound(events_.begin(), events_.end(), e);
    if (it == events_.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - events_.begin());
}

bool OrderedEventSet::precedes(const Event& x, const Event& y) const {
    auto i = index_of(x), j = index_of(y);
    return i && j && test(*i, *j);
}

std::vector<EventPair> OrderedEventSet::pairs() const {
    std::vector<EventPair> out;
    for (std::size_t i = 0; i < events_.size(); ++i)
        for (std::size_t j = 0; j < events_.size(); ++j)
            if (test(i, j)) out.emplace_back(events_[i], events_[j]);
    return out;
}

bool OrderedEventSet::operator==(const OrderedEventSet& o) const {
    return events_ == o.events_ && closure_ == o.closure_;
}

std::vector<EventPair> cover(const OrderedEventSet& o) { return o.cover(); }

OrderedEventSet restrict(const OrderedEventSet& o, AgentId a) {
    std::vector<Event> events;
    for (const auto& e : o.events())
        if (e.agent == a) events.push_back(e);
    std::vector<EventPair> rel;
    for (const auto& [x, y] : o.pairs())
        if (x.agent == a && y.agent == a) rel.emplace_back(x, y);
    return OrderedEventSet(std::move(events), rel);
}

namespace {

// Per-agent event indices sorted along the agent's order, or nullopt if some
// agent's restriction is not total.
std::optional<std::vector<std::vector<std::size_t>>> agent_chains(const OrderedEventSet& o, std::size_t agents) {
    std::vector<std::vector<std::size_t>> chains(agents);
    for (std::size_t i = 0; i < o.size(); ++i) {
        auto a = o.events()[i].agent;
        if (a >= agents) return std::nullopt;
        chains[a].push_back(i);
    }
    for (auto& chain : chains) {
        std::vector<std::pair<std::size_t, std::size_t>> keyed;
        for (auto i : chain) {
            std::size_t before = 0;
            for (auto j : chain)
                if (o.precedes_index(j, i)) ++before;
            keyed.emplace_back(before, i);
        }
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t k = 0; k < keyed.size(); ++k) {
            if (keyed[k].first != k) return std::nullopt;
            chain[k] = keyed[k].second;
        }
    }
    return chains;
}

}  // namespace

bool check_path_based(const OrderedEventSet& o, const Problem& p) {
    auto chains = agent_chains(o, p.num_agents());
    if (!chains) return false;
    const auto& ev = o.events();
    for (AgentId a = 0; a < p.num_agents(); ++a) {
        const auto& chain = (*chains)[a];
        if (chain.empty()) return false;
        if (ev[chain.front()].vertex != p.start[a] || ev[chain.back()].vertex != p.goal[a]) return false;
        for (std::size_t k = 0; k + 1 < chain.size(); ++k)
            if (!p.graph.has_edge(ev[chain[k]].vertex, ev[chain[k + 1]].vertex)) return false;
    }
    return true;
}

bool check_conflict_free(const OrderedEventSet& o, const Problem& p) {
    auto chains = agent_chains(o, p.num_agents());
    if (!chains) return false;
    const auto& ev = o.events();
    std::vector<std::optional<std::size_t>> next(o.size());
    for (const auto& chain : *chains)
        for (std::size_t k = 0; k + 1 < chain.size(); ++k) next[chain[k]] = chain[k + 1];
    auto leaves_first = [&](std::size_t x, std::size_t y) { return next[x] && o.precedes_index(*next[x], y); };
    for (std::size_t i = 0; i < o.size(); ++i)
        for (std::size_t j = i + 1; j < o.size(); ++j)
            if (ev[i].vertex == ev[j].vertex && ev[i].agent != ev[j].agent && !leaves_first(i, j) &&
                !leaves_first(j, i))
                return false;
    return true;
}

bool compatible(const OrderedEventSet& o1, const OrderedEventSet& o2) {
    if (o1.events() != o2.events()) throw std::invalid_argument("compatibility needs identical event sets");
    const auto& ev = o1.events();
    for (std::size_t i = 0; i < ev.size(); ++i)
        for (std::size_t j = 0; j < ev.size(); ++j) {
            bool related = ev[i].agent == ev[j].agent || ev[i].vertex == ev[j].vertex;
            if (related && o1.precedes_index(i, j) != o2.precedes_index(i, j)) return false;
        }
    return true;
}

OrderedEventSet plan_to_order(const Problem& p, const Plan& plan) {
    for (const auto& s : plan.strolls)
        if (!is_path_like(s)) throw std::invalid_argument("plan is not path-based");
    if (!verify_plan(p, plan, true).empty()) throw std::invalid_argument("plan has conflicts");

    std::vector<Event> events;
    std::vector<EventPair> rel;
    const auto n = static_cast<int>(plan.length());
    for (const auto& s : plan.strolls) {
        for (int i = 0; i <= n; ++i) {
            events.push_back({s.agent, s.positions[i].vertex()});
            if (i < n && s.positions[i] != s.positions[i + 1])
                rel.emplace_back(Event{s.agent, s.positions[i].vertex()}, Event{s.agent, s.positions[i + 1].vertex()});
        }
    }
    for (const auto& sa : plan.strolls)
        for (const auto& sb : plan.strolls) {
            if (sa.agent == sb.agent) continue;
            for (int i = 0; i < n; ++i) {
                auto u = sa.positions[i], next = sa.positions[i + 1];
                if (u == next) continue;
                for (int j = i + 1; j <= n; ++j)
                    if (sb.positions[j] == u)
                        rel.emplace_back(Event{sa.agent, next.vertex()}, Event{sb.agent, u.vertex()});
            }
        }
    return OrderedEventSet(std::move(events), rel);
}

EarliestArrival earliest_arrival(const OrderedEventSet& o) {
    const auto n = o.size();
    std::vector<std::vector<std::size_t>> preds(n);
    for (const auto& [x, y] : o.cover()) preds[*o.index_of(y)].push_back(*o.index_of(x));
    EarliestArrival result{std::vector<int>(n, 0), 0};
    for (;;) {
        auto next = result.alpha;
        for (std::size_t i = 0; i < n; ++i)
            for (auto j : preds[i]) next[i] = std::max(next[i], result.alpha[j] + 1);
        if (next == result.alpha) return result;
        result.alpha = std::move(next);
        ++result.iterations;
    }
}

Plan order_to_plan(const OrderedEventSet& o, const Problem& p) {
    if (!check_path_based(o, p)) throw std::invalid_argument("order is not path-based");
    if (!check_conflict_free(o, p)) throw std::invalid_argument("order is not conflict-free");
    auto chains = *agent_chains(o, p.num_agents());
    auto alpha = earliest_arrival(o).alpha;
    int n = 0;
    for (auto x : alpha) n = std::max(n, x);

    Plan plan;
    for (AgentId a = 0; a < p.num_agents(); ++a) {
        const auto& chain = chains[a];
        if (alpha[chain.front()] != 0) throw std::invalid_argument("start event of " + p.agents[a] + " has a predecessor");
        Stroll s{a, {}};
        for (std::size_t k = 0; k < chain.size(); ++k) {
            int until = k + 1 < chain.size() ? alpha[chain[k + 1]] : n + 1;
            for (int j = alpha[chain[k]]; j < until; ++j) s.positions.push_back(Position::at(o.events()[chain[k]].vertex));
        }
        plan.strolls.push_back(std::move(s));
    }
    return plan;
}

OrderedEventSet minimal_compatible(const OrderedEventSet& o, const Problem& p) {
    return plan_to_order(p, order_to_plan(o, p));
}

std::string dump_order(const OrderedEventSet& o, const Problem& p) {
    std::string out;
    for (const auto& [x, y] : o.cover())
        out += "prec(" + p.agents[x.agent] + "," + p.graph.name(x.vertex) + "," + p.agents[y.agent] + "," +
               p.graph.name(y.vertex) + ").\n";
    return out;
}

}  // namespace mapf
