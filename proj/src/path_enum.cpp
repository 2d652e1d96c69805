#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <unordered_set>

#include "mapf/solver_order.hpp"

namespace mapf {

namespace {

struct Bans {
    std::vector<bool> vertex;
    std::unordered_set<std::uint64_t> edge;
};

std::uint64_t edge_key(VertexId u, VertexId v) { return (std::uint64_t{u} << 32) | v; }

std::optional<std::pair<int, std::vector<VertexId>>> shortest(const Graph& g, const std::vector<int>& delta,
                                                              VertexId from, VertexId to, const Bans& bans) {
    const auto n = g.num_vertices();
    std::vector<int> dist(n, -1);
    std::vector<VertexId> pred(n, 0);
    using Item = std::pair<int, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[from] = 0;
    queue.push({0, from});
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d != dist[v]) continue;
        if (v == to) break;
        for (auto w : g.out(v)) {
            if (bans.vertex[w] || bans.edge.count(edge_key(v, w))) continue;
            int nd = d + delta[*g.edge_index(v, w)];
            if (dist[w] < 0 || nd < dist[w]) {
                dist[w] = nd;
                pred[w] = v;
                queue.push({nd, w});
            }
        }
    }
    if (dist[to] < 0) return std::nullopt;
    std::vector<VertexId> path{to};
    while (path.back() != from) path.push_back(pred[path.back()]);
    std::reverse(path.begin(), path.end());
    return std::make_pair(dist[to], std::move(path));
}

}  // namespace

PathEnumerator::PathEnumerator(const Graph& g, std::span<const int> delta, VertexId from, VertexId to,
                               std::size_t budget)
    : g_(g), delta_(delta.begin(), delta.end()), from_(from), to_(to), budget_(budget) {
    if (delta_.empty()) delta_.assign(g.num_edges(), 1);
}

const std::vector<VertexId>* PathEnumerator::get(std::size_t k) {
    while (paths_.size() <= k)
        if (!extend()) return nullptr;
    return &paths_[k];
}

bool PathEnumerator::extend() {
    if (done_ || budget_hit_) return false;
    Bans bans{std::vector<bool>(g_.num_vertices(), false), {}};
    if (paths_.empty()) {
        if (auto first = shortest(g_, delta_, from_, to_, bans)) candidates_.insert(std::move(*first));
    } else {
        const auto& last = paths_.back();
        int root_cost = 0;
        for (std::size_t i = 0; i + 1 < last.size(); ++i) {
            std::fill(bans.vertex.begin(), bans.vertex.end(), false);
            bans.edge.clear();
            for (std::size_t j = 0; j < i; ++j) bans.vertex[last[j]] = true;
            for (const auto& q : paths_)
                if (q.size() > i + 1 && std::equal(last.begin(), last.begin() + i + 1, q.begin()))
                    bans.edge.insert(edge_key(q[i], q[i + 1]));
            if (auto spur = shortest(g_, delta_, last[i], to_, bans)) {
                std::vector<VertexId> path(last.begin(), last.begin() + i);
                path.insert(path.end(), spur->second.begin(), spur->second.end());
                candidates_.insert({root_cost + spur->first, std::move(path)});
            }
            root_cost += delta_[*g_.edge_index(last[i], last[i + 1])];
        }
    }
    if (candidates_.empty()) {
        done_ = true;
        return false;
    }
    if (paths_.size() >= budget_) {
        budget_hit_ = true;
        return false;
    }
    auto best = candidates_.begin();
    costs_.push_back(best->first);
    paths_.push_back(best->second);
    candidates_.erase(best);
    return true;
}

EnumeratedPaths enumerate_paths(const Problem& p, AgentId a, std::size_t budget) {
    PathEnumerator it(p.graph, {}, p.start[a], p.goal[a], budget);
    EnumeratedPaths out;
    for (std::size_t k = 0; const auto* path = it.get(k); ++k) out.paths.push_back(*path);
    out.budget_exhausted = it.budget_exhausted();
    return out;
}

}  // namespace mapf
