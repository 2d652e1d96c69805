#include "mapf/diff_logic.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace mapf {

void DiffSystem::grow(std::size_t n) {
    if (n <= out_.size()) return;
    out_.resize(n);
    value_.resize(n, 0);
    gain_.resize(n, 0);
    parent_.resize(n, 0);
    parent_d_.resize(n, 0);
}

void DiffSystem::reserve_vars(std::size_t n) { grow(n); }

DiffSystem::AssertResult DiffSystem::add(Var x, Weight d, Var y) {
    grow(std::max(x, y) + 1);
    if (x == y && d > 0) return {false, {{x, d, y}}};

    if (value_[x] + d > value_[y]) {
        // Raise y and everything it pushes, largest gain first; reaching x
        // with a positive gain means a positive cycle through the new edge.
        using Item = std::pair<Weight, Var>;
        std::priority_queue<Item> queue;
        gain_[y] = value_[x] + d - value_[y];
        parent_[y] = x;
        parent_d_[y] = d;
        touched_.push_back(y);
        queue.push({gain_[y], y});
        bool cycle = false;
        while (!queue.empty() && !cycle) {
            auto [g, w] = queue.top();
            queue.pop();
            if (g != gain_[w]) continue;
            for (const auto& arc : out_[w]) {
                Weight cand = g + value_[w] + arc.d - value_[arc.to];
                if (cand <= 0 || cand <= gain_[arc.to]) continue;
                parent_[arc.to] = w;
                parent_d_[arc.to] = arc.d;
                if (arc.to == x) {
                    cycle = true;
                    break;
                }
                if (gain_[arc.to] == 0) touched_.push_back(arc.to);
                gain_[arc.to] = cand;
                queue.push({cand, arc.to});
            }
        }

        AssertResult result;
        if (cycle) {
            result.accepted = false;
            std::vector<Constraint> path;
            for (Var v = x; v != y;) {
                path.push_back({parent_[v], parent_d_[v], v});
                v = parent_[v];
            }
            result.cycle.push_back({x, d, y});
            result.cycle.insert(result.cycle.end(), path.rbegin(), path.rend());
        } else {
            for (Var v : touched_) {
                value_trail_.emplace_back(v, value_[v]);
                value_[v] += gain_[v];
            }
        }
        for (Var v : touched_) gain_[v] = 0;
        touched_.clear();
        if (cycle) return result;
    }

    out_[x].push_back({y, d});
    constraints_.push_back({x, d, y});
    return {};
}

DiffSystem::Mark DiffSystem::checkpoint() {
    Mark m{constraints_.size(), value_trail_.size(), out_.size(), next_serial_++};
    marks_.push_back(m.serial);
    return m;
}

void DiffSystem::rollback(const Mark& mark) {
    if (mark.serial != 0) {
        auto it = std::find(marks_.begin(), marks_.end(), mark.serial);
        if (it == marks_.end()) throw std::invalid_argument("stale checkpoint");
        marks_.erase(it + 1, marks_.end());
    } else {
        marks_.clear();
    }
    if (mark.constraints > constraints_.size() || mark.values > value_trail_.size())
        throw std::invalid_argument("stale checkpoint");
    while (constraints_.size() > mark.constraints) {
        out_[constraints_.back().from].pop_back();
        constraints_.pop_back();
    }
    while (value_trail_.size() > mark.values) {
        auto [v, old] = value_trail_.back();
        value_trail_.pop_back();
        value_[v] = old;
    }
    if (out_.size() > mark.vars) {
        out_.resize(mark.vars);
        value_.resize(mark.vars);
        gain_.resize(mark.vars);
        parent_.resize(mark.vars);
        parent_d_.resize(mark.vars);
    }
}

std::vector<DiffSystem::Weight> DiffSystem::witness() const {
    // best[v] = max over paths s..v of (reduced path weight - value[s]);
    // reduced weights are <= 0, so a max-first Dijkstra settles each node once.
    const auto n = out_.size();
    std::vector<Weight> best(n);
    std::vector<bool> done(n, false);
    using Item = std::pair<Weight, Var>;
    std::priority_queue<Item> queue;
    for (Var v = 0; v < n; ++v) {
        best[v] = -value_[v];
        queue.push({best[v], v});
    }
    while (!queue.empty()) {
        auto [b, w] = queue.top();
        queue.pop();
        if (done[w] || b != best[w]) continue;
        done[w] = true;
        for (const auto& arc : out_[w]) {
            Weight cand = b + value_[w] + arc.d - value_[arc.to];
            if (cand > best[arc.to]) {
                best[arc.to] = cand;
                queue.push({cand, arc.to});
            }
        }
    }
    std::vector<Weight> result(n);
    for (Var v = 0; v < n; ++v) result[v] = value_[v] + best[v];
    return result;
}

}  // namespace mapf
