#include "mapf/dag.hpp"

#include <algorithm>
#include <stdexcept>

namespace mapf {

DagState::DagState(std::size_t nodes)
    : out_(nodes), in_(nodes), ord_(nodes), at_(nodes), visit_(nodes, 0), parent_(nodes, 0) {
    for (Node i = 0; i < nodes; ++i) ord_[i] = at_[i] = i;
}

DagState::DagState(std::span<const std::int64_t> keys) : DagState(keys.size()) {
    for (Node i = 0; i < keys.size(); ++i)
        if (!keys_.emplace(keys[i], i).second) throw std::invalid_argument("duplicate node id");
}

DagState::Node DagState::node(std::int64_t key) const {
    auto it = keys_.find(key);
    if (it == keys_.end()) throw std::invalid_argument("unknown node id");
    return it->second;
}

bool DagState::has_edge(Node u, Node v) const { return edge_set_.count(key(u, v)) > 0; }

bool DagState::forward(Node v, std::size_t bound, Node target, std::vector<Node>& seen) {
    std::vector<Node> stack{v};
    visit_[v] = stamp_;
    while (!stack.empty()) {
        Node x = stack.back();
        stack.pop_back();
        seen.push_back(x);
        for (Node y : out_[x]) {
            if (y == target) {
                parent_[y] = x;
                return true;
            }
            if (visit_[y] != stamp_ && ord_[y] < bound) {
                visit_[y] = stamp_;
                parent_[y] = x;
                stack.push_back(y);
            }
        }
    }
    return false;
}

void DagState::backward(Node u, std::size_t bound, std::vector<Node>& seen) {
    std::vector<Node> stack{u};
    visit_[u] = stamp_;
    while (!stack.empty()) {
        Node x = stack.back();
        stack.pop_back();
        seen.push_back(x);
        for (Node y : in_[x])
            if (visit_[y] != stamp_ && ord_[y] > bound) {
                visit_[y] = stamp_;
                stack.push_back(y);
            }
    }
}

DagState::AddResult DagState::add_edge(Node u, Node v) {
    if (u >= num_nodes() || v >= num_nodes()) throw std::invalid_argument("unknown node");
    if (u == v) return {false, {u}};
    if (has_edge(u, v)) return {};

    const auto lb = ord_[v], ub = ord_[u];
    if (lb < ub) {
        std::vector<Node> fwd, bwd;
        ++stamp_;
        if (forward(v, ub, u, fwd)) {
            std::vector<Node> cycle{u};
            for (Node x = u; x != v;) {
                x = parent_[x];
                cycle.push_back(x);
            }
            std::reverse(cycle.begin(), cycle.end());
            return {false, std::move(cycle)};
        }
        ++stamp_;
        backward(u, lb, bwd);
        auto by_ord = [&](Node x, Node y) { return ord_[x] < ord_[y]; };
        std::sort(fwd.begin(), fwd.end(), by_ord);
        std::sort(bwd.begin(), bwd.end(), by_ord);
        std::vector<std::size_t> slots;
        slots.reserve(fwd.size() + bwd.size());
        for (Node x : bwd) slots.push_back(ord_[x]);
        for (Node x : fwd) slots.push_back(ord_[x]);
        std::sort(slots.begin(), slots.end());
        std::size_t k = 0;
        for (Node x : bwd) ord_[x] = slots[k++];
        for (Node x : fwd) ord_[x] = slots[k++];
        for (std::size_t s = 0; s < slots.size(); ++s) {
            Node x = s < bwd.size() ? bwd[s] : fwd[s - bwd.size()];
            at_[ord_[x]] = x;
        }
    }
    out_[u].push_back(v);
    in_[v].push_back(u);
    edge_set_.emplace(key(u, v), trail_.size());
    trail_.emplace_back(u, v);
    return {};
}

DagState::Mark DagState::checkpoint() {
    Mark m{trail_.size(), next_serial_++};
    marks_.push_back(m.serial);
    return m;
}

void DagState::rollback(const Mark& mark) {
    if (mark.serial != 0) {
        auto it = std::find(marks_.begin(), marks_.end(), mark.serial);
        if (it == marks_.end()) throw std::invalid_argument("stale checkpoint");
        marks_.erase(it + 1, marks_.end());
    } else {
        marks_.clear();
    }
    if (mark.edges > trail_.size()) throw std::invalid_argument("stale checkpoint");
    while (trail_.size() > mark.edges) {
        auto [u, v] = trail_.back();
        trail_.pop_back();
        out_[u].pop_back();
        in_[v].pop_back();
        edge_set_.erase(key(u, v));
    }
}

}  // namespace mapf
