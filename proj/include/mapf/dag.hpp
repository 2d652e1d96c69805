#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace mapf {

// Incrementally maintained DAG (Pearce-Kelly dynamic topological order)
// with a LIFO trail of accepted edges.
class DagState {
public:
    using Node = std::size_t;

    struct Mark {
        std::size_t edges = 0;
        std::size_t serial = 0;
    };

    struct AddResult {
        bool accepted = true;
        // On rejection: a path from the new edge's head back to its tail.
        std::vector<Node> cycle;
    };

    explicit DagState(std::size_t nodes = 0);
    // Nodes named by external keys; throws std::invalid_argument on duplicates.
    explicit DagState(std::span<const std::int64_t> keys);

    std::size_t num_nodes() const { return out_.size(); }
    std::size_t num_edges() const { return trail_.size(); }
    // Dense index of a key given at construction; throws if unknown.
    Node node(std::int64_t key) const;

    AddResult add_edge(Node u, Node v);
    bool has_edge(Node u, Node v) const;

    Mark checkpoint();
    // Throws std::invalid_argument for marks already rolled past.
    void rollback(const Mark& mark);

    // Position of each node in the maintained topological order.
    const std::vector<std::size_t>& order() const { return ord_; }

private:
    static std::uint64_t key(Node u, Node v) { return (std::uint64_t{u} << 32) | v; }

    bool forward(Node v, std::size_t bound, Node target, std::vector<Node>& seen);
    void backward(Node u, std::size_t bound, std::vector<Node>& seen);

    std::vector<std::vector<Node>> out_;
    std::vector<std::vector<Node>> in_;
    std::vector<std::size_t> ord_;
    std::vector<Node> at_;  // inverse of ord_
    std::vector<std::pair<Node, Node>> trail_;
    std::unordered_map<std::uint64_t, std::size_t> edge_set_;
    std::unordered_map<std::int64_t, Node> keys_;
    std::vector<std::size_t> marks_;  // serials of live checkpoints
    std::size_t next_serial_ = 1;

    std::vector<std::uint32_t> visit_;
    std::uint32_t stamp_ = 0;
    std::vector<Node> parent_;
};

}  // namespace mapf
