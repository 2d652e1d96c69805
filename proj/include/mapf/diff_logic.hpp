#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mapf {

// Conjunction of difference constraints x + d <= y over integer variables,
// kept feasible incrementally by repairing a potential function.
class DiffSystem {
public:
    using Var = std::size_t;
    using Weight = std::int64_t;

    struct Constraint {
        Var from;
        Weight d;
        Var to;
        bool operator==(const Constraint&) const = default;
    };

    struct Mark {
        std::size_t constraints = 0;
        std::size_t values = 0;
        std::size_t vars = 0;
        std::size_t serial = 0;
    };

    struct AssertResult {
        bool accepted = true;
        // On rejection: a cycle of constraints with positive total weight,
        // starting with the rejected one.
        std::vector<Constraint> cycle;
    };

    std::size_t num_vars() const { return out_.size(); }
    std::size_t num_constraints() const { return constraints_.size(); }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    // A feasible assignment (not necessarily the least one).
    const std::vector<Weight>& potential() const { return value_; }

    // Variables are registered on first use.
    AssertResult add(Var x, Weight d, Var y);
    void reserve_vars(std::size_t n);

    Mark checkpoint();
    void rollback(const Mark& mark);

    // Least assignment with every value >= 0 satisfying all constraints.
    std::vector<Weight> witness() const;

private:
    struct Arc {
        Var to;
        Weight d;
    };

    void grow(std::size_t n);

    std::vector<std::vector<Arc>> out_;
    std::vector<Weight> value_;
    std::vector<Constraint> constraints_;
    std::vector<std::pair<Var, Weight>> value_trail_;  // (var, old value)
    std::vector<std::size_t> marks_;
    std::size_t next_serial_ = 1;

    // Scratch for the repair search.
    std::vector<Weight> gain_;
    std::vector<Var> parent_;
    std::vector<Weight> parent_d_;
    std::vector<Var> touched_;
};

}  // namespace mapf
