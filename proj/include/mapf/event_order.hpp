#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mapf/model.hpp"

namespace mapf {

struct Event {
    AgentId agent;
    VertexId vertex;
    auto operator<=>(const Event&) const = default;
};

using EventPair = std::pair<Event, Event>;

// Events plus a strict partial order, stored as the transitive closure
// (one bitset row per event) and its cover.
class OrderedEventSet {
public:
    OrderedEventSet() = default;
    // `relation` may be any generating relation; its transitive closure is
    // taken. Throws std::invalid_argument on cycles or unknown events.
    OrderedEventSet(std::vector<Event> events, std::span<const EventPair> relation);

    const std::vector<Event>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    std::optional<std::size_t> index_of(const Event& e) const;
    bool contains(const Event& e) const { return index_of(e).has_value(); }
    bool precedes(const Event& x, const Event& y) const;
    bool precedes_index(std::size_t i, std::size_t j) const { return test(i, j); }

    const std::vector<EventPair>& cover() const { return cover_; }
    std::vector<EventPair> pairs() const;

    bool operator==(const OrderedEventSet& o) const;

private:
    bool test(std::size_t i, std::size_t j) const { return (closure_[i][j / 64] >> (j % 64)) & 1U; }

    std::vector<Event> events_;  // sorted
    std::vector<std::vector<std::uint64_t>> closure_;
    std::vector<EventPair> cover_;
};

std::vector<EventPair> cover(const OrderedEventSet& o);
OrderedEventSet restrict(const OrderedEventSet& o, AgentId a);

bool check_path_based(const OrderedEventSet& o, const Problem& p);
bool check_conflict_free(const OrderedEventSet& o, const Problem& p);
// Throws std::invalid_argument when the event sets differ.
bool compatible(const OrderedEventSet& o1, const OrderedEventSet& o2);

// Throws std::invalid_argument unless the plan is path-based and free of
// vertex, swap and follow conflicts.
OrderedEventSet plan_to_order(const Problem& p, const Plan& plan);

struct EarliestArrival {
    std::vector<int> alpha;  // aligned with OrderedEventSet::events()
    int iterations = 0;      // least i with alpha_i == alpha_{i+1}

    int at(const OrderedEventSet& o, const Event& e) const { return alpha.at(*o.index_of(e)); }
};

EarliestArrival earliest_arrival(const OrderedEventSet& o);

// Throws std::invalid_argument unless o is path-based and conflict-free.
Plan order_to_plan(const OrderedEventSet& o, const Problem& p);
OrderedEventSet minimal_compatible(const OrderedEventSet& o, const Problem& p);

// One `prec(a,u,b,v).` line per cover pair.
std::string dump_order(const OrderedEventSet& o, const Problem& p);

}  // namespace mapf
