#include <doctest.h>

#include <functional>
#include <set>

#include "fixtures.hpp"
#include "mapf/instance_gen.hpp"
#include "mapf/solver_order.hpp"
#include "mapf/solver_timed.hpp"

using namespace mapf;

namespace {

const Problem& P() { return fx::tree().problem; }

Problem cycle4_with_blocker() {
    // a: u0 -> u2 around a 4-cycle, b parked at u1 for good.
    Problem p;
    for (const char* v : {"u0", "u1", "u2", "u3"}) p.graph.add_vertex(v);
    for (VertexId i = 0; i < 4; ++i) {
        p.graph.add_edge(i, (i + 1) % 4);
        p.graph.add_edge((i + 1) % 4, i);
    }
    p.agents = {"a", "b"};
    p.start = {0, 1};
    p.goal = {2, 1};
    return p;
}

Problem corridor() {
    Problem p;
    for (const char* v : {"u0", "u1", "u2"}) p.graph.add_vertex(v);
    for (VertexId i = 0; i < 2; ++i) {
        p.graph.add_edge(i, i + 1);
        p.graph.add_edge(i + 1, i);
    }
    p.agents = {"a", "b"};
    p.start = {0, 2};
    p.goal = {2, 0};
    return p;
}

std::size_t count_simple_paths(const Graph& g, VertexId from, VertexId to) {
    std::vector<bool> on(g.num_vertices(), false);
    std::function<std::size_t(VertexId)> go = [&](VertexId v) -> std::size_t {
        if (v == to) return 1;
        on[v] = true;
        std::size_t n = 0;
        for (auto w : g.out(v))
            if (!on[w]) n += go(w);
        on[v] = false;
        return n;
    };
    return go(from);
}

// The mapping's least compatible schedule is itself, and the plan it
// yields is conflict-free and path-based.
void check_solution(const WeightedProblem& wp, const OrderSolution& sol) {
    const auto& p = wp.problem;
    REQUIRE(sol.paths.size() == p.agents.size());
    for (AgentId a = 0; a < sol.paths.size(); ++a) {
        CHECK(sol.paths[a].front() == p.start[a]);
        CHECK(sol.paths[a].back() == p.goal[a]);
        CHECK(std::set<VertexId>(sol.paths[a].begin(), sol.paths[a].end()).size() == sol.paths[a].size());
    }
    CHECK(verify_wplan(wp, sol.plan).empty());
    for (const auto& s : sol.plan.strolls) CHECK(is_path_like(s));
    if (sol.mapping) {
        CHECK(check_path_based_amap(*sol.mapping, wp));
        CHECK(check_conflicts_amap(*sol.mapping, wp).empty());
        CHECK(minimal_compatible_amap(*sol.mapping, wp) == *sol.mapping);
        CHECK(static_cast<std::size_t>(sol.mapping->makespan()) == sol.plan.length());
        CHECK(plan_to_amap(wp, sol.plan) == *sol.mapping);
    }
}

void check_unit_solution(const Problem& p, const OrderSolution& sol, bool follow) {
    CHECK(verify_plan(p, sol.plan, follow).empty());
    if (sol.order) {
        CHECK(check_path_based(*sol.order, p));
        CHECK(check_conflict_free(*sol.order, p));
        CHECK(minimal_compatible(*sol.order, p) == *sol.order);
        CHECK(order_to_plan(*sol.order, p) == sol.plan);
        CHECK(plan_to_order(p, sol.plan) == *sol.order);
    }
    check_solution(WeightedProblem::unit(p, follow ? SigmaMode::sf(1) : SigmaMode::sf(0)), sol);
}

}  // namespace

TEST_CASE("enumerate_paths") {
    auto a = enumerate_paths(P(), 0, 100);
    REQUIRE(a.paths.size() == 1);  // the graph is a tree
    CHECK(a.paths[0] == std::vector<VertexId>{fx::vid(P(), "v0_2"), fx::vid(P(), "v0_1"), fx::vid(P(), "v1_1"),
                                              fx::vid(P(), "v1_2"), fx::vid(P(), "v1_3")});
    CHECK_FALSE(a.budget_exhausted);

    Problem one;
    one.graph.add_vertex("v");
    one.graph.add_vertex("w");
    one.agents = {"a"};
    one.start = one.goal = {0};
    auto s = enumerate_paths(one, 0, 10);
    REQUIRE(s.paths.size() == 1);
    CHECK(s.paths[0] == std::vector<VertexId>{0});
    one.goal = {1};
    CHECK(enumerate_paths(one, 0, 10).paths.empty());

    auto grid = gen({Family::grid, 3, 1, 3, 0.5, 7, {}}).problem;
    grid.start = {fx::vid(grid, "v0_0")};
    grid.goal = {fx::vid(grid, "v2_2")};
    auto all = enumerate_paths(grid, 0, 100000);
    CHECK(all.paths.size() == count_simple_paths(grid.graph, grid.start[0], grid.goal[0]));
    CHECK(std::set<std::vector<VertexId>>(all.paths.begin(), all.paths.end()).size() == all.paths.size());
    for (std::size_t i = 0; i < all.paths.size(); ++i) {
        const auto& q = all.paths[i];
        CHECK(q.front() == grid.start[0]);
        CHECK(q.back() == grid.goal[0]);
        CHECK(std::set<VertexId>(q.begin(), q.end()).size() == q.size());
        for (std::size_t j = 0; j + 1 < q.size(); ++j) CHECK(grid.graph.has_edge(q[j], q[j + 1]));
        if (i) CHECK(all.paths[i - 1].size() <= q.size());
    }
    CHECK(all.paths.front().size() == 5);
    auto cut = enumerate_paths(grid, 0, 3);
    CHECK(cut.paths.size() == 3);
    CHECK(cut.budget_exhausted);
}

TEST_CASE("weighted path enumeration orders by total duration") {
    Graph g;
    for (const char* v : {"s", "m", "t"}) g.add_vertex(v);
    g.add_edge(0, 2);  // direct, slow
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    std::vector<int> delta{5, 1, 1};
    PathEnumerator it(g, delta, 0, 2, 10);
    REQUIRE(it.get(0));
    CHECK(*it.get(0) == std::vector<VertexId>{0, 1, 2});
    CHECK(it.cost(0) == 2);
    REQUIRE(it.get(1));
    CHECK(*it.get(1) == std::vector<VertexId>{0, 2});
    CHECK(it.cost(1) == 5);
    CHECK_FALSE(it.get(2));
    CHECK_FALSE(it.budget_exhausted());
}

TEST_CASE("forced_resolves") {
    PathChoice shortest{enumerate_paths(P(), 0, 1).paths[0], enumerate_paths(P(), 1, 1).paths[0]};
    auto f = forced_resolves(P(), shortest);
    CHECK(f.forced.empty());
    CHECK_FALSE(f.contradictory);
    CHECK(f.open == std::vector<SharedVertex>{{0, 1, fx::vid(P(), "v0_1")}, {0, 1, fx::vid(P(), "v1_1")}});

    auto c = cycle4_with_blocker();
    auto through = forced_resolves(c, {{0, 1, 2}, {1}});
    CHECK(through.contradictory);  // a enters both b's start and b's goal
    auto around = forced_resolves(c, {{0, 3, 2}, {1}});
    CHECK(around.open.empty());
    CHECK(around.forced.empty());

    // b ends where a starts: a has to leave first.
    Problem q = corridor();
    q.goal = {2, 0};
    auto r = forced_resolves(q, {{0, 1, 2}, {2, 1, 0}});
    CHECK_FALSE(r.contradictory);  // the clash only shows up as a cycle
    CHECK(r.forced == std::vector<Resolve>{{0, 1, 0}, {1, 0, 2}});
    CHECK(r.open == std::vector<SharedVertex>{{0, 1, 1}});
}

TEST_CASE("order_generators") {
    PathChoice shortest{enumerate_paths(P(), 0, 1).paths[0], enumerate_paths(P(), 1, 1).paths[0]};
    auto chains = order_generators(P(), shortest, {});
    CHECK(chains.size() == 7);
    std::vector<Resolve> rs{{0, 1, fx::vid(P(), "v0_1")}, {0, 1, fx::vid(P(), "v1_1")}};
    auto gens = order_generators(P(), shortest, rs);
    CHECK(gens.size() == 9);
    CHECK(gens[7] == EventPair{fx::ev(P(), "a", "v1_1"), fx::ev(P(), "b", "v0_1")});
    CHECK(gens[8] == EventPair{fx::ev(P(), "a", "v1_2"), fx::ev(P(), "b", "v1_1")});
    OrderedEventSet o(fx::tree_minimal_order().events(), gens);
    CHECK(o == fx::tree_minimal_order());
    CHECK_THROWS_AS(order_generators(P(), shortest, {{0, 1, fx::vid(P(), "v1_3")}}), std::invalid_argument);
}

TEST_CASE("tree instance with the order solvers") {
    auto ac = solve_order_ac(P());
    REQUIRE(ac.verdict == Verdict::sat);
    check_unit_solution(P(), *ac.solution, true);

    auto dl = solve_order_dl_unweighted(P(), true);
    REQUIRE(dl.verdict == Verdict::sat);
    check_unit_solution(P(), *dl.solution, true);
    CHECK(dl.solution->resolves == ac.solution->resolves);
    CHECK(*dl.solution->order == *ac.solution->order);
    CHECK(dl.solution->plan == ac.solution->plan);

    // The result is one of the two resolution families; its schedule is the
    // earliest one for that family.
    const auto& o = *ac.solution->order;
    auto a_first = fx::tree_minimal_order();
    auto b_first = fx::tree_order("b", "v0_0", "a", "v0_1");
    CHECK((o == a_first || o == b_first));
    auto expected = plan_to_amap(WeightedProblem::unit(P(), SigmaMode::sf(1)), order_to_plan(o, P()));
    CHECK(*dl.solution->mapping == expected);
    if (o == a_first) CHECK(dl.solution->plan == fx::tree_plan(6));

    auto loose = solve_order_dl_unweighted(P(), false);
    REQUIRE(loose.verdict == Verdict::sat);
    check_unit_solution(P(), *loose.solution, false);
}

TEST_CASE("tree instance with the a-first family forced through the witness") {
    // Unit weights, follow-safety 1: the earliest schedule of the a-first
    // family is the fixed point of the arrival iteration.
    auto wp = WeightedProblem::unit(P(), SigmaMode::sf(1));
    auto o = fx::tree_minimal_order();
    auto m = minimal_compatible_amap(plan_to_amap(wp, order_to_plan(o, P())), wp);
    auto table = earliest_arrival(o);
    for (const auto& [e, t] : m.alpha) CHECK(table.at(o, e) == t);
    CHECK(m.makespan() == 6);
}

TEST_CASE("trivial, blocked and infeasible instances") {
    Problem one;
    one.graph.add_vertex("v");
    one.agents = {"a"};
    one.start = one.goal = {0};
    for (const auto& r : {solve_order_ac(one), solve_order_dl_unweighted(one, true)}) {
        REQUIRE(r.verdict == Verdict::sat);
        CHECK(r.solution->plan.length() == 0);
    }

    auto c = corridor();
    CHECK(solve_order_ac(c).verdict == Verdict::unsat);
    CHECK(solve_order_dl_unweighted(c, true).verdict == Verdict::unsat);
    CHECK(solve_order_dl_unweighted(c, false).verdict == Verdict::unsat);

    auto b = cycle4_with_blocker();
    auto r = solve_order_ac(b);
    REQUIRE(r.verdict == Verdict::sat);
    CHECK(r.solution->paths[0] == std::vector<VertexId>{0, 3, 2});
    check_unit_solution(b, *r.solution, true);
    // With one path per agent only the blocked route is available.
    CHECK(solve_order_ac(b, {{}, 1, 0}).verdict == Verdict::limit);
    CHECK(solve_order_dl_unweighted(b, true, {{}, 1, 0}).verdict == Verdict::limit);
}

TEST_CASE("weighted: single agent and the opposing pair") {
    Problem p;
    for (const char* v : {"u", "v", "w"}) p.graph.add_vertex(v);
    p.graph.add_edge(0, 1);
    p.graph.add_edge(1, 2);
    p.agents = {"a"};
    p.start = {0};
    p.goal = {2};
    WeightedProblem wp{p, {2, 3}, SigmaMode::vf()};
    auto r = solve_order_dl(wp);
    REQUIRE(r.verdict == Verdict::sat);
    const auto& m = *r.solution->mapping;
    CHECK(m.at({0, 0}) == 0);
    CHECK(m.at({0, 1}) == 2);
    CHECK(m.at({0, 2}) == 5);
    CHECK(r.solution->plan.length() == 5);
    check_solution(wp, *r.solution);

    for (auto s : {SigmaMode::vf(), SigmaMode::ef(), SigmaMode::sf(0), SigmaMode::sf(2)}) {
        auto opp = fx::three_vertex({{"a", "x", "y"}, {"b", "y", "x"}}, s);
        CHECK(solve_order_dl(opp).verdict == Verdict::unsat);
    }
    auto follow = fx::three_vertex({{"a", "z", "y"}, {"b", "y", "x"}}, SigmaMode::vf());
    auto f = solve_order_dl(follow);
    REQUIRE(f.verdict == Verdict::sat);
    check_solution(follow, *f.solution);
    CHECK(f.solution->mapping->at(fx::ev(follow.problem, "a", "y")) == 4);  // strictly after 0 + 3
    auto tight = fx::three_vertex({{"a", "z", "y"}, {"b", "y", "x"}}, SigmaMode::sf(1));
    CHECK(solve_order_dl(tight).solution->mapping->at(fx::ev(tight.problem, "a", "y")) == 2);
}

TEST_CASE("node limit") {
    auto g = gen({Family::grid, 5, 6, 3, 0.5, 3, {}}).problem;
    CHECK(solve_order_ac(g, {{1, 0}, 10000, 0}).verdict == Verdict::limit);
    CHECK(solve_order_dl_unweighted(g, true, {{1, 0}, 10000, 0}).verdict == Verdict::limit);
}

TEST_CASE("seeded agent shuffles stay sound") {
    auto g = gen({Family::grid, 4, 4, 3, 0.5, 11, {}}).problem;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto r = solve_order_dl_unweighted(g, true, {{}, 10000, seed});
        REQUIRE(r.verdict == Verdict::sat);
        check_unit_solution(g, *r.solution, true);
    }
}

TEST_CASE("property: engines agree and match the exhaustive oracle") {
    SplitMix64 rng(303);
    int sat = 0, unsat = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto g = fx::random_connected_graph(rng, 2 + static_cast<int>(rng.below(5)), static_cast<int>(rng.below(3)));
        auto p = fx::random_problem(rng, g, std::min<int>(2 + static_cast<int>(rng.below(2)), g.num_vertices()));
        INFO(serialize_instance(Instance{p, {}, {}}));
        auto ac = solve_order_ac(p);
        auto dl = solve_order_dl_unweighted(p, true);
        REQUIRE(ac.verdict != Verdict::limit);
        REQUIRE(ac.verdict == dl.verdict);
        if (ac.verdict == Verdict::sat) {
            ++sat;
            CHECK(ac.solution->resolves == dl.solution->resolves);
            CHECK(ac.solution->plan == dl.solution->plan);
            check_unit_solution(p, *ac.solution, true);
            check_unit_solution(p, *dl.solution, true);
        } else {
            ++unsat;
        }
        if (auto oracle = fx::path_based_plan_exists(p)) CHECK(*oracle == (ac.verdict == Verdict::sat));

        auto loose = solve_order_dl_unweighted(p, false);
        if (ac.verdict == Verdict::sat) CHECK(loose.verdict == Verdict::sat);
        if (loose.verdict == Verdict::sat) check_unit_solution(p, *loose.solution, false);
    }
    CHECK(sat > 50);
    CHECK(unsat > 10);
}

TEST_CASE("property: weighted solutions are sound and least") {
    SplitMix64 rng(404);
    const SigmaMode modes[] = {SigmaMode::vf(), SigmaMode::ef(), SigmaMode::sf(0), SigmaMode::sf(1), SigmaMode::sf(3)};
    int sat = 0;
    for (int trial = 0; trial < 300; ++trial) {
        auto g = fx::random_connected_graph(rng, 2 + static_cast<int>(rng.below(6)), static_cast<int>(rng.below(4)));
        WeightedProblem wp;
        wp.problem = fx::random_problem(rng, g, std::min<int>(2 + static_cast<int>(rng.below(2)), g.num_vertices()));
        for (std::size_t e = 0; e < g.num_edges(); ++e) wp.delta.push_back(1 + static_cast<int>(rng.below(4)));
        wp.sigma = modes[rng.below(5)];
        auto r = solve_order_dl(wp);
        REQUIRE(r.verdict != Verdict::limit);
        if (r.verdict == Verdict::sat) {
            ++sat;
            check_solution(wp, *r.solution);
        }
    }
    CHECK(sat > 100);
}
