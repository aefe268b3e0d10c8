#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "nplan/generators.hpp"
#include "nplan/novelty.hpp"
#include "nplan/search.hpp"
#include "support.hpp"

using namespace nplan;

namespace {

SearchConfig config(Planner pl, bool trim = false) {
    SearchConfig c;
    c.planner = pl;
    c.trim = trim;
    return c;
}

constexpr Planner novelty_planners[] = {Planner::bfws, Planner::bfcs, Planner::bfnos};

}  // namespace

TEST(Solve, ChainFive) {
    const GroundProblem p = generate(Domain::chain, 5);
    for (Planner pl : novelty_planners) {
        const auto r = solve(p, config(pl));
        ASSERT_EQ(r.outcome, Outcome::plan) << to_string(pl);
        EXPECT_EQ(r.plan.size(), 5u);
        EXPECT_EQ(r.cost, 5);
    }
}

TEST(Solve, GripperTwoWithinBfsExpansions) {
    const GroundProblem p = generate(Domain::gripper, 2);
    const auto bfs = testkit::bfs(p);
    const auto r = solve(p, config(Planner::bfws));
    ASSERT_EQ(r.outcome, Outcome::plan);
    EXPECT_TRUE(validate_plan(p, action_names(p, r.plan)).valid);
    EXPECT_LE(r.stats.expansions, bfs.reachable);
}

TEST(Solve, UnreachableGoalExhausts) {
    // Goal reachable in the relaxation but not in the real task.
    const GroundProblem p = parse_problem(
        "ATOMS\na b g\nINIT\na\nGOAL\ng\n"
        "ACTION ab\nPRE a\nADD b\nDEL a\nEND\n"
        "ACTION ba\nPRE b\nADD a\nDEL b\nEND\n"
        "ACTION win\nPRE a b\nADD g\nEND\n");
    for (Planner pl : novelty_planners) EXPECT_EQ(solve(p, config(pl)).outcome, Outcome::exhausted);
    const GroundProblem q = parse_problem("ATOMS\na g\nINIT\na\nGOAL\ng\n");
    EXPECT_EQ(solve(q, config(Planner::bfws)).outcome, Outcome::exhausted);
}

TEST(Solve, GoalInInit) {
    const GroundProblem p = parse_problem("ATOMS\na\nINIT\na\nGOAL\na\n");
    const auto r = solve(p, config(Planner::bfcs));
    EXPECT_EQ(r.outcome, Outcome::plan);
    EXPECT_TRUE(r.plan.empty());
}

TEST(Solve, RejectsBadTrimDepth) {
    SearchConfig c = config(Planner::bfws, true);
    c.trim_depth = 0;
    EXPECT_THROW(solve(generate(Domain::chain, 2), c), std::invalid_argument);
    EXPECT_THROW(parse_planner("astar"), std::invalid_argument);
}

TEST(Expand, ChainRootChild) {
    const GroundProblem p = generate(Domain::chain, 3);
    std::vector<SearchNode> generated;
    SearchConfig c = config(Planner::bfcs);
    c.observer = [&](const NodeEvent &e) {
        if (e.kind == NodeEventKind::generate) generated.push_back(*e.node);
    };
    solve(p, c);
    ASSERT_GE(generated.size(), 2u);
    EXPECT_EQ(generated[1].r_credit, 1);
    EXPECT_EQ(generated[1].eval_primary.novelty, 0);
    EXPECT_EQ(generated[0].seq, 0u);
    for (std::size_t i = 1; i < generated.size(); ++i) EXPECT_GT(generated[i].seq, generated[i - 1].seq);
}

TEST(Expand, DuplicatesCountedNotInserted) {
    const GroundProblem p = generate(Domain::gripper, 2);
    std::uint64_t gens = 0, allocs = 0;
    SearchConfig c = config(Planner::bfws);
    c.observer = [&](const NodeEvent &e) {
        gens += e.kind == NodeEventKind::generate;
        allocs += e.kind == NodeEventKind::alloc;
    };
    const auto r = solve(p, c);
    EXPECT_GT(r.stats.duplicates, 0u);
    EXPECT_EQ(r.stats.generated, gens);
    // The goal child is generated but never allocated.
    EXPECT_EQ(allocs + r.stats.duplicates + 1, gens);
}

TEST(Expand, BfnosMembershipTwo) {
    const GroundProblem p = generate(Domain::gripper, 2);
    bool all_two = true, secondary = true;
    SearchConfig c = config(Planner::bfnos);
    c.observer = [&](const NodeEvent &e) {
        if (e.kind == NodeEventKind::expand) all_two &= e.node->lifetime.list_membership == 2;
        if (e.kind == NodeEventKind::generate) secondary &= e.node->eval_secondary.has_value();
    };
    solve(p, c);
    EXPECT_TRUE(all_two);
    EXPECT_TRUE(secondary);
}

TEST(Expand, CountReplayOracle) {
    const GroundProblem p = generate(Domain::blocks, 5);
    std::vector<State> hist;
    std::vector<PartitionKey> keys;
    std::uint64_t mismatches = 0;
    SearchConfig c = config(Planner::bfcs);
    c.observer = [&](const NodeEvent &e) {
        if (e.kind != NodeEventKind::generate) return;
        const auto expect = brute_force_count_novelty(hist, keys, e.node->state, e.key);
        mismatches += static_cast<std::int64_t>(expect) != e.node->eval_primary.novelty;
        mismatches += e.key != partition_key(e.node->state, e.node->r_credit, p);
        hist.push_back(e.node->state);
        keys.push_back(e.key);
    };
    const auto r = solve(p, c);
    EXPECT_EQ(r.outcome, Outcome::plan);
    EXPECT_EQ(mismatches, 0u);
}

TEST(Expand, BfcsSiblingsPopInOrder) {
    // With no trimming and an unbounded list, expansion order is non-decreasing
    // among nodes present in the list at the same time, so consecutive
    // expansions of siblings never go backwards in (C1, #g).
    const GroundProblem p = generate(Domain::gripper, 3);
    SearchConfig c = config(Planner::bfcs);
    NodeId last_parent = no_node;
    EvalTuple last{};
    bool ordered = true;
    c.observer = [&](const NodeEvent &e) {
        if (e.kind != NodeEventKind::expand) return;
        if (e.node->parent == last_parent && e.node->eval_primary < last) ordered = false;
        last_parent = e.node->parent;
        last = e.node->eval_primary;
    };
    solve(p, c);
    EXPECT_TRUE(ordered);
}

TEST(Trace, RowCountAndHeader) {
    const GroundProblem p = generate(Domain::gripper, 2);
    std::ostringstream os;
    SearchConfig c = config(Planner::bfnos);
    c.trace = &os;
    const auto r = solve(p, c);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, trace_header);
    std::size_t rows = 0, expand_rows = 0;
    std::string last;
    while (std::getline(is, line)) {
        ++rows;
        expand_rows += line.starts_with("expand,");
        last = line;
    }
    EXPECT_EQ(rows, r.stats.expansions + 1);
    EXPECT_EQ(expand_rows, r.stats.expansions);
    EXPECT_TRUE(last.starts_with("summary,"));
}

TEST(Trace, BytesMonotoneBeforeFirstTrim) {
    const GroundProblem p = generate(Domain::blocks, 6);
    std::ostringstream os;
    SearchConfig c = config(Planner::bfws);
    c.trace = &os;
    solve(p, c);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    long long prev = -1;
    while (std::getline(is, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f[0] != "expand") break;
        const long long b = std::stoll(f[9]);
        EXPECT_GE(b, prev);
        prev = b;
    }
}

TEST(Trace, FailedStreamBecomesWarning) {
    const GroundProblem p = generate(Domain::chain, 4);
    std::ostringstream os;
    os.setstate(std::ios::badbit);
    SearchConfig c = config(Planner::bfws);
    c.trace = &os;
    const auto r = solve(p, c);
    EXPECT_EQ(r.outcome, Outcome::plan);
    EXPECT_FALSE(r.warning.empty());
}

TEST(Limits, MemoryAndTime) {
    const GroundProblem p = generate(Domain::lock, 10);
    SearchConfig c = config(Planner::bfws, true);
    c.memory_limit = 20000;
    EXPECT_EQ(solve(p, c).outcome, Outcome::memory_limit);
    c.memory_limit.reset();
    c.time_limit = 0.05;
    const auto r = solve(p, c);
    EXPECT_EQ(r.outcome, Outcome::time_limit);
    EXPECT_LT(r.stats.wall_ms, 2000);
}

TEST(Limits, TrimmingBoundsLists) {
    const GroundProblem p = generate(Domain::gripper, 6);
    SearchConfig c = config(Planner::bfnos, true);
    c.trim_depth = 3;
    std::int64_t max_open = 0;
    std::ostringstream os;
    c.trace = &os;
    const auto r = solve(p, c);
    EXPECT_GT(r.stats.trims, 0u);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        max_open = std::max({max_open, std::int64_t{std::stoll(f[6])}, std::int64_t{std::stoll(f[7])}});
    }
    EXPECT_LE(max_open, 15);
}

TEST(Determinism, SameSeedSameResult) {
    const GroundProblem p = generate(Domain::blocks, 7);
    for (Planner pl : novelty_planners) {
        SearchConfig c = config(pl, true);
        c.trim_depth = 6;
        c.seed = 3;
        const auto a = solve(p, c), b = solve(p, c);
        EXPECT_EQ(a.plan, b.plan);
        EXPECT_TRUE(a.stats.same_search(b.stats));
    }
}
