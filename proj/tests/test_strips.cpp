#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "nplan/generators.hpp"
#include "nplan/strips.hpp"
#include "support.hpp"

using namespace nplan;

namespace {

constexpr const char *tiny = R"(# three atoms, one action
ATOMS
a0 a1
a2
INIT
a0
GOAL
a1
ACTION go COST 2
PRE a0
ADD a1
DEL a0
END
)";

std::set<int> as_set(const State &s) {
    const auto v = s.true_atoms();
    return {v.begin(), v.end()};
}

}  // namespace

TEST(Parse, MinimalProblem) {
    const GroundProblem p = parse_problem(tiny);
    EXPECT_EQ(p.num_atoms(), 3u);
    EXPECT_EQ(p.num_actions(), 1u);
    EXPECT_EQ(p.atoms()[2].name, "a2");
    EXPECT_EQ(p.action(0).cost, 2);
    EXPECT_TRUE(p.init().test(0));
    EXPECT_EQ(p.goal(), std::vector<int>{1});
}

TEST(Parse, DanglingReference) {
    const std::string text = "ATOMS\na0\nINIT\na0\nGOAL\na9\n";
    try {
        parse_problem(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.kind(), ParseErrorKind::dangling_reference);
        EXPECT_EQ(e.line(), 6u);
    }
}

TEST(Parse, DuplicateAtom) {
    try {
        parse_problem("ATOMS\na b a\nINIT\nGOAL\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.kind(), ParseErrorKind::duplicate_name);
    }
}

TEST(Parse, DuplicateAction) {
    const std::string text = "ATOMS\na\nINIT\nGOAL\nACTION x\nEND\nACTION x\nEND\n";
    try {
        parse_problem(text);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.kind(), ParseErrorKind::duplicate_name);
    }
}

TEST(Parse, AddDelOverlap) {
    const std::string text = "ATOMS\na b\nINIT\nGOAL\nACTION x\nADD a\nDEL a\nEND\n";
    try {
        parse_problem(text);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.kind(), ParseErrorKind::add_del_overlap);
    }
}

TEST(Parse, SyntaxErrorCarriesLine) {
    const std::string text = "ATOMS\na\nINIT\nGOAL\nACTION x\nFROB a\nEND\n";
    try {
        parse_problem(text);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.kind(), ParseErrorKind::syntax);
        EXPECT_EQ(e.line(), 6u);
    }
}

TEST(Parse, RoundTripGenerated) {
    for (auto [d, n] : {std::pair{Domain::gripper, 2}, {Domain::chain, 7}, {Domain::blocks, 4}, {Domain::lock, 3}}) {
        const GroundProblem p = generate(d, n);
        const GroundProblem q = parse_problem(serialize_problem(p));
        EXPECT_TRUE(p.structurally_equal(q)) << to_string(d);
    }
}

TEST(Apply, SetAlgebra) {
    const GroundProblem p = parse_problem(tiny);
    const State s = p.init();
    const State r = apply(s, p.action(0));
    EXPECT_EQ(as_set(r), (std::set<int>{1}));
    EXPECT_EQ(as_set(s), (std::set<int>{0}));
}

TEST(Apply, EmptyEffectsIdentity) {
    const GroundAction noop{"noop", {}, {}, {}, 1};
    const State s = State::from_atoms(5, std::vector<int>{1, 3});
    EXPECT_EQ(apply(s, noop), s);
}

TEST(Apply, PreconditionViolation) {
    const GroundProblem p = parse_problem(tiny);
    EXPECT_THROW(apply(State(3), p.action(0)), PreconditionViolation);
}

TEST(Apply, RandomAgainstSetOracle) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t L = 1 + rng() % 130;
        const State s = testkit::random_state(L, rng);
        GroundAction a;
        std::vector<int> atoms(L);
        std::iota(atoms.begin(), atoms.end(), 0);
        std::shuffle(atoms.begin(), atoms.end(), rng);
        for (int v : atoms) {
            const auto roll = rng() % 6;
            if (roll == 0 && s.test(static_cast<std::size_t>(v))) a.pre.push_back(v);
            else if (roll == 1) a.add.push_back(v);
            else if (roll == 2) a.del.push_back(v);
        }
        std::set<int> expect = as_set(s);
        for (int v : a.del) expect.erase(v);
        for (int v : a.add) expect.insert(v);
        const State r = apply(s, a);
        EXPECT_EQ(as_set(r), expect);
        std::size_t del_in_s = 0, add_new = 0;
        for (int v : a.del) del_in_s += s.test(static_cast<std::size_t>(v));
        for (int v : a.add) add_new += !s.test(static_cast<std::size_t>(v));
        EXPECT_EQ(r.count(), s.count() - del_in_s + add_new);
    }
}

TEST(ValidatePlan, EmptyPlanGoalInInit) {
    const GroundProblem p = parse_problem("ATOMS\na\nINIT\na\nGOAL\na\n");
    const PlanCheck c = validate_plan(p, {});
    EXPECT_TRUE(c.valid);
    EXPECT_EQ(c.cost, 0);
}

TEST(ValidatePlan, InapplicableStepIndex) {
    const GroundProblem p = generate(Domain::chain, 4);
    const PlanCheck c = validate_plan(p, {"step-1", "step-2", "step-4", "step-3"});
    EXPECT_FALSE(c.valid);
    EXPECT_EQ(c.failure, PlanFailure::inapplicable_step);
    EXPECT_EQ(c.step, 2u);
}

TEST(ValidatePlan, UnknownActionAndUnmetGoal) {
    const GroundProblem p = generate(Domain::chain, 3);
    EXPECT_EQ(validate_plan(p, {"step-1", "fly"}).failure, PlanFailure::unknown_action);
    EXPECT_EQ(validate_plan(p, {"step-1", "step-2"}).failure, PlanFailure::goal_unsatisfied);
}

TEST(ValidatePlan, GripperOneOptimal) {
    const GroundProblem p = generate(Domain::gripper, 1);
    EXPECT_EQ(testkit::bfs(p).optimal_length, 3u);
    const PlanCheck c = validate_plan(p, {"pick-b1-rooma-left", "move-rooma-roomb", "drop-b1-roomb-left"});
    EXPECT_TRUE(c.valid) << c.message;
    EXPECT_EQ(c.cost, 3);
}

TEST(ValidatePlan, AgreesWithStepwiseOracle) {
    const GroundProblem p = generate(Domain::blocks, 4);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::string> plan;
        State s = p.init();
        bool ok = true;
        std::size_t len = rng() % 12;
        for (std::size_t i = 0; i < len; ++i) {
            const auto &a = p.action(rng() % p.num_actions());
            plan.push_back(a.name);
            if (ok && a.applicable(s)) s = apply_unchecked(s, a);
            else ok = false;
        }
        ok = ok && p.is_goal(s);
        EXPECT_EQ(validate_plan(p, plan).valid, ok);
    }
}

TEST(PlanFile, RoundTrip) {
    const std::string text = format_plan({"a", "b"}, 2);
    EXPECT_EQ(text, "a\nb\n; cost = 2\n");
    const PlanFile f = parse_plan(text);
    EXPECT_EQ(f.actions, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(f.declared_cost, 2);
    EXPECT_THROW(parse_plan("a\nb\n"), ParseError);
}

TEST(Generate, ChainOptimalLength) {
    const GroundProblem p = generate(Domain::chain, 3);
    EXPECT_EQ(p.num_atoms(), 3u);
    EXPECT_EQ(testkit::bfs(p).optimal_length, 3u);
}

TEST(Generate, GripperLayoutAndLengths) {
    const std::size_t expected[] = {3, 5, 9};
    for (int n = 1; n <= 3; ++n) {
        const GroundProblem p = generate(Domain::gripper, n);
        EXPECT_EQ(p.num_atoms(), static_cast<std::size_t>(4 * n + 4));
        EXPECT_EQ(testkit::bfs(p).optimal_length, expected[n - 1]) << "n=" << n;
    }
}

TEST(Generate, Deterministic) {
    for (Domain d : {Domain::chain, Domain::gripper, Domain::blocks, Domain::lock})
        EXPECT_EQ(serialize_problem(generate(d, 3, 1)), serialize_problem(generate(d, 3, 1)));
}

TEST(Generate, SizeOutOfRange) {
    EXPECT_THROW(generate(Domain::chain, 0), std::out_of_range);
    EXPECT_THROW(generate(Domain::blocks, 41), std::out_of_range);
}

TEST(Generate, LockIsSolvableButBypassIsNot) {
    const GroundProblem p = generate(Domain::lock, 3, 2);
    const auto r = testkit::bfs(p);
    ASSERT_TRUE(r.optimal_length);
    const int bypass = *p.find_action("bypass");
    const GroundAction &a = p.action(static_cast<std::size_t>(bypass));
    EXPECT_FALSE(a.applicable(p.init()));
    EXPECT_FALSE(a.applicable(apply(p.init(), p.action(static_cast<std::size_t>(*p.find_action("arm"))))));
}
