#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <sys/wait.h>

#include "nplan/dual.hpp"
#include "nplan/generators.hpp"

using namespace nplan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("nplan-dual-test-" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string write_problem(const fs::path &dir, const GroundProblem &p, const std::string &name) {
    const fs::path f = dir / name;
    std::ofstream(f) << serialize_problem(p);
    return f.string();
}

DualConfig base(Planner frontend = Planner::bfnos) {
    DualConfig c;
    c.frontend.planner = frontend;
    c.global_time = 30;
    return c;
}

int run_cli(const std::string &args) {
    const std::string cmd = std::string(NPLAN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RemainingBudget, Examples) {
    EXPECT_EQ(remaining_budget(1800, 1600), 200);
    EXPECT_EQ(remaining_budget(1800, 10), 1790);
    EXPECT_EQ(remaining_budget(1800, 1800), 0);
    EXPECT_EQ(remaining_budget(1800, 2500), 0);
}

TEST(BackendSpec, Parse) {
    EXPECT_EQ(BackendSpec::parse("internal:gbfs").planner, Planner::gbfs);
    const auto e = BackendSpec::parse("exec:echo {plan}");
    EXPECT_EQ(e.kind, BackendSpec::Kind::external);
    EXPECT_EQ(e.command, "echo {plan}");
    EXPECT_THROW(BackendSpec::parse("lama"), std::invalid_argument);
    EXPECT_THROW(BackendSpec::parse("internal:lama"), std::invalid_argument);
}

TEST(RunDual, FrontendSolves) {
    const GroundProblem p = generate(Domain::gripper, 3);
    const auto out = run_dual(p, base());
    EXPECT_EQ(out.stage, Stage::frontend);
    EXPECT_FALSE(out.frontend_fail_cause);
    EXPECT_FALSE(out.backend);
    EXPECT_EQ(out.result.outcome, Outcome::plan);
}

TEST(RunDual, TinyMemoryThresholdFallsBack) {
    const GroundProblem p = generate(Domain::gripper, 3);
    DualConfig c = base();
    c.frontend_mem_threshold = 4096;
    const auto out = run_dual(p, c);
    EXPECT_EQ(out.frontend_fail_cause, FailCause::memory);
    EXPECT_EQ(out.stage, Stage::backend);
    ASSERT_TRUE(out.backend);
    EXPECT_EQ(out.backend->status, BackendStatus::ok);
    ASSERT_EQ(out.result.outcome, Outcome::plan);
    EXPECT_TRUE(validate_plan(p, action_names(p, out.result.plan)).valid);
    EXPECT_EQ(to_json(out, p)["stage"], "backend");
}

TEST(RunDual, ZeroThresholdAlwaysBackend) {
    for (int n : {1, 2, 3}) {
        DualConfig c = base();
        c.frontend_mem_threshold = 0;
        const auto out = run_dual(generate(Domain::chain, n), c);
        EXPECT_EQ(out.stage, Stage::backend);
        EXPECT_EQ(out.result.outcome, Outcome::plan);
    }
}

TEST(RunDual, InfiniteThresholdMatchesFrontendAlone) {
    const GroundProblem p = generate(Domain::blocks, 7);
    DualConfig c = base();
    c.frontend.seed = 4;
    const auto out = run_dual(p, c);
    const auto alone = solve(p, c.frontend);
    EXPECT_EQ(out.stage, Stage::frontend);
    EXPECT_EQ(out.result.outcome, alone.outcome);
    EXPECT_EQ(out.result.plan, alone.plan);
    EXPECT_TRUE(out.result.stats.same_search(alone.stats));
}

TEST(RunDual, MemoryOnlyModeTimesOutWithoutFallback) {
    const GroundProblem p = generate(Domain::lock, 14);
    DualConfig c = base(Planner::bfws);
    c.global_time = 1.0;
    c.global_mem = std::size_t{4} << 30;
    c.frontend_mem_threshold = std::size_t{3} << 30;
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run_dual(p, c);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_EQ(out.stage, Stage::frontend);
    EXPECT_EQ(out.frontend_fail_cause, FailCause::time);
    EXPECT_EQ(out.result.outcome, Outcome::time_limit);
    EXPECT_FALSE(out.backend);
    EXPECT_EQ(out.backend_budget, 0);
    EXPECT_LT(out.frontend.stats.peak_bytes, *c.frontend_mem_threshold);
    EXPECT_LE(wall, c.global_time + 2);
}

TEST(RunDual, TimeThresholdGivesRemainderToBackend) {
    const GroundProblem p = generate(Domain::lock, 14);
    DualConfig c = base(Planner::bfws);
    c.global_time = 1.5;
    c.frontend_time_threshold = 0.5;
    const auto out = run_dual(p, c);
    EXPECT_EQ(out.frontend_fail_cause, FailCause::time);
    EXPECT_EQ(out.stage, Stage::backend);
    EXPECT_NEAR(out.backend_budget, c.global_time - out.frontend_ms / 1000.0, 1e-9);
    EXPECT_LE(out.total_ms / 1000.0, c.global_time + 2);
}

TEST(RunDual, RejectsThresholdAboveGlobal) {
    DualConfig c = base();
    c.frontend_mem_threshold = c.global_mem + 1;
    EXPECT_THROW(run_dual(generate(Domain::chain, 2), c), std::invalid_argument);
    c = base();
    c.frontend_time_threshold = c.global_time + 1;
    EXPECT_THROW(run_dual(generate(Domain::chain, 2), c), std::invalid_argument);
}

class ExternalBackend : public ::testing::Test {
protected:
    TempDir dir;
    GroundProblem problem = generate(Domain::gripper, 3);
    std::string problem_path = write_problem(dir.path, problem, "gripper3.txt");

    DualOutcome run(const std::string &cmd, double global_time = 20) {
        DualConfig c = base();
        c.frontend_mem_threshold = 2048;
        c.backend = BackendSpec::parse("exec:" + cmd);
        c.global_time = global_time;
        c.problem_path = problem_path;
        c.work_dir = dir.path.string();
        return run_dual(problem, c);
    }
};

TEST_F(ExternalBackend, SelfHostedRoundTrip) {
    const auto out = run(std::string(NPLAN_CLI_PATH) +
                         " solve --problem {problem} --planner bfws --plan-out {plan} --time-limit {time}");
    ASSERT_TRUE(out.backend);
    EXPECT_EQ(out.backend->status, BackendStatus::ok) << out.backend->message;
    ASSERT_EQ(out.result.outcome, Outcome::plan);
    EXPECT_EQ(out.stage, Stage::backend);
    EXPECT_TRUE(validate_plan(problem, action_names(problem, out.result.plan)).valid);
}

TEST_F(ExternalBackend, SleepStubKilledOnBudget) {
    const auto out = run("sleep 30", 1.0);
    ASSERT_TRUE(out.backend);
    EXPECT_EQ(out.backend->status, BackendStatus::timeout);
    EXPECT_EQ(out.result.outcome, Outcome::time_limit);
    EXPECT_LE(out.total_ms / 1000.0, 1.0 + 2);
}

TEST_F(ExternalBackend, InvalidPlan) {
    const auto out = run("printf 'move-rooma-roomb\\n; cost = 1\\n' > {plan}");
    EXPECT_EQ(out.backend->status, BackendStatus::invalid_plan);
    EXPECT_NE(out.result.outcome, Outcome::plan);
}

TEST_F(ExternalBackend, WrongDeclaredCost) {
    const auto out = run(std::string(NPLAN_CLI_PATH) +
                         " solve --problem {problem} --plan-out {plan} && sed -i 's/cost = .*/cost = 99/' {plan}");
    EXPECT_EQ(out.backend->status, BackendStatus::invalid_plan);
}

TEST_F(ExternalBackend, UnparseablePlan) {
    EXPECT_EQ(run("echo garbage > {plan}").backend->status, BackendStatus::unparseable_plan);
    EXPECT_EQ(run("true").backend->status, BackendStatus::unparseable_plan);
}

TEST_F(ExternalBackend, NonzeroExitAndSpawnFailure) {
    const auto a = run("exit 3");
    EXPECT_EQ(a.backend->status, BackendStatus::nonzero_exit);
    EXPECT_EQ(a.backend->exit_code, 3);
    EXPECT_EQ(run("/nonexistent/planner {problem}").backend->status, BackendStatus::spawn_failure);
}

TEST(Cli, ExitCodes) {
    TempDir dir;
    const std::string solvable = write_problem(dir.path, generate(Domain::chain, 4), "chain.txt");
    const std::string dead = (dir.path / "dead.txt").string();
    std::ofstream(dead) << "ATOMS\na b g\nINIT\na\nGOAL\ng\nACTION ab\nPRE a\nADD b\nDEL a\nEND\n"
                           "ACTION win\nPRE a b\nADD g\nEND\n";
    const std::string broken = (dir.path / "broken.txt").string();
    std::ofstream(broken) << "ATOMS\na\nGOAL\nzz\n";
    const std::string plan = (dir.path / "out.plan").string();
    EXPECT_EQ(run_cli("solve --problem " + solvable + " --plan-out " + plan), 0);
    EXPECT_TRUE(validate_plan(generate(Domain::chain, 4), load_plan(plan).actions).valid);
    EXPECT_EQ(run_cli("solve --problem " + dead), 10);
    EXPECT_EQ(run_cli("solve --problem gen:lock:14 --time-limit 0.2"), 20);
    EXPECT_EQ(run_cli("solve --problem gen:lock:14 --memory-limit 50000"), 21);
    EXPECT_EQ(run_cli("solve --problem " + broken), 2);
    EXPECT_EQ(run_cli("solve --planner astar --problem " + solvable), 2);
    EXPECT_EQ(run_cli("dual --problem " + solvable + " --mem-threshold 0 --global-time 20 --global-mem 536870912"), 0);
    EXPECT_EQ(run_cli("dual --problem " + solvable + " --mem-threshold 0 --global-time 20 --global-mem 536870912 --backend 'exec:exit 4'"), 1);
}
