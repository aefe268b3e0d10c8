#include "nplan/dual.hpp"

#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <stdexcept>
#include <thread>

namespace nplan {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

std::string shell_quote(const std::string &s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

void replace_all(std::string &s, std::string_view from, const std::string &to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

std::string backend_plan_path(const DualConfig &cfg) {
    static std::atomic<unsigned> counter{0};
    const std::filesystem::path dir =
        cfg.work_dir.empty() ? std::filesystem::temp_directory_path() : std::filesystem::path(cfg.work_dir);
    return (dir / ("nplan-backend-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".plan"))
        .string();
}

}  // namespace

BackendSpec BackendSpec::parse(std::string_view text) {
    BackendSpec b;
    if (text.starts_with("internal:")) {
        b.kind = Kind::internal;
        b.planner = parse_planner(text.substr(9));
    } else if (text.starts_with("exec:")) {
        b.kind = Kind::external;
        b.command = std::string(text.substr(5));
        if (b.command.empty()) throw std::invalid_argument("empty backend command");
    } else {
        throw std::invalid_argument("backend must be internal:<planner> or exec:<command>");
    }
    return b;
}

std::string_view to_string(Stage s) { return s == Stage::frontend ? "frontend" : "backend"; }

std::string_view to_string(FailCause c) {
    switch (c) {
        case FailCause::memory:
            return "memory";
        case FailCause::time:
            return "time";
        case FailCause::exhausted:
            return "exhausted";
    }
    return "?";
}

std::string_view to_string(BackendStatus s) {
    switch (s) {
        case BackendStatus::ok:
            return "ok";
        case BackendStatus::timeout:
            return "timeout";
        case BackendStatus::nonzero_exit:
            return "nonzero_exit";
        case BackendStatus::spawn_failure:
            return "spawn_failure";
        case BackendStatus::unparseable_plan:
            return "unparseable_plan";
        case BackendStatus::invalid_plan:
            return "invalid_plan";
    }
    return "?";
}

double remaining_budget(double global_time, double frontend_elapsed) {
    return std::max(0.0, global_time - frontend_elapsed);
}

BackendRun spawn_external_backend(const std::string &command_template, const GroundProblem &p,
                                  const std::string &problem_path, const std::string &plan_path, double budget,
                                  std::size_t mem_limit) {
    BackendRun run;
    run.result.outcome = Outcome::exhausted;
    const auto start = Clock::now();
    std::string cmd = command_template;
    replace_all(cmd, "{problem}", shell_quote(problem_path));
    replace_all(cmd, "{plan}", shell_quote(plan_path));
    replace_all(cmd, "{time}", std::to_string(budget));
    std::error_code ec;
    std::filesystem::remove(plan_path, ec);

    const pid_t pid = ::fork();
    if (pid < 0) {
        run.status = BackendStatus::spawn_failure;
        run.message = "fork failed";
        return run;
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        if (mem_limit > 0) {
            rlimit rl{static_cast<rlim_t>(mem_limit), static_cast<rlim_t>(mem_limit)};
            ::setrlimit(RLIMIT_AS, &rl);
        }
        ::dup2(STDERR_FILENO, STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char *>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);

    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget));
    int status = 0;
    for (;;) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0) {
            run.status = BackendStatus::spawn_failure;
            run.message = "waitpid failed";
            run.wall_ms = ms_since(start);
            return run;
        }
        if (Clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            run.status = BackendStatus::timeout;
            run.result.outcome = Outcome::time_limit;
            run.message = "killed after " + std::to_string(budget) + " s";
            run.wall_ms = ms_since(start);
            return run;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    run.wall_ms = ms_since(start);

    if (WIFSIGNALED(status)) {
        run.status = BackendStatus::nonzero_exit;
        run.exit_code = 128 + WTERMSIG(status);
        run.message = "terminated by signal " + std::to_string(WTERMSIG(status));
        return run;
    }
    run.exit_code = WEXITSTATUS(status);
    if (run.exit_code == 126 || run.exit_code == 127) {
        run.status = BackendStatus::spawn_failure;
        run.message = "command could not be executed";
        return run;
    }
    if (run.exit_code != 0) {
        run.status = BackendStatus::nonzero_exit;
        run.message = "exit code " + std::to_string(run.exit_code);
        return run;
    }

    PlanFile pf;
    try {
        pf = load_plan(plan_path);
    } catch (const ParseError &e) {
        run.status = BackendStatus::unparseable_plan;
        run.message = e.what();
        return run;
    }
    const PlanCheck check = validate_plan(p, pf.actions);
    if (!check.valid) {
        run.status = BackendStatus::invalid_plan;
        run.message = check.message;
        return run;
    }
    if (check.cost != pf.declared_cost) {
        run.status = BackendStatus::invalid_plan;
        run.message = "declared cost " + std::to_string(pf.declared_cost) + " but plan costs " +
                      std::to_string(check.cost);
        return run;
    }
    run.status = BackendStatus::ok;
    run.result.outcome = Outcome::plan;
    run.result.cost = check.cost;
    for (const auto &name : pf.actions) run.result.plan.push_back(*p.find_action(name));
    return run;
}

DualOutcome run_dual(const GroundProblem &p, const DualConfig &cfg) {
    if (cfg.global_time <= 0) throw std::invalid_argument("global time must be positive");
    if (cfg.frontend_mem_threshold && *cfg.frontend_mem_threshold > cfg.global_mem)
        throw std::invalid_argument("frontend memory threshold exceeds global memory");
    if (cfg.frontend_time_threshold && (*cfg.frontend_time_threshold > cfg.global_time || *cfg.frontend_time_threshold < 0))
        throw std::invalid_argument("frontend time threshold must lie in [0, global time]");
    if (cfg.backend.kind == BackendSpec::Kind::external && cfg.problem_path.empty())
        throw std::invalid_argument("external backend needs the problem path");

    const auto start = Clock::now();
    DualOutcome out;

    SearchConfig fe = cfg.frontend;
    fe.memory_limit = cfg.frontend_mem_threshold.value_or(cfg.global_mem);
    fe.time_limit = cfg.frontend_time_threshold.value_or(cfg.global_time);
    out.frontend = solve(p, fe);
    out.frontend_ms = ms_since(start);
    out.result = out.frontend;

    if (out.frontend.outcome == Outcome::plan) {
        out.total_ms = ms_since(start);
        return out;
    }
    switch (out.frontend.outcome) {
        case Outcome::memory_limit:
            out.frontend_fail_cause = FailCause::memory;
            break;
        case Outcome::time_limit:
            out.frontend_fail_cause = FailCause::time;
            break;
        default:
            out.frontend_fail_cause = FailCause::exhausted;
            break;
    }

    out.backend_budget = remaining_budget(cfg.global_time, out.frontend_ms / 1000.0);
    if (out.backend_budget <= 0) {
        out.result.outcome = Outcome::time_limit;
        out.total_ms = ms_since(start);
        return out;
    }

    out.stage = Stage::backend;
    if (cfg.backend.kind == BackendSpec::Kind::internal) {
        SearchConfig be = cfg.frontend;
        be.planner = cfg.backend.planner;
        be.time_limit = out.backend_budget;
        be.memory_limit = cfg.global_mem;
        be.trace = nullptr;
        be.observer = nullptr;
        const auto t0 = Clock::now();
        BackendRun run;
        run.result = solve(p, be);
        run.wall_ms = ms_since(t0);
        run.status = run.result.outcome == Outcome::time_limit ? BackendStatus::timeout : BackendStatus::ok;
        out.backend = std::move(run);
    } else {
        const std::string plan_path = backend_plan_path(cfg);
        out.backend = spawn_external_backend(cfg.backend.command, p, cfg.problem_path, plan_path,
                                             out.backend_budget, cfg.global_mem);
        std::error_code ec;
        std::filesystem::remove(plan_path, ec);
    }
    out.result = out.backend->result;
    out.total_ms = ms_since(start);
    return out;
}

nlohmann::json stats_json(const SearchStats &s) {
    nlohmann::json hist = nlohmann::json::object();
    for (std::size_t i = 0; i < count_thresholds.size(); ++i)
        hist[">=" + std::to_string(count_thresholds[i])] = s.count_at_least[i];
    return {{"expansions", s.expansions},
            {"generated", s.generated},
            {"duplicates", s.duplicates},
            {"trims", s.trims},
            {"replaced", s.replaced},
            {"rejected", s.rejected},
            {"nodes_allocated", s.nodes_allocated},
            {"nodes_freed", s.nodes_freed},
            {"peak_bytes", s.peak_bytes},
            {"table_bytes", s.table_bytes},
            {"partitions", s.partitions},
            {"last_expanded_novelty", s.last_expanded_novelty},
            {"saturated_expansions", s.saturated_expansions},
            {"count_at_least", hist},
            {"wall_ms", s.wall_ms}};
}

nlohmann::json to_json(const DualOutcome &o, const GroundProblem &p) {
    nlohmann::json j;
    j["stage"] = to_string(o.stage);
    j["outcome"] = to_string(o.result.outcome);
    j["cause"] = o.frontend_fail_cause ? nlohmann::json(to_string(*o.frontend_fail_cause)) : nlohmann::json();
    if (o.result.outcome == Outcome::plan) {
        j["plan_length"] = o.result.plan.size();
        j["cost"] = o.result.cost;
        j["plan"] = action_names(p, o.result.plan);
    }
    j["frontend"] = {{"outcome", to_string(o.frontend.outcome)},
                     {"wall_ms", o.frontend_ms},
                     {"stats", stats_json(o.frontend.stats)}};
    if (o.backend) {
        j["backend"] = {{"status", to_string(o.backend->status)},
                        {"outcome", to_string(o.backend->result.outcome)},
                        {"budget_s", o.backend_budget},
                        {"exit_code", o.backend->exit_code},
                        {"message", o.backend->message},
                        {"wall_ms", o.backend->wall_ms},
                        {"stats", stats_json(o.backend->result.stats)}};
    } else {
        j["backend"] = nullptr;
    }
    j["total_ms"] = o.total_ms;
    return j;
}

}  // namespace nplan
