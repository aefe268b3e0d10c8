#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nplan/search.hpp"

namespace nplan {

/// `internal:<planner>` or `exec:<command template>`. The template may use
/// {problem}, {plan} and {time}; paths are substituted shell-quoted.
struct BackendSpec {
    enum class Kind { internal, external };
    Kind kind = Kind::internal;
    Planner planner = Planner::gbfs;
    std::string command;

    static BackendSpec parse(std::string_view text);  // throws std::invalid_argument
};

struct DualConfig {
    SearchConfig frontend;
    std::optional<std::size_t> frontend_mem_threshold;  // none: unbounded up to global_mem
    std::optional<double> frontend_time_threshold;      // none: memory-only mode
    BackendSpec backend;
    double global_time = 60;
    std::size_t global_mem = std::size_t{512} << 20;
    std::string problem_path;  // handed to external backends
    std::string work_dir;      // backend plan files; empty: system temp dir
};

enum class Stage { frontend, backend };
enum class FailCause { memory, time, exhausted };
enum class BackendStatus { ok, timeout, nonzero_exit, spawn_failure, unparseable_plan, invalid_plan };

std::string_view to_string(Stage s);
std::string_view to_string(FailCause c);
std::string_view to_string(BackendStatus s);

struct BackendRun {
    BackendStatus status = BackendStatus::ok;
    SearchResult result;
    int exit_code = 0;
    std::string message;
    double wall_ms = 0;
};

struct DualOutcome {
    Stage stage = Stage::frontend;  // backend iff the backend was started
    SearchResult result;            // final result of the run
    std::optional<FailCause> frontend_fail_cause;
    SearchResult frontend;
    std::optional<BackendRun> backend;
    double frontend_ms = 0;
    double backend_budget = 0;  // seconds handed to the backend
    double total_ms = 0;
};

/// max(0, global_time - frontend_elapsed), in seconds.
double remaining_budget(double global_time, double frontend_elapsed);

/// Runs the command under `budget` seconds, kills its process group on
/// expiry, then parses and validates the plan file it wrote.
BackendRun spawn_external_backend(const std::string &command_template, const GroundProblem &p,
                                  const std::string &problem_path, const std::string &plan_path, double budget,
                                  std::size_t mem_limit);

/// Throws std::invalid_argument when the thresholds exceed the global limits.
DualOutcome run_dual(const GroundProblem &p, const DualConfig &cfg);

nlohmann::json stats_json(const SearchStats &s);
nlohmann::json to_json(const DualOutcome &o, const GroundProblem &p);

}  // namespace nplan
