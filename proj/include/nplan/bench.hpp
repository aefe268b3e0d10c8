#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nplan/strips.hpp"

namespace nplan::bench {

struct LimitProfile {
    std::string name;
    double time = 60;
    std::size_t mem = std::size_t{512} << 20;
};

struct DualParams {
    std::optional<std::size_t> mem_threshold;
    std::optional<double> time_threshold;
    std::string backend = "internal:gbfs";
};

/// `problem` is a file path or `gen:<domain>:<size>[:<variant>]`.
struct ManifestEntry {
    std::string problem;
    std::string config;  // frontend planner for dual entries
    LimitProfile profile;
    std::string domain;  // default: parent directory name, or the generator domain
    std::optional<DualParams> dual;
    std::optional<int> trim_depth;  // none: default depth; 0: trimming disabled
};

/// Relative paths resolve against base_dir.
std::vector<ManifestEntry> parse_manifest(const nlohmann::json &j, const std::filesystem::path &base_dir);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path &path);

GroundProblem load_instance(const std::string &problem);

struct RunRecord {
    std::string problem;
    std::string domain;
    std::string config;
    std::string profile;
    std::uint64_t seed = 0;
    bool dual = false;
    bool solved = false;
    std::string outcome;  // plan, exhausted, time_limit, memory_limit, error
    std::string stage;    // frontend, backend, single
    std::optional<std::string> failure_cause;  // memory, time, exhausted, error
    std::uint64_t expansions = 0;
    std::uint64_t generated = 0;
    std::size_t plan_length = 0;
    std::int64_t cost = 0;
    std::size_t peak_bytes = 0;
    std::string error;
    double wall_ms = 0;  // kept under "timing", outside the deterministic part
};

nlohmann::json to_json(const RunRecord &r);
RunRecord run_record_from_json(const nlohmann::json &j);

struct MeanSd {
    double mean = 0;
    double sd = 0;  // sample standard deviation, 0 for a single seed
};
MeanSd mean_sd(const std::vector<double> &xs);

struct Aggregate {
    std::string config;
    std::string profile;
    std::size_t instances = 0;  // distinct problems
    std::size_t seeds = 0;
    MeanSd coverage;
    MeanSd pct_score;  // mean over domains of % solved
    std::optional<double> median_expansions;  // over solved runs
    std::optional<double> frontend_share;     // % of solved dual runs solved by the frontend
};

nlohmann::json to_json(const Aggregate &a);

/// Groups by (config, profile); recomputable from run records alone.
std::vector<Aggregate> aggregate(const std::vector<RunRecord> &runs);

struct TimelinePoint {
    double time_s;
    double memory_failure_pct;
};

struct FailureEvent {
    bool memory;
    double time_s;
};

inline constexpr int timeline_buckets = 32;

/// Cumulative share (in %) of all failures that are memory failures at or
/// before each of 32 log-spaced edges lo (T/lo)^(i/31), lo = T/1000.
std::vector<TimelinePoint> failure_timeline(const std::vector<FailureEvent> &events, double time_limit);

/// profile,bucket,time_s,memory_failure_pct for every profile in runs.
void write_failure_timeline(const std::vector<RunRecord> &runs, const std::vector<LimitProfile> &profiles,
                            std::ostream &os);

struct SuiteResult {
    std::vector<RunRecord> runs;
    std::vector<Aggregate> aggregates;
};

RunRecord run_one(const ManifestEntry &e, std::uint64_t seed);

/// Every (entry, seed) pair in manifest order, seeds innermost. parallel > 1
/// runs instances concurrently; records keep manifest order.
SuiteResult run_suite(const std::vector<ManifestEntry> &entries, const std::vector<std::uint64_t> &seeds,
                      unsigned parallel = 1);

/// Writes runs.jsonl, summary.json and failure_timeline.csv.
void write_suite(const SuiteResult &r, const std::vector<ManifestEntry> &entries, const std::filesystem::path &dir);

}  // namespace nplan::bench
