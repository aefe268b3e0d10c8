#include "nplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include "nplan/dual.hpp"
#include "nplan/generators.hpp"
#include "nplan/search.hpp"

namespace nplan::bench {

namespace {

using json = nlohmann::json;

struct GenSpec {
    Domain domain;
    int size;
    unsigned variant;
};

std::optional<GenSpec> parse_gen(const std::string &s) {
    if (!s.starts_with("gen:")) return std::nullopt;
    std::vector<std::string> parts;
    std::size_t pos = 4;
    for (;;) {
        const auto c = s.find(':', pos);
        parts.push_back(s.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("bad generator spec '" + s + "'");
    return GenSpec{parse_domain(parts[0]), std::stoi(parts[1]),
                   parts.size() == 3 ? static_cast<unsigned>(std::stoul(parts[2])) : 0u};
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

std::string cause_of(Outcome o) {
    switch (o) {
        case Outcome::memory_limit:
            return "memory";
        case Outcome::time_limit:
            return "time";
        default:
            return "exhausted";
    }
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(const json &j, const std::filesystem::path &base_dir) {
    if (!j.is_array()) throw std::invalid_argument("manifest must be a JSON list");
    std::vector<ManifestEntry> out;
    for (const auto &item : j) {
        ManifestEntry e;
        e.problem = item.at("problem").get<std::string>();
        if (!e.problem.starts_with("gen:") && std::filesystem::path(e.problem).is_relative())
            e.problem = (base_dir / e.problem).lexically_normal().string();
        e.config = item.at("config").get<std::string>();
        parse_planner(e.config);
        const auto &prof = item.at("profile");
        e.profile.name = prof.value("name", std::string("default"));
        e.profile.time = prof.value("time", 60.0);
        e.profile.mem = prof.value("mem", std::size_t{512} << 20);
        if (item.contains("domain")) {
            e.domain = item["domain"].get<std::string>();
        } else if (auto g = parse_gen(e.problem)) {
            e.domain = std::string(to_string(g->domain));
        } else {
            e.domain = std::filesystem::path(e.problem).parent_path().filename().string();
        }
        if (item.contains("dual")) {
            const auto &d = item["dual"];
            DualParams dp;
            if (d.contains("mem_threshold") && !d["mem_threshold"].is_null())
                dp.mem_threshold = d["mem_threshold"].get<std::size_t>();
            if (d.contains("time_threshold") && !d["time_threshold"].is_null())
                dp.time_threshold = d["time_threshold"].get<double>();
            dp.backend = d.value("backend", dp.backend);
            BackendSpec::parse(dp.backend);
            e.dual = dp;
        }
        if (item.contains("trim_depth")) e.trim_depth = item["trim_depth"].get<int>();
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest " + path.string());
    return parse_manifest(json::parse(in), path.parent_path());
}

GroundProblem load_instance(const std::string &problem) {
    if (auto g = parse_gen(problem)) return generate(g->domain, g->size, g->variant);
    return load_problem(problem);
}

json to_json(const RunRecord &r) {
    json j{{"problem", r.problem},       {"domain", r.domain},
           {"config", r.config},         {"profile", r.profile},
           {"seed", r.seed},             {"dual", r.dual},
           {"solved", r.solved},         {"outcome", r.outcome},
           {"stage", r.stage},           {"expansions", r.expansions},
           {"generated", r.generated},   {"plan_length", r.plan_length},
           {"cost", r.cost},             {"peak_bytes", r.peak_bytes}};
    j["failure_cause"] = r.failure_cause ? json(*r.failure_cause) : json();
    if (!r.error.empty()) j["error"] = r.error;
    j["timing"] = {{"wall_ms", r.wall_ms}};
    return j;
}

RunRecord run_record_from_json(const json &j) {
    RunRecord r;
    r.problem = j.at("problem");
    r.domain = j.at("domain");
    r.config = j.at("config");
    r.profile = j.at("profile");
    r.seed = j.at("seed");
    r.dual = j.value("dual", false);
    r.solved = j.at("solved");
    r.outcome = j.at("outcome");
    r.stage = j.at("stage");
    if (j.contains("failure_cause") && !j["failure_cause"].is_null()) r.failure_cause = j["failure_cause"].get<std::string>();
    r.expansions = j.value("expansions", std::uint64_t{0});
    r.generated = j.value("generated", std::uint64_t{0});
    r.plan_length = j.value("plan_length", std::size_t{0});
    r.cost = j.value("cost", std::int64_t{0});
    r.peak_bytes = j.value("peak_bytes", std::size_t{0});
    r.error = j.value("error", std::string());
    if (j.contains("timing")) r.wall_ms = j["timing"].value("wall_ms", 0.0);
    return r;
}

MeanSd mean_sd(const std::vector<double> &xs) {
    MeanSd m;
    if (xs.empty()) return m;
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return m;
}

json to_json(const Aggregate &a) {
    json j{{"config", a.config},
           {"profile", a.profile},
           {"instances", a.instances},
           {"seeds", a.seeds},
           {"coverage", {{"mean", a.coverage.mean}, {"sd", a.coverage.sd}}},
           {"pct_score", {{"mean", a.pct_score.mean}, {"sd", a.pct_score.sd}}}};
    j["median_expansions"] = a.median_expansions ? json(*a.median_expansions) : json();
    j["frontend_share"] = a.frontend_share ? json(*a.frontend_share) : json();
    return j;
}

std::vector<Aggregate> aggregate(const std::vector<RunRecord> &runs) {
    std::map<std::pair<std::string, std::string>, std::vector<const RunRecord *>> groups;
    for (const auto &r : runs) groups[{r.config, r.profile}].push_back(&r);
    std::vector<Aggregate> out;
    for (const auto &[key, rs] : groups) {
        Aggregate a;
        a.config = key.first;
        a.profile = key.second;
        std::set<std::string> problems;
        std::set<std::uint64_t> seeds;
        std::map<std::string, std::set<std::string>> domain_problems;
        for (const auto *r : rs) {
            problems.insert(r->problem);
            seeds.insert(r->seed);
            domain_problems[r->domain].insert(r->problem);
        }
        a.instances = problems.size();
        a.seeds = seeds.size();
        std::vector<double> cov, pct;
        for (auto seed : seeds) {
            double solved = 0;
            std::map<std::string, double> dom_solved;
            for (const auto *r : rs)
                if (r->seed == seed && r->solved) {
                    ++solved;
                    ++dom_solved[r->domain];
                }
            cov.push_back(solved);
            double score = 0;
            for (const auto &[d, ps] : domain_problems) score += 100.0 * dom_solved[d] / static_cast<double>(ps.size());
            pct.push_back(score / static_cast<double>(domain_problems.size()));
        }
        a.coverage = mean_sd(cov);
        a.pct_score = mean_sd(pct);
        std::vector<double> exps;
        double dual_solved = 0, front_solved = 0;
        for (const auto *r : rs) {
            if (!r->solved) continue;
            exps.push_back(static_cast<double>(r->expansions));
            if (r->dual) {
                ++dual_solved;
                if (r->stage == "frontend") ++front_solved;
            }
        }
        if (!exps.empty()) a.median_expansions = median(exps);
        if (dual_solved > 0) a.frontend_share = 100.0 * front_solved / dual_solved;
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<TimelinePoint> failure_timeline(const std::vector<FailureEvent> &events, double time_limit) {
    if (!(time_limit > 0)) throw std::invalid_argument("time limit must be positive");
    const double lo = time_limit / 1000.0;
    std::vector<TimelinePoint> pts;
    for (int i = 0; i < timeline_buckets; ++i) {
        const double edge =
            i == timeline_buckets - 1 ? time_limit : lo * std::pow(time_limit / lo, i / double(timeline_buckets - 1));
        std::size_t mem = 0;
        for (const auto &e : events)
            if (e.memory && e.time_s <= edge) ++mem;
        const double pct = events.empty() ? 0.0 : 100.0 * static_cast<double>(mem) / static_cast<double>(events.size());
        pts.push_back({edge, pct});
    }
    return pts;
}

void write_failure_timeline(const std::vector<RunRecord> &runs, const std::vector<LimitProfile> &profiles,
                            std::ostream &os) {
    os << "profile,bucket,time_s,memory_failure_pct\n";
    for (const auto &prof : profiles) {
        std::vector<FailureEvent> events;
        for (const auto &r : runs)
            if (r.profile == prof.name && !r.solved && r.failure_cause)
                events.push_back({*r.failure_cause == "memory", r.wall_ms / 1000.0});
        const auto pts = failure_timeline(events, prof.time);
        for (std::size_t i = 0; i < pts.size(); ++i)
            os << prof.name << ',' << i << ',' << pts[i].time_s << ',' << pts[i].memory_failure_pct << '\n';
    }
}

RunRecord run_one(const ManifestEntry &e, std::uint64_t seed) {
    RunRecord r;
    r.problem = e.problem;
    r.domain = e.domain;
    r.config = e.dual ? "dual:" + e.config : e.config;
    r.profile = e.profile.name;
    r.seed = seed;
    r.dual = e.dual.has_value();
    r.stage = r.dual ? "frontend" : "single";
    try {
        const GroundProblem p = load_instance(e.problem);
        SearchConfig sc;
        sc.planner = parse_planner(e.config);
        sc.seed = seed;
        if (e.trim_depth) {
            sc.trim = *e.trim_depth > 0;
            if (sc.trim) sc.trim_depth = *e.trim_depth;
        }
        SearchResult res;
        if (e.dual) {
            DualConfig dc;
            dc.frontend = sc;
            dc.frontend_mem_threshold = e.dual->mem_threshold;
            dc.frontend_time_threshold = e.dual->time_threshold;
            dc.backend = BackendSpec::parse(e.dual->backend);
            dc.global_time = e.profile.time;
            dc.global_mem = e.profile.mem;
            dc.problem_path = e.problem;
            const DualOutcome o = run_dual(p, dc);
            r.stage = std::string(to_string(o.stage));
            res = o.result;
            r.expansions = o.frontend.stats.expansions + (o.backend ? o.backend->result.stats.expansions : 0);
            r.generated = o.frontend.stats.generated + (o.backend ? o.backend->result.stats.generated : 0);
            r.peak_bytes = std::max(o.frontend.stats.peak_bytes, o.backend ? o.backend->result.stats.peak_bytes : 0);
            r.wall_ms = o.total_ms;
            if (o.backend && o.backend->status != BackendStatus::ok && o.backend->status != BackendStatus::timeout)
                r.error = std::string(to_string(o.backend->status)) + ": " + o.backend->message;
        } else {
            sc.time_limit = e.profile.time;
            sc.memory_limit = e.profile.mem;
            res = solve(p, sc);
            r.expansions = res.stats.expansions;
            r.generated = res.stats.generated;
            r.peak_bytes = res.stats.peak_bytes;
            r.wall_ms = res.stats.wall_ms;
        }
        r.outcome = std::string(to_string(res.outcome));
        if (res.outcome == Outcome::plan) {
            const auto check = validate_plan(p, action_names(p, res.plan));
            if (!check.valid) {
                r.outcome = "error";
                r.error = "planner returned an invalid plan: " + check.message;
            } else {
                r.solved = true;
                r.plan_length = res.plan.size();
                r.cost = check.cost;
            }
        }
        if (!r.solved) r.failure_cause = r.error.empty() ? cause_of(res.outcome) : "error";
    } catch (const std::exception &ex) {
        r.outcome = "error";
        r.failure_cause = "error";
        r.error = ex.what();
    }
    return r;
}

SuiteResult run_suite(const std::vector<ManifestEntry> &entries, const std::vector<std::uint64_t> &seeds,
                      unsigned parallel) {
    std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
    for (std::size_t i = 0; i < entries.size(); ++i)
        for (auto s : seeds) jobs.emplace_back(i, s);
    SuiteResult out;
    out.runs.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++)
            out.runs[j] = run_one(entries[jobs[j].first], jobs[j].second);
    };
    const unsigned n = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(jobs.size())));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    out.aggregates = aggregate(out.runs);
    return out;
}

void write_suite(const SuiteResult &r, const std::vector<ManifestEntry> &entries, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "runs.jsonl");
        for (const auto &run : r.runs) os << to_json(run).dump() << '\n';
        if (!os) throw std::runtime_error("cannot write runs.jsonl");
    }
    {
        json j = json::array();
        for (const auto &a : r.aggregates) j.push_back(to_json(a));
        std::ofstream os(dir / "summary.json");
        os << j.dump(2) << '\n';
    }
    std::vector<LimitProfile> profiles;
    for (const auto &e : entries)
        if (std::none_of(profiles.begin(), profiles.end(), [&](const LimitProfile &p) { return p.name == e.profile.name; }))
            profiles.push_back(e.profile);
    std::ofstream os(dir / "failure_timeline.csv");
    write_failure_timeline(r.runs, profiles, os);
}

}  // namespace nplan::bench
