#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nplan/bench.hpp"
#include "nplan/dual.hpp"
#include "nplan/generators.hpp"
#include "nplan/search.hpp"
#include "nplan/theory.hpp"

using namespace nplan;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_backend_error = 1;

int exit_code(Outcome o) {
    switch (o) {
        case Outcome::plan:
            return 0;
        case Outcome::exhausted:
            return 10;
        case Outcome::time_limit:
            return 20;
        case Outcome::memory_limit:
            return 21;
    }
    return 1;
}

struct SearchOpts {
    std::string problem;
    std::string planner = "bfws";
    int trim_depth = 18;
    bool no_trim = false;
    std::uint64_t seed = 0;
    std::optional<double> time_limit;
    std::optional<std::size_t> memory_limit;
    std::string plan_out;
    std::string trace_out;
};

void add_search_flags(CLI::App *cmd, SearchOpts &o) {
    cmd->add_option("--trim-depth", o.trim_depth, "Open list depth D, size 2^(D+1) - 1")->check(CLI::Range(1, 61));
    cmd->add_flag("--no-trim", o.no_trim, "Unbounded open lists");
    cmd->add_option("--seed", o.seed, "Seed for trimming");
    cmd->add_option("--plan-out", o.plan_out, "Write the plan here");
}

SearchConfig search_config(const SearchOpts &o) {
    SearchConfig c;
    c.planner = parse_planner(o.planner);
    c.trim_depth = o.trim_depth;
    c.trim = !o.no_trim;
    c.seed = o.seed;
    c.time_limit = o.time_limit;
    c.memory_limit = o.memory_limit;
    return c;
}

void write_plan(const GroundProblem &p, const SearchResult &r, const std::string &path) {
    const std::string text = format_plan(action_names(p, r.plan), r.cost);
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    os << text;
    if (!os) throw std::runtime_error("cannot write plan to " + path);
}

int cmd_solve(const SearchOpts &o) {
    const GroundProblem p = bench::load_instance(o.problem);
    SearchConfig cfg = search_config(o);
    std::ofstream trace;
    if (!o.trace_out.empty()) {
        trace.open(o.trace_out);
        if (!trace) std::cerr << "warning: cannot open trace file " << o.trace_out << '\n';
        else cfg.trace = &trace;
    }
    const SearchResult r = solve(p, cfg);
    if (!r.warning.empty()) std::cerr << "warning: " << r.warning << '\n';
    if (r.outcome == Outcome::plan) write_plan(p, r, o.plan_out);
    std::cerr << "outcome=" << to_string(r.outcome) << " length=" << r.plan.size() << " cost=" << r.cost
              << " expansions=" << r.stats.expansions << " generated=" << r.stats.generated
              << " trims=" << r.stats.trims << " peak_bytes=" << r.stats.peak_bytes
              << " last_novelty=" << r.stats.last_expanded_novelty << " frontier=" << r.stats.frontier_novelty_min << ".."
              << r.stats.frontier_novelty_max << " wall_ms=" << r.stats.wall_ms << '\n';
    return exit_code(r.outcome);
}

std::optional<std::size_t> parse_bytes_or_inf(const std::string &s) {
    if (s == "inf" || s == "none") return std::nullopt;
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad byte count '" + s + "'");
    return static_cast<std::size_t>(v);
}

int cmd_dual(const SearchOpts &o, const std::string &mem_threshold, const std::optional<double> &time_threshold,
             const std::string &backend, double global_time, std::size_t global_mem, const std::string &work_dir) {
    const GroundProblem p = bench::load_instance(o.problem);
    DualConfig cfg;
    cfg.frontend = search_config(o);
    cfg.frontend_mem_threshold = parse_bytes_or_inf(mem_threshold);
    cfg.frontend_time_threshold = time_threshold;
    cfg.backend = BackendSpec::parse(backend);
    cfg.global_time = global_time;
    cfg.global_mem = global_mem;
    cfg.problem_path = o.problem;
    cfg.work_dir = work_dir;
    const DualOutcome out = run_dual(p, cfg);
    auto j = to_json(out, p);
    if (out.result.outcome == Outcome::plan && !o.plan_out.empty()) {
        write_plan(p, out.result, o.plan_out);
        j["plan_path"] = o.plan_out;
    } else {
        j["plan_path"] = nullptr;
    }
    std::cout << j.dump(2) << '\n';
    if (out.backend && out.backend->status != BackendStatus::ok && out.backend->status != BackendStatus::timeout)
        return exit_backend_error;
    return exit_code(out.result.outcome);
}

const char *verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

int cmd_lab_bounds(const theory::BoundSuiteParams &bp) {
    const auto lines = theory::run_bound_suite(bp);
    std::cout << "check,trials,violations,skipped,min_slack,tight_witness,status\n";
    bool all = true;
    for (const auto &l : lines) {
        std::cout << l.name << ',' << l.trials << ',' << l.violations << ',' << l.skipped << ',' << l.min_slack << ','
                  << l.tight_witness << ',' << verdict(l.pass()) << '\n';
        all &= l.pass();
    }
    for (const auto &l : lines) std::cout << verdict(l.pass()) << ' ' << l.name << '\n';
    return all ? 0 : 1;
}

int cmd_lab_props(std::uint64_t trials, std::uint64_t seed) {
    const auto lines = theory::run_prop_suite(trials, seed);
    std::cout << "check,trials,violations,status\n";
    bool all = true;
    for (const auto &l : lines) {
        std::cout << l.name << ',' << l.trials << ',' << l.violations << ',' << verdict(l.violations == 0) << '\n';
        all &= l.violations == 0;
    }
    for (const auto &l : lines) std::cout << verdict(l.violations == 0) << ' ' << l.name << '\n';
    return all ? 0 : 1;
}

int cmd_lab_fig1(const std::string &out_dir) {
    theory::Fig1Params p;
    theory::emit_fig1_csv(p, out_dir);
    const auto n = theory::fig1_n_sweep(p);
    const auto a = theory::fig1_alpha_sweep(p);
    bool monotone = true, finite = true;
    for (std::size_t r = 1; r < n.x.size(); ++r)
        for (std::size_t k = 0; k < n.ks.size(); ++k) monotone &= n.value[r][k] <= n.value[r - 1][k];
    for (const auto &row : a.log_value)
        for (double v : row) finite &= std::isfinite(v);
    std::cout << "wrote " << out_dir << "/fig1_n_sweep.csv and " << out_dir << "/fig1_alpha_sweep.csv\n";
    std::cout << verdict(monotone) << " n-sweep non-increasing in N\n";
    std::cout << verdict(finite) << " alpha-sweep log values finite\n";
    return monotone && finite ? 0 : 1;
}

int cmd_lab_footnote(std::uint64_t seed, int repeats) {
    theory::FootnoteParams p;
    std::cout << "seed,mean_hamming,alpha\n";
    double sum = 0;
    for (int i = 0; i < repeats; ++i) {
        const double m = theory::footnote_simulation(p, seed + static_cast<std::uint64_t>(i));
        sum += m;
        std::cout << seed + static_cast<std::uint64_t>(i) << ',' << m << ',' << m / static_cast<double>(p.L) << '\n';
    }
    const double mean = sum / repeats;
    const bool in_range = mean >= 32 && mean <= 38;
    std::cout << verdict(in_range) << " footnote mean " << mean << " against [32, 38]\n";
    return in_range ? 0 : 1;
}

std::vector<std::uint64_t> parse_seeds(const std::string &s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    if (out.empty()) throw std::invalid_argument("no seeds given");
    return out;
}

int cmd_bench(const std::string &manifest, const std::string &out_dir, const std::string &seeds, unsigned parallel) {
    const auto entries = bench::load_manifest(manifest);
    const auto result = bench::run_suite(entries, parse_seeds(seeds), parallel);
    bench::write_suite(result, entries, out_dir);
    for (const auto &a : result.aggregates) std::cout << bench::to_json(a).dump() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Count-based novelty planner"};
    app.require_subcommand(1);

    SearchOpts so;
    auto *solve_cmd = app.add_subcommand("solve", "Search for a plan");
    solve_cmd->add_option("--problem", so.problem, "Problem file or gen:<domain>:<size>[:<variant>]")->required();
    solve_cmd->add_option("--planner", so.planner)->check(CLI::IsMember({"bfws", "bfcs", "bfnos", "gbfs"}));
    add_search_flags(solve_cmd, so);
    solve_cmd->add_option("--time-limit", so.time_limit, "Seconds");
    solve_cmd->add_option("--memory-limit", so.memory_limit, "Bytes, against the node and table estimate");
    solve_cmd->add_option("--trace-out", so.trace_out, "Per-expansion CSV");

    SearchOpts dopts;
    std::string mem_threshold, backend = "internal:gbfs", work_dir;
    std::optional<double> time_threshold;
    double global_time = 60;
    std::size_t global_mem = std::size_t{512} << 20;
    auto *dual_cmd = app.add_subcommand("dual", "Frontend with thresholds, then backend");
    dual_cmd->add_option("--problem", dopts.problem)->required();
    dual_cmd->add_option("--frontend", dopts.planner)->check(CLI::IsMember({"bfws", "bfcs", "bfnos", "gbfs"}));
    dual_cmd->add_option("--mem-threshold", mem_threshold, "Bytes or 'inf'")->required();
    dual_cmd->add_option("--time-threshold", time_threshold, "Seconds; omit for memory-only mode");
    dual_cmd->add_option("--backend", backend, "internal:<planner> or exec:\"CMD {problem} {plan} {time}\"");
    dual_cmd->add_option("--global-time", global_time)->required();
    dual_cmd->add_option("--global-mem", global_mem)->required();
    dual_cmd->add_option("--work-dir", work_dir, "Directory for backend plan files");
    add_search_flags(dual_cmd, dopts);

    auto *lab = app.add_subcommand("lab", "Theory checks");
    lab->require_subcommand(1);
    theory::BoundSuiteParams bp;
    auto *bounds_cmd = lab->add_subcommand("bounds", "Distance bounds on random histories");
    bounds_cmd->add_option("--trials", bp.trials);
    bounds_cmd->add_option("--seed", bp.seed);
    bounds_cmd->add_option("--l", bp.max_L)->check(CLI::Range(1, 4096));
    bounds_cmd->add_option("--t", bp.max_t)->check(CLI::Range(1, 100000));
    std::string fig_dir = ".";
    auto *fig_cmd = lab->add_subcommand("fig1", "Expected novel tuple curves");
    fig_cmd->add_option("--out", fig_dir);
    std::uint64_t fn_seed = 0;
    int repeats = 5;
    auto *fn_cmd = lab->add_subcommand("footnote", "Random FIFO tree distance simulation");
    fn_cmd->add_option("--seed", fn_seed);
    fn_cmd->add_option("--repeats", repeats)->check(CLI::PositiveNumber);
    std::uint64_t prop_trials = 1000, prop_seed = 0;
    auto *props_cmd = lab->add_subcommand("props", "Negated encoding correspondences");
    props_cmd->add_option("--trials", prop_trials);
    props_cmd->add_option("--seed", prop_seed);

    std::string manifest, bench_out, seeds = "0,1,2,3,4";
    unsigned parallel = 1;
    auto *bench_cmd = app.add_subcommand("bench", "Run an instance manifest");
    bench_cmd->add_option("--manifest", manifest)->required();
    bench_cmd->add_option("--out", bench_out)->required();
    bench_cmd->add_option("--seeds", seeds);
    bench_cmd->add_option("--parallel", parallel)->check(CLI::PositiveNumber);

    std::string gen_domain, gen_out;
    int gen_size = 1;
    unsigned gen_variant = 0;
    auto *gen_cmd = app.add_subcommand("generate", "Write a generated problem");
    gen_cmd->add_option("--domain", gen_domain)->required()->check(CLI::IsMember({"chain", "gripper", "blocks", "lock"}));
    gen_cmd->add_option("--size", gen_size)->required();
    gen_cmd->add_option("--variant", gen_variant);
    gen_cmd->add_option("--out", gen_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_usage;
    }

    try {
        if (*solve_cmd) return cmd_solve(so);
        if (*dual_cmd)
            return cmd_dual(dopts, mem_threshold, time_threshold, backend, global_time, global_mem, work_dir);
        if (*bounds_cmd) return cmd_lab_bounds(bp);
        if (*fig_cmd) return cmd_lab_fig1(fig_dir);
        if (*fn_cmd) return cmd_lab_footnote(fn_seed, repeats);
        if (*props_cmd) return cmd_lab_props(prop_trials, prop_seed);
        if (*bench_cmd) return cmd_bench(manifest, bench_out, seeds, parallel);
        if (*gen_cmd) {
            const std::string text = serialize_problem(generate(parse_domain(gen_domain), gen_size, gen_variant));
            if (gen_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream os(gen_out);
                os << text;
                if (!os) throw std::runtime_error("cannot write " + gen_out);
            }
            return 0;
        }
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_usage;
}
