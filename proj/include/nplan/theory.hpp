#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nplan/state.hpp"

namespace nplan::theory {

using Vector = State;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Distance and count summary of s against a history s_0..s_t.
///
/// With self_index set, s is the history node at that index: W = t and the
/// self comparison is skipped. Otherwise W = t + 1. Counts match values, so
/// `counts[i]` is the number of history vectors with s_j(v_i) = s(v_i)
/// (self included), and mu_min = min_i counts[i] / (t + 1).
struct SimRecord {
    std::size_t L = 0;
    std::size_t t = 0;
    std::size_t W = 0;
    std::uint64_t hamming_sum = 0;       // sum of H(s, s_j) over compared j
    std::vector<std::size_t> hamming;    // H(s, s_j) for every j (0 at self)
    std::vector<std::uint64_t> counts;
    double alpha = 0;
    double mu_min = 0;
};

SimRecord hamming_stats(const std::vector<Vector> &hist, const Vector &s,
                        std::optional<std::size_t> self_index = std::nullopt);

struct BoundCheck {
    bool holds = false;
    bool precondition = true;  // false: inputs do not meet the bound's assumptions
    double slack = 0;          // min over the checked sides, in alpha units
    double lower_slack = 0;
    double upper_slack = 0;
    std::string detail;
};

/// alpha(s) <= 1 - mu_min(s) for s external to the history.
BoundCheck check_bound_thm3(const std::vector<Vector> &hist, const Vector &s);

enum class ParentChildMode { thm4, thm5, thm6 };

/// hist is n_0..n_{t-1} and contains the parent at parent_index; the child is
/// the parent with `effects` flipped, appended as n_t. mu is mu_{t-1}^min of
/// the child over hist. Integer arithmetic, so tight cases give slack 0.
BoundCheck check_bounds_parent_child(const std::vector<Vector> &hist, std::size_t parent_index,
                                     const std::vector<int> &effects, ParentChildMode mode);

/// s over V followed by its negations: bit i is s(v_i), bit L + i is !s(v_i).
Vector negated_encoding(const Vector &s);

/// H(s, s') counted over positions where s is true.
std::size_t true_hamming(const Vector &s, const Vector &s_prime);

bool check_prop1(const Vector &s, const Vector &s_prime);

/// Value counts of s over hist equal true-atom counts of s_neg over the
/// negated history, variable by variable, and the minimums agree.
bool check_prop2(const std::vector<Vector> &hist, const Vector &s);

/// Number of k-subsets of variables whose valuation in s appears in no
/// history vector.
std::uint64_t novel_tuples(const std::vector<Vector> &hist, const Vector &s, int k);

double log_binomial(std::uint64_t n, std::uint64_t k);

/// C(L,k) [1 - (1-alpha)^k]^(t+1)
double expected_novel_tuples(std::uint64_t L, std::uint64_t k, std::uint64_t t, double alpha);
double log_expected_novel_tuples(std::uint64_t L, std::uint64_t k, std::uint64_t t, double alpha);

/// beta = (alpha L - (1 - N/(t+1))) / (L - 1); DomainError outside [0, 1].
double discounted_distance(std::uint64_t L, std::uint64_t t, double alpha, std::uint64_t N);

/// C(L-1,k) [1-(1-beta)^k]^(t+1) + C(L-1,k-1) [1-(1-beta)^(k-1)]^N
double expected_novel_tuples_with_count(std::uint64_t L, std::uint64_t k, std::uint64_t t, double alpha,
                                        std::uint64_t N);
double log_expected_novel_tuples_with_count(std::uint64_t L, std::uint64_t k, std::uint64_t t, double alpha,
                                            std::uint64_t N);

struct FootnoteParams {
    std::size_t L = 100;
    std::size_t branching = 4;
    std::size_t flips = 3;
    std::size_t total = 10000;  // nodes generated, root included
    std::size_t sample = 100;
};

/// FIFO random tree: uniform random root, each expansion appends `branching`
/// children, each the parent with `flips` distinct variables flipped.
std::vector<Vector> footnote_nodes(const FootnoteParams &p, std::uint64_t seed);

/// Mean Hamming distance of the last `sample` nodes to all other nodes, from
/// per-variable true counts.
double mean_hamming_last(const std::vector<Vector> &nodes, std::size_t sample);

/// Double loop reference for mean_hamming_last.
double mean_hamming_last_naive(const std::vector<Vector> &nodes, std::size_t sample);

double footnote_simulation(const FootnoteParams &p, std::uint64_t seed);

struct Thm8Group {
    std::uint64_t N = 0;
    std::uint64_t trials = 0;
    double mean = 0;
    double stddev = 0;
    double stderr_mean = 0;
    double expected = 0;
};

/// iid uniform histories s_0..s_t and s; conditions on the observed count N of
/// variable v_0 and counts novel k-tuples exhaustively. Groups indexed by N.
/// Expected values use alpha = E[alpha | N], which makes beta exactly 1/2.
std::vector<Thm8Group> thm8_monte_carlo(std::size_t L, int k, std::size_t t, std::uint64_t trials,
                                        std::uint64_t seed);

struct Fig1Params {
    std::uint64_t L = 100;
    std::uint64_t t = 50000;
    double alpha = 0.3;
    std::uint64_t N = 5;
    std::vector<std::uint64_t> ks{1, 2, 3};
    std::uint64_t n_max = 50;
    int alpha_steps = 20;  // alpha = i / alpha_steps for i in [1, alpha_steps)
};

struct Fig1Table {
    std::string x_name;
    std::vector<std::uint64_t> ks;
    std::vector<double> x;
    std::vector<std::vector<double>> value;      // [row][k]
    std::vector<std::vector<double>> log_value;  // natural log, -inf for 0
};

Fig1Table fig1_n_sweep(const Fig1Params &p);
Fig1Table fig1_alpha_sweep(const Fig1Params &p);
void write_csv(const Fig1Table &t, std::ostream &os);

/// Writes fig1_n_sweep.csv and fig1_alpha_sweep.csv into dir.
void emit_fig1_csv(const Fig1Params &p, const std::filesystem::path &dir);

struct SuiteLine {
    std::string name;
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    std::uint64_t skipped = 0;  // precondition not met
    double min_slack = 0;
    bool tight_witness = false;  // some instance had slack < 1e-12

    bool pass() const { return violations == 0 && tight_witness; }
};

struct BoundSuiteParams {
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    std::size_t max_L = 64;
    std::size_t max_t = 200;
};

/// Randomized draws plus constructed tight witnesses for each bound:
/// thm3, thm4-lower, thm4-upper, thm5, thm6.
std::vector<SuiteLine> run_bound_suite(const BoundSuiteParams &p);

/// prop1 and prop2 on random pairs / histories with L <= max_L.
std::vector<SuiteLine> run_prop_suite(std::uint64_t trials, std::uint64_t seed, std::size_t max_L = 32);

}  // namespace nplan::theory
