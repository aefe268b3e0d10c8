#include "nplan/theory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "nplan/heuristics.hpp"
#include "nplan/novelty.hpp"

namespace nplan::theory {

namespace {

constexpr double tight_eps = 1e-12;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void require_length(const std::vector<Vector> &hist, const Vector &s) {
    for (const Vector &h : hist)
        if (h.size() != s.size()) throw std::invalid_argument("vector length mismatch");
}

std::vector<std::uint64_t> value_counts(const std::vector<Vector> &hist, std::size_t end, const Vector &s) {
    std::vector<std::uint64_t> counts(s.size(), 0);
    for (std::size_t j = 0; j < end; ++j)
        for (std::size_t i = 0; i < s.size(); ++i)
            if (hist[j].test(i) == s.test(i)) ++counts[i];
    return counts;
}

Vector random_vector(std::size_t L, std::mt19937_64 &rng, double p = 0.5) {
    std::bernoulli_distribution bit(p);
    Vector v(L);
    for (std::size_t i = 0; i < L; ++i)
        if (bit(rng)) v.set(i);
    return v;
}

double log_sum_exp(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// ln(base^exp) with base = 1 - (1-x)^k, and 0^0 = 1.
double log_bracket_pow(double x, std::uint64_t k, std::uint64_t exponent) {
    const double inner = std::pow(1.0 - x, static_cast<double>(k));
    if (exponent == 0) return 0.0;
    if (inner >= 1.0) return neg_inf;
    return static_cast<double>(exponent) * std::log1p(-inner);
}

double exact_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    double r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
}

}  // namespace

SimRecord hamming_stats(const std::vector<Vector> &hist, const Vector &s, std::optional<std::size_t> self_index) {
    if (hist.empty()) throw std::invalid_argument("empty history");
    require_length(hist, s);
    if (self_index && (*self_index >= hist.size() || !(hist[*self_index] == s)))
        throw std::invalid_argument("self index does not refer to s");
    SimRecord r;
    r.L = s.size();
    r.t = hist.size() - 1;
    r.W = self_index ? r.t : r.t + 1;
    r.hamming.resize(hist.size());
    for (std::size_t j = 0; j < hist.size(); ++j) {
        r.hamming[j] = s.hamming(hist[j]);
        if (!self_index || j != *self_index) r.hamming_sum += r.hamming[j];
    }
    r.counts = value_counts(hist, hist.size(), s);
    r.alpha = r.W == 0 || r.L == 0 ? 0.0
                                   : static_cast<double>(r.hamming_sum) / (static_cast<double>(r.W) *
                                                                           static_cast<double>(r.L));
    const auto mn = r.counts.empty() ? hist.size() : *std::min_element(r.counts.begin(), r.counts.end());
    r.mu_min = static_cast<double>(mn) / static_cast<double>(hist.size());
    return r;
}

BoundCheck check_bound_thm3(const std::vector<Vector> &hist, const Vector &s) {
    const SimRecord r = hamming_stats(hist, s);
    const auto L = static_cast<std::int64_t>(r.L), n = static_cast<std::int64_t>(r.t + 1);
    const auto mn = static_cast<std::int64_t>(r.counts.empty() ? r.t + 1 : *std::min_element(r.counts.begin(), r.counts.end()));
    // (1 - mu_min - alpha) (t+1) L
    const std::int64_t num = n * L - mn * L - static_cast<std::int64_t>(r.hamming_sum);
    BoundCheck c;
    c.upper_slack = L == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(n * L);
    c.lower_slack = c.upper_slack;
    c.slack = c.upper_slack;
    c.holds = num >= 0;
    if (!c.holds) c.detail = "alpha " + std::to_string(r.alpha) + " > 1 - mu_min " + std::to_string(1 - r.mu_min);
    return c;
}

BoundCheck check_bounds_parent_child(const std::vector<Vector> &hist, std::size_t parent_index,
                                     const std::vector<int> &effects, ParentChildMode mode) {
    if (hist.empty() || parent_index >= hist.size()) throw std::invalid_argument("parent not in history");
    const Vector &parent = hist[parent_index];
    require_length(hist, parent);
    Vector child = parent;
    std::vector<int> eff = effects;
    std::sort(eff.begin(), eff.end());
    if (std::adjacent_find(eff.begin(), eff.end()) != eff.end()) throw std::invalid_argument("repeated effect");
    for (int v : eff) {
        if (v < 0 || static_cast<std::size_t>(v) >= parent.size()) throw std::invalid_argument("effect out of range");
        child.flip(static_cast<std::size_t>(v));
    }

    const auto t = static_cast<std::int64_t>(hist.size());
    const auto L = static_cast<std::int64_t>(parent.size());
    const auto e = static_cast<std::int64_t>(eff.size());
    std::int64_t sc = 0, sp = static_cast<std::int64_t>(parent.hamming(child));
    for (std::size_t j = 0; j < hist.size(); ++j) {
        sc += static_cast<std::int64_t>(child.hamming(hist[j]));
        if (j != parent_index) sp += static_cast<std::int64_t>(parent.hamming(hist[j]));
    }
    const auto counts = value_counts(hist, hist.size(), child);
    const auto m = static_cast<std::int64_t>(counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end()));
    const double scale = static_cast<double>(t * L);

    BoundCheck c;
    switch (mode) {
        case ParentChildMode::thm4: {
            const std::int64_t lo = sc - sp + (t - 1) * e;
            const std::int64_t hi = sp + (t - 1) * e - sc;
            c.lower_slack = static_cast<double>(lo) / scale;
            c.upper_slack = static_cast<double>(hi) / scale;
            c.holds = lo >= 0 && hi >= 0;
            c.slack = std::min(c.lower_slack, c.upper_slack);
            break;
        }
        case ParentChildMode::thm5: {
            const std::int64_t hi = t * sp + (t - 1) * e * (t - 2 * m) - t * sc;
            c.upper_slack = static_cast<double>(hi) / (scale * static_cast<double>(t));
            c.lower_slack = c.upper_slack;
            c.slack = c.upper_slack;
            c.holds = hi >= 0;
            break;
        }
        case ParentChildMode::thm6: {
            c.precondition = m == 0;
            const std::int64_t lo = sc - sp + (t - 1) * (e - 2);
            c.lower_slack = static_cast<double>(lo) / scale;
            c.upper_slack = c.lower_slack;
            c.slack = c.lower_slack;
            c.holds = lo >= 0;
            if (!c.precondition) c.detail = "mu_min of child is not 0";
            break;
        }
    }
    if (!c.holds && c.detail.empty()) c.detail = "bound violated, slack " + std::to_string(c.slack);
    return c;
}

Vector negated_encoding(const Vector &s) {
    const std::size_t L = s.size();
    Vector out(2 * L);
    for (std::size_t i = 0; i < L; ++i) out.set(s.test(i) ? i : L + i);
    return out;
}

std::size_t true_hamming(const Vector &s, const Vector &s_prime) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.test(i) && !s_prime.test(i)) ++n;
    return n;
}

bool check_prop1(const Vector &s, const Vector &s_prime) {
    return s.hamming(s_prime) == true_hamming(negated_encoding(s), negated_encoding(s_prime));
}

bool check_prop2(const std::vector<Vector> &hist, const Vector &s) {
    require_length(hist, s);
    const std::size_t L = s.size();
    const auto counts = value_counts(hist, hist.size(), s);
    const Vector sn = negated_encoding(s);
    CountTable tbl(2 * L);
    const PartitionKey key{};
    for (const Vector &h : hist) tbl.record(negated_encoding(h), key);
    for (std::size_t i = 0; i < L; ++i) {
        const int x = static_cast<int>(s.test(i) ? i : L + i);
        if (!sn.test(static_cast<std::size_t>(x))) return false;
        if (tbl.count(key, x) != counts[i]) return false;
    }
    // Minimum over V equals C1 over the true atoms of s_neg.
    const auto mn = counts.empty() ? 0 : *std::min_element(counts.begin(), counts.end());
    return tbl.record(sn, key) == mn;
}

std::uint64_t novel_tuples(const std::vector<Vector> &hist, const Vector &s, int k) {
    require_length(hist, s);
    const auto L = static_cast<int>(s.size());
    if (k < 1 || k > L) return 0;
    std::vector<Vector> diff;
    diff.reserve(hist.size());
    for (const Vector &h : hist) {
        Vector d(s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            if (h.test(i) != s.test(i)) d.set(i);
        diff.push_back(std::move(d));
    }
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    std::uint64_t novel = 0;
    for (;;) {
        bool is_novel = true;
        for (const Vector &d : diff) {
            bool differs = false;
            for (int v : idx) differs |= d.test(static_cast<std::size_t>(v));
            if (!differs) {
                is_novel = false;
                break;
            }
        }
        if (is_novel) ++novel;
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == L - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<std::size_t>(pos)];
        for (int q = pos + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
    return novel;
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return neg_inf;
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

double log_expected_novel_tuples(std::uint64_t L, std::uint64_t k, std::uint64_t t, double alpha) {
    check_alpha(alpha);
    if (k > L) throw DomainError("k exceeds L");
    return log_binomial(L, k) + log_bracket_pow(alpha, k, t + 1);
}

double expected_novel_tuples(std::uint64_t L, std::uint64_t k, std::uint64_t t, double alpha) {
    check_alpha(alpha);
    if (k > L) throw DomainError("k exceeds L");
    const double direct =
        exact_binomial(L, k) * std::pow(1.0 - std::pow(1.0 - alpha, static_cast<double>(k)), static_cast<double>(t + 1));
    if (std::isnormal(direct) || direct == 0.0) {
        if (direct != 0.0 || alpha == 0.0) return direct;
    }
    return std::exp(log_expected_novel_tuples(L, k, t, alpha));
}

double discounted_distance(std::uint64_t L, std::uint64_t t, double alpha, std::uint64_t N) {
    check_alpha(alpha);
    if (L < 2) throw DomainError("L must be at least 2");
    if (N > t + 1) throw DomainError("N exceeds t + 1");
    const double beta = (alpha * static_cast<double>(L) - (1.0 - static_cast<double>(N) / static_cast<double>(t + 1))) /
                        static_cast<double>(L - 1);
    if (!(beta >= 0.0 && beta <= 1.0)) throw DomainError("beta = " + std::to_string(beta) + " outside [0, 1]");
    return beta;
}

double log_expected_novel_tuples_with_count(std::uint64_t L, std::uint64_t k, std::uint64_t t, double alpha,
                                            std::uint64_t N) {
    if (k < 1 || k > L) throw DomainError("k must lie in [1, L]");
    const double beta = discounted_distance(L, t, alpha, N);
    const double a = k <= L - 1 ? log_binomial(L - 1, k) + log_bracket_pow(beta, k, t + 1) : neg_inf;
    const double b = log_binomial(L - 1, k - 1) + log_bracket_pow(beta, k - 1, N);
    return log_sum_exp(a, b);
}

double expected_novel_tuples_with_count(std::uint64_t L, std::uint64_t k, std::uint64_t t, double alpha,
                                        std::uint64_t N) {
    return std::exp(log_expected_novel_tuples_with_count(L, k, t, alpha, N));
}

std::vector<Vector> footnote_nodes(const FootnoteParams &p, std::uint64_t seed) {
    if (p.L == 0 || p.total == 0) throw std::invalid_argument("L and total must be positive");
    if (p.flips > p.L) throw std::invalid_argument("flips exceed L");
    if (p.branching == 0 && p.total > 1) throw std::invalid_argument("branching must be positive");
    std::mt19937_64 rng(seed);
    std::vector<Vector> nodes;
    nodes.reserve(p.total);
    nodes.push_back(random_vector(p.L, rng));
    std::vector<std::size_t> vars(p.L);
    std::size_t next = 0;  // FIFO front
    while (nodes.size() < p.total) {
        const std::size_t parent = next++;
        for (std::size_t c = 0; c < p.branching && nodes.size() < p.total; ++c) {
            Vector child = nodes[parent];
            std::iota(vars.begin(), vars.end(), 0);
            for (std::size_t f = 0; f < p.flips; ++f) {
                std::uniform_int_distribution<std::size_t> pick(f, p.L - 1);
                std::swap(vars[f], vars[pick(rng)]);
                child.flip(vars[f]);
            }
            nodes.push_back(std::move(child));
        }
    }
    return nodes;
}

double mean_hamming_last(const std::vector<Vector> &nodes, std::size_t sample) {
    if (nodes.size() < 2 || sample == 0 || sample > nodes.size()) throw std::invalid_argument("bad sample size");
    const std::size_t L = nodes.front().size(), n = nodes.size();
    std::vector<std::uint64_t> ones(L, 0);
    for (const Vector &v : nodes) v.for_each_true([&](int i) { ++ones[static_cast<std::size_t>(i)]; });
    double total = 0;
    for (std::size_t j = n - sample; j < n; ++j) {
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < L; ++i) sum += nodes[j].test(i) ? n - ones[i] : ones[i];
        total += static_cast<double>(sum) / static_cast<double>(n - 1);
    }
    return total / static_cast<double>(sample);
}

double mean_hamming_last_naive(const std::vector<Vector> &nodes, std::size_t sample) {
    if (nodes.size() < 2 || sample == 0 || sample > nodes.size()) throw std::invalid_argument("bad sample size");
    const std::size_t n = nodes.size();
    double total = 0;
    for (std::size_t j = n - sample; j < n; ++j) {
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) sum += nodes[j].hamming(nodes[i]);
        total += static_cast<double>(sum) / static_cast<double>(n - 1);
    }
    return total / static_cast<double>(sample);
}

double footnote_simulation(const FootnoteParams &p, std::uint64_t seed) {
    return mean_hamming_last(footnote_nodes(p, seed), p.sample);
}

std::vector<Thm8Group> thm8_monte_carlo(std::size_t L, int k, std::size_t t, std::uint64_t trials,
                                        std::uint64_t seed) {
    if (L < 2 || L > 64 || k < 1 || static_cast<std::size_t>(k) > L) throw std::invalid_argument("bad Thm 8 parameters");
    std::mt19937_64 rng(seed);
    const std::uint64_t full = L == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
    std::vector<double> sum(t + 2, 0), sumsq(t + 2, 0);
    std::vector<std::uint64_t> n(t + 2, 0);
    std::vector<std::uint64_t> masks;
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::vector<std::uint64_t> diff(t + 1);
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t s = rng() & full;
        std::size_t count = 0;
        for (std::size_t j = 0; j <= t; ++j) {
            const std::uint64_t h = rng() & full;
            diff[j] = h ^ s;
            if (!(diff[j] & 1u)) ++count;
        }
        std::uint64_t novel = 0;
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            std::uint64_t tuple = 0;
            for (int v : idx) tuple |= std::uint64_t{1} << v;
            bool is_novel = true;
            for (std::size_t j = 0; j <= t && is_novel; ++j) is_novel = (diff[j] & tuple) != 0;
            if (is_novel) ++novel;
            int pos = k - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == static_cast<int>(L) - k + pos) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
        }
        ++n[count];
        sum[count] += static_cast<double>(novel);
        sumsq[count] += static_cast<double>(novel) * static_cast<double>(novel);
    }
    std::vector<Thm8Group> out;
    for (std::size_t N = 0; N <= t + 1; ++N) {
        Thm8Group g;
        g.N = N;
        g.trials = n[N];
        if (g.trials > 0) {
            const double m = sum[N] / static_cast<double>(g.trials);
            g.mean = m;
            if (g.trials > 1) {
                const double var = (sumsq[N] - static_cast<double>(g.trials) * m * m) / static_cast<double>(g.trials - 1);
                g.stddev = std::sqrt(std::max(0.0, var));
                g.stderr_mean = g.stddev / std::sqrt(static_cast<double>(g.trials));
            }
        }
        const double alpha =
            ((static_cast<double>(L) - 1) / 2 + 1 - static_cast<double>(N) / static_cast<double>(t + 1)) /
            static_cast<double>(L);
        g.expected = expected_novel_tuples_with_count(L, static_cast<std::uint64_t>(k), t, alpha, N);
        out.push_back(g);
    }
    return out;
}

Fig1Table fig1_n_sweep(const Fig1Params &p) {
    Fig1Table tbl;
    tbl.x_name = "N";
    tbl.ks = p.ks;
    for (std::uint64_t N = 0; N <= p.n_max; ++N) {
        tbl.x.push_back(static_cast<double>(N));
        std::vector<double> v, lv;
        for (auto k : p.ks) {
            lv.push_back(log_expected_novel_tuples_with_count(p.L, k, p.t, p.alpha, N));
            v.push_back(std::exp(lv.back()));
        }
        tbl.value.push_back(std::move(v));
        tbl.log_value.push_back(std::move(lv));
    }
    return tbl;
}

Fig1Table fig1_alpha_sweep(const Fig1Params &p) {
    Fig1Table tbl;
    tbl.x_name = "alpha";
    tbl.ks = p.ks;
    for (int i = 1; i < p.alpha_steps; ++i) {
        const double alpha = static_cast<double>(i) / static_cast<double>(p.alpha_steps);
        tbl.x.push_back(alpha);
        std::vector<double> v, lv;
        for (auto k : p.ks) {
            lv.push_back(log_expected_novel_tuples_with_count(p.L, k, p.t, alpha, p.N));
            v.push_back(std::exp(lv.back()));
        }
        tbl.value.push_back(std::move(v));
        tbl.log_value.push_back(std::move(lv));
    }
    return tbl;
}

void write_csv(const Fig1Table &t, std::ostream &os) {
    os << t.x_name;
    for (auto k : t.ks) os << ",k" << k;
    for (auto k : t.ks) os << ",ln_k" << k;
    os << '\n';
    os.precision(17);
    for (std::size_t r = 0; r < t.x.size(); ++r) {
        os << t.x[r];
        for (double v : t.value[r]) os << ',' << v;
        for (double v : t.log_value[r]) os << ',' << v;
        os << '\n';
    }
}

void emit_fig1_csv(const Fig1Params &p, const std::filesystem::path &dir) {
    std::filesystem::create_directories(dir);
    for (const auto &[name, tbl] : {std::pair{"fig1_n_sweep.csv", fig1_n_sweep(p)},
                                    std::pair{"fig1_alpha_sweep.csv", fig1_alpha_sweep(p)}}) {
        std::ofstream os(dir / name);
        write_csv(tbl, os);
        if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    }
}

namespace {

void tally(SuiteLine &line, const BoundCheck &c, double slack) {
    ++line.trials;
    if (!c.precondition) {
        ++line.skipped;
        return;
    }
    if (!c.holds) ++line.violations;
    if (line.trials - line.skipped == 1 || slack < line.min_slack) line.min_slack = slack;
    if (c.holds && std::abs(slack) < tight_eps) line.tight_witness = true;
}

std::vector<Vector> constant_history(const Vector &v, std::size_t n) { return std::vector<Vector>(n, v); }

Vector bits(std::initializer_list<int> b) {
    Vector v(b.size());
    std::size_t i = 0;
    for (int x : b) v.set(i++, x != 0);
    return v;
}

}  // namespace

std::vector<SuiteLine> run_bound_suite(const BoundSuiteParams &p) {
    SuiteLine t3{"thm3"}, t4lo{"thm4-lower"}, t4hi{"thm4-upper"}, t5{"thm5"}, t6{"thm6"};
    std::mt19937_64 rng(p.seed);
    auto draw_L = [&] { return std::uniform_int_distribution<std::size_t>(1, p.max_L)(rng); };
    auto draw_history = [&](std::size_t L, std::size_t n) {
        // A per-history bias spreads the draws over sparse and dense vectors.
        const double bias = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
        std::vector<Vector> h;
        for (std::size_t j = 0; j < n; ++j) h.push_back(random_vector(L, rng, bias));
        return h;
    };
    auto draw_effects = [&](std::size_t L) {
        std::vector<int> all(L);
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(std::uniform_int_distribution<std::size_t>(0, L)(rng));
        return all;
    };

    for (std::uint64_t i = 0; i < p.trials; ++i) {
        const std::size_t L = draw_L();
        const std::size_t t = std::uniform_int_distribution<std::size_t>(0, p.max_t)(rng);
        auto hist = draw_history(L, t + 1);
        const Vector s = random_vector(L, rng);
        const auto c = check_bound_thm3(hist, s);
        tally(t3, c, c.slack);
    }
    for (std::uint64_t i = 0; i < p.trials; ++i) {
        const std::size_t L = draw_L();
        const std::size_t t = std::uniform_int_distribution<std::size_t>(1, p.max_t)(rng);
        auto hist = draw_history(L, t);
        const std::size_t parent = std::uniform_int_distribution<std::size_t>(0, t - 1)(rng);
        const auto eff = draw_effects(L);
        const auto c4 = check_bounds_parent_child(hist, parent, eff, ParentChildMode::thm4);
        tally(t4lo, c4, c4.lower_slack);
        tally(t4hi, c4, c4.upper_slack);
        const auto c5 = check_bounds_parent_child(hist, parent, eff, ParentChildMode::thm5);
        tally(t5, c5, c5.slack);
    }
    for (std::uint64_t i = 0; i < p.trials; ++i) {
        const std::size_t L = draw_L();
        const std::size_t t = std::uniform_int_distribution<std::size_t>(1, p.max_t)(rng);
        auto hist = draw_history(L, t);
        const std::size_t parent = std::uniform_int_distribution<std::size_t>(0, t - 1)(rng);
        auto eff = draw_effects(L);
        if (eff.empty()) eff.push_back(static_cast<int>(std::uniform_int_distribution<std::size_t>(0, L - 1)(rng)));
        // Make one effect's child value unseen in the history.
        const auto u = static_cast<std::size_t>(eff.front());
        for (Vector &h : hist) h.set(u, hist[parent].test(u));
        const auto c6 = check_bounds_parent_child(hist, parent, eff, ParentChildMode::thm6);
        tally(t6, c6, c6.slack);
    }

    // Constructed witnesses, t = 6.
    const std::size_t tw = 6;
    {
        const Vector s = bits({1, 0, 1});
        const auto c = check_bound_thm3(constant_history(s, tw + 1), s);
        tally(t3, c, c.slack);
    }
    {
        // t-1 copies of 101 and the parent 110; the child returns to 101.
        auto hist = constant_history(bits({1, 0, 1}), tw - 1);
        hist.push_back(bits({1, 1, 0}));
        const auto c = check_bounds_parent_child(hist, tw - 1, {1, 2}, ParentChildMode::thm4);
        tally(t4lo, c, c.lower_slack);
    }
    {
        // Every node equals the parent, so each effect moves away from all of them.
        auto hist = constant_history(bits({1, 1, 0}), tw);
        const auto c4 = check_bounds_parent_child(hist, 0, {1, 2}, ParentChildMode::thm4);
        tally(t4hi, c4, c4.upper_slack);
        const auto c5 = check_bounds_parent_child(hist, 0, {1, 2}, ParentChildMode::thm5);
        tally(t5, c5, c5.slack);
    }
    {
        // One novel effect, the other e-1 effects already present in every other node.
        auto hist = constant_history(bits({0, 1, 1}), tw - 1);
        hist.push_back(bits({0, 0, 0}));
        const auto c = check_bounds_parent_child(hist, tw - 1, {0, 1, 2}, ParentChildMode::thm6);
        tally(t6, c, c.slack);
    }
    return {t3, t4lo, t4hi, t5, t6};
}

std::vector<SuiteLine> run_prop_suite(std::uint64_t trials, std::uint64_t seed, std::size_t max_L) {
    SuiteLine p1{"prop1"}, p2{"prop2"};
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < trials; ++i) {
        const std::size_t L = std::uniform_int_distribution<std::size_t>(1, max_L)(rng);
        const Vector s = random_vector(L, rng), sp = random_vector(L, rng);
        ++p1.trials;
        if (!check_prop1(s, sp)) ++p1.violations;
        std::vector<Vector> hist;
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
        for (std::size_t j = 0; j < n; ++j) hist.push_back(random_vector(L, rng));
        ++p2.trials;
        if (!check_prop2(hist, s)) ++p2.violations;
    }
    // Equalities: every passing instance has zero slack.
    p1.tight_witness = p1.violations < p1.trials;
    p2.tight_witness = p2.violations < p2.trials;
    return {p1, p2};
}

}  // namespace nplan::theory
