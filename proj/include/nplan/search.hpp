#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nplan/heuristics.hpp"
#include "nplan/strips.hpp"
#include "nplan/trimmed_heap.hpp"

namespace nplan {

using NodeId = std::uint32_t;
inline constexpr NodeId no_node = 0xffffffffu;

/// bfws: f5(W2)  bfcs: f5(C1)  bfnos: alternating f5(C1) / f5(W2) lists
/// gbfs: plain (#g, -#r) greedy search, no novelty (default backend)
enum class Planner { bfws, bfcs, bfnos, gbfs };

std::string_view to_string(Planner p);
Planner parse_planner(std::string_view name);  // throws std::invalid_argument

enum class Outcome { plan, exhausted, time_limit, memory_limit };
std::string_view to_string(Outcome o);

struct SearchNode {
    State state;
    NodeId parent = no_node;
    int action = -1;
    int r_credit = 0;
    EvalTuple eval_primary;
    std::optional<EvalTuple> eval_secondary;
    NodeLifetime lifetime;
    std::uint64_t seq = 0;
};

enum class NodeEventKind { alloc, generate, expand, free, teardown_free };

struct NodeEvent {
    NodeEventKind kind;
    NodeId id;
    const SearchNode *node;  // valid for the duration of the callback
    PartitionKey key;        // generate only
};

using NodeObserver = std::function<void(const NodeEvent &)>;

struct SearchConfig {
    Planner planner = Planner::bfws;
    int trim_depth = 18;
    bool trim = true;
    std::uint64_t seed = 0;
    std::optional<double> time_limit;            // seconds
    std::optional<std::size_t> memory_limit;     // bytes, against the estimate
    std::size_t node_overhead = 96;              // bytes charged per live node on top of its state
    std::ostream *trace = nullptr;
    const std::atomic<bool> *cancel = nullptr;   // reported as time_limit
    NodeObserver observer;
};

/// "count >= N" thresholds for the C1 histogram.
inline constexpr std::array<std::uint64_t, 7> count_thresholds{0, 1, 5, 10, 100, 1000, 10000};

struct SearchStats {
    std::uint64_t expansions = 0;
    std::uint64_t generated = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t replaced = 0;
    std::uint64_t rejected = 0;
    std::uint64_t trims = 0;  // replaced + rejected over all lists
    std::uint64_t nodes_allocated = 0;
    std::uint64_t nodes_freed = 0;
    std::size_t peak_bytes = 0;
    std::size_t table_bytes = 0;
    std::size_t partitions = 0;
    std::int64_t last_expanded_novelty = -1;
    std::uint64_t saturated_expansions = 0;  // width-list expansions at max_width + 1
    std::array<std::uint64_t, count_thresholds.size()> count_at_least{};
    std::int64_t frontier_novelty_min = -1;  // list 0 at termination
    std::int64_t frontier_novelty_max = -1;
    double wall_ms = 0;

    /// Everything except wall time.
    bool same_search(const SearchStats &o) const;
};

struct SearchResult {
    Outcome outcome = Outcome::exhausted;
    std::vector<int> plan;  // action indices
    std::int64_t cost = 0;
    SearchStats stats;
    std::string warning;
};

SearchResult solve(const GroundProblem &p, const SearchConfig &cfg);

inline constexpr std::string_view trace_header =
    "kind,seq,list,novelty,goals,r_credit,open0,open1,trims,bytes,expansions,generated,outcome,wall_ms";

struct Popped {
    NodeId id;
    int list;
};

/// One BFNoS pop: from list `turn`, falling back to the other list when it is
/// empty. Handles for which is_closed(id) holds are dropped and passed to
/// on_skip(id, list). Flips turn after a successful pop.
template <typename Heap, typename IsClosed, typename OnSkip>
std::optional<Popped> bfnos_step(std::array<Heap *, 2> lists, int &turn, IsClosed &&is_closed, OnSkip &&on_skip) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        const int li = attempt == 0 ? turn : 1 - turn;
        Heap &h = *lists[static_cast<std::size_t>(li)];
        while (auto e = h.pop()) {
            if (is_closed(e->value)) {
                on_skip(e->value, li);
                continue;
            }
            turn = 1 - turn;
            return Popped{static_cast<NodeId>(e->value), li};
        }
    }
    return std::nullopt;
}

}  // namespace nplan
