#pragma once

#include <array>
#include <compare>
#include <initializer_list>
#include <cstdint>
#include <optional>
#include <vector>

#include "nplan/strips.hpp"

namespace nplan {

/// f5 evaluation <w, #g>: lexicographic, lower is better, novelty first.
struct EvalTuple {
    std::int64_t novelty = 0;
    std::int64_t goals_remaining = 0;

    friend auto operator<=>(const EvalTuple &, const EvalTuple &) = default;
};

/// Values (h1(s), ..., hm(s)) of the partition functions. The number of
/// functions is fixed per search configuration.
class PartitionKey {
public:
    static constexpr std::size_t max_functions = 4;

    PartitionKey() = default;
    PartitionKey(std::initializer_list<std::int32_t> values);

    std::size_t size() const { return size_; }
    std::int32_t operator[](std::size_t i) const { return values_[i]; }

    friend bool operator==(const PartitionKey &a, const PartitionKey &b) {
        return a.size_ == b.size_ && a.values_ == b.values_;
    }

    std::size_t hash() const {
        std::uint64_t h = 0x84222325cbf29ce4ull ^ size_;
        for (std::size_t i = 0; i < size_; ++i) {
            h ^= static_cast<std::uint32_t>(values_[i]);
            h *= 0x100000001b3ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }

private:
    std::array<std::int32_t, max_functions> values_{};
    std::uint8_t size_ = 0;
};

struct PartitionKeyHash {
    std::size_t operator()(const PartitionKey &k) const { return k.hash(); }
};

/// Atoms collected from a delete-relaxed plan, computed once at the root.
struct RelaxedPlanInfo {
    std::vector<int> relaxed_atoms;  // sorted
    std::vector<int> supporters;     // chosen best-supporter actions, in extraction order
};

/// |{g in G : not s(g)}|
int goal_count(const GroundProblem &p, const State &s);

/// Additive-cost (unit action cost) best supporters from s, ties broken by the
/// lowest action index; back-chains from the unmet goal atoms and collects the
/// add atoms of every chosen supporter. nullopt when some goal atom is
/// unreachable in the relaxation.
std::optional<RelaxedPlanInfo> extract_relaxed_plan(const GroundProblem &p, const State &s);

/// #r(s) = parent_credit + number of relaxed atoms true in s but false in parent.
int r_credit(const RelaxedPlanInfo &info, int parent_credit, const State &s, const State &parent);

/// <#g, #r> partition key.
PartitionKey partition_key(const State &s, int node_r, const GroundProblem &p);

}  // namespace nplan
