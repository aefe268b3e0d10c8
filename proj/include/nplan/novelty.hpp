#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nplan/heuristics.hpp"
#include "nplan/state.hpp"

namespace nplan {

/// Sorted tuple of one or two atom indices.
struct TupleKey {
    std::array<int, 2> atoms{-1, -1};
    int arity = 0;

    static TupleKey single(int a) { return TupleKey{{a, -1}, 1}; }
    static TupleKey pair(int a, int b) { return a < b ? TupleKey{{a, b}, 2} : TupleKey{{b, a}, 2}; }

    friend bool operator==(const TupleKey &, const TupleKey &) = default;
};

/// First-occurrence sets for width novelty, one per partition key.
class SeenTable {
public:
    /// Pairs use a triangular bit matrix up to this many atoms, a hash set above.
    static constexpr std::size_t dense_pair_limit = 4096;

    SeenTable() = default;
    SeenTable(std::size_t num_atoms, int max_width);

    std::size_t num_atoms() const { return num_atoms_; }
    int max_width() const { return max_width_; }
    std::size_t num_partitions() const { return parts_.size(); }

    bool contains(const PartitionKey &key, const TupleKey &u) const;

    /// Records the true tuples of s under key. Returns the lowest arity that
    /// had an unseen tuple, or max_width + 1.
    int record(const State &s, const PartitionKey &key);

    /// Approximate heap footprint in bytes.
    std::size_t bytes() const { return bytes_; }

private:
    struct Partition {
        std::vector<std::uint64_t> atoms;
        std::vector<std::uint64_t> dense_pairs;
        std::unordered_set<std::uint64_t> sparse_pairs;
    };

    std::size_t pair_index(int a, int b) const;
    Partition &partition(const PartitionKey &key);

    std::size_t num_atoms_ = 0;
    int max_width_ = 2;
    std::unordered_map<PartitionKey, Partition, PartitionKeyHash> parts_;
    std::size_t bytes_ = 0;
    std::vector<int> scratch_;
};

/// W_1 / W_2 novelty of s under key, evaluated then recorded.
/// Returns 1, 2 (max_width = 2 only) or max_width + 1.
int width_novelty(const State &s, const PartitionKey &key, SeenTable &tbl, int max_width);

/// Occurrence counts over single atoms, one dense vector per partition key.
class CountTable {
public:
    CountTable() = default;
    explicit CountTable(std::size_t num_atoms) : num_atoms_(num_atoms) {}

    std::size_t num_atoms() const { return num_atoms_; }
    std::size_t num_partitions() const { return parts_.size(); }

    /// Count of atom `a` under key; 0 when never seen.
    std::uint64_t count(const PartitionKey &key, int a) const;

    /// min over true atoms of the current counts (0 for a state without true
    /// atoms), then increments every true atom's count.
    std::uint64_t record(const State &s, const PartitionKey &key);

    std::size_t bytes() const { return bytes_; }

private:
    std::size_t num_atoms_ = 0;
    std::unordered_map<PartitionKey, std::vector<std::uint64_t>, PartitionKeyHash> parts_;
    std::size_t bytes_ = 0;
};

/// C_1 novelty of s under key, evaluated then recorded.
std::uint64_t count_novelty(const State &s, const PartitionKey &key, CountTable &tbl);

/// Literal rescan of the history: min over true atoms v of s of the number of
/// history states sharing s's key with v true.
std::uint64_t brute_force_count_novelty(std::span<const State> history, std::span<const PartitionKey> keys,
                                        const State &s, const PartitionKey &key);

}  // namespace nplan
