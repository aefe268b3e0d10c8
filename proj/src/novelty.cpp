#include "nplan/novelty.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace nplan {

namespace {

constexpr std::size_t partition_overhead = 96;
constexpr std::size_t sparse_entry_bytes = 32;

bool test_bit(const std::vector<std::uint64_t> &bits, std::size_t i) { return (bits[i / 64] >> (i % 64)) & 1u; }

// Sets bit i; returns true if it was clear.
bool set_bit(std::vector<std::uint64_t> &bits, std::size_t i) {
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    const bool fresh = !(bits[i / 64] & mask);
    bits[i / 64] |= mask;
    return fresh;
}

}  // namespace

SeenTable::SeenTable(std::size_t num_atoms, int max_width) : num_atoms_(num_atoms), max_width_(max_width) {
    if (max_width != 1 && max_width != 2) throw std::invalid_argument("max_width must be 1 or 2");
}

std::size_t SeenTable::pair_index(int a, int b) const {
    // Row-major upper triangle, a < b.
    const auto i = static_cast<std::size_t>(a), j = static_cast<std::size_t>(b);
    return i * (2 * num_atoms_ - i - 1) / 2 + (j - i - 1);
}

SeenTable::Partition &SeenTable::partition(const PartitionKey &key) {
    auto [it, fresh] = parts_.try_emplace(key);
    if (fresh) {
        it->second.atoms.assign((num_atoms_ + 63) / 64, 0);
        bytes_ += partition_overhead + it->second.atoms.size() * 8;
        if (max_width_ == 2 && num_atoms_ <= dense_pair_limit) {
            const std::size_t pairs = num_atoms_ * (num_atoms_ - (num_atoms_ ? 1 : 0)) / 2;
            it->second.dense_pairs.assign((pairs + 63) / 64, 0);
            bytes_ += it->second.dense_pairs.size() * 8;
        }
    }
    return it->second;
}

bool SeenTable::contains(const PartitionKey &key, const TupleKey &u) const {
    auto it = parts_.find(key);
    if (it == parts_.end()) return false;
    const Partition &p = it->second;
    if (u.arity == 1) return test_bit(p.atoms, static_cast<std::size_t>(u.atoms[0]));
    if (max_width_ < 2) return false;
    const std::size_t idx = pair_index(u.atoms[0], u.atoms[1]);
    if (num_atoms_ <= dense_pair_limit) return test_bit(p.dense_pairs, idx);
    return p.sparse_pairs.contains(idx);
}

int SeenTable::record(const State &s, const PartitionKey &key) {
    Partition &p = partition(key);
    scratch_.clear();
    s.for_each_true([&](int a) { scratch_.push_back(a); });
    bool new_atom = false, new_pair = false;
    for (int a : scratch_) new_atom |= set_bit(p.atoms, static_cast<std::size_t>(a));
    if (max_width_ == 2) {
        const bool dense = num_atoms_ <= dense_pair_limit;
        for (std::size_t x = 0; x < scratch_.size(); ++x)
            for (std::size_t y = x + 1; y < scratch_.size(); ++y) {
                const std::size_t idx = pair_index(scratch_[x], scratch_[y]);
                if (dense) {
                    new_pair |= set_bit(p.dense_pairs, idx);
                } else if (p.sparse_pairs.insert(idx).second) {
                    new_pair = true;
                    bytes_ += sparse_entry_bytes;
                }
            }
    }
    if (new_atom) return 1;
    if (new_pair) return 2;
    return max_width_ + 1;
}

int width_novelty(const State &s, const PartitionKey &key, SeenTable &tbl, int max_width) {
    if (max_width != tbl.max_width()) throw std::invalid_argument("max_width does not match table");
    return tbl.record(s, key);
}

std::uint64_t CountTable::count(const PartitionKey &key, int a) const {
    auto it = parts_.find(key);
    return it == parts_.end() ? 0 : it->second[static_cast<std::size_t>(a)];
}

std::uint64_t CountTable::record(const State &s, const PartitionKey &key) {
    auto [it, fresh] = parts_.try_emplace(key);
    if (fresh) {
        it->second.assign(num_atoms_, 0);
        bytes_ += partition_overhead + num_atoms_ * sizeof(std::uint64_t);
    }
    auto &counts = it->second;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    s.for_each_true([&](int a) {
        auto &c = counts[static_cast<std::size_t>(a)];
        best = std::min(best, c);
        ++c;
    });
    return best == std::numeric_limits<std::uint64_t>::max() ? 0 : best;
}

std::uint64_t count_novelty(const State &s, const PartitionKey &key, CountTable &tbl) { return tbl.record(s, key); }

std::uint64_t brute_force_count_novelty(std::span<const State> history, std::span<const PartitionKey> keys,
                                        const State &s, const PartitionKey &key) {
    if (history.size() != keys.size()) throw std::invalid_argument("history and keys differ in length");
    const std::vector<int> atoms = s.true_atoms();
    if (atoms.empty()) return 0;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (int v : atoms) {
        std::uint64_t n = 0;
        for (std::size_t i = 0; i < history.size(); ++i)
            if (keys[i] == key && history[i].test(static_cast<std::size_t>(v))) ++n;
        best = std::min(best, n);
    }
    return best;
}

}  // namespace nplan
