#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nplan {

/// Array-backed binary min-heap bounded to `capacity` entries. When full, a
/// new entry is compared against one uniformly drawn leaf and replaces it only
/// when strictly better; otherwise the new entry is rejected.
///
/// Equal priorities pop in insertion order.
template <typename T, typename Priority, typename Compare = std::less<Priority>>
class TrimmedHeap {
public:
    static constexpr std::size_t unbounded = std::numeric_limits<std::size_t>::max();

    struct Entry {
        T value;
        Priority priority;
        std::uint64_t seq;
    };

    enum class InsertKind { inserted, replaced, rejected };

    /// `evicted` holds the displaced occupant for `replaced`, the incoming
    /// value for `rejected`, and nothing for `inserted`.
    struct InsertResult {
        InsertKind kind;
        std::optional<T> evicted;
    };

    /// Slots in a complete tree whose deepest level is `depth`, root at 0.
    static std::size_t capacity_for_depth(int depth) {
        if (depth < 1 || depth > 61) throw std::out_of_range("trim depth must be in [1, 61]");
        return (std::size_t{1} << (depth + 1)) - 1;
    }

    explicit TrimmedHeap(std::size_t capacity = unbounded, std::uint64_t seed = 0, Compare cmp = Compare{})
        : capacity_(capacity), rng_(seed), cmp_(std::move(cmp)) {
        if (capacity_ == 0) throw std::invalid_argument("capacity must be positive");
    }

    std::size_t size() const { return slots_.size(); }
    bool empty() const { return slots_.empty(); }
    std::size_t capacity() const { return capacity_; }
    bool bounded() const { return capacity_ != unbounded; }
    std::span<const Entry> entries() const { return slots_; }

    std::uint64_t replaced_count() const { return replaced_; }
    std::uint64_t rejected_count() const { return rejected_; }

    const Entry &top() const {
        if (slots_.empty()) throw std::out_of_range("top of empty heap");
        return slots_.front();
    }

    InsertResult insert(T value, Priority priority) {
        if (slots_.size() < capacity_) return push_back(std::move(value), std::move(priority));
        std::uniform_int_distribution<std::size_t> pick(slots_.size() / 2, slots_.size() - 1);
        return replace_leaf(std::move(value), std::move(priority), pick(rng_));
    }

    /// Test hook: like insert() on a full heap, with the leaf index pinned.
    InsertResult insert_at_leaf(T value, Priority priority, std::size_t leaf) {
        if (slots_.size() < capacity_) return push_back(std::move(value), std::move(priority));
        if (leaf < slots_.size() / 2 || leaf >= slots_.size()) throw std::out_of_range("not a leaf index");
        return replace_leaf(std::move(value), std::move(priority), leaf);
    }

    std::optional<Entry> pop() {
        if (slots_.empty()) return std::nullopt;
        Entry out = std::move(slots_.front());
        if (slots_.size() > 1) slots_.front() = std::move(slots_.back());
        slots_.pop_back();
        if (!slots_.empty()) sift_down(0);
        return out;
    }

    /// Restores heap order when slot i may be better than its ancestors.
    void heapify_up_from(std::size_t i) {
        if (i >= slots_.size()) throw std::out_of_range("heap index out of range");
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!less(slots_[i], slots_[parent])) break;
            std::swap(slots_[i], slots_[parent]);
            i = parent;
        }
    }

    /// Full parent <= child check over every slot.
    bool valid() const {
        for (std::size_t i = 1; i < slots_.size(); ++i)
            if (less(slots_[i], slots_[(i - 1) / 2])) return false;
        return true;
    }

    template <typename F>
    void for_each(F &&f) const {
        for (const Entry &e : slots_) f(e.value);
    }

    /// Removes every entry, calling f(value) on each.
    template <typename F>
    void drain(F &&f) {
        for (Entry &e : slots_) f(std::move(e.value));
        slots_.clear();
    }

private:
    bool less(const Entry &a, const Entry &b) const {
        if (cmp_(a.priority, b.priority)) return true;
        if (cmp_(b.priority, a.priority)) return false;
        return a.seq < b.seq;
    }

    InsertResult push_back(T value, Priority priority) {
        slots_.push_back(Entry{std::move(value), std::move(priority), next_seq_++});
        heapify_up_from(slots_.size() - 1);
        return {InsertKind::inserted, std::nullopt};
    }

    InsertResult replace_leaf(T value, Priority priority, std::size_t leaf) {
        Entry &victim = slots_[leaf];
        if (!cmp_(priority, victim.priority)) {
            ++rejected_;
            return {InsertKind::rejected, std::move(value)};
        }
        T old = std::move(victim.value);
        victim = Entry{std::move(value), std::move(priority), next_seq_++};
        heapify_up_from(leaf);
        ++replaced_;
        return {InsertKind::replaced, std::move(old)};
    }

    void sift_down(std::size_t i) {
        const std::size_t n = slots_.size();
        for (;;) {
            const std::size_t l = 2 * i + 1, r = l + 1;
            std::size_t best = i;
            if (l < n && less(slots_[l], slots_[best])) best = l;
            if (r < n && less(slots_[r], slots_[best])) best = r;
            if (best == i) return;
            std::swap(slots_[i], slots_[best]);
            i = best;
        }
    }

    std::vector<Entry> slots_;
    std::size_t capacity_;
    std::mt19937_64 rng_;
    Compare cmp_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t replaced_ = 0;
    std::uint64_t rejected_ = 0;
};

/// Interaction-counted lifetime of a node shared between open lists.
struct NodeLifetime {
    int interaction_count = 0;
    int list_membership = 0;
    bool in_closed = false;

    bool deletable() const { return interaction_count == list_membership && !in_closed; }
};

enum class Release { retained, deletable };

/// Called each time a node leaves an open list (popped, replaced or rejected).
inline Release double_list_release(NodeLifetime &nl) {
    assert(nl.interaction_count < nl.list_membership);
    ++nl.interaction_count;
    return nl.deletable() ? Release::deletable : Release::retained;
}

}  // namespace nplan
