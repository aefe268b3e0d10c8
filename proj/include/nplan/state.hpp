#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace nplan {

/// Fixed-length packed boolean assignment over L atoms.
///
/// Equality is full bitwise equality over all L positions. Bits past L in the
/// last word are always kept zero so word-wise comparison and hashing are
/// exact.
class State {
public:
    using word_type = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    State() = default;
    explicit State(std::size_t num_atoms)
        : num_atoms_(num_atoms), words_((num_atoms + word_bits - 1) / word_bits, 0) {}

    static State from_atoms(std::size_t num_atoms, std::span<const int> true_atoms) {
        State s(num_atoms);
        for (int a : true_atoms) s.set(static_cast<std::size_t>(a));
        return s;
    }

    std::size_t size() const { return num_atoms_; }

    bool test(std::size_t i) const {
        assert(i < num_atoms_);
        return (words_[i / word_bits] >> (i % word_bits)) & 1u;
    }
    bool operator[](std::size_t i) const { return test(i); }

    void set(std::size_t i, bool value = true) {
        assert(i < num_atoms_);
        const word_type mask = word_type{1} << (i % word_bits);
        if (value)
            words_[i / word_bits] |= mask;
        else
            words_[i / word_bits] &= ~mask;
    }
    void reset(std::size_t i) { set(i, false); }
    void flip(std::size_t i) {
        assert(i < num_atoms_);
        words_[i / word_bits] ^= word_type{1} << (i % word_bits);
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (word_type w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    /// Number of positions where the two states differ.
    std::size_t hamming(const State &other) const {
        assert(other.num_atoms_ == num_atoms_);
        std::size_t n = 0;
        for (std::size_t w = 0; w < words_.size(); ++w)
            n += static_cast<std::size_t>(std::popcount(words_[w] ^ other.words_[w]));
        return n;
    }

    /// Calls f(index) for every true atom in increasing index order.
    template <typename F>
    void for_each_true(F &&f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            word_type bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                f(static_cast<int>(w * word_bits + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
    }

    std::vector<int> true_atoms() const {
        std::vector<int> out;
        out.reserve(count());
        for_each_true([&](int a) { out.push_back(a); });
        return out;
    }

    bool contains_all(std::span<const int> atoms) const {
        for (int a : atoms)
            if (!test(static_cast<std::size_t>(a))) return false;
        return true;
    }

    std::span<const word_type> words() const { return words_; }
    std::size_t byte_size() const { return words_.size() * sizeof(word_type); }

    std::size_t hash() const {
        // FNV-1a over words, followed by a murmur-style finalizer.
        std::uint64_t h = 1469598103934665603ull ^ num_atoms_;
        for (word_type w : words_) {
            h ^= w;
            h *= 1099511628211ull;
        }
        h ^= h >> 33;
        h *= 0xff51afd7ed558ccdull;
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }

    friend bool operator==(const State &a, const State &b) {
        return a.num_atoms_ == b.num_atoms_ && a.words_ == b.words_;
    }

private:
    std::size_t num_atoms_ = 0;
    std::vector<word_type> words_;
};

struct StateHash {
    std::size_t operator()(const State &s) const { return s.hash(); }
};

}  // namespace nplan
