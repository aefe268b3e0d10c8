#include <gtest/gtest.h>

#include "nplan/novelty.hpp"
#include "support.hpp"

using namespace nplan;

namespace {

State atoms(std::size_t L, std::vector<int> v) { return State::from_atoms(L, v); }

const PartitionKey k0{0};

}  // namespace

TEST(CountNovelty, HandTrace) {
    // a=0 b=1 c=2
    CountTable t(3);
    EXPECT_EQ(count_novelty(atoms(3, {0}), k0, t), 0u);
    EXPECT_EQ(count_novelty(atoms(3, {0, 1}), k0, t), 0u);
    EXPECT_EQ(count_novelty(atoms(3, {0, 2}), k0, t), 0u);
    EXPECT_EQ(t.count(k0, 0), 3u);
    EXPECT_EQ(count_novelty(atoms(3, {0, 1}), k0, t), 1u);
}

TEST(CountNovelty, FreshPartitionAndEmptyState) {
    CountTable t(3);
    count_novelty(atoms(3, {0, 1, 2}), k0, t);
    EXPECT_EQ(count_novelty(atoms(3, {0, 1, 2}), PartitionKey{1}, t), 0u);
    EXPECT_EQ(count_novelty(State(3), k0, t), 0u);
}

TEST(BruteForce, EmptyAndForeignHistory) {
    const std::vector<State> hist{atoms(3, {0}), atoms(3, {0, 1})};
    const std::vector<PartitionKey> keys{PartitionKey{1}, PartitionKey{1}};
    EXPECT_EQ(brute_force_count_novelty({}, {}, atoms(3, {0}), k0), 0u);
    EXPECT_EQ(brute_force_count_novelty(hist, keys, atoms(3, {0}), k0), 0u);
    EXPECT_EQ(brute_force_count_novelty(hist, keys, atoms(3, {0}), PartitionKey{1}), 2u);
}

TEST(BruteForce, MatchesIncrementalOnRandomTraces) {
    std::mt19937_64 rng(11);
    for (int trace = 0; trace < 100; ++trace) {
        const std::size_t L = 1 + rng() % 32;
        CountTable t(L);
        std::vector<State> hist;
        std::vector<PartitionKey> keys;
        for (int step = 0; step < 100; ++step) {
            const State s = testkit::random_state(L, rng, 0.3);
            const PartitionKey key{static_cast<std::int32_t>(rng() % 3)};
            const auto expect = brute_force_count_novelty(hist, keys, s, key);
            ASSERT_EQ(count_novelty(s, key, t), expect);
            hist.push_back(s);
            keys.push_back(key);
        }
    }
}

TEST(CountNovelty, PartitionIsolationAndDominance) {
    std::mt19937_64 rng(2);
    CountTable plain(12), parted(12), isolated(12);
    for (int i = 0; i < 300; ++i) {
        const State s = testkit::random_state(12, rng);
        const PartitionKey key{static_cast<std::int32_t>(rng() % 4)};
        const auto a = count_novelty(s, k0, plain);
        const auto b = count_novelty(s, key, parted);
        EXPECT_LE(b, a);
        if (key == PartitionKey{2}) count_novelty(s, key, isolated);
    }
    for (int v = 0; v < 12; ++v) EXPECT_EQ(parted.count(PartitionKey{2}, v), isolated.count(PartitionKey{2}, v));
}

TEST(WidthNovelty, FirstPairReplay) {
    // Atoms 0..3. s0 = {0,1}, s1 = {2,3}, then {0,2} has only old atoms but a new pair.
    SeenTable t(4, 2);
    EXPECT_EQ(width_novelty(atoms(4, {0, 1}), k0, t, 2), 1);
    EXPECT_EQ(width_novelty(atoms(4, {2, 3}), k0, t, 2), 1);
    EXPECT_EQ(width_novelty(atoms(4, {0, 2}), k0, t, 2), 2);
    EXPECT_EQ(width_novelty(atoms(4, {0, 2}), k0, t, 2), 3);
    EXPECT_TRUE(t.contains(k0, TupleKey::pair(2, 0)));
    EXPECT_FALSE(t.contains(k0, TupleKey::pair(1, 3)));
    EXPECT_EQ(width_novelty(atoms(4, {0, 2}), PartitionKey{5}, t, 2), 1);
}

TEST(WidthNovelty, MaxWidthOne) {
    SeenTable t(4, 1);
    EXPECT_EQ(width_novelty(atoms(4, {0, 1}), k0, t, 1), 1);
    EXPECT_EQ(width_novelty(atoms(4, {0}), k0, t, 1), 2);
}

TEST(WidthNovelty, PairsMatchBruteForce) {
    for (std::size_t L : {std::size_t{20}, std::size_t{4100}}) {
        std::mt19937_64 rng(L);
        SeenTable t(L, 2);
        std::vector<State> hist;
        for (int step = 0; step < 60; ++step) {
            State s(L);
            for (int j = 0; j < 4; ++j) s.set((rng() % 24) * (L - 1) / 23);
            bool new_atom = true, new_pair = true;
            const auto tv = s.true_atoms();
            new_atom = false;
            for (int a : tv) {
                bool seen = false;
                for (const State &h : hist) seen |= h.test(static_cast<std::size_t>(a));
                new_atom |= !seen;
            }
            new_pair = false;
            for (std::size_t i = 0; i < tv.size(); ++i)
                for (std::size_t j = i + 1; j < tv.size(); ++j) {
                    bool seen = false;
                    for (const State &h : hist)
                        seen |= h.test(static_cast<std::size_t>(tv[i])) && h.test(static_cast<std::size_t>(tv[j]));
                    new_pair |= !seen;
                }
            const int expect = new_atom ? 1 : new_pair ? 2 : 3;
            ASSERT_EQ(width_novelty(s, k0, t, 2), expect) << "L=" << L << " step " << step;
            hist.push_back(s);
        }
    }
}

TEST(WidthNovelty, NoveltyOneIffSomeCountZero) {
    std::mt19937_64 rng(9);
    SeenTable w(10, 1);
    CountTable c(10);
    for (int i = 0; i < 200; ++i) {
        const State s = testkit::random_state(10, rng, 0.2);
        if (s.count() == 0) continue;
        const bool any_zero = [&] {
            for (int a : s.true_atoms())
                if (c.count(k0, a) == 0) return true;
            return false;
        }();
        EXPECT_EQ(width_novelty(s, k0, w, 1) == 1, any_zero);
        EXPECT_EQ(count_novelty(s, k0, c) == 0, any_zero);
    }
}
