#pragma once

#include <deque>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "nplan/strips.hpp"

namespace nplan::testkit {

struct BfsResult {
    std::optional<std::size_t> optimal_length;
    std::size_t reachable = 0;
    bool complete = true;  // false when max_states was hit
};

/// Exhaustive breadth-first search over the reachable state space.
inline BfsResult bfs(const GroundProblem &p, std::size_t max_states = 100000) {
    BfsResult r;
    std::unordered_map<State, std::size_t, StateHash> depth;
    std::deque<State> queue;
    depth.emplace(p.init(), 0);
    queue.push_back(p.init());
    while (!queue.empty()) {
        State s = std::move(queue.front());
        queue.pop_front();
        const std::size_t d = depth.at(s);
        if (!r.optimal_length && p.is_goal(s)) r.optimal_length = d;
        for (const GroundAction &a : p.actions()) {
            if (!a.applicable(s)) continue;
            State c = apply_unchecked(s, a);
            if (depth.contains(c)) continue;
            if (depth.size() >= max_states) {
                r.complete = false;
                continue;
            }
            depth.emplace(c, d + 1);
            queue.push_back(std::move(c));
        }
    }
    r.reachable = depth.size();
    return r;
}

inline State random_state(std::size_t L, std::mt19937_64 &rng, double density = 0.5) {
    std::bernoulli_distribution coin(density);
    State s(L);
    for (std::size_t i = 0; i < L; ++i)
        if (coin(rng)) s.set(i);
    return s;
}

}  // namespace nplan::testkit
