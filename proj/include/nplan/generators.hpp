#pragma once

#include <string>
#include <string_view>

#include "nplan/strips.hpp"

namespace nplan {

enum class Domain { chain, gripper, blocks, lock };

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view name);

struct SizeRange {
    int min;
    int max;
};
SizeRange size_range(Domain d);

/// Deterministic instance generators.
///
/// chain(n):   atoms a1..an, empty init, goal {an}; step-i requires a(i-1)
///             and adds ai. No deletes, optimal plan length n.
/// gripper(n): one robot, rooms rooma/roomb, a left/right gripper pair, n
///             balls starting in rooma and goal all in roomb. 4n+4 atoms:
///             at-robby-R (2), at-bI-R (2n), carry-bI-G (2n), free-G (2).
/// blocks(n):  4-operator blocksworld; init is one tower b1 on b2 ... on bn,
///             goal is the reversed tower.
/// lock(k):    k dials with lock_positions settings each (one-hot atoms
///             dI-pJ), all starting at p0. turn-dI-pJ moves dial I one click
///             forward (mod positions). A single goal atom `open` is added by
///             `unlock`, which requires every dial at its secret setting, so
///             the goal needs a conjunction of k atoms. `variant` seeds the
///             secret combination; variant 0 is the same for every k-prefix.
///             Two extra atoms `idle` (initially true) and `armed`: `arm`
///             trades idle for armed, and `bypass` needs both to add `open`.
///             They never hold together, so bypass is unreachable, but the
///             relaxed plan goes through it.
///
/// Throws std::out_of_range when size is outside size_range(domain).
GroundProblem generate(Domain domain, int size, unsigned variant = 0);

inline constexpr int lock_positions = 4;

}  // namespace nplan
