#include "nplan/heuristics.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

namespace nplan {

PartitionKey::PartitionKey(std::initializer_list<std::int32_t> values) {
    if (values.size() > max_functions) throw std::invalid_argument("too many partition functions");
    std::copy(values.begin(), values.end(), values_.begin());
    size_ = static_cast<std::uint8_t>(values.size());
}

int goal_count(const GroundProblem &p, const State &s) {
    int n = 0;
    for (int g : p.goal())
        if (!s.test(static_cast<std::size_t>(g))) ++n;
    return n;
}

std::optional<RelaxedPlanInfo> extract_relaxed_plan(const GroundProblem &p, const State &s) {
    constexpr std::int64_t inf = std::numeric_limits<std::int64_t>::max();
    const std::size_t n = p.num_atoms();
    std::vector<std::int64_t> cost(n, inf);
    std::vector<int> supporter(n, -1);
    s.for_each_true([&](int a) { cost[static_cast<std::size_t>(a)] = 0; });

    // Bellman-Ford style fixpoint; (cost, supporter index) only ever decreases.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t ai = 0; ai < p.num_actions(); ++ai) {
            const GroundAction &a = p.action(ai);
            std::int64_t c = 1;
            bool reachable = true;
            for (int q : a.pre) {
                const auto qc = cost[static_cast<std::size_t>(q)];
                if (qc == inf) {
                    reachable = false;
                    break;
                }
                c += qc;
            }
            if (!reachable) continue;
            for (int q : a.add) {
                const auto qi = static_cast<std::size_t>(q);
                if (cost[qi] == 0) continue;
                if (c < cost[qi] || (c == cost[qi] && static_cast<int>(ai) < supporter[qi])) {
                    cost[qi] = c;
                    supporter[qi] = static_cast<int>(ai);
                    changed = true;
                }
            }
        }
    }

    RelaxedPlanInfo info;
    std::vector<char> queued(n, 0), chosen(p.num_actions(), 0);
    std::vector<int> work;
    for (int g : p.goal()) {
        const auto gi = static_cast<std::size_t>(g);
        if (cost[gi] == inf) return std::nullopt;
        if (cost[gi] > 0 && !queued[gi]) {
            queued[gi] = 1;
            work.push_back(g);
        }
    }
    for (std::size_t w = 0; w < work.size(); ++w) {
        const int sup = supporter[static_cast<std::size_t>(work[w])];
        assert(sup >= 0);
        if (chosen[static_cast<std::size_t>(sup)]) continue;
        chosen[static_cast<std::size_t>(sup)] = 1;
        info.supporters.push_back(sup);
        const GroundAction &a = p.action(static_cast<std::size_t>(sup));
        info.relaxed_atoms.insert(info.relaxed_atoms.end(), a.add.begin(), a.add.end());
        for (int q : a.pre) {
            const auto qi = static_cast<std::size_t>(q);
            if (cost[qi] > 0 && !queued[qi]) {
                queued[qi] = 1;
                work.push_back(q);
            }
        }
    }
    std::sort(info.relaxed_atoms.begin(), info.relaxed_atoms.end());
    info.relaxed_atoms.erase(std::unique(info.relaxed_atoms.begin(), info.relaxed_atoms.end()),
                             info.relaxed_atoms.end());
    return info;
}

int r_credit(const RelaxedPlanInfo &info, int parent_credit, const State &s, const State &parent) {
    int credit = parent_credit;
    for (int a : info.relaxed_atoms) {
        const auto ai = static_cast<std::size_t>(a);
        if (s.test(ai) && !parent.test(ai)) ++credit;
    }
    return credit;
}

PartitionKey partition_key(const State &s, int node_r, const GroundProblem &p) {
    return PartitionKey{goal_count(p, s), node_r};
}

}  // namespace nplan
