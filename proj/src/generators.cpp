#include "nplan/generators.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>

namespace nplan {

namespace {

class Builder {
public:
    int atom(std::string name) {
        const int idx = static_cast<int>(atoms_.size());
        atoms_.push_back(Atom{idx, std::move(name)});
        return idx;
    }

    void action(std::string name, std::vector<int> pre, std::vector<int> add, std::vector<int> del) {
        actions_.push_back(GroundAction{std::move(name), std::move(pre), std::move(add), std::move(del), 1});
    }

    GroundProblem build(const std::vector<int> &init, std::vector<int> goal) {
        State s = State::from_atoms(atoms_.size(), init);
        return GroundProblem(std::move(atoms_), std::move(actions_), std::move(s), std::move(goal));
    }

private:
    std::vector<Atom> atoms_;
    std::vector<GroundAction> actions_;
};

std::string b(int i) { return "b" + std::to_string(i); }

GroundProblem make_chain(int n) {
    Builder g;
    std::vector<int> a;
    for (int i = 1; i <= n; ++i) a.push_back(g.atom("a" + std::to_string(i)));
    for (int i = 1; i <= n; ++i) {
        std::vector<int> pre;
        if (i > 1) pre.push_back(a[static_cast<std::size_t>(i - 2)]);
        g.action("step-" + std::to_string(i), pre, {a[static_cast<std::size_t>(i - 1)]}, {});
    }
    return g.build({}, {a.back()});
}

GroundProblem make_gripper(int n) {
    Builder g;
    const char *rooms[] = {"rooma", "roomb"};
    const char *grippers[] = {"left", "right"};
    int at_robby[2];
    for (int r = 0; r < 2; ++r) at_robby[r] = g.atom(std::string("at-robby-") + rooms[r]);
    std::vector<std::array<int, 2>> at(static_cast<std::size_t>(n)), carry(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < 2; ++r) at[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)] =
            g.atom("at-" + b(i + 1) + "-" + rooms[r]);
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < 2; ++h) carry[static_cast<std::size_t>(i)][static_cast<std::size_t>(h)] =
            g.atom("carry-" + b(i + 1) + "-" + grippers[h]);
    int free_g[2];
    for (int h = 0; h < 2; ++h) free_g[h] = g.atom(std::string("free-") + grippers[h]);

    for (int from = 0; from < 2; ++from) {
        const int to = 1 - from;
        g.action(std::string("move-") + rooms[from] + "-" + rooms[to], {at_robby[from]}, {at_robby[to]},
                 {at_robby[from]});
    }
    for (int i = 0; i < n; ++i) {
        const auto bi = static_cast<std::size_t>(i);
        for (int r = 0; r < 2; ++r) {
            const auto ri = static_cast<std::size_t>(r);
            for (int h = 0; h < 2; ++h) {
                const auto hi = static_cast<std::size_t>(h);
                g.action("pick-" + b(i + 1) + "-" + rooms[r] + "-" + grippers[h],
                         {at[bi][ri], at_robby[r], free_g[h]}, {carry[bi][hi]}, {at[bi][ri], free_g[h]});
                g.action("drop-" + b(i + 1) + "-" + rooms[r] + "-" + grippers[h], {carry[bi][hi], at_robby[r]},
                         {at[bi][ri], free_g[h]}, {carry[bi][hi]});
            }
        }
    }
    std::vector<int> init{at_robby[0], free_g[0], free_g[1]};
    std::vector<int> goal;
    for (int i = 0; i < n; ++i) {
        init.push_back(at[static_cast<std::size_t>(i)][0]);
        goal.push_back(at[static_cast<std::size_t>(i)][1]);
    }
    return g.build(init, goal);
}

GroundProblem make_blocks(int n) {
    Builder g;
    const auto un = static_cast<std::size_t>(n);
    std::vector<std::vector<int>> on(un, std::vector<int>(un, -1));
    std::vector<int> ontable(un), clear(un), holding(un);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) on[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.atom("on-" + b(i + 1) + "-" + b(j + 1));
    for (int i = 0; i < n; ++i) ontable[static_cast<std::size_t>(i)] = g.atom("ontable-" + b(i + 1));
    for (int i = 0; i < n; ++i) clear[static_cast<std::size_t>(i)] = g.atom("clear-" + b(i + 1));
    for (int i = 0; i < n; ++i) holding[static_cast<std::size_t>(i)] = g.atom("holding-" + b(i + 1));
    const int handempty = g.atom("handempty");

    for (std::size_t i = 0; i < un; ++i) {
        const std::string x = b(static_cast<int>(i) + 1);
        g.action("pick-up-" + x, {clear[i], ontable[i], handempty}, {holding[i]}, {clear[i], ontable[i], handempty});
        g.action("put-down-" + x, {holding[i]}, {clear[i], ontable[i], handempty}, {holding[i]});
        for (std::size_t j = 0; j < un; ++j) {
            if (i == j) continue;
            const std::string y = b(static_cast<int>(j) + 1);
            g.action("stack-" + x + "-" + y, {holding[i], clear[j]}, {on[i][j], clear[i], handempty},
                     {holding[i], clear[j]});
            g.action("unstack-" + x + "-" + y, {on[i][j], clear[i], handempty}, {holding[i], clear[j]},
                     {on[i][j], clear[i], handempty});
        }
    }
    std::vector<int> init{clear[0], handempty, ontable[un - 1]};
    for (std::size_t i = 0; i + 1 < un; ++i) init.push_back(on[i][i + 1]);
    std::vector<int> goal{ontable[0]};
    for (std::size_t i = 0; i + 1 < un; ++i) goal.push_back(on[i + 1][i]);
    return g.build(init, goal);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

GroundProblem make_lock(int k, unsigned variant) {
    Builder g;
    constexpr int m = lock_positions;
    std::vector<std::array<int, m>> pos(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j)
            pos[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                g.atom("d" + std::to_string(i) + "-p" + std::to_string(j));
    const int open = g.atom("open");
    std::vector<int> secret_atoms, init;
    for (int i = 0; i < k; ++i) {
        const auto di = static_cast<std::size_t>(i);
        for (int j = 0; j < m; ++j) {
            const int next = (j + 1) % m;
            g.action("turn-d" + std::to_string(i) + "-p" + std::to_string(j), {pos[di][static_cast<std::size_t>(j)]},
                     {pos[di][static_cast<std::size_t>(next)]}, {pos[di][static_cast<std::size_t>(j)]});
        }
        const auto secret = splitmix64((std::uint64_t{variant} << 32) ^ static_cast<std::uint64_t>(i)) % m;
        secret_atoms.push_back(pos[di][secret]);
        init.push_back(pos[di][0]);
    }
    g.action("unlock", secret_atoms, {open}, {});
    const int idle = g.atom("idle"), armed = g.atom("armed");
    g.action("arm", {idle}, {armed}, {idle});
    g.action("bypass", {idle, armed}, {open}, {});
    init.push_back(idle);
    return g.build(init, {open});
}

}  // namespace

std::string_view to_string(Domain d) {
    switch (d) {
        case Domain::chain:
            return "chain";
        case Domain::gripper:
            return "gripper";
        case Domain::blocks:
            return "blocks";
        case Domain::lock:
            return "lock";
    }
    return "?";
}

Domain parse_domain(std::string_view name) {
    if (name == "chain") return Domain::chain;
    if (name == "gripper") return Domain::gripper;
    if (name == "blocks") return Domain::blocks;
    if (name == "lock") return Domain::lock;
    throw std::invalid_argument("unknown domain '" + std::string(name) + "'");
}

SizeRange size_range(Domain d) {
    switch (d) {
        case Domain::chain:
            return {1, 100000};
        case Domain::gripper:
            return {1, 500};
        case Domain::blocks:
            return {1, 40};
        case Domain::lock:
            return {1, 24};
    }
    return {1, 1};
}

GroundProblem generate(Domain domain, int size, unsigned variant) {
    const auto range = size_range(domain);
    if (size < range.min || size > range.max)
        throw std::out_of_range(std::string(to_string(domain)) + " size " + std::to_string(size) +
                                " outside [" + std::to_string(range.min) + ", " + std::to_string(range.max) + "]");
    switch (domain) {
        case Domain::chain:
            return make_chain(size);
        case Domain::gripper:
            return make_gripper(size);
        case Domain::blocks:
            return make_blocks(size);
        case Domain::lock:
            return make_lock(size, variant);
    }
    throw std::invalid_argument("unknown domain");
}

}  // namespace nplan
