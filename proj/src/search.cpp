#include "nplan/search.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include "nplan/novelty.hpp"

namespace nplan {

std::string_view to_string(Planner p) {
    switch (p) {
        case Planner::bfws:
            return "bfws";
        case Planner::bfcs:
            return "bfcs";
        case Planner::bfnos:
            return "bfnos";
        case Planner::gbfs:
            return "gbfs";
    }
    return "?";
}

Planner parse_planner(std::string_view name) {
    if (name == "bfws") return Planner::bfws;
    if (name == "bfcs") return Planner::bfcs;
    if (name == "bfnos") return Planner::bfnos;
    if (name == "gbfs") return Planner::gbfs;
    throw std::invalid_argument("unknown planner '" + std::string(name) + "'");
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::plan:
            return "plan";
        case Outcome::exhausted:
            return "exhausted";
        case Outcome::time_limit:
            return "time_limit";
        case Outcome::memory_limit:
            return "memory_limit";
    }
    return "?";
}

bool SearchStats::same_search(const SearchStats &o) const {
    return expansions == o.expansions && generated == o.generated && duplicates == o.duplicates &&
           replaced == o.replaced && rejected == o.rejected && trims == o.trims &&
           nodes_allocated == o.nodes_allocated && nodes_freed == o.nodes_freed && peak_bytes == o.peak_bytes &&
           table_bytes == o.table_bytes && partitions == o.partitions &&
           last_expanded_novelty == o.last_expanded_novelty && saturated_expansions == o.saturated_expansions &&
           count_at_least == o.count_at_least && frontier_novelty_min == o.frontier_novelty_min &&
           frontier_novelty_max == o.frontier_novelty_max;
}

namespace {

using Clock = std::chrono::steady_clock;
using Priority = std::pair<std::int64_t, std::int64_t>;
using Heap = TrimmedHeap<NodeId, Priority>;

enum class ListKind { count, width, plain };

std::vector<ListKind> lists_for(Planner p) {
    switch (p) {
        case Planner::bfws:
            return {ListKind::width};
        case Planner::bfcs:
            return {ListKind::count};
        case Planner::bfnos:
            return {ListKind::count, ListKind::width};
        case Planner::gbfs:
            return {ListKind::plain};
    }
    throw std::invalid_argument("unknown planner");
}

class Engine {
public:
    Engine(const GroundProblem &p, const SearchConfig &cfg)
        : p_(p), cfg_(cfg), kinds_(lists_for(cfg.planner)), index_(16, IdHash{&nodes_}, IdEq{&nodes_}) {
        const std::size_t cap = cfg.trim ? Heap::capacity_for_depth(cfg.trim_depth) : Heap::unbounded;
        for (std::size_t i = 0; i < kinds_.size(); ++i) {
            lists_.emplace_back(cap, cfg.seed * 0x9e3779b97f4a7c15ull + i);
            counts_.emplace_back(p.num_atoms());
            seen_.emplace_back(p.num_atoms(), 2);
        }
        state_bytes_ = State(p.num_atoms()).byte_size();
    }

    SearchResult run();

private:
    struct IdHash {
        using is_transparent = void;
        const std::vector<SearchNode> *nodes;
        std::size_t operator()(NodeId id) const { return (*nodes)[id].state.hash(); }
        std::size_t operator()(const State &s) const { return s.hash(); }
    };
    struct IdEq {
        using is_transparent = void;
        const std::vector<SearchNode> *nodes;
        const State &get(NodeId id) const { return (*nodes)[id].state; }
        const State &get(const State &s) const { return s; }
        template <typename A, typename B>
        bool operator()(const A &a, const B &b) const {
            return get(a) == get(b);
        }
    };

    struct Evaluated {
        std::array<Priority, 2> prio{};
        std::array<EvalTuple, 2> eval{};
    };

    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }

    std::size_t table_bytes() const {
        std::size_t b = 0;
        for (std::size_t i = 0; i < kinds_.size(); ++i) {
            if (kinds_[i] == ListKind::count) b += counts_[i].bytes();
            if (kinds_[i] == ListKind::width) b += seen_[i].bytes();
        }
        return b;
    }

    std::size_t bytes() const { return alive_ * (state_bytes_ + cfg_.node_overhead) + table_bytes(); }

    void note_bytes() { stats_.peak_bytes = std::max(stats_.peak_bytes, bytes()); }

    Evaluated evaluate(const State &s, const PartitionKey &key, int goals, int r) {
        Evaluated out;
        for (std::size_t i = 0; i < kinds_.size(); ++i) {
            switch (kinds_[i]) {
                case ListKind::count: {
                    const auto c = static_cast<std::int64_t>(count_novelty(s, key, counts_[i]));
                    for (std::size_t b = 0; b < count_thresholds.size(); ++b)
                        if (static_cast<std::uint64_t>(c) >= count_thresholds[b]) ++stats_.count_at_least[b];
                    out.eval[i] = EvalTuple{c, goals};
                    out.prio[i] = {c, goals};
                    break;
                }
                case ListKind::width: {
                    const auto w = width_novelty(s, key, seen_[i], 2);
                    out.eval[i] = EvalTuple{w, goals};
                    out.prio[i] = {w, goals};
                    break;
                }
                case ListKind::plain:
                    out.eval[i] = EvalTuple{0, goals};
                    out.prio[i] = {goals, -r};
                    break;
            }
        }
        return out;
    }

    NodeId allocate(SearchNode node) {
        NodeId id;
        if (!free_.empty()) {
            id = free_.back();
            free_.pop_back();
            nodes_[id] = std::move(node);
        } else {
            id = static_cast<NodeId>(nodes_.size());
            nodes_.push_back(std::move(node));
            live_.push_back(0);
        }
        live_[id] = 1;
        ++alive_;
        ++stats_.nodes_allocated;
        index_.insert(id);
        if (cfg_.observer) cfg_.observer(NodeEvent{NodeEventKind::alloc, id, &nodes_[id], {}});
        return id;
    }

    void release_node(NodeId id, NodeEventKind kind) {
        if (id >= nodes_.size() || !live_[id]) throw std::logic_error("double free of search node");
        if (cfg_.observer) cfg_.observer(NodeEvent{kind, id, &nodes_[id], {}});
        index_.erase(id);
        live_[id] = 0;
        nodes_[id].state = State();
        --alive_;
        ++stats_.nodes_freed;
        free_.push_back(id);
    }

    void leave_list(NodeId id) {
        if (double_list_release(nodes_[id].lifetime) == Release::deletable) release_node(id, NodeEventKind::free);
    }

    void offer(NodeId id, const Evaluated &ev) {
        nodes_[id].lifetime.list_membership = static_cast<int>(lists_.size());
        for (std::size_t i = 0; i < lists_.size(); ++i) {
            auto res = lists_[i].insert(id, ev.prio[i]);
            if (res.kind == Heap::InsertKind::inserted) continue;
            ++stats_.trims;
            if (res.kind == Heap::InsertKind::replaced)
                ++stats_.replaced;
            else
                ++stats_.rejected;
            leave_list(*res.evicted);
        }
    }

    std::optional<Popped> pop() {
        auto closed = [&](NodeId id) { return nodes_[id].lifetime.in_closed; };
        auto skip = [&](NodeId id, int) { leave_list(id); };
        if (lists_.size() == 2) return bfnos_step(std::array<Heap *, 2>{&lists_[0], &lists_[1]}, turn_, closed, skip);
        while (auto e = lists_[0].pop()) {
            if (closed(e->value)) {
                skip(e->value, 0);
                continue;
            }
            return Popped{e->value, 0};
        }
        return std::nullopt;
    }

    std::vector<int> path_to(NodeId id) const {
        std::vector<int> plan;
        for (NodeId n = id; n != no_node && nodes_[n].parent != no_node; n = nodes_[n].parent)
            plan.push_back(nodes_[n].action);
        std::reverse(plan.begin(), plan.end());
        return plan;
    }

    void trace_row(std::string_view kind, const SearchNode *n, int list, std::string_view outcome) {
        if (!cfg_.trace) return;
        std::ostream &os = *cfg_.trace;
        os << kind << ',';
        if (n) {
            const EvalTuple &e = list == 1 && n->eval_secondary ? *n->eval_secondary : n->eval_primary;
            os << n->seq << ',' << list << ',' << e.novelty << ',' << e.goals_remaining << ',' << n->r_credit;
        } else {
            os << ",,,,";
        }
        os << ',' << lists_[0].size() << ',' << (lists_.size() > 1 ? lists_[1].size() : 0) << ',' << stats_.trims
           << ',' << bytes() << ',' << stats_.expansions << ',' << stats_.generated << ',' << outcome << ','
           << elapsed_ms() << '\n';
    }

    SearchResult finish(Outcome o, std::vector<int> plan = {}) {
        SearchResult r;
        r.outcome = o;
        r.cost = plan_cost(p_, plan);
        r.plan = std::move(plan);
        stats_.table_bytes = table_bytes();
        for (std::size_t i = 0; i < kinds_.size(); ++i) {
            if (kinds_[i] == ListKind::count) stats_.partitions += counts_[i].num_partitions();
            if (kinds_[i] == ListKind::width) stats_.partitions += seen_[i].num_partitions();
        }
        note_bytes();
        if (!lists_[0].empty()) {
            std::int64_t lo = lists_[0].top().priority.first, hi = lo;
            for (const auto &e : lists_[0].entries()) {
                lo = std::min(lo, e.priority.first);
                hi = std::max(hi, e.priority.first);
            }
            stats_.frontier_novelty_min = lo;
            stats_.frontier_novelty_max = hi;
        }
        stats_.wall_ms = elapsed_ms();
        trace_row("summary", nullptr, -1, to_string(o));
        if (cfg_.trace) {
            cfg_.trace->flush();
            if (!*cfg_.trace) r.warning = "trace output failed";
        }
        for (NodeId id = 0; id < nodes_.size(); ++id)
            if (live_[id]) release_node(id, NodeEventKind::teardown_free);
        r.stats = stats_;
        return r;
    }

    const GroundProblem &p_;
    const SearchConfig &cfg_;
    std::vector<ListKind> kinds_;
    std::vector<Heap> lists_;
    std::vector<CountTable> counts_;
    std::vector<SeenTable> seen_;
    std::vector<SearchNode> nodes_;
    std::vector<char> live_;
    std::vector<NodeId> free_;
    std::unordered_set<NodeId, IdHash, IdEq> index_;
    std::size_t alive_ = 0;
    std::size_t state_bytes_ = 0;
    std::uint64_t next_seq_ = 0;
    int turn_ = 0;
    SearchStats stats_;
    Clock::time_point start_;
};

SearchResult Engine::run() {
    start_ = Clock::now();
    if (cfg_.trace) *cfg_.trace << trace_header << '\n';

    const auto rinfo = extract_relaxed_plan(p_, p_.init());
    if (!rinfo) return finish(Outcome::exhausted);

    SearchNode root;
    root.state = p_.init();
    root.seq = next_seq_++;
    ++stats_.generated;
    const int root_goals = goal_count(p_, root.state);
    const PartitionKey root_key = partition_key(root.state, 0, p_);
    const Evaluated root_ev = evaluate(root.state, root_key, root_goals, 0);
    root.eval_primary = root_ev.eval[0];
    if (lists_.size() > 1) root.eval_secondary = root_ev.eval[1];
    if (cfg_.observer) cfg_.observer(NodeEvent{NodeEventKind::generate, no_node, &root, root_key});
    if (root_goals == 0) return finish(Outcome::plan);
    offer(allocate(std::move(root)), root_ev);
    note_bytes();

    for (;;) {
        if (cfg_.cancel && cfg_.cancel->load(std::memory_order_relaxed)) return finish(Outcome::time_limit);
        if (cfg_.time_limit && elapsed_ms() >= *cfg_.time_limit * 1000.0) return finish(Outcome::time_limit);
        if (cfg_.memory_limit && bytes() > *cfg_.memory_limit) return finish(Outcome::memory_limit);

        const auto popped = pop();
        if (!popped) return finish(Outcome::exhausted);
        const NodeId id = popped->id;
        nodes_[id].lifetime.in_closed = true;
        double_list_release(nodes_[id].lifetime);
        ++stats_.expansions;
        {
            const SearchNode &n = nodes_[id];
            const EvalTuple &e = popped->list == 1 && n.eval_secondary ? *n.eval_secondary : n.eval_primary;
            stats_.last_expanded_novelty = e.novelty;
            if (kinds_[static_cast<std::size_t>(popped->list)] == ListKind::width && e.novelty == 3)
                ++stats_.saturated_expansions;
            if (cfg_.observer) cfg_.observer(NodeEvent{NodeEventKind::expand, id, &n, {}});
            trace_row("expand", &n, popped->list, "");
        }

        for (std::size_t ai = 0; ai < p_.num_actions(); ++ai) {
            const GroundAction &a = p_.action(ai);
            const State &parent_state = nodes_[id].state;
            if (!a.applicable(parent_state)) continue;
            SearchNode child;
            child.state = apply_unchecked(parent_state, a);
            child.parent = id;
            child.action = static_cast<int>(ai);
            child.r_credit = r_credit(*rinfo, nodes_[id].r_credit, child.state, parent_state);
            child.seq = next_seq_++;
            ++stats_.generated;
            const int goals = goal_count(p_, child.state);
            const PartitionKey key = partition_key(child.state, child.r_credit, p_);
            const Evaluated ev = evaluate(child.state, key, goals, child.r_credit);
            child.eval_primary = ev.eval[0];
            if (lists_.size() > 1) child.eval_secondary = ev.eval[1];
            if (cfg_.observer) cfg_.observer(NodeEvent{NodeEventKind::generate, no_node, &child, key});
            if (goals == 0) {
                auto plan = path_to(id);
                plan.push_back(child.action);
                return finish(Outcome::plan, std::move(plan));
            }
            if (index_.find(child.state) != index_.end()) {
                ++stats_.duplicates;
                continue;
            }
            offer(allocate(std::move(child)), ev);
            note_bytes();
        }
    }
}

}  // namespace

SearchResult solve(const GroundProblem &p, const SearchConfig &cfg) {
    if (cfg.trim && (cfg.trim_depth < 1 || cfg.trim_depth > 62))
        throw std::invalid_argument("trim depth must be in [1, 62]");
    Engine engine(p, cfg);
    return engine.run();
}

}  // namespace nplan
