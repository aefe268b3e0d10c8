#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nplan/state.hpp"

namespace nplan {

struct Atom {
    int index = 0;
    std::string name;
};

struct GroundAction {
    std::string name;
    std::vector<int> pre;
    std::vector<int> add;
    std::vector<int> del;
    std::int64_t cost = 1;

    bool applicable(const State &s) const { return s.contains_all(pre); }
};

enum class ParseErrorKind { syntax, duplicate_name, dangling_reference, add_del_overlap, io };

/// Thrown by the problem and plan parsers. `line` is 1-based, 0 when the
/// error is not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string &msg)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          kind_(kind),
          line_(line) {}
    ParseErrorKind kind() const { return kind_; }
    std::size_t line() const { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

class PreconditionViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Grounded STRIPS task <F, O, I, G>.
///
/// Index sets inside actions and the goal are sorted and duplicate free.
/// Immutable after construction; safe to share read-only across threads.
class GroundProblem {
public:
    GroundProblem() = default;

    /// Validates and indexes the task. Throws std::invalid_argument on
    /// duplicate names, out-of-range indices, or add/del overlap.
    GroundProblem(std::vector<Atom> atoms, std::vector<GroundAction> actions, State init,
                  std::vector<int> goal);

    std::size_t num_atoms() const { return atoms_.size(); }
    std::size_t num_actions() const { return actions_.size(); }

    const std::vector<Atom> &atoms() const { return atoms_; }
    const std::vector<GroundAction> &actions() const { return actions_; }
    const GroundAction &action(std::size_t i) const { return actions_[i]; }
    const State &init() const { return init_; }
    const std::vector<int> &goal() const { return goal_; }

    std::optional<int> find_atom(std::string_view name) const;
    std::optional<int> find_action(std::string_view name) const;

    bool is_goal(const State &s) const { return s.contains_all(goal_); }

    /// Same atoms, actions (in order), init and goal.
    bool structurally_equal(const GroundProblem &other) const;

private:
    std::vector<Atom> atoms_;
    std::vector<GroundAction> actions_;
    State init_;
    std::vector<int> goal_;
    std::unordered_map<std::string, int> atom_index_;
    std::unordered_map<std::string, int> action_index_;
};

GroundProblem parse_problem(std::string_view text);
GroundProblem load_problem(const std::string &path);
std::string serialize_problem(const GroundProblem &p);

/// (s \ del) ∪ add. Throws PreconditionViolation when pre ⊄ s.
State apply(const State &s, const GroundAction &a);

/// Same as apply() without the precondition check.
State apply_unchecked(const State &s, const GroundAction &a);

enum class PlanFailure { none, unknown_action, inapplicable_step, goal_unsatisfied };

struct PlanCheck {
    bool valid = false;
    std::int64_t cost = 0;
    PlanFailure failure = PlanFailure::none;
    std::size_t step = 0;  // 0-based offending step for unknown_action / inapplicable_step
    std::string message;
};

PlanCheck validate_plan(const GroundProblem &p, const std::vector<std::string> &plan);

/// Plan cost for a sequence of action indices, no validation.
std::int64_t plan_cost(const GroundProblem &p, const std::vector<int> &plan);

struct PlanFile {
    std::vector<std::string> actions;
    std::int64_t declared_cost = 0;
};

/// One action name per line, terminated by `; cost = <N>`.
std::string format_plan(const std::vector<std::string> &actions, std::int64_t cost);
PlanFile parse_plan(std::string_view text);
PlanFile load_plan(const std::string &path);

std::vector<std::string> action_names(const GroundProblem &p, const std::vector<int> &plan);

}  // namespace nplan
