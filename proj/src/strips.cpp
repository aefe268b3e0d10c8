#include "nplan/strips.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace nplan {

namespace {

void normalize(std::vector<int> &v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool intersects(const std::vector<int> &a, const std::vector<int> &b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j)
            ++i;
        else
            ++j;
    }
    return false;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(ParseErrorKind::io, 0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        out.push_back(text.substr(pos, eol - pos));
        pos = eol + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool is_keyword(std::string_view t) {
    return t == "ATOMS" || t == "INIT" || t == "GOAL" || t == "ACTION" || t == "PRE" || t == "ADD" ||
           t == "DEL" || t == "END" || t == "COST";
}

bool parse_int(std::string_view t, std::int64_t &out) {
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && p == t.data() + t.size();
}

class ProblemParser {
public:
    explicit ProblemParser(std::string_view text) : text_(text) {}

    GroundProblem run() {
        enum class Section { none, atoms, init, goal, actions };
        Section section = Section::none;
        bool in_action = false;
        bool seen_pre = false, seen_add = false, seen_del = false;
        GroundAction current;
        std::size_t action_line = 0;
        std::unordered_set<std::string> action_names;

        const auto lines = split_lines(text_);
        for (std::size_t li = 0; li < lines.size(); ++li) {
            const std::size_t line_no = li + 1;
            std::string_view line = lines[li];
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            auto tokens = split_tokens(line);
            if (tokens.empty()) continue;
            const std::string_view head = tokens.front();

            if (in_action) {
                std::vector<int> *target = nullptr;
                bool *seen = nullptr;
                if (head == "PRE") {
                    target = &current.pre;
                    seen = &seen_pre;
                } else if (head == "ADD") {
                    target = &current.add;
                    seen = &seen_add;
                } else if (head == "DEL") {
                    target = &current.del;
                    seen = &seen_del;
                } else if (head == "END") {
                    if (tokens.size() != 1) syntax(line_no, "unexpected tokens after END");
                    normalize(current.pre);
                    normalize(current.add);
                    normalize(current.del);
                    if (intersects(current.add, current.del))
                        throw ParseError(ParseErrorKind::add_del_overlap, action_line,
                                         "action '" + current.name + "' adds and deletes the same atom");
                    actions_.push_back(std::move(current));
                    current = GroundAction{};
                    in_action = false;
                } else {
                    syntax(line_no, "expected PRE, ADD, DEL or END, got '" + std::string(head) + "'");
                }
                if (target) {
                    if (*seen) syntax(line_no, std::string(head) + " given twice");
                    *seen = true;
                    for (std::size_t i = 1; i < tokens.size(); ++i) target->push_back(resolve(tokens[i], line_no));
                }
                continue;
            }

            if (head == "ATOMS") {
                if (section != Section::none) syntax(line_no, "ATOMS must be the first section");
                section = Section::atoms;
                declare_atoms(tokens, 1, line_no);
            } else if (head == "INIT") {
                if (section != Section::atoms) syntax(line_no, "INIT must follow ATOMS");
                section = Section::init;
                for (std::size_t i = 1; i < tokens.size(); ++i) init_.push_back(resolve(tokens[i], line_no));
            } else if (head == "GOAL") {
                if (section != Section::init) syntax(line_no, "GOAL must follow INIT");
                section = Section::goal;
                for (std::size_t i = 1; i < tokens.size(); ++i) goal_.push_back(resolve(tokens[i], line_no));
            } else if (head == "ACTION") {
                if (section != Section::goal && section != Section::actions)
                    syntax(line_no, "ACTION before GOAL section");
                section = Section::actions;
                if (tokens.size() != 2 && tokens.size() != 4) syntax(line_no, "expected ACTION <name> [COST <k>]");
                check_name(tokens[1], line_no);
                current = GroundAction{};
                current.name = std::string(tokens[1]);
                if (!action_names.insert(current.name).second)
                    throw ParseError(ParseErrorKind::duplicate_name, line_no,
                                     "duplicate action name '" + current.name + "'");
                if (tokens.size() == 4) {
                    if (tokens[2] != "COST") syntax(line_no, "expected COST after action name");
                    std::int64_t c = 0;
                    if (!parse_int(tokens[3], c) || c < 0) syntax(line_no, "COST must be a non-negative integer");
                    current.cost = c;
                }
                in_action = true;
                seen_pre = seen_add = seen_del = false;
                action_line = line_no;
            } else if (is_keyword(head)) {
                syntax(line_no, "unexpected keyword '" + std::string(head) + "'");
            } else {
                switch (section) {
                    case Section::atoms:
                        declare_atoms(tokens, 0, line_no);
                        break;
                    case Section::init:
                        for (auto t : tokens) init_.push_back(resolve(t, line_no));
                        break;
                    case Section::goal:
                        for (auto t : tokens) goal_.push_back(resolve(t, line_no));
                        break;
                    default:
                        syntax(line_no, "unexpected '" + std::string(head) + "'");
                }
            }
        }
        if (in_action) syntax(action_line, "action '" + current.name + "' is missing END");
        if (section == Section::none || section == Section::atoms || section == Section::init)
            syntax(0, "missing ATOMS, INIT or GOAL section");

        State init(atoms_.size());
        for (int a : init_) init.set(static_cast<std::size_t>(a));
        return GroundProblem(std::move(atoms_), std::move(actions_), std::move(init), std::move(goal_));
    }

private:
    [[noreturn]] static void syntax(std::size_t line, const std::string &msg) {
        throw ParseError(ParseErrorKind::syntax, line, msg);
    }

    static void check_name(std::string_view t, std::size_t line) {
        if (is_keyword(t)) syntax(line, "keyword '" + std::string(t) + "' used as a name");
    }

    void declare_atoms(const std::vector<std::string_view> &tokens, std::size_t from, std::size_t line) {
        for (std::size_t i = from; i < tokens.size(); ++i) {
            check_name(tokens[i], line);
            std::string name(tokens[i]);
            const int idx = static_cast<int>(atoms_.size());
            if (!index_.emplace(name, idx).second)
                throw ParseError(ParseErrorKind::duplicate_name, line, "duplicate atom name '" + name + "'");
            atoms_.push_back(Atom{idx, std::move(name)});
        }
    }

    int resolve(std::string_view t, std::size_t line) const {
        auto it = index_.find(std::string(t));
        if (it == index_.end())
            throw ParseError(ParseErrorKind::dangling_reference, line, "undeclared atom '" + std::string(t) + "'");
        return it->second;
    }

    std::string_view text_;
    std::vector<Atom> atoms_;
    std::unordered_map<std::string, int> index_;
    std::vector<GroundAction> actions_;
    std::vector<int> init_;
    std::vector<int> goal_;
};

}  // namespace

GroundProblem::GroundProblem(std::vector<Atom> atoms, std::vector<GroundAction> actions, State init,
                             std::vector<int> goal)
    : atoms_(std::move(atoms)), actions_(std::move(actions)), init_(std::move(init)), goal_(std::move(goal)) {
    const int n = static_cast<int>(atoms_.size());
    if (init_.size() != atoms_.size()) throw std::invalid_argument("init state length differs from atom count");
    auto check = [&](const std::vector<int> &v, const std::string &what) {
        for (int a : v)
            if (a < 0 || a >= n) throw std::invalid_argument(what + " references atom index " + std::to_string(a));
    };
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        atoms_[i].index = static_cast<int>(i);
        if (!atom_index_.emplace(atoms_[i].name, static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate atom name '" + atoms_[i].name + "'");
    }
    normalize(goal_);
    check(goal_, "goal");
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        GroundAction &a = actions_[i];
        normalize(a.pre);
        normalize(a.add);
        normalize(a.del);
        check(a.pre, "action '" + a.name + "'");
        check(a.add, "action '" + a.name + "'");
        check(a.del, "action '" + a.name + "'");
        if (intersects(a.add, a.del))
            throw std::invalid_argument("action '" + a.name + "' adds and deletes the same atom");
        if (a.cost < 0) throw std::invalid_argument("action '" + a.name + "' has negative cost");
        if (!action_index_.emplace(a.name, static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate action name '" + a.name + "'");
    }
}

std::optional<int> GroundProblem::find_atom(std::string_view name) const {
    auto it = atom_index_.find(std::string(name));
    if (it == atom_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> GroundProblem::find_action(std::string_view name) const {
    auto it = action_index_.find(std::string(name));
    if (it == action_index_.end()) return std::nullopt;
    return it->second;
}

bool GroundProblem::structurally_equal(const GroundProblem &o) const {
    if (atoms_.size() != o.atoms_.size() || actions_.size() != o.actions_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i].name != o.atoms_[i].name) return false;
    for (std::size_t i = 0; i < actions_.size(); ++i) {
        const auto &a = actions_[i];
        const auto &b = o.actions_[i];
        if (a.name != b.name || a.pre != b.pre || a.add != b.add || a.del != b.del || a.cost != b.cost) return false;
    }
    return init_ == o.init_ && goal_ == o.goal_;
}

GroundProblem parse_problem(std::string_view text) { return ProblemParser(text).run(); }

GroundProblem load_problem(const std::string &path) { return parse_problem(read_file(path)); }

std::string serialize_problem(const GroundProblem &p) {
    std::ostringstream out;
    auto names = [&](const std::vector<int> &v) {
        for (int a : v) out << ' ' << p.atoms()[static_cast<std::size_t>(a)].name;
    };
    out << "ATOMS\n";
    constexpr std::size_t per_line = 8;
    for (std::size_t i = 0; i < p.num_atoms(); ++i) {
        out << p.atoms()[i].name;
        out << ((i + 1) % per_line == 0 || i + 1 == p.num_atoms() ? '\n' : ' ');
    }
    out << "INIT\n";
    const auto init = p.init().true_atoms();
    for (std::size_t i = 0; i < init.size(); ++i)
        out << p.atoms()[static_cast<std::size_t>(init[i])].name
            << ((i + 1) % per_line == 0 || i + 1 == init.size() ? '\n' : ' ');
    out << "GOAL\n";
    for (std::size_t i = 0; i < p.goal().size(); ++i)
        out << p.atoms()[static_cast<std::size_t>(p.goal()[i])].name
            << ((i + 1) % per_line == 0 || i + 1 == p.goal().size() ? '\n' : ' ');
    for (const auto &a : p.actions()) {
        out << "ACTION " << a.name;
        if (a.cost != 1) out << " COST " << a.cost;
        out << "\nPRE";
        names(a.pre);
        out << "\nADD";
        names(a.add);
        out << "\nDEL";
        names(a.del);
        out << "\nEND\n";
    }
    return out.str();
}

State apply_unchecked(const State &s, const GroundAction &a) {
    State next = s;
    for (int d : a.del) next.reset(static_cast<std::size_t>(d));
    for (int d : a.add) next.set(static_cast<std::size_t>(d));
    return next;
}

State apply(const State &s, const GroundAction &a) {
    if (!a.applicable(s)) throw PreconditionViolation("action '" + a.name + "' is not applicable");
    return apply_unchecked(s, a);
}

PlanCheck validate_plan(const GroundProblem &p, const std::vector<std::string> &plan) {
    PlanCheck r;
    State s = p.init();
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const auto idx = p.find_action(plan[i]);
        if (!idx) {
            r.failure = PlanFailure::unknown_action;
            r.step = i;
            r.message = "unknown action '" + plan[i] + "' at step " + std::to_string(i);
            return r;
        }
        const GroundAction &a = p.action(static_cast<std::size_t>(*idx));
        if (!a.applicable(s)) {
            r.failure = PlanFailure::inapplicable_step;
            r.step = i;
            r.message = "action '" + plan[i] + "' not applicable at step " + std::to_string(i);
            return r;
        }
        s = apply_unchecked(s, a);
        r.cost += a.cost;
    }
    if (!p.is_goal(s)) {
        r.failure = PlanFailure::goal_unsatisfied;
        r.step = plan.size();
        r.message = "goal not satisfied after " + std::to_string(plan.size()) + " steps";
        return r;
    }
    r.valid = true;
    return r;
}

std::int64_t plan_cost(const GroundProblem &p, const std::vector<int> &plan) {
    std::int64_t c = 0;
    for (int a : plan) c += p.action(static_cast<std::size_t>(a)).cost;
    return c;
}

std::string format_plan(const std::vector<std::string> &actions, std::int64_t cost) {
    std::string out;
    for (const auto &a : actions) {
        out += a;
        out += '\n';
    }
    out += "; cost = " + std::to_string(cost) + "\n";
    return out;
}

PlanFile parse_plan(std::string_view text) {
    PlanFile pf;
    const auto lines = split_lines(text);
    std::size_t line_no = 0;
    for (std::string_view raw : lines) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == ';') {
            constexpr std::string_view prefix = "cost";
            std::string_view rest = trim(line.substr(1));
            if (rest.substr(0, prefix.size()) != prefix)
                throw ParseError(ParseErrorKind::syntax, line_no, "malformed plan terminator");
            rest = trim(rest.substr(prefix.size()));
            if (rest.empty() || rest.front() != '=')
                throw ParseError(ParseErrorKind::syntax, line_no, "malformed plan terminator");
            rest = trim(rest.substr(1));
            if (!parse_int(rest, pf.declared_cost))
                throw ParseError(ParseErrorKind::syntax, line_no, "plan cost is not an integer");
            return pf;
        }
        if (split_tokens(line).size() != 1)
            throw ParseError(ParseErrorKind::syntax, line_no, "expected one action name per line");
        pf.actions.emplace_back(line);
    }
    throw ParseError(ParseErrorKind::syntax, line_no, "plan is missing the '; cost = N' terminator");
}

PlanFile load_plan(const std::string &path) { return parse_plan(read_file(path)); }

std::vector<std::string> action_names(const GroundProblem &p, const std::vector<int> &plan) {
    std::vector<std::string> out;
    out.reserve(plan.size());
    for (int a : plan) out.push_back(p.action(static_cast<std::size_t>(a)).name);
    return out;
}

}  // namespace nplan
