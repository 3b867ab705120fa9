#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nomlam/terms.hpp"

namespace nomlam {

// lhs -> rhs; the free atoms of lhs are metavariables
struct Rule {
    Term lhs;
    Term rhs;
};

struct Theory {
    bool beta = true;
    bool eta_expansion = true;
    bool equality_mode = false;
    std::vector<Rule> extra_rules;

    static Theory beta_eta() { return {}; }
    static Theory beta_only() {
        Theory t;
        t.eta_expansion = false;
        return t;
    }

    // β and η-expansion both on
    bool conforming() const { return beta && eta_expansion; }
    AtomSet rule_atoms() const;
    std::string describe() const;
};

struct Budget {
    int max_depth = 6;
    int max_term_size = 60;
    int max_frontier = 20000;

    // throws std::invalid_argument unless every field is positive
    void validate() const;
    friend bool operator==(const Budget&, const Budget&) = default;
};

enum class Verdict { Yes, No, Unknown };

const char* to_string(Verdict v);

struct Decision3 {
    Verdict verdict = Verdict::Unknown;
    int depth = -1;           // Yes: witness length
    std::vector<Term> path;   // Yes: s = path[0] -> ... -> path.back() = t
    bool pruned = false;      // Unknown: some successor was dropped

    static Decision3 yes(int depth, std::vector<Term> path = {});
    static Decision3 no();
    static Decision3 unknown(bool pruned = true);

    bool is_yes() const { return verdict == Verdict::Yes; }
    bool is_no() const { return verdict == Verdict::No; }
    bool is_unknown() const { return verdict == Verdict::Unknown; }
};

// Kleene connectives. Depth of a combined Yes is the max of the Yes depths used.
Decision3 or3(const Decision3& x, const Decision3& y);
Decision3 and3(const Decision3& x, const Decision3& y);
Decision3 not3(const Decision3& x);

struct Successors {
    std::vector<Term> terms;
    bool pruned = false;
};

Successors successors(const Theory& th, const Term& s, const Budget& budget);
// one-step predecessors used by eq_check: η-contraction and reversed rules
Successors predecessors(const Theory& th, const Term& s, const Budget& budget);

Decision3 reach(const Theory& th, const Term& s, const Term& t, const Budget& budget);
// throws std::invalid_argument unless th.equality_mode
Decision3 eq_check(const Theory& th, const Term& s, const Term& t, const Budget& budget);

// A theory with a budget and a transparent memo table for reach.
class Engine {
public:
    Engine(Theory th, Budget budget);

    const Theory& theory() const { return theory_; }
    const Budget& budget() const { return budget_; }
    Decision3 reach(const Term& s, const Term& t) const;
    // number of uncached reach searches run so far
    std::size_t searches() const;

private:
    struct Cache;
    Theory theory_;
    Budget budget_;
    std::shared_ptr<Cache> cache_;
};

// "LHS -> RHS" lines, '#' comments, "@beta on|off", "@eta on|off",
// "@equality on|off". Throws ParseError with the line number as position.
Theory parse_rule_file(std::string_view text);

}  // namespace nomlam
