#include "nomlam/theory.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nomlam {

AtomSet Theory::rule_atoms() const {
    AtomSet s;
    for (const Rule& r : extra_rules) {
        auto l = r.lhs.free_atoms(), rr = r.rhs.free_atoms();
        s.insert(l.begin(), l.end());
        s.insert(rr.begin(), rr.end());
    }
    return s;
}

std::string Theory::describe() const {
    std::ostringstream os;
    os << "beta=" << (beta ? "on" : "off") << " eta=" << (eta_expansion ? "on" : "off")
       << " equality=" << (equality_mode ? "on" : "off") << " rules=" << extra_rules.size();
    if (!conforming()) os << " [non-conforming]";
    return os.str();
}

void Budget::validate() const {
    if (max_depth <= 0 || max_term_size <= 0 || max_frontier <= 0)
        throw std::invalid_argument("budget fields must be positive");
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "Yes";
        case Verdict::No: return "No";
        case Verdict::Unknown: return "Unknown";
    }
    return "?";
}

Decision3 Decision3::yes(int depth, std::vector<Term> path) {
    Decision3 d;
    d.verdict = Verdict::Yes;
    d.depth = depth;
    d.path = std::move(path);
    return d;
}

Decision3 Decision3::no() {
    Decision3 d;
    d.verdict = Verdict::No;
    return d;
}

Decision3 Decision3::unknown(bool pruned) {
    Decision3 d;
    d.pruned = pruned;
    return d;
}

Decision3 or3(const Decision3& x, const Decision3& y) {
    if (x.is_yes() && y.is_yes()) return x.depth <= y.depth ? x : y;
    if (x.is_yes()) return x;
    if (y.is_yes()) return y;
    if (x.is_no() && y.is_no()) return Decision3::no();
    return Decision3::unknown(x.pruned || y.pruned);
}

Decision3 and3(const Decision3& x, const Decision3& y) {
    if (x.is_no()) return x;
    if (y.is_no()) return y;
    if (x.is_yes() && y.is_yes()) return Decision3::yes(std::max(x.depth, y.depth));
    return Decision3::unknown(x.pruned || y.pruned);
}

Decision3 not3(const Decision3& x) {
    if (x.is_yes()) return Decision3::no();
    if (x.is_no()) return Decision3::yes(0);
    return x;
}

// ---------------------------------------------------------------- matching

namespace {

using Bindings = std::map<Atom, Term>;

bool match(const Term& pat, const Term& t, const AtomSet& locals, Bindings& env) {
    switch (pat.kind()) {
        case TermKind::Var: {
            Atom x = pat.atom();
            if (locals.count(x)) return t.kind() == TermKind::Var && t.atom() == x;
            // metavariable: its instance may not mention a locally bound atom
            for (Atom l : locals)
                if (t.has_free(l)) return false;
            auto it = env.find(x);
            if (it != env.end()) return it->second == t;
            env.emplace(x, t);
            return true;
        }
        case TermKind::App:
            return t.kind() == TermKind::App && match(pat.fun(), t.fun(), locals, env) &&
                   match(pat.arg(), t.arg(), locals, env);
        case TermKind::Lam: {
            if (t.kind() != TermKind::Lam) return false;
            AtomSet avoid = locals;
            for (Atom a : pat.free_atoms_sorted()) avoid.insert(a);
            for (Atom a : t.free_atoms_sorted()) avoid.insert(a);
            for (auto& [k, v] : env) {
                avoid.insert(k);
                for (Atom a : v.free_atoms_sorted()) avoid.insert(a);
            }
            auto [c, pbody] = pat.binder_avoiding(avoid);
            auto [c2, tbody] = t.binder_avoiding(avoid);
            (void)c2;  // same least atom, both avoid the same set
            AtomSet inner = locals;
            inner.insert(c);
            return match(pbody, tbody, inner, env);
        }
    }
    return false;
}

Term instantiate_rule(const Term& rhs, const Bindings& env) {
    std::vector<std::pair<Atom, Term>> m(env.begin(), env.end());
    return subst_many(rhs, m);
}

enum class Direction { Forward, Backward };

struct StepGen {
    const Theory& th;
    AtomSet rule_atoms;
    Direction dir;

    void root(const Term& t, std::vector<Term>& out) const {
        if (dir == Direction::Forward) {
            if (th.beta && t.kind() == TermKind::App && t.fun().kind() == TermKind::Lam)
                out.push_back(instantiate(t.fun(), t.arg()));
            if (th.eta_expansion) {
                Atom c = fresh_atom(t.free_atoms());
                out.push_back(Term::lam(c, Term::app(t, Term::var(c))));
            }
            for (const Rule& r : th.extra_rules) {
                Bindings env;
                if (match(r.lhs, t, {}, env)) out.push_back(instantiate_rule(r.rhs, env));
            }
        } else {
            // η-contraction: λc.(s c) with c#s gives s
            if (th.eta_expansion && t.kind() == TermKind::Lam) {
                auto [c, body] = t.binder();
                if (body.kind() == TermKind::App && body.arg().kind() == TermKind::Var &&
                    body.arg().atom() == c && !body.fun().has_free(c))
                    out.push_back(body.fun());
            }
            for (const Rule& r : th.extra_rules) {
                auto lhs_atoms = r.lhs.free_atoms();
                auto rhs_atoms = r.rhs.free_atoms();
                // reversal is only finite when the rhs determines every metavariable
                if (!std::includes(rhs_atoms.begin(), rhs_atoms.end(), lhs_atoms.begin(),
                                   lhs_atoms.end()))
                    continue;
                Bindings env;
                if (match(r.rhs, t, {}, env)) out.push_back(instantiate_rule(r.lhs, env));
            }
        }
    }

    void all(const Term& t, std::vector<Term>& out) const {
        root(t, out);
        switch (t.kind()) {
            case TermKind::Var: break;
            case TermKind::App: {
                std::vector<Term> sub;
                all(t.fun(), sub);
                for (Term& f : sub) out.push_back(Term::app(f, t.arg()));
                sub.clear();
                all(t.arg(), sub);
                for (Term& x : sub) out.push_back(Term::app(t.fun(), x));
                break;
            }
            case TermKind::Lam: {
                auto [c, body] = t.binder_avoiding(rule_atoms);
                std::vector<Term> sub;
                all(body, sub);
                for (Term& b : sub) out.push_back(Term::lam(c, b, t.name_hint()));
                break;
            }
        }
    }
};

// β, η-expansion and congruence straight on the nameless form, no renaming
void forward_nameless(const Theory& th, const Term& t, std::vector<Term>& out) {
    if (detail::is_bound(t)) {
        if (th.eta_expansion) out.push_back(detail::raw_eta(t));
        return;
    }
    switch (t.kind()) {
        case TermKind::Var: break;
        case TermKind::App: {
            Term f = t.fun(), x = t.arg();
            if (th.beta && f.kind() == TermKind::Lam) out.push_back(detail::raw_beta(f, x));
            std::size_t mark = out.size();
            forward_nameless(th, f, out);
            for (std::size_t i = mark; i < out.size(); ++i) out[i] = Term::app(out[i], x);
            mark = out.size();
            forward_nameless(th, x, out);
            for (std::size_t i = mark; i < out.size(); ++i) out[i] = Term::app(f, out[i]);
            break;
        }
        case TermKind::Lam: {
            std::size_t mark = out.size();
            forward_nameless(th, detail::raw_body(t), out);
            for (std::size_t i = mark; i < out.size(); ++i)
                out[i] = detail::raw_lam(t.name_hint(), out[i]);
            break;
        }
    }
    if (th.eta_expansion) out.push_back(detail::raw_eta(t));
}

Successors steps(const Theory& th, const Term& s, const Budget& budget, Direction dir) {
    std::vector<Term> raw;
    if (dir == Direction::Forward && th.extra_rules.empty()) {
        forward_nameless(th, s, raw);
    } else {
        StepGen gen{th, th.rule_atoms(), dir};
        gen.all(s, raw);
    }
    Successors out;
    out.terms.reserve(raw.size());
    for (Term& t : raw) {
        if (t.size() > static_cast<std::size_t>(budget.max_term_size)) {
            out.pruned = true;
            continue;
        }
        out.terms.push_back(std::move(t));
    }
    return out;
}

Decision3 bfs(const Theory& th, const Term& s, const Term& t, const Budget& budget,
              bool symmetric) {
    budget.validate();
    if (s == t) return Decision3::yes(0, {s});
    std::vector<Term> states{s};
    std::vector<int> parent{-1};
    std::unordered_map<Term, int, TermHash> index;
    index.emplace(s, 0);
    std::vector<int> layer{0};
    bool pruned = false;

    auto witness = [&](int last, const Term& end) {
        std::vector<Term> path{end};
        for (int i = last; i >= 0; i = parent[i]) path.push_back(states[i]);
        std::reverse(path.begin(), path.end());
        return path;
    };
    auto expand = [&](const Term& x) {
        Successors out = steps(th, x, budget, Direction::Forward);
        if (symmetric) {
            Successors back = steps(th, x, budget, Direction::Backward);
            out.terms.insert(out.terms.end(), back.terms.begin(), back.terms.end());
            out.pruned = out.pruned || back.pruned;
        }
        return out;
    };

    for (int d = 1; d <= budget.max_depth; ++d) {
        std::vector<int> next;
        for (int i : layer) {
            Successors succ = expand(states[i]);
            pruned = pruned || succ.pruned;
            for (Term& x : succ.terms) {
                if (index.count(x)) continue;
                if (x == t) {
                    auto path = witness(i, x);
                    return Decision3::yes(d, std::move(path));
                }
                if (static_cast<int>(states.size()) >= budget.max_frontier) {
                    pruned = true;
                    continue;
                }
                index.emplace(x, static_cast<int>(states.size()));
                states.push_back(x);
                parent.push_back(i);
                next.push_back(static_cast<int>(states.size()) - 1);
            }
        }
        layer = std::move(next);
        if (layer.empty()) break;
    }
    // states left unexpanded at the depth bound count as pruning unless they
    // have no new successors
    for (int i : layer) {
        if (pruned) break;
        Successors succ = expand(states[i]);
        if (succ.pruned) pruned = true;
        for (Term& x : succ.terms)
            if (!index.count(x)) pruned = true;
    }
    // β-expansion is never generated, so symmetric closure is incomplete under β
    if (symmetric && th.beta) pruned = true;
    return pruned ? Decision3::unknown(true) : Decision3::no();
}

}  // namespace

Successors successors(const Theory& th, const Term& s, const Budget& budget) {
    return steps(th, s, budget, Direction::Forward);
}

Successors predecessors(const Theory& th, const Term& s, const Budget& budget) {
    return steps(th, s, budget, Direction::Backward);
}

Decision3 reach(const Theory& th, const Term& s, const Term& t, const Budget& budget) {
    return bfs(th, s, t, budget, false);
}

Decision3 eq_check(const Theory& th, const Term& s, const Term& t, const Budget& budget) {
    if (!th.equality_mode) throw std::invalid_argument("eq_check requires equality mode");
    Decision3 fwd = bfs(th, s, t, budget, true);
    if (fwd.is_yes()) return fwd;
    Decision3 bwd = bfs(th, t, s, budget, true);
    if (bwd.is_yes()) {
        std::reverse(bwd.path.begin(), bwd.path.end());
        return bwd;
    }
    // β-expansion is never enumerated, so an exhausted closure proves nothing while β is on
    if (th.beta) return Decision3::unknown(true);
    return fwd.is_no() && bwd.is_no() ? Decision3::no() : Decision3::unknown(fwd.pruned || bwd.pruned);
}

// ---------------------------------------------------------------- engine

struct PairHash {
    std::size_t operator()(const std::pair<Term, Term>& p) const {
        return p.first.hash() * 1000003u ^ p.second.hash();
    }
};

struct Engine::Cache {
    std::mutex mu;
    std::unordered_map<std::pair<Term, Term>, Decision3, PairHash> table;
    std::size_t searches = 0;
};

Engine::Engine(Theory th, Budget budget)
    : theory_(std::move(th)), budget_(budget), cache_(std::make_shared<Cache>()) {
    budget_.validate();
}

Decision3 Engine::reach(const Term& s, const Term& t) const {
    {
        std::lock_guard lock(cache_->mu);
        auto it = cache_->table.find({s, t});
        if (it != cache_->table.end()) return it->second;
    }
    Decision3 d = nomlam::reach(theory_, s, t, budget_);
    std::lock_guard lock(cache_->mu);
    ++cache_->searches;
    cache_->table.emplace(std::make_pair(s, t), d);
    return d;
}

std::size_t Engine::searches() const {
    std::lock_guard lock(cache_->mu);
    return cache_->searches;
}

// ---------------------------------------------------------------- rule files

Theory parse_rule_file(std::string_view text) {
    Theory th;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::string first;
        if (!(is >> first)) {
            if (end == text.size()) break;
            continue;
        }
        if (first[0] == '@') {
            std::string value;
            is >> value;
            if (value != "on" && value != "off")
                throw ParseError("flag value must be on or off (line " + std::to_string(line_no) + ")",
                                 line_no);
            bool on = value == "on";
            if (first == "@beta")
                th.beta = on;
            else if (first == "@eta")
                th.eta_expansion = on;
            else if (first == "@equality")
                th.equality_mode = on;
            else
                throw ParseError("unknown flag " + first + " (line " + std::to_string(line_no) + ")",
                                 line_no);
        } else {
            auto arrow = line.find("->");
            if (arrow == std::string::npos)
                throw ParseError("expected 'LHS -> RHS' (line " + std::to_string(line_no) + ")",
                                 line_no);
            th.extra_rules.push_back(
                {parse_term(line.substr(0, arrow)), parse_term(line.substr(arrow + 2))});
        }
        if (end == text.size()) break;
    }
    return th;
}

}  // namespace nomlam
