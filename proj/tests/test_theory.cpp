#include <doctest.h>

#include <queue>
#include <random>
#include <unordered_set>

#include "nomlam/theory.hpp"

using namespace nomlam;

namespace {

Term T(const char* s) { return parse_term(s); }

// one-step β reducts by direct recursion over the term
std::vector<Term> beta_steps(const Term& t) {
    std::vector<Term> out;
    switch (t.kind()) {
        case TermKind::Var: break;
        case TermKind::Lam: {
            auto [a, body] = t.binder();
            for (const Term& b : beta_steps(body)) out.push_back(Term::lam(a, b));
            break;
        }
        case TermKind::App: {
            if (t.fun().kind() == TermKind::Lam) {
                auto [a, body] = t.fun().binder();
                out.push_back(subst(body, a, t.arg()));
            }
            for (const Term& f : beta_steps(t.fun())) out.push_back(Term::app(f, t.arg()));
            for (const Term& x : beta_steps(t.arg())) out.push_back(Term::app(t.fun(), x));
        }
    }
    return out;
}

// exhaustive closure when it stays under `cap` terms
std::optional<std::unordered_set<Term, TermHash>> beta_closure(const Term& s, std::size_t cap) {
    std::unordered_set<Term, TermHash> seen{s};
    std::queue<Term> q;
    q.push(s);
    while (!q.empty()) {
        Term t = q.front();
        q.pop();
        for (const Term& n : beta_steps(t)) {
            if (seen.insert(n).second) {
                if (seen.size() > cap || n.size() > 40) return std::nullopt;
                q.push(n);
            }
        }
    }
    return seen;
}

}  // namespace

TEST_CASE("successors") {
    Budget b;
    auto s = successors(Theory::beta_eta(), T("(\\a.a) b"), b);
    CHECK(std::find(s.terms.begin(), s.terms.end(), T("b")) != s.terms.end());
    CHECK(s.terms.size() > 1);
    auto only_eta = successors(Theory{false, true, false, {}}, T("b"), b);
    REQUIRE(only_eta.terms.size() == 1);
    CHECK(only_eta.terms[0] == T("\\c. b c"));
    auto none = successors(Theory::beta_only(), T("b"), b);
    CHECK(none.terms.empty());
    CHECK_FALSE(none.pruned);
}

TEST_CASE("reach examples") {
    Budget b;
    auto y = reach(Theory::beta_eta(), T("(\\a.a) b"), T("b"), b);
    CHECK(y.is_yes());
    CHECK(y.depth == 1);
    REQUIRE(y.path.size() == 2);
    CHECK(y.path.front() == T("(\\a.a) b"));
    CHECK(reach(Theory::beta_eta(), T("b"), T("\\c. b c"), b).depth == 1);
    CHECK(reach(Theory::beta_eta(), T("(\\a.a a)(\\a.a a)"), T("b"), b).is_unknown());
    CHECK(reach(Theory::beta_only(), T("b"), T("c"), b).is_no());
    CHECK(reach(Theory::beta_eta(), T("b"), T("b"), b).depth == 0);
    CHECK_THROWS_AS(reach(Theory::beta_eta(), T("b"), T("b"), Budget{0, 1, 1}), std::invalid_argument);
}

TEST_CASE("beta-only reach agrees with an exhaustive closure") {
    std::mt19937_64 rng(41);
    Theory th = Theory::beta_only();
    Budget b{12, 60, 20000};
    int decided = 0;
    for (int k = 0; k < 300; ++k) {
        Term s = random_term(rng, 4, 3);
        auto closure = beta_closure(s, 200);
        if (!closure) continue;
        std::vector<Term> targets(closure->begin(), closure->end());
        targets.push_back(random_term(rng, 3, 3));
        for (const Term& t : targets) {
            Decision3 d = reach(th, s, t, b);
            if (d.is_unknown()) continue;
            ++decided;
            CHECK_MESSAGE(d.is_yes() == (closure->count(t) > 0), print(s) << " ->* " << print(t));
        }
    }
    CHECK(decided > 300);
}

TEST_CASE("witness paths replay") {
    std::mt19937_64 rng(43);
    Engine eng(Theory::beta_eta(), Budget{});
    Budget b;
    for (int k = 0; k < 100; ++k) {
        Term s = random_term(rng, 3, 3);
        auto next = successors(eng.theory(), s, b).terms;
        if (next.empty()) continue;
        Term t = next[rng() % next.size()];
        Decision3 d = eng.reach(s, t);
        REQUIRE(d.is_yes());
        for (std::size_t i = 0; i + 1 < d.path.size(); ++i) {
            auto step = successors(eng.theory(), d.path[i], b).terms;
            CHECK(std::find(step.begin(), step.end(), d.path[i + 1]) != step.end());
        }
    }
}

TEST_CASE("reach is equivariant") {
    std::mt19937_64 rng(47);
    Theory th = Theory::beta_only();
    Budget b;
    std::vector<std::pair<Term, Term>> samples;
    for (int k = 0; k < 40; ++k) samples.emplace_back(random_term(rng, 3, 3), random_term(rng, 2, 3));
    std::vector<Perm> perms{swap(Atom{0}, Atom{1}), swap(Atom{1}, Atom{4}), compose(swap(Atom{0}, Atom{2}), swap(Atom{1}, Atom{2}))};
    Report r = check_equivariance<std::pair<Term, Term>, Verdict>(
        "reach", [&](const std::pair<Term, Term>& st) { return reach(th, st.first, st.second, b).verdict; }, samples,
        perms,
        [](const Perm& p, const std::pair<Term, Term>& st) {
            return std::make_pair(term_act(p, st.first), term_act(p, st.second));
        },
        [](const Perm&, Verdict v) { return v; }, [](const std::pair<Term, Term>& st) { return print(st.first); });
    CHECK(r.ok());
}

TEST_CASE("substitutivity of reduction") {
    std::mt19937_64 rng(53);
    Engine eng(Theory::beta_only(), Budget{});
    for (int k = 0; k < 200; ++k) {
        Term s = random_term(rng, 4, 3);
        auto next = beta_steps(s);
        if (next.empty()) continue;
        Term t = next.front();
        Atom a{static_cast<std::uint32_t>(rng() % 3)};
        Term u = random_term(rng, 2, 3);
        Decision3 d = eng.reach(subst(s, a, u), subst(t, a, u));
        CHECK_FALSE(d.is_no());
    }
}

TEST_CASE("equality mode") {
    Budget b;
    Theory eq = Theory::beta_eta();
    eq.equality_mode = true;
    CHECK(eq_check(eq, T("(\\a.a) b"), T("b"), b).is_yes());
    CHECK(eq_check(eq, T("b"), T("(\\a.a) b"), b).is_yes());
    CHECK(eq_check(eq, T("\\x.x"), T("\\x.x"), b).depth == 0);
    CHECK_THROWS_AS(eq_check(Theory::beta_eta(), T("b"), T("b"), b), std::invalid_argument);
    // no β-expansion in the search, so nothing is refuted while β is on
    Theory beq = Theory::beta_only();
    beq.equality_mode = true;
    CHECK(eq_check(beq, T("b"), T("c"), b).is_unknown());
    // lhs atoms are metavariables: x y -> y drops the head of any application
    Theory rules = parse_rule_file("@beta off\n@eta off\n@equality on\nx y -> y\n");
    CHECK(eq_check(rules, T("a b"), T("b"), b).is_yes());
    CHECK(eq_check(rules, T("b"), T("a b"), b).is_yes());
    Theory none = parse_rule_file("@beta off\n@eta off\n@equality on\n");
    CHECK(eq_check(none, T("a"), T("b"), b).is_no());
}

TEST_CASE("rule files") {
    Theory th = parse_rule_file("@eta off\n# K-like rule\nk x y -> x\n");
    CHECK_FALSE(th.eta_expansion);
    REQUIRE(th.extra_rules.size() == 1);
    Budget b;
    CHECK(reach(th, T("k a b"), T("a"), b).is_yes());
    CHECK(reach(th, T("\\z. k (z z) b"), T("\\z. z z"), b).is_yes());
    CHECK_THROWS_AS(parse_rule_file("a b\n"), ParseError);
}

TEST_CASE("monotone budgets") {
    std::mt19937_64 rng(59);
    Theory th = Theory::beta_only();
    for (int k = 0; k < 100; ++k) {
        Term s = random_term(rng, 4, 3), t = random_term(rng, 2, 3);
        Decision3 small = reach(th, s, t, Budget{3, 30, 500});
        Decision3 big = reach(th, s, t, Budget{8, 60, 20000});
        if (!small.is_unknown()) CHECK(big.verdict == small.verdict);
    }
}
