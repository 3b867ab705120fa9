#include <doctest.h>

#include <memory>
#include <random>

#include "nomlam/terms.hpp"

using namespace nomlam;

namespace {

// Plain named terms with textbook substitution: rename a binder whenever it
// would capture, using a name fresh for everything in sight.
struct Named {
    enum Kind { Var, Lam, App } kind;
    std::uint32_t name = 0;
    std::shared_ptr<Named> l, r;
};
using NP = std::shared_ptr<Named>;

NP nvar(std::uint32_t x) { return std::make_shared<Named>(Named{Named::Var, x, nullptr, nullptr}); }
NP nlam(std::uint32_t x, NP b) { return std::make_shared<Named>(Named{Named::Lam, x, std::move(b), nullptr}); }
NP napp(NP f, NP a) { return std::make_shared<Named>(Named{Named::App, 0, std::move(f), std::move(a)}); }

void free_vars(const NP& t, std::set<std::uint32_t>& bound, std::set<std::uint32_t>& out) {
    switch (t->kind) {
        case Named::Var:
            if (!bound.count(t->name)) out.insert(t->name);
            break;
        case Named::Lam: {
            bool had = bound.count(t->name);
            bound.insert(t->name);
            free_vars(t->l, bound, out);
            if (!had) bound.erase(t->name);
            break;
        }
        case Named::App:
            free_vars(t->l, bound, out);
            free_vars(t->r, bound, out);
    }
}

std::set<std::uint32_t> fv(const NP& t) {
    std::set<std::uint32_t> b, out;
    free_vars(t, b, out);
    return out;
}

void all_names(const NP& t, std::set<std::uint32_t>& out) {
    out.insert(t->name);
    if (t->l) all_names(t->l, out);
    if (t->r) all_names(t->r, out);
}

NP nsubst(const NP& t, std::uint32_t a, const NP& u) {
    switch (t->kind) {
        case Named::Var: return t->name == a ? u : t;
        case Named::App: return napp(nsubst(t->l, a, u), nsubst(t->r, a, u));
        case Named::Lam: {
            if (t->name == a) return t;
            auto fu = fv(u);
            if (!fu.count(t->name)) return nlam(t->name, nsubst(t->l, a, u));
            std::set<std::uint32_t> used = fu;
            all_names(t, used);
            used.insert(a);
            std::uint32_t z = 0;
            while (used.count(z)) ++z;
            return nlam(z, nsubst(nsubst(t->l, t->name, nvar(z)), a, u));
        }
    }
    return t;
}

// α-equivalence by parallel binder environments
bool nalpha(const NP& s, const NP& t, std::vector<std::pair<std::uint32_t, std::uint32_t>>& env) {
    if (s->kind != t->kind) return false;
    switch (s->kind) {
        case Named::Var:
            for (auto it = env.rbegin(); it != env.rend(); ++it) {
                if (it->first == s->name || it->second == t->name)
                    return it->first == s->name && it->second == t->name;
            }
            return s->name == t->name;
        case Named::App: return nalpha(s->l, t->l, env) && nalpha(s->r, t->r, env);
        case Named::Lam: {
            env.emplace_back(s->name, t->name);
            bool ok = nalpha(s->l, t->l, env);
            env.pop_back();
            return ok;
        }
    }
    return false;
}

bool nalpha(const NP& s, const NP& t) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> env;
    return nalpha(s, t, env);
}

NP npermute(const NP& t, const Perm& p) {
    switch (t->kind) {
        case Named::Var: return nvar(p(Atom{t->name}).id);
        case Named::Lam: return nlam(p(Atom{t->name}).id, npermute(t->l, p));
        case Named::App: return napp(npermute(t->l, p), npermute(t->r, p));
    }
    return t;
}

NP random_named(std::mt19937_64& rng, int depth) {
    std::uint32_t x = static_cast<std::uint32_t>(rng() % 5);
    if (depth == 0 || rng() % 4 == 0) return nvar(x);
    if (rng() % 2) return nlam(x, random_named(rng, depth - 1));
    return napp(random_named(rng, depth - 1), random_named(rng, depth - 1));
}

Term to_term(const NP& t) {
    switch (t->kind) {
        case Named::Var: return Term::var(Atom{t->name});
        case Named::Lam: return Term::lam(Atom{t->name}, to_term(t->l));
        case Named::App: return Term::app(to_term(t->l), to_term(t->r));
    }
    return Term::var(Atom{0});
}

NP to_named(const Term& t) {
    switch (t.kind()) {
        case TermKind::Var: return nvar(t.atom().id);
        case TermKind::Lam: {
            auto [a, body] = t.binder();
            return nlam(a.id, to_named(body));
        }
        case TermKind::App: return napp(to_named(t.fun()), to_named(t.arg()));
    }
    return nvar(0);
}

}  // namespace

TEST_CASE("parse and print") {
    CHECK(print(parse_term("\\x.x")) == "\\x. x");
    CHECK(print(parse_term("(a b) c")) == "a b c");
    CHECK(print(parse_term("a (b c)")) == "a (b c)");
    CHECK(print(parse_term("(\\x.x) y")) == "(\\x. x) y");
    CHECK(print(parse_term("\\x.\\y.x y")) == "\\x. \\y. x y");
    CHECK(print(parse_term("\\x.x"), true) == "\\a. a");
    CHECK_THROWS_AS(parse_term("(\\x"), ParseError);
    CHECK_THROWS_AS(parse_term("a )"), ParseError);
    try {
        parse_term("a b )");
        FAIL("no throw");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
}

TEST_CASE("alpha-equivalence is structural") {
    CHECK(parse_term("\\x.x") == parse_term("\\y.y"));
    CHECK(parse_term("\\x.\\y.x") != parse_term("\\x.\\y.y"));
    CHECK(parse_term("\\x.y") != parse_term("\\x.z"));
    CHECK(parse_term("\\x.y").hash() == parse_term("\\z.y").hash());
}

TEST_CASE("round trip through the printer") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 300; ++k) {
        Term t = random_term(rng, 5, 5);
        CHECK(parse_term(print(t)) == t);
        CHECK(parse_term(print(t, true)) == t);
    }
}

TEST_CASE("substitution agrees with textbook renaming") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 1000; ++k) {
        NP s = random_named(rng, 5), u = random_named(rng, 3);
        std::uint32_t a = static_cast<std::uint32_t>(rng() % 5);
        Term got = subst(to_term(s), Atom{a}, to_term(u));
        NP want = nsubst(s, a, u);
        CHECK_MESSAGE(nalpha(to_named(got), want), print(to_term(s)) << " [" << atom_name(Atom{a}) << ":=" << print(to_term(u)) << "]");
        CHECK(got == to_term(want));
    }
}

TEST_CASE("free atoms agree with the naive walk") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 500; ++k) {
        NP s = random_named(rng, 5);
        AtomSet want;
        for (auto x : fv(s)) want.insert(Atom{x});
        CHECK(to_term(s).free_atoms() == want);
    }
}

TEST_CASE("permutation action renames every atom, binders included") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 500; ++k) {
        NP s = random_named(rng, 5);
        Atom x{static_cast<std::uint32_t>(rng() % 6)}, y{static_cast<std::uint32_t>(rng() % 6)};
        Perm p = compose(swap(x, y), swap(Atom{0}, Atom{static_cast<std::uint32_t>(rng() % 6)}));
        CHECK(term_act(p, to_term(s)) == to_term(npermute(s, p)));
    }
}

TEST_CASE("capture is avoided") {
    Term t = subst(parse_term("\\x.a x"), Atom{0}, parse_term("x"));
    CHECK(t == parse_term("\\y.x y"));
    CHECK(subst(parse_term("\\a.a"), Atom{0}, parse_term("b")) == parse_term("\\a.a"));
}

TEST_CASE("instantiate is the beta contractum") {
    Term lam = parse_term("\\x.x y x");
    CHECK(instantiate(lam, parse_term("z")) == parse_term("z y z"));
}

TEST_CASE("subterms include every occurrence") {
    auto subs = subterms(parse_term("(\\x.x) a"));
    CHECK(subs.size() == 4);
}

TEST_CASE("sigma axioms hold on 100 instances each") {
    Report r = check_sigma_axioms(1, 100);
    CHECK(r.ok());
    CHECK(r.count(Status::Pass) == 800);
    CHECK(r.count(Status::Undecided) == 0);
}
