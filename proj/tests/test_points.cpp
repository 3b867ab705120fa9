#include <doctest.h>

#include <random>

#include "nomlam/points.hpp"

using namespace nomlam;

namespace {

Term T(const char* s) { return parse_term(s); }
PointExpr P(const char* s) { return parse_point(s); }

const Engine& beta_eta() {
    static const Engine eng(Theory::beta_eta(), Budget{});
    return eng;
}
const Engine& beta_only() {
    static const Engine eng(Theory::beta_only(), Budget{});
    return eng;
}

PointExpr random_expr(std::mt19937_64& rng, const std::vector<Term>& corpus, int depth) {
    auto term = [&] { return corpus[rng() % corpus.size()]; };
    Atom a{static_cast<std::uint32_t>(rng() % 4)};
    if (depth == 0) return PointExpr::up(term());
    switch (rng() % 8) {
        case 0: return PointExpr::meet(random_expr(rng, corpus, depth - 1), random_expr(rng, corpus, depth - 1));
        case 1: return PointExpr::app(random_expr(rng, corpus, depth - 1), random_expr(rng, corpus, depth - 1));
        case 2: return PointExpr::subst(random_expr(rng, corpus, depth - 1), a, term());
        case 3: return PointExpr::perm(swap(a, Atom{static_cast<std::uint32_t>(rng() % 4)}), random_expr(rng, corpus, depth - 1));
        case 4: return PointExpr::forall(a, random_expr(rng, corpus, depth - 1));
        case 5: return PointExpr::ppa(Term::var(a), random_expr(rng, corpus, depth - 1));
        case 6: return PointExpr::amgis(random_expr(rng, corpus, depth - 1), term(), a);
        default: return PointExpr::up(term());
    }
}

}  // namespace

TEST_CASE("point expression syntax round-trips") {
    for (const char* s : {"up(b)", "meet(up(a),up(b))", "ppa(a,up(b))", "forall a. up(a b)", "exists a. up(a)",
                          "nu a. up(a)", "subst(up(a),a,\\x.x)", "amgis(up(a),b,a)", "perm((a b),up(a))",
                          "app(up(a),up(b))", "empty"}) {
        PointExpr e = P(s);
        CHECK_MESSAGE(parse_point(print(e)) == e, s);
    }
    CHECK_THROWS_AS(P("up(b"), ParseError);
    CHECK_THROWS_AS(P("frob(b)"), ParseError);
}

TEST_CASE("principal points") {
    CHECK(member(beta_eta(), T("b"), P("up(b)")).depth == 0);
    CHECK(member(beta_eta(), T("b"), P("up((\\a.a) b)")).is_yes());
    CHECK(support(P("up(\\x. x a)")) == AtomSet{Atom{0}});
    CHECK(member(beta_only(), T("c"), P("up(b)")).is_no());
}

TEST_CASE("meet is union of generators") {
    CHECK(normalize(P("meet(up(b),up(b))")) == P("up(b)"));
    CHECK(normalize(P("meet(up(b),empty)")) == P("up(b)"));
    CHECK(member(beta_only(), T("c"), P("meet(up(b),up(c))")).is_yes());
    CHECK(subset(beta_eta(), P("up(b)"), P("meet(up(b),up(c))")).is_yes());
}

TEST_CASE("application of points") {
    CHECK(normalize(P("app(up(a),up(b))")) == P("up(a b)"));
    CHECK(member(beta_eta(), T("b"), P("app(up(\\a.a),up(b))")).is_yes());
    CHECK(normalize(P("app(up(a),empty)")) == P("empty"));
}

TEST_CASE("substitution on points") {
    CHECK(normalize(P("subst(up(a),a,\\x.x)")) == P("up(\\x.x)"));
    CHECK(normalize(P("subst(up(b c),a,\\x.x)")) == P("up(b c)"));
    // a renaming to a fresh atom is a swap
    PointExpr p = P("up(a c)");
    CHECK(normalize(PointExpr::subst(p, Atom{0}, T("b"))) == normalize(PointExpr::perm(swap(Atom{1}, Atom{0}), p)));
}

TEST_CASE("ppa and forall") {
    CHECK(normalize(P("forall a. ppa(a, up(b a))")) == P("up(\\a. b a)"));
    CHECK(member(beta_eta(), T("\\a. b a"), P("forall a. ppa(a, up(b a))")).is_yes());
    // s' in t-up ppa s-up tracks s' t ->* s
    CHECK(member(beta_only(), T("\\x.x"), P("ppa(b, up(b))")).is_yes());
    CHECK(member(beta_only(), T("\\x.c"), P("ppa(b, up(b))")).is_no());
    CHECK(subset(beta_eta(), P("up(b)"), P("forall a. up(b)")).is_yes());
    CHECK(subset(beta_eta(), P("up(a)"), P("forall a. up(a)")).is_yes());
}

TEST_CASE("nu and amgis") {
    CHECK(member(beta_only(), T("b"), P("nu a. up(b)")).is_yes());
    CHECK(member(beta_only(), T("c"), P("nu a. up(b)")).is_no());
    // t in p[u<-a] iff t[a:=u] in p
    CHECK(member(beta_only(), T("a"), P("amgis(up(b),b,a)")).is_yes());
    CHECK(member(beta_only(), T("a"), P("amgis(up(c),b,a)")).is_no());
}

TEST_CASE("exists") {
    CHECK(member(beta_only(), T("b"), P("exists a. up(b)")).is_yes());
    // a b[a:=u] = u b misses (a b)-up for most u
    CHECK_FALSE(member(beta_only(), T("a b"), P("exists a. up(a b)")).is_yes());
}

TEST_CASE("canonical membership matches an exhaustive beta closure") {
    // the generators' closures are small; membership is plain reachability
    const std::vector<const char*> gens = {"(\\x.x) b", "(\\x.\\y.x) a b", "(\\x.x x) (\\y.y)", "a b", "(\\x.a) c"};
    const std::vector<const char*> probes = {"b", "a", "\\y.y", "(\\y.a) b", "a b", "c", "(\\y.y) (\\y.y)"};
    for (const char* g1 : gens)
        for (const char* g2 : gens)
            for (const char* t : probes) {
                Decision3 d = member(beta_only(), T(t), PointExpr::meet(P((std::string("up(") + g1 + ")").c_str()),
                                                                        P((std::string("up(") + g2 + ")").c_str())));
                bool want = reach(Theory::beta_only(), T(g1), T(t), Budget{20, 60, 20000}).is_yes() ||
                            reach(Theory::beta_only(), T(g2), T(t), Budget{20, 60, 20000}).is_yes();
                REQUIRE_FALSE(d.is_unknown());
                CHECK(d.is_yes() == want);
            }
}

TEST_CASE("normalization preserves decided membership") {
    std::mt19937_64 rng(61);
    auto corpus = default_point_corpus();
    int compared = 0;
    for (int k = 0; k < 150; ++k) {
        PointExpr e = random_expr(rng, corpus, 2);
        PointExpr n = normalize(e);
        for (int j = 0; j < 4; ++j) {
            Term t = corpus[rng() % corpus.size()];
            Decision3 x = member(beta_only(), t, e), y = member(beta_only(), t, n);
            if (x.is_unknown() || y.is_unknown()) continue;
            ++compared;
            CHECK_MESSAGE(x.verdict == y.verdict, print(t) << " in " << print(e));
        }
    }
    CHECK(compared > 100);
}

TEST_CASE("membership is equivariant") {
    std::mt19937_64 rng(67);
    auto corpus = default_point_corpus();
    for (int k = 0; k < 150; ++k) {
        PointExpr e = random_expr(rng, corpus, 2);
        Term t = corpus[rng() % corpus.size()];
        Perm pi = compose(swap(Atom{0}, Atom{2}), swap(Atom{1}, Atom{static_cast<std::uint32_t>(rng() % 5)}));
        Decision3 x = member(beta_only(), t, e);
        Decision3 y = member(beta_only(), term_act(pi, t), point_act(pi, e));
        CHECK_MESSAGE(x.verdict == y.verdict, print(t) << " in " << print(e));
    }
}

TEST_CASE("membership is up-closed") {
    std::mt19937_64 rng(71);
    auto corpus = default_point_corpus();
    Budget b;
    for (int k = 0; k < 100; ++k) {
        PointExpr e = PointExpr::up(corpus[rng() % corpus.size()]);
        Term t = corpus[rng() % corpus.size()];
        if (!member(beta_only(), t, e).is_yes()) continue;
        for (const Term& next : successors(Theory::beta_only(), t, b).terms)
            CHECK(member(beta_only(), next, e).is_yes());
    }
}

TEST_CASE("substitution on canonical points is a sigma-algebra") {
    std::mt19937_64 rng(73);
    auto corpus = default_point_corpus();
    for (int k = 0; k < 200; ++k) {
        Point p = meet(up(corpus[rng() % corpus.size()]), up(corpus[rng() % corpus.size()]));
        Atom a{static_cast<std::uint32_t>(rng() % 4)}, b{static_cast<std::uint32_t>(rng() % 4)};
        Term u = corpus[rng() % corpus.size()], v = corpus[rng() % corpus.size()];
        CHECK(psubst(p, a, Term::var(a)) == p);
        if (!p.support().count(a)) CHECK(psubst(p, a, u) == p);
        if (a != b && !v.has_free(a))
            CHECK(psubst(psubst(p, a, u), b, v) == psubst(psubst(p, b, v), a, subst(u, b, v)));
    }
}
