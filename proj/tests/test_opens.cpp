#include <doctest.h>

#include <random>

#include "nomlam/opens.hpp"

using namespace nomlam;

namespace {

Term T(const char* s) { return parse_term(s); }

const Engine& beta_eta() {
    static const Engine eng(Theory::beta_eta(), Budget{});
    return eng;
}
const Engine& beta_only() {
    static const Engine eng(Theory::beta_only(), Budget{});
    return eng;
}

}  // namespace

TEST_CASE("open syntax") {
    for (const char* s : {"any", "none", "up(b)*", "up(b)* | up(\\x.x)*", "meet(up(a),up(b))*"}) {
        OpenSet x = parse_open(s);
        CHECK_MESSAGE(parse_open(print(x)) == x, s);
    }
    CHECK(parse_open("none").empty());
    CHECK(parse_open("up(a)* | up(b)*") == parse_open("up(b)* | up(a)*"));
    CHECK_THROWS_AS(parse_open("up(b"), ParseError);
}

TEST_CASE("membership in opens") {
    // q in p• iff p ⊆ q
    OpenSet x = OpenSet::principal(T("b"));
    CHECK(open_member(beta_eta(), PointExpr::up(T("(\\a.a) b")), x).is_yes());
    CHECK(open_member(beta_only(), PointExpr::up(T("b")), OpenSet::principal(T("(\\a.a) b"))).is_no());
    CHECK(open_member(beta_only(), PointExpr::up(T("c")), x).is_no());
    CHECK(open_member(beta_only(), PointExpr::empty(), OpenSet::any()).is_yes());
    CHECK(open_member(beta_only(), PointExpr::up(T("c")), OpenSet{}).is_no());
    OpenSet j = open_join(OpenSet::principal(T("b")), OpenSet::principal(T("c")));
    CHECK(open_member(beta_only(), PointExpr::up(T("c")), j).is_yes());
    CHECK(open_subset(beta_only(), OpenSet::principal(T("b")), j).is_yes());
}

TEST_CASE("denotation is the principal open of the term") {
    for (const char* s : {"a", "\\x.x", "a b", "\\x. a x", "(\\x.x) b", "\\x.\\y. y x", "(\\x. x x) (\\y.y)"}) {
        Term t = T(s);
        OpenSet d = denote(t);
        CHECK_MESSAGE(open_subset(beta_only(), d, OpenSet::principal(t)).is_yes(), s);
        CHECK_MESSAGE(open_subset(beta_only(), OpenSet::principal(t), d).is_yes(), s);
    }
}

TEST_CASE("denote_leq follows reduction") {
    CHECK(denote_leq(beta_eta(), T("(\\a.a) b"), T("b")).is_yes());
    CHECK(denote_leq(beta_eta(), T("b"), T("\\c. b c")).is_yes());
    CHECK(denote_leq(beta_only(), T("b"), T("c")).is_no());
    CHECK(denote_leq(beta_only(), T("(\\x.a) b"), T("b")).is_no());
    std::mt19937_64 rng(79);
    Budget b;
    for (int k = 0; k < 100; ++k) {
        Term s = random_term(rng, 3, 3), t = random_term(rng, 3, 3);
        Decision3 d = denote_leq(beta_only(), s, t);
        Decision3 r = reach(Theory::beta_only(), s, t, b);
        if (!d.is_unknown() && !r.is_unknown()) CHECK(d.verdict == r.verdict);
    }
}

TEST_CASE("opens laws hold under beta-eta") {
    Report r = check_opens_laws(beta_eta(), default_point_corpus(), 5, 20);
    CHECK(r.count(Status::Fail) == 0);
    for (const Record& rec : r.records())
        if (rec.case_id.rfind("beta", 0) == 0 || rec.case_id.rfind("eta", 0) == 0)
            CHECK_MESSAGE(rec.status == Status::Pass, rec.case_id);
}

TEST_CASE("open_ppa needs a principal point") {
    CHECK_THROWS_AS(open_ppa(parse_point("meet(up(a),up(b))"), OpenSet::any()), std::invalid_argument);
    CHECK_NOTHROW(open_ppa(PointExpr::up(T("a")), OpenSet::any()));
}
