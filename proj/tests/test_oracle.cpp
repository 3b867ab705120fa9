#include <doctest.h>

#include <algorithm>

#include "nomlam/oracle.hpp"

using namespace nomlam;

namespace {

Term T(const char* s) { return parse_term(s); }

Universe beta_universe(std::vector<Term> seeds) {
    return build_universe(Theory::beta_only(), seeds, 12, true);
}

std::size_t at(const Universe& u, const char* s) {
    auto i = u.index(T(s));
    REQUIRE(i);
    return *i;
}

}  // namespace

TEST_CASE("closing a seed set") {
    Universe u = beta_universe({T("(\\a.a) b")});
    CHECK(u.closed());
    CHECK(u.size() == 2);
    CHECK(u.contains(T("b")));
    CHECK(has(u.reach(at(u, "(\\a.a) b")), at(u, "b")));
    CHECK_FALSE(has(u.reach(at(u, "b")), at(u, "(\\a.a) b")));

    Universe none = beta_universe({});
    CHECK(none.closed());
    CHECK(none.size() == 0);

    // η-expansion never stops
    CHECK_THROWS_AS(build_universe(Theory::beta_eta(), {T("b")}, 12, true), ClosureCapExceeded);
    Universe open = build_universe(Theory::beta_eta(), {T("b")}, 12, false);
    CHECK_FALSE(open.closed());
    CHECK(open.size() == 12);
}

TEST_CASE("up-closed subsets by brute force") {
    Universe u = beta_universe({T("(\\x.\\y.x) a b"), T("(\\x.x) c")});
    std::vector<Subset> want;
    for (Subset s = 0; s <= u.all(); ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < u.size(); ++i)
            if (has(s, i) && (u.reach(i) & ~s)) ok = false;
        if (ok) want.push_back(s);
    }
    auto got = up_closed_subsets(u);
    std::sort(got.begin(), got.end());
    CHECK(got == want);
    CHECK(up_closure(u, bit(at(u, "(\\x.x) c"))) == u.reach(at(u, "(\\x.x) c")));
}

TEST_CASE("exact operations on small carriers") {
    Universe u = beta_universe({T("(\\x.x) a"), T("a")});
    ExactPoint p = exact_up(u, T("(\\x.x) a"));
    CHECK(p.members() == (bit(at(u, "(\\x.x) a")) | bit(at(u, "a"))));
    CHECK(exact_meet(exact_up(u, T("a")), p) == p);
    // b is fresh for the whole carrier
    CHECK(exact_forall(Atom{1}, p) == p);
    // [a:=a] is the identity
    CHECK(exact_amgis(p, T("a"), Atom{0}) == p);
    CHECK(exact_amgis(exact_up(u, T("a")), T("a"), Atom{0}).members() == bit(at(u, "a")));
    CHECK_THROWS_AS(exact_up(u, T("c")), OutOfUniverse);
}

TEST_CASE("exact evaluation agrees with symbolic membership on the identity law") {
    Report r = validate_oracle(default_universe_seeds(), "identity");
    CHECK(r.count(Status::Fail) == 0);
    CHECK(r.count(Status::Pass) > 20);
}

TEST_CASE("oracle refutes symbolic ppa on an applied identity") {
    // (\a.a)(\b.b) reduces to \b.b, so its up-set is not in every admissible r
    std::vector<std::vector<Term>> seeds{{T("((\\a.a) (\\b.b)) c"), T("(\\a.a) (\\b.b)")}};
    Report r = validate_oracle(seeds, "ppa-union");
    CHECK(r.count(Status::Fail) > 0);
    bool found = false;
    for (const Record& rec : r.records())
        if (rec.status == Status::Fail && rec.detail.find("(\\a. a) (\\b. b)") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("unknown laws are rejected") {
    CHECK_THROWS_AS(validate_oracle(default_universe_seeds(), "nope"), std::invalid_argument);
}

TEST_CASE("default seeds close under beta") {
    int closed = 0;
    for (const auto& s : default_universe_seeds()) {
        Universe u = build_universe(Theory::beta_only(), s, 12, false);
        closed += u.closed() && u.size() <= 12;
    }
    CHECK(closed >= 10);
}
