#include <doctest.h>

#include <random>
#include <sstream>

#include "nomlam/atoms.hpp"
#include "nomlam/nominal.hpp"

using namespace nomlam;

namespace {

// permutations as plain lookup tables over 0..n-1
using Table = std::vector<std::uint32_t>;

Table random_table(std::mt19937_64& rng, std::size_t n) {
    Table t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<std::uint32_t>(i);
    std::shuffle(t.begin(), t.end(), rng);
    return t;
}

Perm from_table(const Table& t) {
    std::map<Atom, Atom> m;
    for (std::size_t i = 0; i < t.size(); ++i) m[Atom{static_cast<std::uint32_t>(i)}] = Atom{t[i]};
    return Perm::from_map(m);
}

Atom lookup(const Table& t, Atom a) { return a.id < t.size() ? Atom{t[a.id]} : a; }

}  // namespace

TEST_CASE("atom names are a bijection with indices") {
    CHECK(atom_name(Atom{0}) == "a");
    CHECK(atom_name(Atom{25}) == "z");
    CHECK(atom_name(Atom{26}) == "a1");
    CHECK(atom_name(Atom{53}) == "b2");
    for (std::uint32_t i = 0; i < 2000; ++i) {
        auto back = parse_atom_name(atom_name(Atom{i}));
        REQUIRE(back);
        CHECK(back->id == i);
    }
    CHECK_FALSE(parse_atom_name("A"));
    CHECK_FALSE(parse_atom_name("a0"));
    CHECK_FALSE(parse_atom_name(""));
    CHECK_FALSE(parse_atom_name("ab"));
}

TEST_CASE("fresh atoms avoid the given set and are least") {
    AtomSet avoid{Atom{0}, Atom{1}, Atom{3}};
    CHECK(fresh_atom(avoid) == Atom{2});
    auto f = fresh_atoms(avoid, 3);
    CHECK(f == std::set<Atom>{Atom{2}, Atom{4}, Atom{5}});
}

TEST_CASE("permutations agree pointwise with lookup tables") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        std::size_t n = 1 + rng() % 7;
        Table x = random_table(rng, n), y = random_table(rng, n);
        Perm px = from_table(x), py = from_table(y);
        Perm c = compose(px, py);
        Perm inv = invert(px);
        for (std::uint32_t i = 0; i < 10; ++i) {
            Atom a{i};
            CHECK(px(a) == lookup(x, a));
            CHECK(c(a) == lookup(x, lookup(y, a)));
            CHECK(inv(px(a)) == a);
        }
        // group laws
        CHECK(compose(px, Perm::identity()) == px);
        CHECK(compose(Perm::identity(), px) == px);
        CHECK(compose(px, inv).is_identity());
        Table z = random_table(rng, n);
        Perm pz = from_table(z);
        CHECK(compose(compose(px, py), pz) == compose(px, compose(py, pz)));
    }
}

TEST_CASE("permutation text form") {
    auto p = parse_perm("(a b)(b c)");
    REQUIRE(p);
    // right to left: c -> b -> a
    CHECK((*p)(Atom{2}) == Atom{0});
    CHECK(parse_perm("id")->is_identity());
    CHECK(parse_perm("")->is_identity());
    CHECK_FALSE(parse_perm("(a"));
    CHECK(*parse_perm(to_string(*p)) == *p);
    CHECK_THROWS_AS(Perm::from_map(std::map<Atom, Atom>{{Atom{0}, Atom{1}}}), std::invalid_argument);
}

TEST_CASE("support of a permuted atom set is the permuted support") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        Table t = random_table(rng, 6);
        Perm p = from_table(t);
        AtomSet s;
        for (std::uint32_t i = 0; i < 8; ++i)
            if (rng() % 2) s.insert(Atom{i});
        AtomSet want;
        for (Atom a : s) want.insert(lookup(t, a));
        CHECK(act(p, s) == want);
    }
}

TEST_CASE("some/any on fresh atoms") {
    AtomSet supp{Atom{0}, Atom{2}};
    Report good = check_some_any("const", supp, [](Atom a) { return a.id != 0; });
    CHECK(good.ok());
    // depends on which fresh atom is chosen, so the property is not equivariant
    Report bad = check_some_any("parity", supp, [](Atom a) { return a.id % 2 == 1; });
    CHECK_FALSE(bad.ok());
}

TEST_CASE("report format") {
    Report r;
    r.add(Record{"s", "c#1", Status::Pass, 2, "x,y\nz"});
    r.add(Record{"s", "c#2", Status::Undecided, -1, ""});
    r.add(Record{"s", "c#3", Status::Skipped, -1, ""});
    std::ostringstream os;
    r.write(os);
    std::string out = os.str();
    CHECK(out.find("s,c#1,PASS,2,") == 0);
    CHECK(std::count(out.begin(), out.end(), '\n') == 3);
    CHECK(r.undecided_fraction() == doctest::Approx(0.5));
    CHECK(r.ok());
}
