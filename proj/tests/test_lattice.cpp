#include <doctest.h>

#include <algorithm>
#include <random>

#include "nomlam/lattice.hpp"

using namespace nomlam;

namespace {

// filter/prime tests straight from the definitions, on small lattices;
// filters are consistent, so never contain bottom
bool brute_filter(const FiniteDL& l, Subset s) {
    if (!has(s, l.top()) || has(s, l.bottom())) return false;
    for (std::size_t x = 0; x < l.size(); ++x) {
        if (!has(s, x)) continue;
        for (std::size_t y = 0; y < l.size(); ++y) {
            if (l.leq(x, y) && !has(s, y)) return false;
            if (has(s, y) && !has(s, l.meet(x, y))) return false;
        }
    }
    return true;
}

bool brute_prime(const FiniteDL& l, Subset s) {
    if (!brute_filter(l, s)) return false;
    for (std::size_t x = 0; x < l.size(); ++x)
        for (std::size_t y = 0; y < l.size(); ++y)
            if (has(s, l.join(x, y)) && !has(s, x) && !has(s, y)) return false;
    return true;
}

std::size_t count_down_sets(const Poset& p) {
    std::size_t n = p.size(), count = 0;
    for (Subset s = 0; s < bit(n); ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j)
                if (has(s, j) && p.leq(i, j) && !has(s, i)) ok = false;
        count += ok;
    }
    return count;
}

FiniteDL chain(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> leq;
    for (std::size_t i = 0; i + 1 < n; ++i) leq.emplace_back(i, i + 1);
    return FiniteDL::from_order(n, leq);
}

}  // namespace

TEST_CASE("birkhoff lattices have one element per down-set") {
    std::mt19937_64 rng(83);
    for (int k = 0; k < 60; ++k) {
        Poset p = random_poset(rng, 5);
        FiniteDL l = birkhoff_from_poset(p);
        CHECK(l.size() == count_down_sets(p));
        CHECK(l.leq(l.bottom(), l.top()));
    }
}

TEST_CASE("filters and primes match the definitions") {
    std::mt19937_64 rng(89);
    for (int k = 0; k < 30; ++k) {
        FiniteDL l = birkhoff_from_poset(random_poset(rng, 3));
        REQUIRE(l.size() <= 12);
        std::vector<Subset> want;
        for (Subset s = 0; s < bit(l.size()); ++s) {
            CHECK(is_filter(l, s) == brute_filter(l, s));
            CHECK(is_prime(l, s) == brute_prime(l, s));
            if (brute_prime(l, s)) want.push_back(s);
        }
        auto got = enumerate_prime_filters(l);
        std::sort(got.begin(), got.end());
        CHECK(got == want);
    }
}

TEST_CASE("heyting implication is the largest z with z and u below x") {
    std::mt19937_64 rng(97);
    for (int k = 0; k < 30; ++k) {
        FiniteDL l = birkhoff_from_poset(random_poset(rng, 4));
        for (std::size_t u = 0; u < l.size(); ++u)
            for (std::size_t x = 0; x < l.size(); ++x) {
                std::size_t imp = l.implies(u, x);
                CHECK(l.leq(l.meet(imp, u), x));
                for (std::size_t z = 0; z < l.size(); ++z)
                    if (l.leq(l.meet(z, u), x)) CHECK(l.leq(z, imp));
            }
    }
}

TEST_CASE("prime extension separates") {
    std::mt19937_64 rng(101);
    for (int k = 0; k < 30; ++k) {
        FiniteDL l = birkhoff_from_poset(random_poset(rng, 4));
        for (std::size_t x = 0; x < l.size(); ++x)
            for (std::size_t y = 0; y < l.size(); ++y) {
                if (l.leq(x, y)) continue;
                auto q = extend_to_prime(l, l.up(x), l.down(y));
                REQUIRE(q);
                CHECK(is_prime(l, *q));
                CHECK(has(*q, x));
                CHECK_FALSE(has(*q, y));
            }
    }
    FiniteDL c = chain(3);
    CHECK_THROWS_AS(extend_to_prime(c, c.up(0), c.down(1)), std::invalid_argument);
}

TEST_CASE("duality checks pass on chains and random lattices") {
    CHECK(check_duality(chain(1), "one").ok());
    CHECK(check_duality(chain(4), "chain").ok());
    std::mt19937_64 rng(103);
    for (int k = 0; k < 20; ++k) {
        Report r = check_duality(birkhoff_from_poset(random_poset(rng, 6)), "rand");
        CHECK(r.count(Status::Fail) == 0);
    }
}

TEST_CASE("lattice text format") {
    FiniteDL d = parse_lattice("4\n# a diamond\n0 <= 1\n0 <= 2\n1 <= 3\n2 <= 3\n");
    CHECK(d.size() == 4);
    CHECK(d.join(1, 2) == 3);
    CHECK(d.meet(1, 2) == 0);
    FiniteDL b = parse_lattice("poset 2\n");
    CHECK(b.size() == 4);
    // N5 is not distributive
    CHECK_THROWS(parse_lattice("5\n0 <= 1\n1 <= 2\n2 <= 4\n0 <= 3\n3 <= 4\n"));
    CHECK_THROWS(parse_lattice("2\n0 <= 7\n"));
    CHECK_THROWS_AS(Poset(2, {{0, 1}, {1, 0}}), std::invalid_argument);
}
