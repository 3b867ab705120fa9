#include "nomlam/lattice.hpp"

#include <bit>
#include <charconv>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "nomlam/terms.hpp"  // ParseError

namespace nomlam {

Poset::Poset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& less)
    : n_(n), leq_(n * n, false) {
    for (std::size_t i = 0; i < n; ++i) leq_[i * n + i] = true;
    for (auto [i, j] : less) {
        if (i >= n || j >= n) throw std::invalid_argument("poset: index out of range");
        leq_[i * n + j] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (leq_[i * n + k])
                for (std::size_t j = 0; j < n; ++j)
                    if (leq_[k * n + j]) leq_[i * n + j] = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (leq_[i * n + j] && leq_[j * n + i])
                throw std::invalid_argument("poset: cycle through " + std::to_string(i) + " and " +
                                            std::to_string(j));
}

Poset random_poset(std::mt19937_64& rng, std::size_t max_size) {
    std::size_t n = rng() % (max_size + 1);
    std::vector<std::pair<std::size_t, std::size_t>> less;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng() % 3 == 0) less.emplace_back(i, j);
    return Poset(n, less);
}

FiniteDL FiniteDL::from_order(std::size_t n,
                              const std::vector<std::pair<std::size_t, std::size_t>>& leq) {
    if (n == 0) throw std::invalid_argument("lattice: no elements");
    if (n > kMaxSize)
        throw std::invalid_argument("lattice: " + std::to_string(n) + " elements exceeds the cap of " +
                                    std::to_string(kMaxSize));
    FiniteDL l;
    l.n_ = n;
    l.up_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) l.up_[i] = bit(i);
    for (auto [i, j] : leq) {
        if (i >= n || j >= n) throw std::invalid_argument("lattice: index out of range");
        l.up_[i] |= bit(j);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (has(l.up_[i], k)) l.up_[i] |= l.up_[k];
    l.down_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (has(l.up_[i], j)) l.down_[j] |= bit(i);
    for (std::size_t i = 0; i < n; ++i)
        if ((l.up_[i] & l.down_[i]) != bit(i))
            throw std::invalid_argument("lattice: order is not antisymmetric at " + std::to_string(i));

    auto bound = [&](Subset candidates, const std::vector<Subset>& cone) -> std::optional<std::size_t> {
        for (std::size_t m = 0; m < n; ++m)
            if (has(candidates, m) && (cone[m] & candidates) == candidates) return m;
        return std::nullopt;
    };
    l.meet_.assign(n * n, 0);
    l.join_.assign(n * n, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            auto m = bound(l.down_[x] & l.down_[y], l.down_);
            auto j = bound(l.up_[x] & l.up_[y], l.up_);
            if (!m || !j)
                throw std::invalid_argument("lattice: " + std::to_string(x) + " and " + std::to_string(y) +
                                            " lack a " + (m ? "join" : "meet"));
            l.meet_[x * n + y] = *m;
            l.join_[x * n + y] = *j;
        }
    for (std::size_t i = 0; i < n; ++i) {
        if (l.down_[i] == l.all()) l.top_ = i;
        if (l.up_[i] == l.all()) l.bottom_ = i;
    }
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z)
                if (l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)))
                    throw std::invalid_argument("lattice: not distributive at (" + std::to_string(x) + "," +
                                                std::to_string(y) + "," + std::to_string(z) + ")");
    l.imp_.assign(n * n, 0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t x = 0; x < n; ++x) {
            std::size_t r = l.bottom_;
            for (std::size_t z = 0; z < n; ++z)
                if (l.leq(l.meet(z, u), x)) r = l.join(r, z);
            l.imp_[u * n + x] = r;
        }
    return l;
}

FiniteDL birkhoff_from_poset(const Poset& p) {
    const std::size_t n = p.size();
    if (n > 16) throw std::invalid_argument("birkhoff: poset too large");
    std::vector<std::uint32_t> downsets;
    for (std::uint32_t s = 0; s < (1U << n); ++s) {
        bool closed = true;
        for (std::size_t j = 0; j < n && closed; ++j)
            if ((s >> j) & 1U)
                for (std::size_t i = 0; i < n && closed; ++i)
                    if (p.leq(i, j) && !((s >> i) & 1U)) closed = false;
        if (closed) {
            downsets.push_back(s);
            if (downsets.size() > FiniteDL::kMaxSize)
                throw std::invalid_argument("birkhoff: more than " + std::to_string(FiniteDL::kMaxSize) +
                                            " down-sets");
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> leq;
    for (std::size_t i = 0; i < downsets.size(); ++i)
        for (std::size_t j = 0; j < downsets.size(); ++j)
            if ((downsets[i] & downsets[j]) == downsets[i]) leq.emplace_back(i, j);
    return FiniteDL::from_order(downsets.size(), leq);
}

bool is_filter(const FiniteDL& l, Subset s) {
    if (s == 0 || has(s, l.bottom())) return false;
    for (std::size_t x = 0; x < l.size(); ++x) {
        if (!has(s, x)) continue;
        if ((l.up(x) & s) != l.up(x)) return false;
        for (std::size_t y = 0; y < l.size(); ++y)
            if (has(s, y) && !has(s, l.meet(x, y))) return false;
    }
    return true;
}

bool is_ideal(const FiniteDL& l, Subset s) {
    if (s == 0) return false;
    for (std::size_t x = 0; x < l.size(); ++x) {
        if (!has(s, x)) continue;
        if ((l.down(x) & s) != l.down(x)) return false;
        for (std::size_t y = 0; y < l.size(); ++y)
            if (has(s, y) && !has(s, l.join(x, y))) return false;
    }
    return true;
}

bool is_prime(const FiniteDL& l, Subset s) {
    if (!is_filter(l, s)) return false;
    for (std::size_t x = 0; x < l.size(); ++x)
        for (std::size_t y = 0; y < l.size(); ++y)
            if (has(s, l.join(x, y)) && !has(s, x) && !has(s, y)) return false;
    return true;
}

// every filter of a finite lattice is ↑z for z the meet of its members
std::vector<Subset> enumerate_prime_filters(const FiniteDL& l) {
    std::vector<Subset> out;
    for (std::size_t z = 0; z < l.size(); ++z)
        if (is_prime(l, l.up(z))) out.push_back(l.up(z));
    return out;
}

Subset plus(const FiniteDL& l, Subset p, std::size_t y) {
    Subset out = 0;
    for (std::size_t x = 0; x < l.size(); ++x)
        if (has(p, x)) out |= l.up(l.meet(x, y));
    return out;
}

std::optional<Subset> extend_to_prime(const FiniteDL& l, Subset p, Subset z) {
    if (!is_filter(l, p)) throw std::invalid_argument("extend_to_prime: p is not a filter");
    if (!is_ideal(l, z)) throw std::invalid_argument("extend_to_prime: Z is not an ideal");
    if (p & z) throw std::invalid_argument("extend_to_prime: p meets Z");
    // greedy: one pass in index order already gives a maximal filter, since a
    // rejected element stays rejected as q grows
    Subset q = p;
    for (std::size_t x = 0; x < l.size(); ++x) {
        if (has(q, x)) continue;
        Subset cand = plus(l, q, x);
        if (!(cand & z)) q = cand;
    }
    if (is_prime(l, q)) return q;
    // backtracking over all filters above p avoiding Z
    std::function<std::optional<Subset>(Subset, std::size_t)> search =
        [&](Subset cur, std::size_t from) -> std::optional<Subset> {
        if (is_prime(l, cur)) return cur;
        for (std::size_t x = from; x < l.size(); ++x) {
            if (has(cur, x)) continue;
            Subset cand = plus(l, cur, x);
            if (cand & z) continue;
            if (auto r = search(cand, x + 1)) return r;
        }
        return std::nullopt;
    };
    return search(p, 0);
}

Subset rep_map(const std::vector<Subset>& primes, std::size_t x) {
    Subset out = 0;
    for (std::size_t i = 0; i < primes.size(); ++i)
        if (has(primes[i], x)) out |= bit(i);
    return out;
}

HeytingOps heyting_ops(const FiniteDL& l) {
    HeytingOps ops;
    ops.app.assign(l.size(), std::vector<std::size_t>(l.size()));
    ops.ppa.assign(l.size(), std::vector<std::size_t>(l.size()));
    for (std::size_t x = 0; x < l.size(); ++x)
        for (std::size_t y = 0; y < l.size(); ++y) {
            ops.app[x][y] = l.meet(x, y);
            ops.ppa[x][y] = l.implies(x, y);
        }
    return ops;
}

namespace {

std::string elems(std::initializer_list<std::size_t> xs) {
    std::string s;
    for (std::size_t x : xs) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

// Records the first counterexample of a family, or a pass.
class Family {
public:
    Family(Report& r, std::string suite, std::string id) : r_(r), suite_(std::move(suite)), id_(std::move(id)) {}
    void fail(const std::string& detail) {
        if (!failed_) detail_ = detail;
        failed_ = true;
    }
    ~Family() { r_.add(Record{suite_, id_, failed_ ? Status::Fail : Status::Pass, -1, detail_}); }

private:
    Report& r_;
    std::string suite_, id_, detail_;
    bool failed_ = false;
};

}  // namespace

Report check_duality(const FiniteDL& l, const std::string& name) {
    const std::size_t n = l.size();
    Report rep;
    const std::string suite = "lattice";
    auto id = [&](const char* law) { return name + "/" + law; };
    const std::vector<Subset> primes = enumerate_prime_filters(l);
    const std::size_t k = primes.size();
    const Subset all_primes = k == 64 ? ~Subset{0} : bit(k) - 1;
    std::vector<Subset> rep_of(n);
    for (std::size_t x = 0; x < n; ++x) rep_of[x] = rep_map(primes, x);

    {
        Family f(rep, suite, id("order-embedding"));
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                bool sub = (rep_of[x] & rep_of[y]) == rep_of[x];
                if (l.leq(x, y) != sub) f.fail("x,y=" + elems({x, y}));
            }
    }
    {
        Family f(rep, suite, id("injective"));
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y)
                if (rep_of[x] == rep_of[y]) f.fail("x,y=" + elems({x, y}));
    }
    {
        Family f(rep, suite, id("bullet-commute"));
        if (rep_of[l.top()] != all_primes) f.fail("top");
        if (rep_of[l.bottom()] != 0) f.fail("bottom");
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                if (rep_of[l.meet(x, y)] != (rep_of[x] & rep_of[y])) f.fail("meet x,y=" + elems({x, y}));
                if (rep_of[l.join(x, y)] != (rep_of[x] | rep_of[y])) f.fail("join x,y=" + elems({x, y}));
            }
    }
    {
        // every filter ↑x against every ideal ↓y it misses
        Family f(rep, suite, id("prime-extension"));
        for (std::size_t x = 0; x < n; ++x) {
            if (x == l.bottom()) continue;
            for (std::size_t y = 0; y < n; ++y) {
                if (l.leq(x, y)) continue;
                auto q = extend_to_prime(l, l.up(x), l.down(y));
                if (!q || !is_prime(l, *q) || (*q & l.up(x)) != l.up(x) || (*q & l.down(y)))
                    f.fail("x,y=" + elems({x, y}));
            }
        }
    }
    {
        Family f(rep, suite, id("plus"));
        for (std::size_t x = 0; x < n; ++x) {
            Subset p = l.up(x);
            if (!is_filter(l, p)) continue;
            for (std::size_t y = 0; y < n; ++y) {
                Subset py = plus(l, p, y);
                bool closed = true;
                for (std::size_t a = 0; a < n; ++a) {
                    if (!has(py, a)) continue;
                    if ((l.up(a) & py) != l.up(a)) closed = false;
                    for (std::size_t b = 0; b < n; ++b)
                        if (has(py, b) && !has(py, l.meet(a, b))) closed = false;
                }
                if ((py & p) != p || !has(py, y) || !closed) f.fail("x,y=" + elems({x, y}));
            }
        }
    }
    {
        Family f(rep, suite, id("heyting-rows"));
        HeytingOps ops = heyting_ops(l);
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t x = 0; x < n; ++x) {
                if (!l.leq(ops.app[ops.ppa[u][x]][u], x)) f.fail("app-epsilon u,x=" + elems({u, x}));
                if (!l.leq(x, ops.ppa[u][ops.app[x][u]])) f.fail("app-eta u,x=" + elems({u, x}));
                if (ops.app[l.bottom()][u] != l.bottom() || ops.app[u][l.bottom()] != l.bottom())
                    f.fail("app-bot u=" + elems({u}));
                for (std::size_t y = 0; y < n; ++y) {
                    if (!l.leq(ops.app[l.meet(x, y)][u], l.meet(ops.app[x][u], ops.app[y][u])))
                        f.fail("app-meet x,y,u=" + elems({x, y, u}));
                    if (ops.app[l.join(x, y)][u] != l.join(ops.app[x][u], ops.app[y][u]))
                        f.fail("app-join x,y,u=" + elems({x, y, u}));
                    if (ops.ppa[u][l.meet(x, y)] != l.meet(ops.ppa[u][x], ops.ppa[u][y]))
                        f.fail("ppa-meet u,x,y=" + elems({u, x, y}));
                    if (!l.leq(l.join(ops.ppa[u][x], ops.ppa[u][y]), ops.ppa[u][l.join(x, y)]))
                        f.fail("ppa-join u,x,y=" + elems({u, x, y}));
                    // x∧u ≤ y iff x ≤ u→y
                    if (l.leq(ops.app[x][u], y) != l.leq(x, ops.ppa[u][y]))
                        f.fail("adjoint x,u,y=" + elems({x, u, y}));
                }
            }
    }
    {
        // set level over primes: p⊛q = {r | p∪q ⊆ r}; X∗Y and Y⊘X per the pointwise definitions
        auto combine = [&](std::size_t p, std::size_t q) {
            Subset out = 0;
            for (std::size_t r = 0; r < k; ++r)
                if (((primes[p] | primes[q]) & primes[r]) == (primes[p] | primes[q])) out |= bit(r);
            return out;
        };
        std::vector<Subset> comb(k * k);
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = 0; q < k; ++q) comb[p * k + q] = combine(p, q);
        auto set_app = [&](Subset xs, Subset ys) {
            Subset out = 0;
            for (std::size_t p = 0; p < k; ++p)
                if (has(xs, p))
                    for (std::size_t q = 0; q < k; ++q)
                        if (has(ys, q)) out |= comb[p * k + q];
            return out;
        };
        auto set_ppa = [&](Subset ys, Subset xs) {
            Subset out = 0;
            for (std::size_t p = 0; p < k; ++p) {
                bool ok = true;
                for (std::size_t q = 0; q < k && ok; ++q)
                    if (has(ys, q) && (comb[p * k + q] & xs) != comb[p * k + q]) ok = false;
                if (ok) out |= bit(p);
            }
            return out;
        };
        Family app(rep, suite, id("pp-app"));
        Family ppa(rep, suite, id("pp-ppa"));
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) {
                if (set_app(rep_of[x], rep_of[y]) != rep_of[l.meet(x, y)]) app.fail("x,y=" + elems({x, y}));
                if (set_ppa(rep_of[y], rep_of[x]) != rep_of[l.implies(y, x)]) ppa.fail("y,x=" + elems({y, x}));
            }
    }
    {
        // maximal q with q•x ⊆ r (resp. p•q ⊆ r) for prime r is prime
        std::vector<Subset> filters;
        for (std::size_t z = 0; z < n; ++z)
            if (is_filter(l, l.up(z))) filters.push_back(l.up(z));
        auto app_set = [&](Subset a, Subset b) {
            Subset out = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (has(a, i))
                    for (std::size_t j = 0; j < n; ++j)
                        if (has(b, j)) out |= bit(l.meet(i, j));
            return out;
        };
        auto maximal_prime = [&](auto fits) {
            std::vector<bool> ok(filters.size());
            for (std::size_t i = 0; i < filters.size(); ++i) ok[i] = fits(filters[i]);
            for (std::size_t i = 0; i < filters.size(); ++i) {
                if (!ok[i]) continue;
                bool maximal = true;
                for (std::size_t j = 0; j < filters.size() && maximal; ++j)
                    if (j != i && ok[j] && (filters[j] & filters[i]) == filters[i]) maximal = false;
                if (maximal && !is_prime(l, filters[i])) return false;
            }
            return true;
        };
        Family h1(rep, suite, id("hard-1"));
        Family h2(rep, suite, id("hard-2"));
        for (std::size_t ri = 0; ri < k; ++ri) {
            Subset r = primes[ri];
            for (std::size_t x = 0; x < n; ++x)
                if (!maximal_prime([&](Subset q) { return (app_set(q, bit(x)) & r) == app_set(q, bit(x)); }))
                    h1.fail("r,x=" + elems({ri, x}));
            for (Subset p : filters)
                if (!maximal_prime([&](Subset q) { return (app_set(p, q) & r) == app_set(p, q); }))
                    h2.fail("r=" + elems({ri}));
        }
    }
    {
        // q⊛y = {x | y→x ∈ q} is up- and ∧-closed, though it may hold ⊥
        Family f(rep, suite, id("qappx-closure"));
        for (std::size_t z = 0; z < n; ++z) {
            Subset q = l.up(z);
            if (!is_filter(l, q)) continue;
            for (std::size_t y = 0; y < n; ++y) {
                Subset s = 0;
                for (std::size_t x = 0; x < n; ++x)
                    if (has(q, l.implies(y, x))) s |= bit(x);
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        if (has(s, a) && ((l.leq(a, b) && !has(s, b)) || (has(s, b) && !has(s, l.meet(a, b)))))
                            f.fail("q,y=" + elems({z, y}));
            }
        }
    }
    return rep;
}

FiniteDL parse_lattice(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> count;
    bool poset = false;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    auto number = [&](std::string_view tok) {
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size())
            throw ParseError("expected a number, got '" + std::string(tok) + "'", lineno);
        return v;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (toks.empty()) continue;
        if (!count) {
            if (toks.size() == 2 && toks[0] == "poset") {
                poset = true;
                count = number(toks[1]);
            } else if (toks.size() == 1) {
                count = number(toks[0]);
            } else {
                throw ParseError("expected element count or 'poset N'", lineno);
            }
            continue;
        }
        const char* rel = poset ? "<" : "<=";
        if (toks.size() != 3 || toks[1] != rel)
            throw ParseError(std::string("expected 'i ") + rel + " j'", lineno);
        pairs.emplace_back(number(toks[0]), number(toks[2]));
    }
    if (!count) throw ParseError("empty lattice file", lineno);
    try {
        if (poset) return birkhoff_from_poset(Poset(*count, pairs));
        return FiniteDL::from_order(*count, pairs);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
    }
}

}  // namespace nomlam
