#include <random>

#include "nomlam/points.hpp"

namespace nomlam {

std::vector<Term> default_point_corpus() {
    static const char* const src[] = {
        "a",
        "b",
        "a b",
        "b a",
        "\\x. x",
        "\\x. a",
        "\\x. x a",
        "(\\x. x) a",
        "(\\x. x) b",
        "(\\x. a) b",
        "(\\x. x x) a",
        "\\x. \\y. x",
        "\\x. \\y. y x",
        "(\\x. \\y. x) a b",
        "a (\\x. x)",
        "(\\x. x b) (\\y. y)",
        "\\x. a x",
        "\\x. b (x a)",
        "c",
        "(\\x. x) (\\y. y)",
        "a b c",
        "(\\x. x c) a",
        "\\x. x (b c)",
        "(\\x. \\y. y x) a",
        "d a",
        "(\\x. d) (a b)",
        "\\x. x x",
        "a ((\\x. x) b)",
        "(\\x. x) (a b)",
        "\\y. y a b",
    };
    std::vector<Term> out;
    for (const char* s : src) out.push_back(parse_term(s));
    return out;
}

namespace {

constexpr int kInstances = 10;

struct Gen {
    const Engine& eng;
    const std::vector<Term>& corpus;
    std::mt19937_64 rng;

    Term term() { return corpus[rng() % corpus.size()]; }
    Atom atom() { return Atom{static_cast<std::uint32_t>(rng() % 4)}; }  // a..d
    // a corpus term satisfying pred, or nullopt after a bounded number of tries
    template <class Pred>
    std::optional<Term> term_where(Pred pred) {
        for (int i = 0; i < 64; ++i) {
            Term t = term();
            if (pred(t)) return t;
        }
        return std::nullopt;
    }
    // s and a few one-step reducts: known members of s↑
    std::vector<Term> members(const Term& s, std::size_t k = 2) {
        std::vector<Term> out{s};
        Successors next = successors(eng.theory(), s, eng.budget());
        for (std::size_t i = 0; i < next.terms.size() && i < k; ++i) out.push_back(next.terms[i]);
        return out;
    }
};

Status from(const Decision3& d) {
    if (d.is_yes()) return Status::Pass;
    if (d.is_no()) return Status::Fail;
    return Status::Undecided;
}

Status from(bool ok) { return ok ? Status::Pass : Status::Fail; }

Status both(Status x, Status y) {
    if (x == Status::Fail || y == Status::Fail) return Status::Fail;
    if (x == Status::Pass && y == Status::Pass) return Status::Pass;
    return Status::Undecided;
}

// e1 ⊆ e2 on probes: refuted by a (Yes, No) pair, passed when some probe is
// certified in both and none refutes
Status probe_incl(const Engine& eng, const PointExpr& e1, const PointExpr& e2,
                  const std::vector<Term>& probes) {
    bool witnessed = false;
    for (const Term& t : probes) {
        Decision3 m1 = member(eng, t, e1);
        if (!m1.is_yes()) continue;
        Decision3 m2 = member(eng, t, e2);
        if (m2.is_no()) return Status::Fail;
        if (m2.is_yes()) witnessed = true;
    }
    return witnessed ? Status::Pass : Status::Undecided;
}

Status probe_eq(const Engine& eng, const PointExpr& e1, const PointExpr& e2,
                const std::vector<Term>& probes) {
    return both(probe_incl(eng, e1, e2, probes), probe_incl(eng, e2, e1, probes));
}

Status subset_or_probes(const Engine& eng, const PointExpr& e1, const PointExpr& e2,
                        const std::vector<Term>& probes) {
    Decision3 d = subset(eng, e1, e2, probes);
    if (!d.is_unknown()) return from(d);
    return probe_incl(eng, e1, e2, probes);
}

struct Suite {
    std::string name;
    Report report;
    void add(const std::string& law, int k, Status s, std::string detail) {
        report.add(Record{name, law + "#" + std::to_string(k), s, -1, std::move(detail)});
    }
};

AtomSet with(AtomSet s, Atom a) {
    s.insert(a);
    return s;
}

}  // namespace

Report check_point_laws(const Engine& eng, const std::vector<Term>& corpus, std::uint64_t seed) {
    Gen g{eng, corpus, std::mt19937_64(seed)};
    Suite out{"points", {}};
    for (int k = 0; k < kInstances; ++k) {
        Term s = g.term(), t = g.term(), u = g.term();
        Atom a = g.atom();
        std::string st = print(s) + " | " + print(t);

        // s↑•t↑ = (st)↑
        {
            PointExpr lhs = PointExpr::app(PointExpr::up(s), PointExpr::up(t));
            Term st_term = Term::app(s, t);
            Status shape = from(normalize(lhs) == PointExpr::up(st_term));
            out.add("uparrow-app", k, both(shape, from(member(eng, st_term, lhs))), st);
        }

        // (λa.s)↑ ⊆ ∀a.(a↑⊘s↑), checked on members of (λa.s)↑, plus the rewrite
        {
            Term lam = Term::lam(a, s);
            PointExpr rhs = PointExpr::forall(a, PointExpr::ppa(Term::var(a), PointExpr::up(s)));
            Status shape = from(normalize(rhs) == PointExpr::up(lam));
            Status incl = probe_incl(eng, PointExpr::up(lam), rhs, g.members(lam));
            out.add("tall-lam-uparrow", k, both(shape, incl), print(lam));
        }

        // s↑[a⇐u] = s[a:=u]↑
        {
            Term su = subst(s, a, u);
            PointExpr lhs = PointExpr::subst(PointExpr::up(s), a, u);
            Status shape = from(normalize(lhs) == PointExpr::up(su));
            out.add("lsm-uparrow", k, both(shape, from(member(eng, su, lhs))),
                    print(s) + " [" + atom_name(a) + ":=" + print(u) + "]");
        }

        auto u_fresh = g.term_where([&](const Term& x) { return !x.has_free(a); });
        if (u_fresh) {
            Term su = subst(s, a, *u_fresh);
            PointExpr lsm = PointExpr::subst(PointExpr::up(s), a, *u_fresh);
            std::string detail = print(s) + " [" + atom_name(a) + ":=" + print(*u_fresh) + "]";
            // Characterisation 2: p[a⇐u] = νa.(p[a:=u]) when a#u
            PointExpr nu = PointExpr::nu(a, PointExpr::up(su));
            out.add("lsm-id-char2", k, probe_eq(eng, lsm, nu, g.members(su, 3)), detail);
            // Characterisation 1: p[a:=u] ⊆ p[a⇐u] and a is fresh for p[a⇐u]
            PointExpr n = normalize(lsm);
            Status fresh = from(!support(n).count(a));
            out.add("lsm-char1", k, both(fresh, from(subset(eng, PointExpr::up(su), n))), detail);
        } else {
            out.add("lsm-id-char2", k, Status::Skipped, "no corpus term fresh for the atom");
        }

        // (p∧q)[a⇐u] and (p•q)[a⇐u] distribute
        {
            Point p({s, g.term()});
            Point q = up(t);
            bool m = psubst(meet(p, q), a, u) == meet(psubst(p, a, u), psubst(q, a, u));
            bool ap = psubst(papp(p, q), a, u) == papp(psubst(p, a, u), psubst(q, a, u));
            out.add("lsm-app", k, from(m && ap), st);
        }

        // (b↑⊘p)[a⇐u] = b↑⊘(p[a⇐u]) for b#u; the inclusion ⊆ is checked through
        // the adjunction r[a⇐u] ⊆ x iff r ⊆ x[u↼a]
        {
            Atom b = g.atom();
            if (b == a || u.has_free(b)) b = fresh_atom(with(u.free_atoms(), a));
            PointExpr lhs = PointExpr::subst(PointExpr::ppa(Term::var(b), PointExpr::up(s)), a, u);
            PointExpr rhs = PointExpr::ppa(Term::var(b), PointExpr::up(subst(s, a, u)));
            Status shape = from(normalize(lhs) == rhs);
            Term t1 = Term::lam(b, s);
            Atom z = fresh_atom(with(t1.free_atoms(), b));
            std::vector<Term> probes{t1, Term::lam(z, Term::app(t1, Term::var(z)))};
            PointExpr inner = PointExpr::ppa(Term::var(b), PointExpr::up(s));
            Status adj = probe_incl(eng, inner, PointExpr::amgis(rhs, u, a), probes);
            out.add("lsm-special-distrib", k, both(shape, adj), atom_name(b) + " | " + print(s));
        }

        // p[v↼b][u↼a] = p[u[b:=v]↼a][v↼b] for a#v, a≠b
        {
            Atom b = g.atom();
            auto v = g.term_where([&](const Term& x) { return !x.has_free(a); });
            if (b == a || !v) {
                out.add("amgis-sigma", k, Status::Skipped, "no admissible atoms");
            } else {
                Point p = up(subst(subst(t, a, u), b, *v));
                PointExpr lhs = PointExpr::amgis(PointExpr::amgis(PointExpr::gens(p), *v, b), u, a);
                PointExpr rhs =
                    PointExpr::amgis(PointExpr::amgis(PointExpr::gens(p), subst(u, b, *v), a), *v, b);
                out.add("amgis-sigma", k, probe_eq(eng, lhs, rhs, {t}), print(t));
            }
        }

        // a#p iff a is σ-fresh for p: every instance s′[a:=u] of a member stays in p
        {
            AtomSet avoid = s.free_atoms();
            Atom c = g.atom();
            if (avoid.count(c)) c = fresh_atom(avoid);
            PointExpr p = PointExpr::up(s);
            Status st_fwd = Status::Pass;
            for (const Term& m : g.members(s))
                st_fwd = both(st_fwd, from(member(eng, subst(m, c, u), p)));
            out.add("fresh-point", k, st_fwd, atom_name(c) + " # " + print(s));
            // the converse direction: a free atom of s is not σ-fresh
            if (!avoid.empty()) {
                Atom inside = *avoid.begin();
                Atom d = fresh_atom(with(avoid, inside));
                Term moved = subst(s, inside, Term::var(d));
                out.add("fresh-point-converse", k, from(not3(member(eng, moved, p))),
                        atom_name(inside) + " in " + print(s));
            }
        }
    }
    return std::move(out.report);
}

Report check_forall_laws(const Engine& eng, const std::vector<Term>& corpus, std::uint64_t seed) {
    Gen g{eng, corpus, std::mt19937_64(seed ^ 0x9e3779b97f4a7c15ULL)};
    Suite out{"appendixA", {}};
    for (int k = 0; k < kInstances; ++k) {
        Term s = g.term(), r = g.term();
        Atom a = g.atom();
        Term lam = Term::lam(a, s);
        PointExpr p = PointExpr::ppa(Term::var(a), PointExpr::up(s));
        std::vector<Term> probes = g.members(lam);

        // b#p: ∀b.(b a)·p = ∀a.p
        {
            AtomSet avoid = support(p);
            avoid.insert(a);
            Atom b = fresh_atom(avoid);
            PointExpr lhs = PointExpr::forall(b, PointExpr::perm(swap(b, a), p));
            out.add("forall-alpha", k, probe_eq(eng, lhs, PointExpr::forall(a, p), probes),
                    atom_name(b) + " | " + print(lam));
        }

        // ∀a.(p∧q) = ∀a.p ∧ ∀a.q
        {
            PointExpr q = PointExpr::up(r);
            PointExpr lhs = PointExpr::forall(a, PointExpr::meet(p, q));
            PointExpr rhs = PointExpr::meet(PointExpr::forall(a, p), PointExpr::forall(a, q));
            std::vector<Term> pr = probes;
            pr.push_back(r);
            out.add("forall-meet", k, probe_eq(eng, lhs, rhs, pr), print(lam) + " | " + print(r));
        }

        // ∀∨ has no point-level counterpart: joins of points are not representable
        out.add("forall-join", k, Status::Skipped, "point join not representable");

        // p ⊆ ∀a.p (dual of ∀a.x ≤ x)
        {
            PointExpr q = PointExpr::up(s);
            Status gens = subset_or_probes(eng, q, PointExpr::forall(a, q), g.members(s));
            Status ppa = probe_incl(eng, p, PointExpr::forall(a, p), probes);
            out.add("forall-include", k, both(gens, ppa), print(s));
        }

        // a#p: ∀a.p = p
        {
            AtomSet fa = s.free_atoms();
            Atom c = fresh_atom(fa);
            PointExpr q = PointExpr::up(s);
            PointExpr lhs = PointExpr::forall(c, q);
            Status shape = from(normalize(lhs) == q);
            out.add("forall-fresh", k, both(shape, from(member(eng, s, lhs))), print(s));
        }

        // a#q: ∀a.p ⊆ q iff p ⊆ q
        {
            auto q_term = g.term_where([&](const Term& x) { return !x.has_free(a); });
            if (!q_term) {
                out.add("forall-adjoint", k, Status::Skipped, "no corpus term fresh for the atom");
            } else {
                PointExpr q = PointExpr::up(*q_term);
                Decision3 pq = subset(eng, PointExpr::up(s), q);
                Decision3 fq = subset(eng, PointExpr::forall(a, PointExpr::up(s)), q);
                Status st = Status::Undecided;
                if (!pq.is_unknown() && !fq.is_unknown()) st = from(pq.verdict == fq.verdict);
                out.add("forall-adjoint", k, st, print(s) + " | " + print(*q_term));
            }
        }
    }
    return std::move(out.report);
}

Report check_exists_laws(const Engine& eng, const std::vector<Term>& corpus, std::uint64_t seed) {
    Gen g{eng, corpus, std::mt19937_64(seed ^ 0xc2b2ae3d27d4eb4fULL)};
    Suite out{"appendixB", {}};
    for (int k = 0; k < kInstances; ++k) {
        Atom a = g.atom();
        Term s1 = g.term();
        auto s2 = g.term_where([&](const Term& x) { return !x.has_free(a); });
        auto r = g.term_where([&](const Term& x) { return !x.has_free(a); });
        if (!s2 || !r) {
            out.add("exists", k, Status::Skipped, "no corpus term fresh for the atom");
            continue;
        }
        PointExpr p = PointExpr::meet(PointExpr::up(s1), PointExpr::up(*s2));
        PointExpr q = PointExpr::up(*r);
        PointExpr ex = PointExpr::exists(a, p);
        std::vector<Term> probes = g.members(s1);
        for (const Term& m : g.members(*s2)) probes.push_back(m);
        std::string detail = atom_name(a) + " | " + print(s1) + " | " + print(*s2);

        // ∃a.p ⊆ p
        out.add("jj-subset", k, probe_incl(eng, ex, p, probes), detail);

        // supp(∃a.p) ⊆ supp(p)\{a}; probe form: swapping a with a fresh atom keeps membership
        {
            AtomSet sp = support(p);
            AtomSet se = support(ex);
            bool structural = !se.count(a);
            for (Atom x : se) structural = structural && sp.count(x);
            Atom c = fresh_atom(with(sp, a));
            PointExpr swapped = PointExpr::perm(swap(c, a), ex);
            out.add("jj-supp", k, both(from(structural), probe_eq(eng, ex, swapped, probes)), detail);
        }

        // q ⊆ p and a#q give q ⊆ ∃a.p
        out.add("jj-glb", k, from(subset(eng, PointExpr::up(*s2), ex)), detail);

        std::vector<Term> app_probes;
        for (const Term& m : probes) app_probes.push_back(Term::app(m, *r));

        // a#q: ∀a.(p•q) ⊆ (∀a.p)•q
        {
            PointExpr lhs = PointExpr::forall(a, PointExpr::app(p, q));
            PointExpr rhs = PointExpr::app(PointExpr::forall(a, p), q);
            out.add("tall-app-lam", k, subset_or_probes(eng, lhs, rhs, app_probes),
                    detail + " | " + print(*r));
        }

        // a#q: (∃a.p)•q ⊆ ∃a.(p•q)
        {
            PointExpr lhs = PointExpr::app(ex, q);
            PointExpr rhs = PointExpr::exists(a, PointExpr::app(p, q));
            out.add("jj-app-lam", k, subset_or_probes(eng, lhs, rhs, app_probes),
                    detail + " | " + print(*r));
        }
    }
    return std::move(out.report);
}

}  // namespace nomlam
