#include "nomlam/oracle.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace nomlam {

ClosureCapExceeded::ClosureCapExceeded(std::size_t carrier, std::size_t frontier)
    : std::runtime_error("closure cap exceeded: carrier " + std::to_string(carrier) + ", frontier " +
                         std::to_string(frontier)),
      frontier(frontier) {}

std::optional<std::size_t> Universe::index(const Term& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Universe build_universe(const Theory& th, const std::vector<Term>& seeds, std::size_t max_terms,
                        bool require_closed, const Budget& budget) {
    max_terms = std::min(max_terms, Universe::kMaxTerms);
    Universe u;
    u.theory_ = th;
    std::vector<std::vector<std::size_t>> succ;
    std::size_t overflow = 0;
    auto admit = [&](const Term& t) -> std::optional<std::size_t> {
        if (auto i = u.index(t)) return i;
        if (u.carrier_.size() >= max_terms) {
            ++overflow;
            u.closed_ = false;
            return std::nullopt;
        }
        u.index_.emplace(t, u.carrier_.size());
        u.carrier_.push_back(t);
        succ.emplace_back();
        return u.carrier_.size() - 1;
    };
    for (const Term& s : seeds) admit(s);
    for (std::size_t i = 0; i < u.carrier_.size(); ++i) {
        Successors next = successors(th, u.carrier_[i], budget);
        if (next.pruned) {
            u.closed_ = false;
            ++overflow;
        }
        for (const Term& t : next.terms)
            if (auto j = admit(t)) succ[i].push_back(*j);
    }
    if (require_closed && !u.closed_) throw ClosureCapExceeded(u.carrier_.size(), overflow);

    std::size_t n = u.carrier_.size();
    u.reach_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        u.reach_[i] = bit(i);
        for (std::size_t j : succ[i]) u.reach_[i] |= bit(j);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            Subset r = u.reach_[i];
            for (std::size_t j = 0; j < n; ++j)
                if (has(u.reach_[i], j)) r |= u.reach_[j];
            if (r != u.reach_[i]) {
                u.reach_[i] = r;
                changed = true;
            }
        }
    }
    return u;
}

// ---------------------------------------------------------------- exact sets

const char* to_string(Bound b) {
    switch (b) {
        case Bound::Exact: return "exact";
        case Bound::Lower: return "lower";
        case Bound::Upper: return "upper";
        case Bound::Loose: return "loose";
    }
    return "?";
}

ExactPoint::ExactPoint(const Universe& u, Subset members, Bound bound, bool contained)
    : u_(&u), members_(members), bound_(bound), contained_(contained) {}

Subset up_closure(const Universe& u, Subset s) {
    Subset r = s;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (has(s, i)) r |= u.reach(i);
    return r;
}

namespace {

std::size_t require(const Universe& u, const Term& t) {
    auto i = u.index(t);
    if (!i) throw OutOfUniverse(print(t) + " is not in the carrier");
    return *i;
}

}  // namespace

std::vector<Subset> up_closed_subsets(const Universe& u) {
    if (u.size() > kMaxEnumerated)
        throw std::length_error("up-closed subset enumeration capped at " + std::to_string(kMaxEnumerated) +
                                " terms, carrier has " + std::to_string(u.size()));
    // grow from each antichain of minimal elements: an up-closed set is the
    // closure of its elements, so extend by elements in index order
    std::vector<Subset> out;
    std::function<void(std::size_t, Subset)> go = [&](std::size_t i, Subset cur) {
        if (i == u.size()) {
            out.push_back(cur);
            return;
        }
        if (has(cur, i)) return go(i + 1, cur);
        go(i + 1, cur);
        Subset with = up_closure(u, cur | bit(i));
        // skip if adding i pulls in an earlier index already decided absent
        if ((with & (bit(i) - 1)) == (cur & (bit(i) - 1))) go(i + 1, with);
    };
    go(0, 0);
    return out;
}

ExactPoint exact_up(const Universe& u, const Term& s) { return ExactPoint(u, u.reach(require(u, s))); }

ExactPoint exact_meet(const ExactPoint& p, const ExactPoint& q) {
    Bound b = Bound::Loose;
    if (p.bound() == Bound::Exact && q.bound() == Bound::Exact)
        b = Bound::Exact;
    else if (p.definite_yes() && q.definite_yes())
        b = Bound::Lower;
    else if (p.definite_no() && q.definite_no())
        b = Bound::Upper;
    return ExactPoint(p.universe(), p.members() | q.members(), b, p.contained() && q.contained());
}

namespace {
// p is a faithful picture of its true set
bool faithful(const ExactPoint& p) { return p.bound() == Bound::Exact && p.contained(); }
}  // namespace

namespace {

Subset app_set(const Universe& u, Subset x, Subset y) {
    Subset r = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!has(x, i)) continue;
        for (std::size_t j = 0; j < u.size(); ++j)
            if (has(y, j))
                if (auto k = u.index(Term::app(u.carrier()[i], u.carrier()[j]))) r |= bit(*k);
    }
    return up_closure(u, r);
}

// s ∈ r and s[a:=v] in the carrier imply s[a:=v] ∈ r, for every v in the carrier
bool sigma_closed(const Universe& u, Atom a, Subset r) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!has(r, i) || !u.carrier()[i].has_free(a)) continue;
        for (const Term& v : u.carrier())
            if (auto k = u.index(subst(u.carrier()[i], a, v)); k && !has(r, *k)) return false;
    }
    return true;
}

Subset intersect_all(const Universe& u, const std::function<bool(Subset)>& admissible) {
    Subset r = u.all();
    for (Subset c : up_closed_subsets(u))
        if (admissible(c)) r &= c;
    return r;
}

}  // namespace

ExactPoint exact_app(const ExactPoint& p, const ExactPoint& q) {
    // applications x y outside the carrier can still reduce into it
    Bound b = p.definite_yes() && q.definite_yes() ? Bound::Lower : Bound::Loose;
    return ExactPoint(p.universe(), app_set(p.universe(), p.members(), q.members()), b, false);
}

ExactPoint exact_forall(Atom a, const ExactPoint& p) {
    const Universe& u = p.universe();
    Subset need = p.members();
    // every true candidate restricts to a carrier candidate, not conversely
    Bound b = p.definite_yes() ? Bound::Lower : Bound::Loose;
    return ExactPoint(u, intersect_all(u, [&](Subset r) { return (need & ~r) == 0 && sigma_closed(u, a, r); }),
                      b, false);
}

ExactPoint exact_ppa(const ExactPoint& q, const ExactPoint& p) {
    const Universe& u = p.universe();
    Subset need = p.members();
    // every carrier candidate is a true one; points generated outside are missed
    Bound b = faithful(p) && faithful(q) ? Bound::Upper : Bound::Loose;
    return ExactPoint(u, intersect_all(u, [&](Subset r) { return (need & ~app_set(u, r, q.members())) == 0; }),
                      b, false);
}

ExactPoint exact_exists(Atom a, const ExactPoint& p) {
    const Universe& u = p.universe();
    Subset r = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        bool all = true;
        for (const Term& v : u.carrier())
            if (auto k = u.index(subst(u.carrier()[i], a, v)); k && !p.contains(*k)) all = false;
        if (all) r |= bit(i);
    }
    return ExactPoint(u, r, faithful(p) ? Bound::Upper : Bound::Loose, false);
}

ExactPoint exact_subst(const ExactPoint& p, Atom a, const Term& v) {
    const Universe& u = p.universe();
    if (v.has_free(a)) throw OutOfUniverse("pointwise characterisation needs " + atom_name(a) + " fresh for " + print(v));
    Subset r = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (p.contains(i)) r |= bit(require(u, subst(u.carrier()[i], a, v)));
    return ExactPoint(u, up_closure(u, r), faithful(p) ? Bound::Exact : Bound::Loose, p.contained());
}

ExactPoint exact_nu(Atom a, const ExactPoint& p) {
    const Universe& u = p.universe();
    AtomSet avoid{a};
    for (const Term& t : u.carrier()) {
        AtomSet f = t.free_atoms();
        avoid.insert(f.begin(), f.end());
    }
    Atom b = fresh_atom(avoid);
    Subset r = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (auto k = u.index(term_act(swap(b, a), u.carrier()[i])); k && p.contains(*k)) r |= bit(i);
    return ExactPoint(u, r, faithful(p) ? Bound::Exact : Bound::Loose, false);
}

ExactPoint exact_amgis(const ExactPoint& p, const Term& v, Atom a) {
    const Universe& u = p.universe();
    Subset r = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (auto k = u.index(subst(u.carrier()[i], a, v)); k && p.contains(*k)) r |= bit(i);
    return ExactPoint(u, r, faithful(p) ? Bound::Exact : Bound::Loose, false);
}

ExactPoint exact_perm(const Perm& pi, const ExactPoint& p) {
    const Universe& u = p.universe();
    Perm inv = invert(pi);
    Subset r = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (auto k = u.index(term_act(inv, u.carrier()[i])); k && p.contains(*k)) r |= bit(i);
    return ExactPoint(u, r, faithful(p) ? Bound::Exact : Bound::Loose, false);
}

ExactPoint exact_eval(const Universe& u, const PointExpr& e) {
    switch (e.kind()) {
        case PointKind::Gens: {
            Subset r = 0;
            for (const Term& g : e.point().generators()) r |= exact_up(u, g).members();
            return ExactPoint(u, r);
        }
        case PointKind::Meet: return exact_meet(exact_eval(u, e.left()), exact_eval(u, e.right()));
        case PointKind::App: return exact_app(exact_eval(u, e.left()), exact_eval(u, e.right()));
        case PointKind::Ppa: return exact_ppa(exact_up(u, e.term()), exact_eval(u, e.body()));
        case PointKind::Forall: return exact_forall(e.atom(), exact_eval(u, e.body()));
        case PointKind::Exists: return exact_exists(e.atom(), exact_eval(u, e.body()));
        case PointKind::Nu: return exact_nu(e.atom(), exact_eval(u, e.body()));
        case PointKind::Subst: return exact_subst(exact_eval(u, e.body()), e.atom(), e.term());
        case PointKind::Amgis: return exact_amgis(exact_eval(u, e.body()), e.term(), e.atom());
        case PointKind::PermAct: return exact_perm(e.perm(), exact_eval(u, e.body()));
    }
    return ExactPoint(u, 0);
}

// ---------------------------------------------------------------- compare

namespace {

// A symbolic Yes for t ∈ ∀a.body against an in-carrier No. The in-carrier ∀
// is only a lower bound, but it holds every carrier instance of the body, so
// a certificate found through such an instance (or through the body itself
// when that is a definite No) still contradicts it.
bool forall_yes_contradicts(const Universe& u, const Engine& eng, const Term& t, const PointExpr& e) {
    Atom a = e.atom();
    for (const Term& v : forall_probes(t, e.body(), a)) {
        PointExpr inst = PointExpr::subst(e.body(), a, v);
        if (!member(eng, t, inst).is_yes()) continue;
        try {
            if (v == Term::var(a)) {
                ExactPoint body = exact_eval(u, e.body());
                return body.definite_no() && !body.contains(*u.index(t));
            }
            if (!u.contains(v)) return false;
            ExactPoint body = exact_eval(u, e.body());
            PointExpr n = normalize(inst);
            if (!body.definite_yes() || !n.canonical()) return false;
            return std::all_of(n.point().generators().begin(), n.point().generators().end(),
                               [&](const Term& g) { return u.contains(g); });
        } catch (const OutOfUniverse&) {
            return false;
        }
    }
    return false;
}

}  // namespace

Report compare(const Engine& eng, const PointExpr& e, const ExactPoint& exact, const std::string& suite,
               const std::string& case_id) {
    const Universe& u = exact.universe();
    Report out;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Term& t = u.carrier()[i];
        Decision3 d = member(eng, t, e);
        bool ex = exact.contains(i);
        std::string detail = print(t) + " in " + print(e) + ": symbolic " + to_string(d.verdict) +
                             ", exact " + (ex ? "Yes" : "No") + " (" + to_string(exact.bound()) + ")";
        Status st = Status::Pass;
        if (d.is_unknown()) {
            st = Status::Undecided;
        } else if (d.is_yes() != ex) {
            bool definite = d.is_yes() ? exact.definite_no() : exact.definite_yes();
            if (!definite && d.is_yes() && e.kind() == PointKind::Forall)
                definite = forall_yes_contradicts(u, eng, t, e);
            st = definite ? Status::Fail : Status::Skipped;
            if (!definite) detail = "out-of-universe: " + detail;
        }
        out.add(Record{suite, case_id + "/" + std::to_string(i), st, d.is_yes() ? d.depth : -1, detail});
    }
    return out;
}

// ---------------------------------------------------------------- validation

std::vector<std::vector<Term>> default_universe_seeds() {
    const std::vector<std::vector<const char*>> src = {
        {"(\\x.x) b"},
        {"((\\a.a) (\\b.b)) c", "(\\a.a) (\\b.b)"},
        {"(\\x.x) a", "a"},
        {"(\\x.\\y.x) a b"},
        {"(\\x.x a) (\\y.y)", "\\y.y"},
        {"(\\x.x x) (\\y.y)"},
        {"a b", "(\\x.x) a", "b"},
        {"(\\x.a) b", "\\x.a"},
        {"(\\x.x c) (\\y.y)", "c"},
        {"\\x.x", "(\\x.x) (\\x.x)", "a"},
        {"(\\x.\\y.y x) a (\\z.z)"},
        {"(\\x.x) ((\\y.y) a)", "\\x.x"},
        {"(\\x.\\y.x) a", "a"},
    };
    std::vector<std::vector<Term>> out;
    for (const auto& set : src) {
        std::vector<Term> terms;
        for (const char* s : set) terms.push_back(parse_term(s));
        out.push_back(std::move(terms));
    }
    return out;
}

namespace {

AtomSet carrier_atoms(const Universe& u) {
    AtomSet s;
    for (const Term& t : u.carrier()) {
        AtomSet f = t.free_atoms();
        s.insert(f.begin(), f.end());
    }
    return s;
}

struct Ctx {
    const Universe& u;
    const Engine& eng;
    std::string tag;
    Report& out;

    void check(const std::string& law, const std::string& id, const PointExpr& e) {
        try {
            ExactPoint ex = exact_eval(u, e);
            out.merge(compare(eng, e, ex, "oracle", tag + "/" + law + "/" + id));
        } catch (const OutOfUniverse& err) {
            out.add(Record{"oracle", tag + "/" + law + "/" + id, Status::Skipped, -1,
                           std::string("out-of-universe: ") + err.what()});
        }
    }
    void verdict(const std::string& law, const std::string& id, bool ok, std::string detail) {
        out.add(Record{"oracle", tag + "/" + law + "/" + id, ok ? Status::Pass : Status::Fail, -1,
                       std::move(detail)});
    }
};

void law_identity(Ctx& c) {
    const auto& ts = c.u.carrier();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        c.check("identity", std::to_string(i), PointExpr::up(ts[i]));
        if (i + 1 < ts.size())
            c.check("identity", std::to_string(i) + "+" + std::to_string(i + 1),
                    PointExpr::meet(PointExpr::up(ts[i]), PointExpr::up(ts[i + 1])));
    }
}

void law_ppa_union(Ctx& c) {
    const auto& ts = c.u.carrier();
    for (std::size_t h = 0; h < ts.size(); ++h)
        for (std::size_t g1 = 0; g1 < ts.size(); ++g1) {
            std::string id = std::to_string(h) + "." + std::to_string(g1);
            c.check("ppa-union", id, PointExpr::ppa(ts[h], PointExpr::up(ts[g1])));
            for (std::size_t g2 = g1 + 1; g2 < ts.size(); ++g2)
                c.check("ppa-union", id + "+" + std::to_string(g2),
                        PointExpr::ppa(ts[h], PointExpr::meet(PointExpr::up(ts[g1]), PointExpr::up(ts[g2]))));
        }
}

void law_forall_probe(Ctx& c) {
    const auto& ts = c.u.carrier();
    AtomSet atoms = carrier_atoms(c.u);
    atoms.insert(fresh_atom(atoms));
    for (Atom a : atoms)
        for (std::size_t s = 0; s < ts.size(); ++s) {
            std::string id = atom_name(a) + "." + std::to_string(s);
            c.check("forall-probe", id, PointExpr::forall(a, PointExpr::up(ts[s])));
            c.check("forall-probe", id + ".lam",
                    PointExpr::forall(a, PointExpr::ppa(Term::var(a), PointExpr::up(ts[s]))));
            if (s + 1 < ts.size())
                c.check("forall-probe", id + "+" + std::to_string(s + 1),
                        PointExpr::forall(a, PointExpr::meet(PointExpr::up(ts[s]), PointExpr::up(ts[s + 1]))));
        }
}

// p[a⇐u] pointwise and as νa of the pointwise image coincide for a#u
void law_lsm_id(Ctx& c) {
    const auto& ts = c.u.carrier();
    for (Atom a : carrier_atoms(c.u))
        for (std::size_t s = 0; s < ts.size(); ++s)
            for (std::size_t v = 0; v < ts.size(); ++v) {
                if (ts[v].has_free(a)) continue;
                std::string id = atom_name(a) + "." + std::to_string(s) + "." + std::to_string(v);
                try {
                    ExactPoint p = exact_up(c.u, ts[s]);
                    ExactPoint one = exact_subst(p, a, ts[v]);
                    ExactPoint two = exact_nu(a, one);
                    c.verdict("lsm-id", id, one == two, print(ts[s]) + " [" + atom_name(a) + ":=" + print(ts[v]) + "]");
                } catch (const OutOfUniverse& err) {
                    c.out.add(Record{"oracle", c.tag + "/lsm-id/" + id, Status::Skipped, -1,
                                     std::string("out-of-universe: ") + err.what()});
                    continue;
                }
                c.check("lsm-id", id + ".sym", PointExpr::subst(PointExpr::up(ts[s]), a, ts[v]));
            }
}

// x ∈ p[u↼a] iff x[a:=u] ∈ p, read off term by term
void law_amgis(Ctx& c) {
    const auto& ts = c.u.carrier();
    for (Atom a : carrier_atoms(c.u))
        for (std::size_t s = 0; s < ts.size(); ++s)
            for (std::size_t v = 0; v < ts.size(); ++v) {
                std::string id = atom_name(a) + "." + std::to_string(s) + "." + std::to_string(v);
                ExactPoint p = exact_up(c.u, ts[s]);
                ExactPoint q = exact_amgis(p, ts[v], a);
                bool ok = true;
                for (std::size_t i = 0; i < ts.size(); ++i) {
                    auto k = c.u.index(subst(ts[i], a, ts[v]));
                    bool want = k && c.eng.reach(ts[s], ts[*k]).is_yes();
                    if (want != q.contains(i)) ok = false;
                }
                c.verdict("amgis", id, ok, print(ts[s]) + " [" + print(ts[v]) + "<-" + atom_name(a) + "]");
                c.check("amgis", id + ".sym", PointExpr::amgis(PointExpr::up(ts[s]), ts[v], a));
            }
}

// ∀a.p against the union of its in-carrier instances p[a:=u]
void law_forall_union(Ctx& c) {
    const auto& ts = c.u.carrier();
    for (Atom a : carrier_atoms(c.u))
        for (std::size_t s = 0; s < ts.size(); ++s) {
            ExactPoint p = exact_up(c.u, ts[s]);
            Subset inst = p.members();
            for (const Term& v : ts)
                for (std::size_t i = 0; i < ts.size(); ++i)
                    if (p.contains(i))
                        if (auto k = c.u.index(subst(ts[i], a, v))) inst |= bit(*k);
            inst = up_closure(c.u, inst);
            Subset all = exact_forall(a, p).members();
            c.verdict("forall-union", atom_name(a) + "." + std::to_string(s), all == inst,
                      "forall " + atom_name(a) + ". " + print(ts[s]));
        }
}

}  // namespace

Report validate_oracle(const std::vector<std::vector<Term>>& seed_sets, std::string_view law,
                       std::size_t max_terms) {
    static const std::vector<std::string_view> known = {"identity", "ppa-union", "forall-probe", "lsm-id",
                                                        "amgis",    "forall-union", "gate", "all"};
    if (std::find(known.begin(), known.end(), law) == known.end())
        throw std::invalid_argument("unknown oracle law: " + std::string(law));
    auto wants = [&](std::string_view name) {
        return law == name || law == "all" || (law == "gate" && (name == "ppa-union" || name == "forall-probe"));
    };
    Report out;
    Theory th = Theory::beta_only();
    for (std::size_t k = 0; k < seed_sets.size(); ++k) {
        std::string tag = "U" + std::to_string(k);
        Universe u;
        try {
            u = build_universe(th, seed_sets[k], max_terms, true);
        } catch (const ClosureCapExceeded& err) {
            out.add(Record{"oracle", tag, Status::Skipped, -1, err.what()});
            continue;
        }
        Engine eng(th, Budget{});
        Ctx c{u, eng, tag, out};
        if (wants("identity")) law_identity(c);
        if (wants("ppa-union")) law_ppa_union(c);
        if (wants("forall-probe")) law_forall_probe(c);
        if (wants("lsm-id")) law_lsm_id(c);
        if (wants("amgis")) law_amgis(c);
        if (wants("forall-union")) law_forall_union(c);
    }
    return out;
}

std::string print(const Universe& u) {
    std::ostringstream os;
    os << "universe " << u.size() << " terms, " << (u.closed() ? "closed" : "not closed") << ", "
       << u.theory().describe() << '\n';
    for (std::size_t i = 0; i < u.size(); ++i) {
        os << i << ": " << print(u.carrier()[i]) << "  ->*";
        for (std::size_t j = 0; j < u.size(); ++j)
            if (has(u.reach(i), j)) os << ' ' << j;
        os << '\n';
    }
    return os.str();
}

}  // namespace nomlam
