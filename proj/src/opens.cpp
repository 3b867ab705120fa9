#include "nomlam/opens.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <stdexcept>

namespace nomlam {

OpenSet::OpenSet(std::vector<PointExpr> disjuncts) {
    for (PointExpr& p : disjuncts)
        if (std::find(ds_.begin(), ds_.end(), p) == ds_.end()) ds_.push_back(std::move(p));
}

bool operator==(const OpenSet& x, const OpenSet& y) {
    auto within = [](const OpenSet& l, const OpenSet& r) {
        return std::all_of(l.ds_.begin(), l.ds_.end(), [&](const PointExpr& p) {
            return std::find(r.ds_.begin(), r.ds_.end(), p) != r.ds_.end();
        });
    };
    return within(x, y) && within(y, x);
}

Decision3 open_member(const Engine& eng, const PointExpr& q, const OpenSet& x) {
    Decision3 d = Decision3::no();
    for (const PointExpr& p : x.disjuncts()) {
        d = or3(d, subset(eng, p, q));
        if (d.is_yes()) return d;
    }
    return d;
}

Decision3 open_subset(const Engine& eng, const OpenSet& x, const OpenSet& y) {
    Decision3 d = Decision3::yes(0);
    for (const PointExpr& p : x.disjuncts()) {
        d = and3(d, open_member(eng, p, y));
        if (d.is_no()) return d;
    }
    return d;
}

OpenSet open_meet(const OpenSet& x, const OpenSet& y) {
    std::vector<PointExpr> ds;
    for (const PointExpr& p : x.disjuncts())
        for (const PointExpr& q : y.disjuncts()) ds.push_back(normalize(PointExpr::meet(p, q)));
    return OpenSet(std::move(ds));
}

OpenSet open_join(const OpenSet& x, const OpenSet& y) {
    std::vector<PointExpr> ds = x.disjuncts();
    ds.insert(ds.end(), y.disjuncts().begin(), y.disjuncts().end());
    return OpenSet(std::move(ds));
}

OpenSet prune(const Engine& eng, const OpenSet& x) {
    const auto& ds = x.disjuncts();
    std::vector<bool> drop(ds.size(), false);
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < ds.size(); ++j)
            if (i != j && !drop[i] && !drop[j] && subset(eng, ds[j], ds[i]).is_yes()) drop[i] = true;
    std::vector<PointExpr> keep;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!drop[i]) keep.push_back(ds[i]);
    return OpenSet(std::move(keep));
}

OpenSet open_app(const OpenSet& x, const OpenSet& y) {
    std::vector<PointExpr> ds;
    for (const PointExpr& p : x.disjuncts())
        for (const PointExpr& q : y.disjuncts()) ds.push_back(normalize(PointExpr::app(p, q)));
    return OpenSet(std::move(ds));
}

OpenSet open_ppa(const PointExpr& q, const OpenSet& x) {
    PointExpr n = normalize(q);
    if (!n.canonical() || !n.point().principal())
        throw std::invalid_argument("open_ppa: left operand must be a principal point, got " + print(q));
    const Term& h = n.point().generators().front();
    std::vector<PointExpr> ds;
    for (const PointExpr& p : x.disjuncts()) ds.push_back(PointExpr::ppa(h, p));
    return OpenSet(std::move(ds));
}

OpenSet open_subst(const OpenSet& x, Atom a, const Term& u) {
    std::vector<PointExpr> ds;
    for (const PointExpr& p : x.disjuncts()) ds.push_back(normalize(PointExpr::subst(p, a, u)));
    return OpenSet(std::move(ds));
}

OpenSet open_forall(Atom a, const OpenSet& x) {
    std::vector<PointExpr> ds;
    for (const PointExpr& p : x.disjuncts()) ds.push_back(normalize(PointExpr::forall(a, p)));
    return OpenSet(std::move(ds));
}

OpenSet open_lam(Atom a, const OpenSet& x) {
    return open_forall(a, open_ppa(PointExpr::up(Term::var(a)), x));
}

namespace {

OpenSet denote_rec(const Term& s) {
    switch (s.kind()) {
        case TermKind::Var: return OpenSet::principal(s);
        case TermKind::Lam: {
            auto [a, body] = s.binder();
            return open_lam(a, denote_rec(body));
        }
        case TermKind::App: return open_app(denote_rec(s.fun()), denote_rec(s.arg()));
    }
    return {};
}

}  // namespace

OpenSet denote(const Term& s) {
    OpenSet x = denote_rec(s);
    if (!(x == OpenSet::principal(s)))
        throw std::logic_error("denotation of " + print(s) + " is " + print(x) + ", not (s↑)•");
    return x;
}

Decision3 denote_leq(const Engine& eng, const Term& s, const Term& t) {
    Decision3 d = open_subset(eng, denote(s), denote(t));
    Decision3 r = eng.reach(s, t);
    if ((d.is_yes() && r.is_no()) || (d.is_no() && r.is_yes()))
        throw std::logic_error("denote_leq and reach disagree on " + print(s) + " <= " + print(t));
    return d;
}

std::string print(const OpenSet& x) {
    if (x.empty()) return "none";
    std::string out;
    for (const PointExpr& p : x.disjuncts()) {
        if (!out.empty()) out += " | ";
        bool any = p.canonical() && p.point().empty();
        out += any ? "any" : print(p) + "•";
    }
    return out;
}

OpenSet parse_open(std::string_view text) {
    auto trim = [](std::string_view v) {
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
        return v;
    };
    if (trim(text) == "none") return OpenSet();
    std::vector<PointExpr> ds;
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i < text.size()) {
            if (text[i] == '(') ++depth;
            if (text[i] == ')') --depth;
            if (text[i] != '|' || depth != 0) continue;
        }
        std::string_view part = trim(text.substr(start, i - start));
        if (part == "any") {
            ds.push_back(PointExpr::empty());
        } else {
            constexpr std::string_view bullet = "•";
            if (part.ends_with(bullet))
                part.remove_suffix(bullet.size());
            else if (part.ends_with('*'))
                part.remove_suffix(1);
            else
                throw ParseError("open disjunct must end in '•'", start);
            try {
                ds.push_back(parse_point(part));
            } catch (const ParseError& e) {
                throw ParseError(e.what(), start + e.position());
            }
        }
        start = i + 1;
    }
    return OpenSet(std::move(ds));
}

Report check_opens_laws(const Engine& eng, const std::vector<Term>& corpus, std::uint64_t seed,
                        int cases) {
    std::mt19937_64 rng(seed);
    auto term = [&] { return corpus[rng() % corpus.size()]; };
    auto atom = [&] { return Atom{static_cast<std::uint32_t>(rng() % 4)}; };
    Report out;
    auto add = [&](const std::string& law, int k, Status st, int depth, std::string detail) {
        out.add(Record{"opens", law + "#" + std::to_string(k), st, depth, std::move(detail)});
    };
    auto status = [](const Decision3& d) {
        return d.is_yes() ? Status::Pass : d.is_no() ? Status::Fail : Status::Undecided;
    };
    for (int k = 0; k < cases; ++k) {
        Term s = term(), u = term(), h = term();
        Atom a = atom();
        std::string detail = atom_name(a) + " | " + print(s) + " | " + print(u);

        // (ƛa.⟦s⟧)∗⟦u⟧ ⊆ ⟦s⟧[a→u]
        Decision3 beta = open_subset(eng, open_app(open_lam(a, denote(s)), denote(u)),
                                     open_subst(denote(s), a, u));
        add("beta", k, status(beta), beta.depth, detail);

        // a#s: ⟦s⟧ ⊆ ƛa.(⟦s⟧∗℘a)
        Atom b = s.has_free(a) ? fresh_atom(s.free_atoms()) : a;
        if (eng.theory().eta_expansion) {
            Decision3 eta =
                open_subset(eng, denote(s), open_lam(b, open_app(denote(s), denote(Term::var(b)))));
            add("eta", k, status(eta), eta.depth, atom_name(b) + " | " + print(s));
        } else {
            add("eta", k, Status::Skipped, -1, "eta-expansion disabled");
        }

        // (U⊘X)∗U ⊆ X with U = ℘h, X = (s↑)•
        OpenSet U = OpenSet::principal(h), X = denote(s);
        Decision3 counit = open_subset(eng, open_app(open_ppa(PointExpr::up(h), X), U), X);
        add("adjoint-counit", k, status(counit), counit.depth, print(h) + " | " + print(s));

        // X ⊆ U⊘(X∗U), decided through probes on the Ppa side
        {
            OpenSet rhs = open_ppa(PointExpr::up(h), open_app(X, U));
            Atom z = fresh_atom(s.free_atoms());
            std::vector<Term> probes{s, Term::app(Term::lam(z, Term::var(z)), s)};
            Decision3 d = subset(eng, rhs.disjuncts().front(), PointExpr::up(s), probes);
            add("adjoint-unit", k, status(d), d.depth, print(h) + " | " + print(s));
        }

        // unions: ƛ, ∀, σ, ∗ and ⊘ act disjunct by disjunct
        {
            OpenSet Y = denote(u);
            OpenSet XY = open_join(X, Y);
            bool lam = open_lam(a, XY) == open_join(open_lam(a, X), open_lam(a, Y));
            bool all = open_forall(a, XY) == open_join(open_forall(a, X), open_forall(a, Y));
            bool sub = open_subst(XY, a, h) == open_join(open_subst(X, a, h), open_subst(Y, a, h));
            bool app = open_app(XY, U) == open_join(open_app(X, U), open_app(Y, U));
            bool ppa = open_ppa(PointExpr::up(h), XY) ==
                       open_join(open_ppa(PointExpr::up(h), X), open_ppa(PointExpr::up(h), Y));
            add("lam-union", k, lam ? Status::Pass : Status::Fail, -1, detail);
            add("join-distrib", k, all && sub && app && ppa ? Status::Pass : Status::Fail, -1, detail);
        }

        // p•∩q• = (p∧q)•
        {
            OpenSet Y = denote(u);
            bool ok = open_meet(X, Y) == OpenSet::up(normalize(PointExpr::meet(X.disjuncts().front(),
                                                                                 Y.disjuncts().front())));
            add("meet", k, ok ? Status::Pass : Status::Fail, -1, detail);
        }
    }
    return out;
}

}  // namespace nomlam
