#include "nomlam/points.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace nomlam {

// ---------------------------------------------------------------- Point

Point::Point(std::vector<Term> gens) : gens_(std::move(gens)) {
    std::sort(gens_.begin(), gens_.end(), TermLess{});
    gens_.erase(std::unique(gens_.begin(), gens_.end()), gens_.end());
}

AtomSet Point::support() const {
    AtomSet s;
    for (const Term& g : gens_) s.insert(g.free_atoms_sorted().begin(), g.free_atoms_sorted().end());
    return s;
}

Point up(const Term& s) { return Point({s}); }

Point meet(const Point& p, const Point& q) {
    std::vector<Term> g = p.generators();
    g.insert(g.end(), q.generators().begin(), q.generators().end());
    return Point(std::move(g));
}

Point papp(const Point& p, const Point& q) {
    std::vector<Term> g;
    for (const Term& x : p.generators())
        for (const Term& y : q.generators()) g.push_back(Term::app(x, y));
    return Point(std::move(g));
}

Point psubst(const Point& p, Atom a, const Term& u) {
    std::vector<Term> g;
    for (const Term& x : p.generators()) g.push_back(subst(x, a, u));
    return Point(std::move(g));
}

Point point_act(const Perm& pi, const Point& p) {
    std::vector<Term> g;
    for (const Term& x : p.generators()) g.push_back(term_act(pi, x));
    return Point(std::move(g));
}

Point prune(const Engine& eng, const Point& p) {
    const auto& gs = p.generators();
    std::vector<bool> drop(gs.size(), false);
    for (std::size_t i = 0; i < gs.size(); ++i)
        for (std::size_t j = 0; j < gs.size(); ++j)
            if (i != j && !drop[j] && !drop[i] && eng.reach(gs[j], gs[i]).is_yes()) drop[i] = true;
    std::vector<Term> keep;
    for (std::size_t i = 0; i < gs.size(); ++i)
        if (!drop[i]) keep.push_back(gs[i]);
    return Point(std::move(keep));
}

// ---------------------------------------------------------------- PointExpr

struct PointExpr::Node {
    PointKind kind;
    Point point;
    std::optional<PointExpr> l, r;
    std::optional<Term> term;
    Atom atom;
    Perm perm;
};

PointExpr PointExpr::gens(Point p) {
    auto n = std::make_shared<Node>();
    n->kind = PointKind::Gens;
    n->point = std::move(p);
    return PointExpr(n);
}

PointExpr PointExpr::meet(PointExpr l, PointExpr r) {
    auto n = std::make_shared<Node>();
    n->kind = PointKind::Meet;
    n->l = std::move(l);
    n->r = std::move(r);
    return PointExpr(n);
}

PointExpr PointExpr::app(PointExpr l, PointExpr r) {
    auto n = std::make_shared<Node>();
    n->kind = PointKind::App;
    n->l = std::move(l);
    n->r = std::move(r);
    return PointExpr(n);
}

PointExpr PointExpr::ppa(const Term& h, PointExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = PointKind::Ppa;
    n->term = h;
    n->l = std::move(e);
    return PointExpr(n);
}

namespace {
std::shared_ptr<PointExpr::Node> binder_node(PointKind k, Atom a) {
    auto n = std::make_shared<PointExpr::Node>();
    n->kind = k;
    n->atom = a;
    return n;
}
}  // namespace

PointExpr PointExpr::forall(Atom a, PointExpr e) {
    auto n = binder_node(PointKind::Forall, a);
    n->l = std::move(e);
    return PointExpr(n);
}

PointExpr PointExpr::exists(Atom a, PointExpr e) {
    auto n = binder_node(PointKind::Exists, a);
    n->l = std::move(e);
    return PointExpr(n);
}

PointExpr PointExpr::nu(Atom a, PointExpr e) {
    auto n = binder_node(PointKind::Nu, a);
    n->l = std::move(e);
    return PointExpr(n);
}

PointExpr PointExpr::subst(PointExpr e, Atom a, const Term& u) {
    auto n = binder_node(PointKind::Subst, a);
    n->l = std::move(e);
    n->term = u;
    return PointExpr(n);
}

PointExpr PointExpr::amgis(PointExpr e, const Term& u, Atom a) {
    auto n = binder_node(PointKind::Amgis, a);
    n->l = std::move(e);
    n->term = u;
    return PointExpr(n);
}

PointExpr PointExpr::perm(const Perm& pi, PointExpr e) {
    auto n = std::make_shared<Node>();
    n->kind = PointKind::PermAct;
    n->perm = pi;
    n->l = std::move(e);
    return PointExpr(n);
}

PointKind PointExpr::kind() const { return n_->kind; }
const Point& PointExpr::point() const { return n_->point; }
const PointExpr& PointExpr::left() const { return *n_->l; }
const PointExpr& PointExpr::right() const { return *n_->r; }
const PointExpr& PointExpr::body() const { return *n_->l; }
const Term& PointExpr::term() const { return *n_->term; }
Atom PointExpr::atom() const { return n_->atom; }
const Perm& PointExpr::perm() const { return n_->perm; }

bool operator==(const PointExpr& x, const PointExpr& y) {
    if (x.n_ == y.n_) return true;
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
        case PointKind::Gens: return x.point() == y.point();
        case PointKind::Meet:
        case PointKind::App: return x.left() == y.left() && x.right() == y.right();
        case PointKind::Ppa: return x.term() == y.term() && x.body() == y.body();
        case PointKind::Forall:
        case PointKind::Exists:
        case PointKind::Nu: return x.atom() == y.atom() && x.body() == y.body();
        case PointKind::Subst:
        case PointKind::Amgis:
            return x.atom() == y.atom() && x.term() == y.term() && x.body() == y.body();
        case PointKind::PermAct: return x.perm() == y.perm() && x.body() == y.body();
    }
    return false;
}

// ---------------------------------------------------------------- support / action

AtomSet support(const PointExpr& e) {
    switch (e.kind()) {
        case PointKind::Gens: return e.point().support();
        case PointKind::Meet:
        case PointKind::App: {
            AtomSet s = support(e.left());
            AtomSet r = support(e.right());
            s.insert(r.begin(), r.end());
            return s;
        }
        case PointKind::Ppa: {
            AtomSet s = support(e.body());
            AtomSet h = e.term().free_atoms();
            s.insert(h.begin(), h.end());
            return s;
        }
        case PointKind::Forall:
        case PointKind::Exists:
        case PointKind::Nu: {
            AtomSet s = support(e.body());
            s.erase(e.atom());
            return s;
        }
        case PointKind::Subst: {
            AtomSet s = support(e.body());
            AtomSet u = e.term().free_atoms();
            // a#u makes a fresh for the result; otherwise a may survive through u
            if (!s.count(e.atom())) return s;
            s.erase(e.atom());
            s.insert(u.begin(), u.end());
            return s;
        }
        case PointKind::Amgis: {
            AtomSet s = support(e.body());
            AtomSet u = e.term().free_atoms();
            s.insert(u.begin(), u.end());
            s.insert(e.atom());
            return s;
        }
        case PointKind::PermAct: return act(e.perm(), support(e.body()));
    }
    return {};
}

PointExpr point_act(const Perm& pi, const PointExpr& e) {
    if (pi.is_identity()) return e;
    switch (e.kind()) {
        case PointKind::Gens: return PointExpr::gens(point_act(pi, e.point()));
        case PointKind::Meet:
            return PointExpr::meet(point_act(pi, e.left()), point_act(pi, e.right()));
        case PointKind::App:
            return PointExpr::app(point_act(pi, e.left()), point_act(pi, e.right()));
        case PointKind::Ppa: return PointExpr::ppa(term_act(pi, e.term()), point_act(pi, e.body()));
        case PointKind::Forall: return PointExpr::forall(pi(e.atom()), point_act(pi, e.body()));
        case PointKind::Exists: return PointExpr::exists(pi(e.atom()), point_act(pi, e.body()));
        case PointKind::Nu: return PointExpr::nu(pi(e.atom()), point_act(pi, e.body()));
        case PointKind::Subst:
            return PointExpr::subst(point_act(pi, e.body()), pi(e.atom()), term_act(pi, e.term()));
        case PointKind::Amgis:
            return PointExpr::amgis(point_act(pi, e.body()), term_act(pi, e.term()), pi(e.atom()));
        case PointKind::PermAct: return point_act(compose(pi, e.perm()), e.body());
    }
    return e;
}

// ---------------------------------------------------------------- normalize

namespace {

bool is_atom(const Term& t, Atom a) { return t.kind() == TermKind::Var && t.atom() == a; }

PointExpr combine_meet(PointExpr l, PointExpr r) {
    if (l.canonical() && r.canonical()) return PointExpr::gens(meet(l.point(), r.point()));
    return PointExpr::meet(std::move(l), std::move(r));
}

PointExpr combine_app(PointExpr l, PointExpr r) {
    if (l.canonical() && r.canonical()) return PointExpr::gens(papp(l.point(), r.point()));
    return PointExpr::app(std::move(l), std::move(r));
}

// n is already normalized
PointExpr subst_normal(const PointExpr& n, Atom a, const Term& u) {
    if (is_atom(u, a) || !support(n).count(a)) return n;
    switch (n.kind()) {
        case PointKind::Gens: return PointExpr::gens(psubst(n.point(), a, u));
        case PointKind::Meet:
            return combine_meet(subst_normal(n.left(), a, u), subst_normal(n.right(), a, u));
        case PointKind::App:
            return combine_app(subst_normal(n.left(), a, u), subst_normal(n.right(), a, u));
        case PointKind::Ppa: {
            const Term& h = n.term();
            if (h.kind() == TermKind::Var && h.atom() != a && !u.has_free(h.atom()))
                return PointExpr::ppa(h, subst_normal(n.body(), a, u));
            break;
        }
        default: break;
    }
    return PointExpr::subst(n, a, u);
}

}  // namespace

PointExpr normalize(const PointExpr& e) {
    switch (e.kind()) {
        case PointKind::Gens: return e;
        case PointKind::Meet: return combine_meet(normalize(e.left()), normalize(e.right()));
        case PointKind::App: return combine_app(normalize(e.left()), normalize(e.right()));
        case PointKind::Ppa: return PointExpr::ppa(e.term(), normalize(e.body()));
        case PointKind::Forall: {
            Atom a = e.atom();
            PointExpr b = normalize(e.body());
            if (!support(b).count(a)) return b;
            if (b.kind() == PointKind::Ppa && is_atom(b.term(), a) && b.body().canonical() &&
                b.body().point().principal())
                return PointExpr::up(Term::lam(a, b.body().point().generators().front()));
            return PointExpr::forall(a, b);
        }
        case PointKind::Exists: {
            PointExpr b = normalize(e.body());
            if (!support(b).count(e.atom())) return b;
            return PointExpr::exists(e.atom(), b);
        }
        case PointKind::Nu: {
            PointExpr b = normalize(e.body());
            if (!support(b).count(e.atom())) return b;
            return PointExpr::nu(e.atom(), b);
        }
        case PointKind::Subst: return subst_normal(normalize(e.body()), e.atom(), e.term());
        case PointKind::Amgis: return PointExpr::amgis(normalize(e.body()), e.term(), e.atom());
        case PointKind::PermAct: return normalize(point_act(e.perm(), e.body()));
    }
    return e;
}

// ---------------------------------------------------------------- member

namespace {

Decision3 member_gens(const Engine& eng, const Term& t, const Point& p) {
    Decision3 d = Decision3::no();
    for (const Term& g : p.generators()) {
        d = or3(d, eng.reach(g, t));
        if (d.is_yes()) return d;
    }
    return d;
}

}  // namespace

std::vector<Term> forall_probes(const Term& t, const PointExpr& body, Atom a) {
    std::vector<Term> probes{Term::var(a)};
    AtomSet atoms = t.free_atoms();
    AtomSet sb = support(body);
    atoms.insert(sb.begin(), sb.end());
    AtomSet avoid = atoms;
    avoid.insert(a);
    probes.push_back(Term::var(fresh_atom(avoid)));
    for (Atom x : atoms) probes.push_back(Term::var(x));
    for (const Term& s : subterms(t)) probes.push_back(s);
    std::vector<Term> out;
    for (Term& p : probes)
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
    return out;
}

Decision3 member(const Engine& eng, const Term& t, const PointExpr& e) {
    switch (e.kind()) {
        case PointKind::Gens: return member_gens(eng, t, e.point());
        case PointKind::Meet: {
            Decision3 l = member(eng, t, e.left());
            if (l.is_yes()) return l;
            return or3(l, member(eng, t, e.right()));
        }
        case PointKind::App: {
            PointExpr n = normalize(e);
            if (n.canonical()) return member_gens(eng, t, n.point());
            // t1 t2 with t1 in the left and t2 in the right lies in (t1 t2)↑
            if (t.kind() == TermKind::App) {
                Decision3 l = member(eng, t.fun(), n.left());
                if (l.is_yes()) {
                    Decision3 r = member(eng, t.arg(), n.right());
                    if (r.is_yes()) return Decision3::yes(std::max(l.depth, r.depth));
                }
            }
            // (λz.t) g → t for z fresh, with g any generator on the right
            if (eng.theory().beta && n.right().canonical() && !n.right().point().empty()) {
                Atom z = fresh_atom(t.free_atoms());
                Decision3 l = member(eng, Term::lam(z, t), n.left());
                if (l.is_yes()) return Decision3::yes(l.depth + 1);
            }
            return Decision3::unknown();
        }
        case PointKind::Ppa: {
            PointExpr b = normalize(e.body());
            if (!b.canonical()) return Decision3::unknown();
            Term th = Term::app(t, e.term());
            Decision3 d = Decision3::yes(0);
            for (const Term& g : b.point().generators()) {
                d = and3(d, eng.reach(th, g));
                if (d.is_no()) return d;
            }
            return d;
        }
        case PointKind::Forall: {
            Atom a = e.atom();
            if (!support(e.body()).count(a)) return member(eng, t, e.body());
            // ∀a.p is the union of the p[a⇐u]; any probe u witnessing membership is a certificate
            for (const Term& u : forall_probes(t, e.body(), a)) {
                Decision3 d = member(eng, t, PointExpr::subst(e.body(), a, u));
                if (d.is_yes()) return d;
            }
            return Decision3::unknown();
        }
        case PointKind::Exists: {
            Atom a = e.atom();
            PointExpr b = normalize(e.body());
            if (b.canonical()) {
                for (const Term& g : b.point().generators()) {
                    if (g.has_free(a)) continue;
                    Decision3 d = eng.reach(g, t);
                    if (d.is_yes()) return d;
                }
            }
            // ∃a.p ⊆ p
            Decision3 inner = member(eng, t, b);
            if (inner.is_no()) return inner;
            return Decision3::unknown();
        }
        case PointKind::Nu: {
            AtomSet avoid = t.free_atoms();
            AtomSet sb = support(e.body());
            avoid.insert(sb.begin(), sb.end());
            avoid.insert(e.atom());
            Atom b = fresh_atom(avoid);
            return member(eng, term_act(swap(b, e.atom()), t), e.body());
        }
        case PointKind::Subst: {
            if (is_atom(e.term(), e.atom())) return member(eng, t, e.body());
            PointExpr n = normalize(e);
            if (n.kind() != PointKind::Subst) return member(eng, t, n);
            return Decision3::unknown();
        }
        case PointKind::Amgis: return member(eng, subst(t, e.atom(), e.term()), e.body());
        case PointKind::PermAct: return member(eng, term_act(invert(e.perm()), t), e.body());
    }
    return Decision3::unknown();
}

// ---------------------------------------------------------------- subset

Decision3 subset(const Engine& eng, const PointExpr& e1, const PointExpr& e2,
                 const std::vector<Term>& probes) {
    PointExpr n1 = normalize(e1);
    PointExpr n2 = normalize(e2);
    if (n1 == n2) return Decision3::yes(0);
    Decision3 structural = Decision3::unknown(false);
    switch (n1.kind()) {
        case PointKind::Gens: {
            // up-closure: generators suffice
            Decision3 d = Decision3::yes(0);
            for (const Term& g : n1.point().generators()) {
                d = and3(d, member(eng, g, n2));
                if (d.is_no()) return d;
            }
            return d;
        }
        case PointKind::Meet: {
            Decision3 l = subset(eng, n1.left(), n2, probes);
            if (l.is_no()) return l;
            structural = and3(l, subset(eng, n1.right(), n2, probes));
            break;
        }
        case PointKind::Forall:
            // a#q: ∀a.p ⊆ q iff p ⊆ q
            if (!support(n2).count(n1.atom())) structural = subset(eng, n1.body(), n2, probes);
            break;
        default: break;
    }
    if (!structural.is_unknown()) return structural;
    // a#q and q ⊆ p give q ⊆ ∃a.p
    if (n2.kind() == PointKind::Exists && !support(n1).count(n2.atom())) {
        Decision3 d = subset(eng, n1, n2.body(), probes);
        if (d.is_yes()) return d;
    }
    for (const Term& t : probes) {
        Decision3 m1 = member(eng, t, n1);
        if (!m1.is_yes()) continue;
        if (member(eng, t, n2).is_no()) return Decision3::no();
    }
    return Decision3::unknown();
}

// ---------------------------------------------------------------- text

namespace {

std::string print_gens(const Point& p) {
    const auto& g = p.generators();
    if (g.empty()) return "empty";
    std::string out = "up(" + print(g.back()) + ")";
    for (std::size_t i = g.size() - 1; i-- > 0;) out = "meet(up(" + print(g[i]) + ")," + out + ")";
    return out;
}

struct PointParser {
    std::string_view src;
    std::size_t pos = 0;

    void skip() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool keyword(std::string_view kw) {
        skip();
        if (src.substr(pos, kw.size()) != kw) return false;
        std::size_t end = pos + kw.size();
        if (end < src.size() && std::isalnum(static_cast<unsigned char>(src[end]))) return false;
        pos = end;
        return true;
    }
    void expect(char c) {
        skip();
        if (pos >= src.size() || src[pos] != c)
            throw ParseError(std::string("expected '") + c + "'", pos);
        ++pos;
    }
    Atom atom() {
        skip();
        std::size_t start = pos;
        while (pos < src.size() && std::isalnum(static_cast<unsigned char>(src[pos]))) ++pos;
        auto a = parse_atom_name(src.substr(start, pos - start));
        if (!a) throw ParseError("expected atom", start);
        return *a;
    }
    // term text up to the next top-level ',' or ')'
    Term term() {
        skip();
        std::size_t start = pos;
        int depth = 0;
        while (pos < src.size()) {
            char c = src[pos];
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0) break;
                --depth;
            }
            if (c == ',' && depth == 0) break;
            ++pos;
        }
        try {
            return parse_term(src.substr(start, pos - start));
        } catch (const ParseError& e) {
            throw ParseError(std::string("in term: ") + e.what(), start + e.position());
        }
    }
    PointExpr expr() {
        if (keyword("up")) {
            expect('(');
            Term t = term();
            expect(')');
            return PointExpr::up(t);
        }
        if (keyword("empty")) return PointExpr::empty();
        if (keyword("meet") || keyword("app")) {
            bool is_meet = src[pos - 1] == 't';
            expect('(');
            PointExpr l = expr();
            expect(',');
            PointExpr r = expr();
            expect(')');
            return is_meet ? PointExpr::meet(l, r) : PointExpr::app(l, r);
        }
        if (keyword("ppa")) {
            expect('(');
            Term h = term();
            expect(',');
            PointExpr e = expr();
            expect(')');
            return PointExpr::ppa(h, e);
        }
        for (auto [kw, k] : {std::pair{"forall", PointKind::Forall}, std::pair{"exists", PointKind::Exists},
                             std::pair{"nu", PointKind::Nu}}) {
            if (keyword(kw)) {
                Atom a = atom();
                expect('.');
                PointExpr e = expr();
                if (k == PointKind::Forall) return PointExpr::forall(a, e);
                if (k == PointKind::Exists) return PointExpr::exists(a, e);
                return PointExpr::nu(a, e);
            }
        }
        if (keyword("subst")) {
            expect('(');
            PointExpr e = expr();
            expect(',');
            Atom a = atom();
            expect(',');
            Term u = term();
            expect(')');
            return PointExpr::subst(e, a, u);
        }
        if (keyword("amgis")) {
            expect('(');
            PointExpr e = expr();
            expect(',');
            Term u = term();
            expect(',');
            Atom a = atom();
            expect(')');
            return PointExpr::amgis(e, u, a);
        }
        if (keyword("perm")) {
            expect('(');
            skip();
            std::size_t start = pos;
            while (pos < src.size() && src[pos] == '(') {
                while (pos < src.size() && src[pos] != ')') ++pos;
                ++pos;
                skip();
            }
            auto pi = parse_perm(src.substr(start, pos - start));
            if (!pi) throw ParseError("bad permutation", start);
            expect(',');
            PointExpr e = expr();
            expect(')');
            return PointExpr::perm(*pi, e);
        }
        skip();
        throw ParseError("expected point expression", pos);
    }
};

}  // namespace

std::string print(const PointExpr& e) {
    switch (e.kind()) {
        case PointKind::Gens: return print_gens(e.point());
        case PointKind::Meet: return "meet(" + print(e.left()) + "," + print(e.right()) + ")";
        case PointKind::App: return "app(" + print(e.left()) + "," + print(e.right()) + ")";
        case PointKind::Ppa: return "ppa(" + print(e.term()) + "," + print(e.body()) + ")";
        case PointKind::Forall: return "forall " + atom_name(e.atom()) + ". " + print(e.body());
        case PointKind::Exists: return "exists " + atom_name(e.atom()) + ". " + print(e.body());
        case PointKind::Nu: return "nu " + atom_name(e.atom()) + ". " + print(e.body());
        case PointKind::Subst:
            return "subst(" + print(e.body()) + "," + atom_name(e.atom()) + "," + print(e.term()) + ")";
        case PointKind::Amgis:
            return "amgis(" + print(e.body()) + "," + print(e.term()) + "," + atom_name(e.atom()) + ")";
        case PointKind::PermAct: {
            std::string p = to_string(e.perm());
            if (p == "id") p = "";
            return "perm(" + p + "," + print(e.body()) + ")";
        }
    }
    return "?";
}

PointExpr parse_point(std::string_view text) {
    PointParser p{text};
    PointExpr e = p.expr();
    p.skip();
    if (p.pos != text.size()) throw ParseError("unexpected input", p.pos);
    return e;
}

}  // namespace nomlam
