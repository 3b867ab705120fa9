#include "nomlam/terms.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>

namespace nomlam {

namespace detail {

enum class Tag : std::uint8_t { Free, Bound, Lam, App };

struct Node {
    Tag tag;
    Atom atom;              // Free: the atom; Lam: name hint
    std::uint32_t index;    // Bound
    std::shared_ptr<const Node> a, b;  // Lam: body in a; App: a b
    std::size_t hash;
    std::uint32_t size;
    std::uint32_t need;     // 1 + largest dangling bound index, 0 if locally closed
    std::shared_ptr<const std::vector<Atom>> free; // sorted, shared between nodes
};

}  // namespace detail

using detail::Node;
using detail::Tag;
using NodePtr = std::shared_ptr<const Node>;

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

NodePtr mk_free(Atom x) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Free;
    n->atom = x;
    n->index = 0;
    n->hash = mix(0x51, x.id);
    n->size = 1;
    n->need = 0;
    n->free = std::make_shared<const std::vector<Atom>>(std::vector<Atom>{x});
    return n;
}

NodePtr mk_bound(std::uint32_t i) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Bound;
    n->index = i;
    n->hash = mix(0xb0, i);
    n->size = 1;
    n->need = i + 1;
    static const auto empty = std::make_shared<const std::vector<Atom>>();
    n->free = empty;
    return n;
}

NodePtr mk_lam(Atom hint, NodePtr body) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Lam;
    n->atom = hint;
    n->index = 0;
    n->hash = mix(0x1a, body->hash);
    n->size = body->size + 1;
    n->need = body->need > 0 ? body->need - 1 : 0;
    n->free = body->free;
    n->a = std::move(body);
    return n;
}

NodePtr mk_app(NodePtr f, NodePtr x) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::App;
    n->atom = Atom{};
    n->index = 0;
    n->hash = mix(mix(0xa9, f->hash), x->hash);
    n->size = f->size + x->size;
    n->need = std::max(f->need, x->need);
    const auto& ff = *f->free;
    const auto& xf = *x->free;
    if (std::includes(ff.begin(), ff.end(), xf.begin(), xf.end())) {
        n->free = f->free;
    } else if (std::includes(xf.begin(), xf.end(), ff.begin(), ff.end())) {
        n->free = x->free;
    } else {
        std::vector<Atom> u;
        u.reserve(ff.size() + xf.size());
        std::set_union(ff.begin(), ff.end(), xf.begin(), xf.end(), std::back_inserter(u));
        n->free = std::make_shared<const std::vector<Atom>>(std::move(u));
    }
    n->a = std::move(f);
    n->b = std::move(x);
    return n;
}

bool has(const Node& n, Atom x) { return std::binary_search(n.free->begin(), n.free->end(), x); }

// Replace Bound(level) by r (r locally closed).
NodePtr open_at(const NodePtr& n, std::uint32_t level, const NodePtr& r) {
    if (n->need <= level) return n;
    switch (n->tag) {
        case Tag::Bound: return n->index == level ? r : n;
        case Tag::Lam: return mk_lam(n->atom, open_at(n->a, level + 1, r));
        case Tag::App: return mk_app(open_at(n->a, level, r), open_at(n->b, level, r));
        case Tag::Free: return n;
    }
    return n;
}

// Replace Free(x) by Bound(level).
NodePtr close_at(const NodePtr& n, Atom x, std::uint32_t level) {
    if (!has(*n, x)) return n;
    switch (n->tag) {
        case Tag::Free: return mk_bound(level);
        case Tag::Lam: return mk_lam(n->atom, close_at(n->a, x, level + 1));
        case Tag::App: return mk_app(close_at(n->a, x, level), close_at(n->b, x, level));
        case Tag::Bound: return n;
    }
    return n;
}

NodePtr subst_node(const NodePtr& n, Atom x, const NodePtr& u) {
    if (!has(*n, x)) return n;
    switch (n->tag) {
        case Tag::Free: return u;
        case Tag::Lam: return mk_lam(n->atom, subst_node(n->a, x, u));
        case Tag::App: return mk_app(subst_node(n->a, x, u), subst_node(n->b, x, u));
        case Tag::Bound: return n;
    }
    return n;
}

NodePtr subst_many_node(const NodePtr& n, const std::map<Atom, NodePtr>& m) {
    bool touched = false;
    for (Atom x : *n->free)
        if (m.count(x)) {
            touched = true;
            break;
        }
    if (!touched) return n;
    switch (n->tag) {
        case Tag::Free: return m.at(n->atom);
        case Tag::Lam: return mk_lam(n->atom, subst_many_node(n->a, m));
        case Tag::App: return mk_app(subst_many_node(n->a, m), subst_many_node(n->b, m));
        case Tag::Bound: return n;
    }
    return n;
}

NodePtr act_node(const NodePtr& n, const Perm& p) {
    switch (n->tag) {
        case Tag::Free: {
            Atom y = p(n->atom);
            return y == n->atom ? n : mk_free(y);
        }
        case Tag::Lam: return mk_lam(p(n->atom), act_node(n->a, p));
        case Tag::App: return mk_app(act_node(n->a, p), act_node(n->b, p));
        case Tag::Bound: return n;
    }
    return n;
}

bool node_eq(const Node* x, const Node* y) {
    while (true) {
        if (x == y) return true;
        if (x->hash != y->hash || x->size != y->size || x->tag != y->tag) return false;
        switch (x->tag) {
            case Tag::Free: return x->atom == y->atom;
            case Tag::Bound: return x->index == y->index;
            case Tag::Lam:
                x = x->a.get();
                y = y->a.get();
                continue;
            case Tag::App:
                if (!node_eq(x->a.get(), y->a.get())) return false;
                x = x->b.get();
                y = y->b.get();
                continue;
        }
        return false;
    }
}

int node_cmp(const Node* x, const Node* y) {
    if (x == y) return 0;
    if (x->size != y->size) return x->size < y->size ? -1 : 1;
    if (x->tag != y->tag) return x->tag < y->tag ? -1 : 1;
    switch (x->tag) {
        case Tag::Free: return x->atom == y->atom ? 0 : (x->atom < y->atom ? -1 : 1);
        case Tag::Bound: return x->index == y->index ? 0 : (x->index < y->index ? -1 : 1);
        case Tag::Lam: return node_cmp(x->a.get(), y->a.get());
        case Tag::App: {
            int c = node_cmp(x->a.get(), y->a.get());
            return c != 0 ? c : node_cmp(x->b.get(), y->b.get());
        }
    }
    return 0;
}

AtomSet to_set(const std::vector<Atom>& v) { return AtomSet(v.begin(), v.end()); }

// indices >= cutoff move by delta
NodePtr shift(const NodePtr& n, int delta, std::uint32_t cutoff) {
    if (delta == 0 || n->need <= cutoff) return n;
    switch (n->tag) {
        case Tag::Bound: return mk_bound(static_cast<std::uint32_t>(static_cast<int>(n->index) + delta));
        case Tag::Lam: return mk_lam(n->atom, shift(n->a, delta, cutoff + 1));
        case Tag::App: return mk_app(shift(n->a, delta, cutoff), shift(n->b, delta, cutoff));
        case Tag::Free: return n;
    }
    return n;
}

// Bound(j) := r, where r is valid at the level of Bound(j)
NodePtr subst_index(const NodePtr& n, std::uint32_t j, const NodePtr& r) {
    if (n->need <= j) return n;
    switch (n->tag) {
        case Tag::Bound: return n->index == j ? r : n;
        case Tag::Lam: return mk_lam(n->atom, subst_index(n->a, j + 1, shift(r, 1, 0)));
        case Tag::App: return mk_app(subst_index(n->a, j, r), subst_index(n->b, j, r));
        case Tag::Free: return n;
    }
    return n;
}

}  // namespace

Term Term::var(Atom a) { return Term(mk_free(a)); }

Term Term::lam(Atom a, const Term& body) { return lam(a, body, a); }

Term Term::lam(Atom a, const Term& body, Atom hint) {
    return Term(mk_lam(hint, close_at(body.n_, a, 0)));
}

Term Term::app(const Term& fun, const Term& arg) { return Term(mk_app(fun.n_, arg.n_)); }

TermKind Term::kind() const {
    switch (n_->tag) {
        case Tag::Lam: return TermKind::Lam;
        case Tag::App: return TermKind::App;
        default: return TermKind::Var;
    }
}

Atom Term::atom() const {
    if (n_->tag != Tag::Free) throw std::logic_error("atom() on non-variable");
    return n_->atom;
}

Term Term::fun() const {
    if (n_->tag != Tag::App) throw std::logic_error("fun() on non-application");
    return Term(n_->a);
}

Term Term::arg() const {
    if (n_->tag != Tag::App) throw std::logic_error("arg() on non-application");
    return Term(n_->b);
}

Atom Term::name_hint() const {
    if (n_->tag != Tag::Lam) throw std::logic_error("name_hint() on non-abstraction");
    return n_->atom;
}

std::pair<Atom, Term> Term::binder() const {
    if (n_->tag != Tag::Lam) throw std::logic_error("binder() on non-abstraction");
    Atom x = has(*n_, n_->atom) ? fresh_atom(to_set(*n_->free)) : n_->atom;
    return {x, Term(open_at(n_->a, 0, mk_free(x)))};
}

std::pair<Atom, Term> Term::binder_avoiding(const AtomSet& avoid) const {
    if (n_->tag != Tag::Lam) throw std::logic_error("binder_avoiding() on non-abstraction");
    AtomSet all = avoid;
    all.insert(n_->free->begin(), n_->free->end());
    Atom x = fresh_atom(all);
    return {x, Term(open_at(n_->a, 0, mk_free(x)))};
}

std::size_t Term::size() const { return n_->size; }
std::size_t Term::hash() const { return n_->hash; }
const std::vector<Atom>& Term::free_atoms_sorted() const { return *n_->free; }
AtomSet Term::free_atoms() const { return to_set(*n_->free); }
bool Term::has_free(Atom a) const { return has(*n_, a); }

bool operator==(const Term& s, const Term& t) { return node_eq(s.n_.get(), t.n_.get()); }

bool term_less(const Term& s, const Term& t) { return node_cmp(s.node().get(), t.node().get()) < 0; }

bool alpha_eq(const Term& s, const Term& t) { return s == t; }
bool is_fresh(Atom a, const Term& t) { return !t.has_free(a); }
AtomSet support(const Term& t) { return t.free_atoms(); }

Term term_act(const Perm& p, const Term& t) {
    if (p.is_identity()) return t;
    return Term(act_node(t.node(), p));
}

Term subst(const Term& s, Atom a, const Term& u) { return Term(subst_node(s.node(), a, u.node())); }

Term subst_many(const Term& s, const std::vector<std::pair<Atom, Term>>& m) {
    std::map<Atom, NodePtr> mm;
    for (auto& [x, u] : m) mm.emplace(x, u.node());
    return Term(subst_many_node(s.node(), mm));
}

Term instantiate(const Term& lam, const Term& arg) {
    if (lam.kind() != TermKind::Lam) throw std::logic_error("instantiate on non-abstraction");
    return Term(open_at(lam.node()->a, 0, arg.node()));
}

std::vector<Term> subterms(const Term& t) {
    std::vector<Term> out;
    std::vector<Term> stack{t};
    while (!stack.empty()) {
        Term x = stack.back();
        stack.pop_back();
        out.push_back(x);
        if (x.kind() == TermKind::App) {
            stack.push_back(x.arg());
            stack.push_back(x.fun());
        } else if (x.kind() == TermKind::Lam) {
            stack.push_back(x.binder().second);
        }
    }
    return out;
}

namespace detail {

bool is_bound(const Term& t) { return t.node()->tag == Tag::Bound; }
bool locally_closed(const Term& t) { return t.node()->need == 0; }

Term raw_body(const Term& lam) { return Term(lam.node()->a); }
Term raw_lam(Atom hint, const Term& body) { return Term(mk_lam(hint, body.node())); }

Term raw_beta(const Term& lam, const Term& arg) {
    const NodePtr& body = lam.node()->a;
    NodePtr r = subst_index(body, 0, shift(arg.node(), 1, 0));
    return Term(shift(r, -1, 0));
}

Term raw_eta(const Term& t) {
    Atom c = fresh_atom(to_set(*t.node()->free));
    return Term(mk_lam(c, mk_app(shift(t.node(), 1, 0), mk_bound(0))));
}

}  // namespace detail

// ---------------------------------------------------------------- parsing

namespace {

struct Parser {
    std::string_view src;
    std::size_t pos = 0;

    void skip() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool at_end() {
        skip();
        return pos >= src.size();
    }
    // "λ" in UTF-8 is CE BB
    bool at_lambda() {
        skip();
        if (pos >= src.size()) return false;
        if (src[pos] == '\\') return true;
        if (src.substr(pos, 2) == "\xCE\xBB") return true;
        if (src.substr(pos, 3) == "lam" &&
            (pos + 3 >= src.size() || !std::isalnum(static_cast<unsigned char>(src[pos + 3]))))
            return true;
        return false;
    }
    void eat_lambda() {
        if (src[pos] == '\\')
            pos += 1;
        else if (src[pos] == 'l')
            pos += 3;
        else
            pos += 2;
    }
    bool at_atom() {
        skip();
        return pos < src.size() && src[pos] >= 'a' && src[pos] <= 'z' && !at_lambda();
    }
    Atom atom() {
        skip();
        std::size_t start = pos;
        if (pos >= src.size() || src[pos] < 'a' || src[pos] > 'z')
            throw ParseError("expected atom", pos);
        ++pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        auto a = parse_atom_name(src.substr(start, pos - start));
        if (!a) throw ParseError("bad atom name", start);
        return *a;
    }
    Term lambda() {
        eat_lambda();
        std::vector<Atom> names;
        names.push_back(atom());
        while (true) {
            skip();
            if (pos < src.size() && src[pos] == '.') break;
            if (!at_atom()) throw ParseError("expected '.'", pos);
            names.push_back(atom());
        }
        ++pos;
        if (at_end()) throw ParseError("missing abstraction body", pos);
        Term body = term();
        for (auto it = names.rbegin(); it != names.rend(); ++it) body = Term::lam(*it, body);
        return body;
    }
    std::optional<Term> atomic() {
        skip();
        if (pos >= src.size()) return std::nullopt;
        if (src[pos] == '(') {
            ++pos;
            Term t = term();
            skip();
            if (pos >= src.size() || src[pos] != ')') throw ParseError("expected ')'", pos);
            ++pos;
            return t;
        }
        if (at_atom()) return Term::var(atom());
        return std::nullopt;
    }
    Term term() {
        if (at_lambda()) return lambda();
        auto head = atomic();
        if (!head) throw ParseError("expected term", pos);
        Term t = *head;
        while (true) {
            if (at_lambda()) return Term::app(t, lambda());
            auto next = atomic();
            if (!next) return t;
            t = Term::app(t, *next);
        }
    }
};

void print_rec(const Term& t, bool canonical, bool rightmost, std::string& out) {
    switch (t.kind()) {
        case TermKind::Var: out += atom_name(t.atom()); return;
        case TermKind::Lam: {
            auto [x, body] = canonical ? t.binder_avoiding({}) : t.binder();
            if (!rightmost) out += '(';
            out += '\\';
            out += atom_name(x);
            out += ". ";
            print_rec(body, canonical, true, out);
            if (!rightmost) out += ')';
            return;
        }
        case TermKind::App: {
            print_rec(t.fun(), canonical, false, out);
            out += ' ';
            if (t.arg().kind() == TermKind::App) {
                out += '(';
                print_rec(t.arg(), canonical, true, out);
                out += ')';
            } else {
                print_rec(t.arg(), canonical, rightmost, out);
            }
            return;
        }
    }
}

}  // namespace

Term parse_term(std::string_view text) {
    Parser p{text};
    if (p.at_end()) throw ParseError("empty term", 0);
    Term t = p.term();
    if (!p.at_end()) throw ParseError("unexpected input", p.pos);
    return t;
}

std::string print(const Term& t, bool canonical) {
    std::string out;
    print_rec(t, canonical, true, out);
    return out;
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << print(t); }

// ---------------------------------------------------------------- random terms

Term random_term(std::mt19937_64& rng, int depth, int natoms) {
    auto pick = [&](std::uint64_t n) { return rng() % n; };
    Atom x{static_cast<std::uint32_t>(pick(static_cast<std::uint64_t>(natoms)))};
    if (depth <= 0) return Term::var(x);
    switch (pick(5)) {
        case 0: return Term::var(x);
        case 1:
        case 2: return Term::lam(x, random_term(rng, depth - 1, natoms));
        default: {
            Term f = random_term(rng, depth - 1, natoms);
            return Term::app(f, random_term(rng, depth - 1, natoms));
        }
    }
}

// ---------------------------------------------------------------- σ axioms

Report check_sigma_axioms(std::uint64_t seed, int cases) {
    std::mt19937_64 rng(seed);
    const int natoms = 5;
    const int depth = 6;
    auto term = [&] { return random_term(rng, static_cast<int>(rng() % (depth + 1)), natoms); };
    auto atom = [&] { return Atom{static_cast<std::uint32_t>(rng() % (natoms + 1))}; };
    auto show = [](const Term& t) { return print(t); };

    Report rep;
    auto run = [&](const std::string& name, auto instance) {
        int done = 0;
        int attempts = 0;
        while (done < cases && attempts < cases * 50) {
            ++attempts;
            Record r{"sigma", name + "#" + std::to_string(attempts), Status::Pass, -1, ""};
            auto outcome = instance(r.detail);
            if (!outcome) {
                r.status = Status::Skipped;
            } else {
                ++done;
                if (!*outcome) r.status = Status::Fail;
            }
            rep.add(std::move(r));
        }
    };

    // each instance returns nullopt when the side-condition fails
    run("sigma-a", [&](std::string& d) -> std::optional<bool> {
        Atom a = atom();
        Term u = term();
        d = "a=" + atom_name(a) + " u=" + show(u);
        return subst(Term::var(a), a, u) == u;
    });
    run("sigma-id", [&](std::string& d) -> std::optional<bool> {
        Atom a = atom();
        Term x = term();
        d = "a=" + atom_name(a) + " x=" + show(x);
        return subst(x, a, Term::var(a)) == x;
    });
    run("sigma-fresh", [&](std::string& d) -> std::optional<bool> {
        Atom a = atom();
        Term x = term(), u = term();
        d = "a=" + atom_name(a) + " x=" + show(x) + " u=" + show(u);
        if (!is_fresh(a, x)) return std::nullopt;
        return subst(x, a, u) == x;
    });
    run("sigma-alpha", [&](std::string& d) -> std::optional<bool> {
        Atom a = atom(), b = atom();
        Term x = term(), u = term();
        d = "a=" + atom_name(a) + " b=" + atom_name(b) + " x=" + show(x) + " u=" + show(u);
        if (!is_fresh(b, x)) return std::nullopt;
        return subst(x, a, u) == subst(term_act(swap(b, a), x), b, u);
    });
    run("sigma-sigma", [&](std::string& d) -> std::optional<bool> {
        Atom a = atom(), b = atom();
        Term x = term(), u = term(), v = term();
        d = "a=" + atom_name(a) + " b=" + atom_name(b) + " x=" + show(x) + " u=" + show(u) +
            " v=" + show(v);
        if (a == b || !is_fresh(a, v)) return std::nullopt;
        return subst(subst(x, a, u), b, v) == subst(subst(x, b, v), a, subst(u, b, v));
    });
    run("sub-alpha", [&](std::string& d) -> std::optional<bool> {
        Atom a = atom(), b = atom();
        Term x = term();
        d = "a=" + atom_name(a) + " b=" + atom_name(b) + " x=" + show(x);
        if (!is_fresh(b, x)) return std::nullopt;
        return subst(x, a, Term::var(b)) == term_act(swap(b, a), x);
    });
    run("fresh-sub", [&](std::string& d) -> std::optional<bool> {
        Atom a = atom();
        Term x = term(), u = term();
        d = "a=" + atom_name(a) + " x=" + show(x) + " u=" + show(u);
        if (!is_fresh(a, u)) return std::nullopt;
        return is_fresh(a, subst(x, a, u));
    });
    run("sm-to-pi", [&](std::string& d) -> std::optional<bool> {
        Atom a = atom(), b = atom(), c = atom();
        Term x = term();
        d = "a=" + atom_name(a) + " b=" + atom_name(b) + " c=" + atom_name(c) + " x=" + show(x);
        if (a == b || b == c || a == c || !is_fresh(c, x)) return std::nullopt;
        Term lhs = subst(subst(subst(x, a, Term::var(c)), b, Term::var(a)), c, Term::var(b));
        return lhs == term_act(swap(b, a), x);
    });
    return rep;
}

}  // namespace nomlam
