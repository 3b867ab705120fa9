#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nomlam/theory.hpp"

namespace nomlam {

// Finitely generated Π-point: the union of g↑ over its generators.
// Generators are kept sorted and free of α-duplicates.
class Point {
public:
    Point() = default;  // no generators: the empty point
    explicit Point(std::vector<Term> gens);

    const std::vector<Term>& generators() const { return gens_; }
    bool empty() const { return gens_.empty(); }
    bool principal() const { return gens_.size() == 1; }
    AtomSet support() const;

    friend bool operator==(const Point& p, const Point& q) { return p.gens_ == q.gens_; }

private:
    std::vector<Term> gens_;
};

Point up(const Term& s);
// p ∧ q is the union of the generator sets
Point meet(const Point& p, const Point& q);
Point papp(const Point& p, const Point& q);
Point psubst(const Point& p, Atom a, const Term& u);
Point point_act(const Perm& pi, const Point& p);
// drops g when another generator certainly reaches it
Point prune(const Engine& eng, const Point& p);

enum class PointKind { Gens, Meet, App, Ppa, Forall, Exists, Nu, Subst, Amgis, PermAct };

// Symbolic point expression.
class PointExpr {
public:
    static PointExpr gens(Point p);
    static PointExpr up(const Term& s) { return gens(nomlam::up(s)); }
    static PointExpr empty() { return gens(Point{}); }
    static PointExpr meet(PointExpr l, PointExpr r);
    static PointExpr app(PointExpr l, PointExpr r);
    // principal h↑ ⊘ e
    static PointExpr ppa(const Term& h, PointExpr e);
    static PointExpr forall(Atom a, PointExpr e);
    static PointExpr exists(Atom a, PointExpr e);
    static PointExpr nu(Atom a, PointExpr e);
    // e[a⇐u]
    static PointExpr subst(PointExpr e, Atom a, const Term& u);
    // e[u↼a]
    static PointExpr amgis(PointExpr e, const Term& u, Atom a);
    static PointExpr perm(const Perm& pi, PointExpr e);

    PointKind kind() const;
    const Point& point() const;      // Gens
    const PointExpr& left() const;   // Meet, App
    const PointExpr& right() const;  // Meet, App
    const PointExpr& body() const;   // every other non-Gens kind
    const Term& term() const;        // Ppa: h; Subst, Amgis: u
    Atom atom() const;               // Forall, Exists, Nu, Subst, Amgis
    const Perm& perm() const;        // PermAct

    bool canonical() const { return kind() == PointKind::Gens; }

    friend bool operator==(const PointExpr& x, const PointExpr& y);

    struct Node;  // opaque

private:
    explicit PointExpr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

// Structural over-approximation of the support.
AtomSet support(const PointExpr& e);
PointExpr point_act(const Perm& pi, const PointExpr& e);

// Denotation-preserving rewriting; canonical whenever e only uses
// Gens/Meet/App/Subst/PermAct.
PointExpr normalize(const PointExpr& e);

Decision3 member(const Engine& eng, const Term& t, const PointExpr& e);
// The terms u tried, in order, when certifying t ∈ ∀a.body through body[a⇐u].
std::vector<Term> forall_probes(const Term& t, const PointExpr& body, Atom a);
Decision3 subset(const Engine& eng, const PointExpr& e1, const PointExpr& e2,
                 const std::vector<Term>& probes = {});

std::string print(const PointExpr& e);
PointExpr parse_point(std::string_view text);

// Point law suites. `corpus` supplies the seed terms, atoms are drawn from it.
Report check_point_laws(const Engine& eng, const std::vector<Term>& corpus, std::uint64_t seed);
Report check_forall_laws(const Engine& eng, const std::vector<Term>& corpus, std::uint64_t seed);
Report check_exists_laws(const Engine& eng, const std::vector<Term>& corpus, std::uint64_t seed);

// The 30-term corpus used by the point-law suites.
std::vector<Term> default_point_corpus();

}  // namespace nomlam
