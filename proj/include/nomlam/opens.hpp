#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "nomlam/points.hpp"

namespace nomlam {

// Compact open set of points: the union of p• = {q | p ⊆ q} over its disjuncts.
// No disjuncts is the empty open; the ∅-point disjunct (`any`) is every point.
class OpenSet {
public:
    OpenSet() = default;
    explicit OpenSet(std::vector<PointExpr> disjuncts);

    static OpenSet up(const PointExpr& p) { return OpenSet({p}); }
    static OpenSet any() { return up(PointExpr::empty()); }
    // ℘u = (u↑)•
    static OpenSet principal(const Term& u) { return up(PointExpr::up(u)); }

    const std::vector<PointExpr>& disjuncts() const { return ds_; }
    bool empty() const { return ds_.empty(); }

    // same disjuncts up to order
    friend bool operator==(const OpenSet& x, const OpenSet& y);

private:
    std::vector<PointExpr> ds_;
};

Decision3 open_member(const Engine& eng, const PointExpr& q, const OpenSet& x);
Decision3 open_subset(const Engine& eng, const OpenSet& x, const OpenSet& y);

OpenSet open_meet(const OpenSet& x, const OpenSet& y);
OpenSet open_join(const OpenSet& x, const OpenSet& y);
// drops p when another disjunct is certainly included in it
OpenSet prune(const Engine& eng, const OpenSet& x);

OpenSet open_app(const OpenSet& x, const OpenSet& y);
// throws std::invalid_argument unless q is a principal canonical point
OpenSet open_ppa(const PointExpr& q, const OpenSet& x);
OpenSet open_subst(const OpenSet& x, Atom a, const Term& u);
OpenSet open_forall(Atom a, const OpenSet& x);
// ƛa.X = ∀a.(℘a ⊘ X)
OpenSet open_lam(Atom a, const OpenSet& x);

// ⟦a⟧ = ℘a, ⟦λa.s⟧ = ƛa.⟦s⟧, ⟦s t⟧ = ⟦s⟧∗⟦t⟧. Throws std::logic_error if the
// result differs from (s↑)•.
OpenSet denote(const Term& s);
// ⟦s⟧ ⊆ ⟦t⟧; throws std::logic_error if it contradicts a decided reach(s,t)
Decision3 denote_leq(const Engine& eng, const Term& s, const Term& t);

std::string print(const OpenSet& x);
// `any`, `POINT•` (or `POINT*`), disjuncts separated by `|`; `none` is empty
OpenSet parse_open(std::string_view text);

// β/η inclusions, adjointness, union commutation on seeded instances
Report check_opens_laws(const Engine& eng, const std::vector<Term>& corpus, std::uint64_t seed,
                        int cases = 20);

}  // namespace nomlam
