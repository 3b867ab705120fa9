#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nomlam/lattice.hpp"
#include "nomlam/points.hpp"

namespace nomlam {

// Finite carrier closed (when closed()) under one-step successors; the
// reduction relation is the reflexive-transitive closure inside it.
class Universe {
public:
    static constexpr std::size_t kMaxTerms = 64;

    const Theory& theory() const { return theory_; }
    const std::vector<Term>& carrier() const { return carrier_; }
    std::size_t size() const { return carrier_.size(); }
    bool closed() const { return closed_; }
    // η disabled (or β off): a finite model of a non-conforming theory
    bool conforming() const { return theory_.conforming(); }

    std::optional<std::size_t> index(const Term& t) const;
    bool contains(const Term& t) const { return index(t).has_value(); }
    // {j | carrier[i] ->* carrier[j]}
    Subset reach(std::size_t i) const { return reach_[i]; }
    Subset all() const { return carrier_.size() == 64 ? ~Subset{0} : bit(carrier_.size()) - 1; }

private:
    friend Universe build_universe(const Theory&, const std::vector<Term>&, std::size_t,
                                   bool, const Budget&);
    Theory theory_;
    std::vector<Term> carrier_;
    std::unordered_map<Term, std::size_t, TermHash> index_;
    std::vector<Subset> reach_;
    bool closed_ = true;
};

struct ClosureCapExceeded : std::runtime_error {
    ClosureCapExceeded(std::size_t carrier, std::size_t frontier);
    std::size_t frontier;
};

// BFS closure of the seeds. Stops at max_terms (at most Universe::kMaxTerms)
// or when a successor is pruned by the budget; then the universe is not
// closed, and with require_closed that throws ClosureCapExceeded.
Universe build_universe(const Theory& th, const std::vector<Term>& seeds, std::size_t max_terms = 12,
                        bool require_closed = false, const Budget& budget = {});

// A definition needs a term or instance outside the carrier.
struct OutOfUniverse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// How the in-carrier set relates to the true set restricted to the carrier.
// A ⋂ over carrier subsets misses points generated outside the carrier
// (so ⊘ gives an upper bound); instances leaving the carrier are dropped
// (so ∀ and ∗ give lower bounds).
enum class Bound { Exact, Lower, Upper, Loose };
const char* to_string(Bound b);

// Up-closed subset of a universe carrier.
class ExactPoint {
public:
    // `contained`: the true set has no members outside the carrier
    ExactPoint(const Universe& u, Subset members, Bound bound = Bound::Exact, bool contained = true);

    const Universe& universe() const { return *u_; }
    Subset members() const { return members_; }
    bool contains(std::size_t i) const { return has(members_, i); }
    Bound bound() const { return bound_; }
    bool contained() const { return contained_; }
    // an in-carrier No (Yes) that also holds for the true set
    bool definite_no() const { return bound_ == Bound::Exact || bound_ == Bound::Upper; }
    bool definite_yes() const { return bound_ == Bound::Exact || bound_ == Bound::Lower; }
    friend bool operator==(const ExactPoint& x, const ExactPoint& y) { return x.members_ == y.members_; }

private:
    const Universe* u_;
    Subset members_;
    Bound bound_;
    bool contained_;
};

// 2^20 candidate sets; larger carriers throw std::length_error
inline constexpr std::size_t kMaxEnumerated = 20;

std::vector<Subset> up_closed_subsets(const Universe& u);
Subset up_closure(const Universe& u, Subset s);

ExactPoint exact_up(const Universe& u, const Term& s);
ExactPoint exact_meet(const ExactPoint& p, const ExactPoint& q);
// up-closure of the in-carrier applications x y, x ∈ p, y ∈ q
ExactPoint exact_app(const ExactPoint& p, const ExactPoint& q);
// ⋂{r | p ⊆ r, a#r}, freshness read as closure under in-carrier a-instances
ExactPoint exact_forall(Atom a, const ExactPoint& p);
// ⋂{r | p ⊆ r•q}
ExactPoint exact_ppa(const ExactPoint& q, const ExactPoint& p);
// {s | s[a:=u] ∈ p for every u in the carrier with s[a:=u] in the carrier}
ExactPoint exact_exists(Atom a, const ExactPoint& p);
// {s[a:=u] | s ∈ p} up-closed; requires a#u and every image in the carrier
ExactPoint exact_subst(const ExactPoint& p, Atom a, const Term& u);
// {s | (b a)·s ∈ p} for b fresh
ExactPoint exact_nu(Atom a, const ExactPoint& p);
// {s | s[a:=u] ∈ p}; instances outside the carrier are not members
ExactPoint exact_amgis(const ExactPoint& p, const Term& u, Atom a);
ExactPoint exact_perm(const Perm& pi, const ExactPoint& p);

// Definitional evaluation of a symbolic expression. Throws OutOfUniverse or
// std::length_error.
ExactPoint exact_eval(const Universe& u, const PointExpr& e);

// Symbolic member on every carrier term against exact membership: Fail on a
// decided mismatch the exact bound makes definite, Skipped (out-of-universe)
// on any other mismatch, Undecided on Unknown. One record per carrier term.
Report compare(const Engine& eng, const PointExpr& e, const ExactPoint& exact, const std::string& suite,
               const std::string& case_id);

// Laws: identity, ppa-union, forall-probe, lsm-id, amgis, forall-union, gate
// (ppa-union and forall-probe), all. Throws std::invalid_argument on an
// unknown name.
Report validate_oracle(const std::vector<std::vector<Term>>& seed_sets, std::string_view law,
                       std::size_t max_terms = 12);
std::vector<std::vector<Term>> default_universe_seeds();

std::string print(const Universe& u);

}  // namespace nomlam
