#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nomlam/atoms.hpp"
#include "nomlam/nominal.hpp"

namespace nomlam {

namespace detail {
struct Node;
}

enum class TermKind { Var, Lam, App };

// λ-term up to α-equivalence. Stored locally nameless: bound occurrences are
// indices, binders keep only a name hint used for printing. operator== is
// α-equivalence.
class Term {
public:
    static Term var(Atom a);
    // λa.body, binding the free occurrences of a in body
    static Term lam(Atom a, const Term& body);
    // same binder, but the printed name prefers `hint`
    static Term lam(Atom a, const Term& body, Atom hint);
    static Term app(const Term& fun, const Term& arg);

    TermKind kind() const;
    Atom atom() const;  // Var only
    Term fun() const;  // App only
    Term arg() const;  // App only

    // Lam only: a binder name that does not capture, and the body opened at it.
    std::pair<Atom, Term> binder() const;
    // Lam only: binder chosen as the least atom outside avoid and the free atoms.
    std::pair<Atom, Term> binder_avoiding(const AtomSet& avoid) const;
    Atom name_hint() const;  // Lam only

    std::size_t size() const;
    std::size_t hash() const;
    const std::vector<Atom>& free_atoms_sorted() const;
    AtomSet free_atoms() const;
    bool has_free(Atom a) const;

    friend bool operator==(const Term& s, const Term& t);
    friend bool operator!=(const Term& s, const Term& t) { return !(s == t); }

    explicit Term(std::shared_ptr<const detail::Node> n) : n_(std::move(n)) {}
    const std::shared_ptr<const detail::Node>& node() const { return n_; }

private:
    std::shared_ptr<const detail::Node> n_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Total order compatible with α-equivalence (for deterministic containers).
bool term_less(const Term& s, const Term& t);
struct TermLess {
    bool operator()(const Term& s, const Term& t) const { return term_less(s, t); }
};

bool alpha_eq(const Term& s, const Term& t);
bool is_fresh(Atom a, const Term& t);
AtomSet support(const Term& t);

Term term_act(const Perm& p, const Term& t);
// capture-avoiding s[a:=u]
Term subst(const Term& s, Atom a, const Term& u);
// simultaneous substitution of free atoms
Term subst_many(const Term& s, const std::vector<std::pair<Atom, Term>>& m);
// body of a Lam instantiated with arg (the β-contractum of (λa.body) arg)
Term instantiate(const Term& lam, const Term& arg);

// all subterm occurrences, pre-order; binders opened at non-capturing names
std::vector<Term> subterms(const Term& t);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

Term parse_term(std::string_view text);
// Minimal parentheses, "\x. body". canonical renames binders to the least
// atoms that avoid capture.
std::string print(const Term& t, bool canonical = false);
std::ostream& operator<<(std::ostream& os, const Term& t);

// Seeded random term over the first natoms atoms, of height <= depth.
Term random_term(std::mt19937_64& rng, int depth, int natoms);

Report check_sigma_axioms(std::uint64_t seed, int cases);

// Nameless access used by the reduction engine. These work on terms that may
// contain dangling bound indices (subterms below a binder).
namespace detail {
bool is_bound(const Term& t);
bool locally_closed(const Term& t);
Term raw_body(const Term& lam);
Term raw_lam(Atom hint, const Term& body);
// contractum of the redex (λ.body) arg, both possibly open
Term raw_beta(const Term& lam, const Term& arg);
// λc.(t c) with c the least atom not free in t
Term raw_eta(const Term& t);
}  // namespace detail

}  // namespace nomlam
