#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nomlam/nominal.hpp"

namespace nomlam {

// Subset of lattice elements (or of prime filters), one bit per index.
using Subset = std::uint64_t;

inline bool has(Subset s, std::size_t i) { return (s >> i) & 1U; }
inline Subset bit(std::size_t i) { return Subset{1} << i; }

class Poset {
public:
    // reflexive-transitive closure of the given strict pairs; throws
    // std::invalid_argument on a cycle or an index out of range
    Poset(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& less);

    std::size_t size() const { return n_; }
    bool leq(std::size_t i, std::size_t j) const { return leq_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<bool> leq_;
};

// up to max_size elements, each pair i<j related with probability 1/3
Poset random_poset(std::mt19937_64& rng, std::size_t max_size);

class FiniteDL {
public:
    static constexpr std::size_t kMaxSize = 64;

    // From `i <= j` pairs (closed reflexively and transitively). Throws
    // std::invalid_argument unless the result is a distributive lattice of at
    // most kMaxSize elements.
    static FiniteDL from_order(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& leq);

    std::size_t size() const { return n_; }
    bool leq(std::size_t x, std::size_t y) const { return has(up_[x], y); }
    std::size_t meet(std::size_t x, std::size_t y) const { return meet_[x * n_ + y]; }
    std::size_t join(std::size_t x, std::size_t y) const { return join_[x * n_ + y]; }
    std::size_t top() const { return top_; }
    std::size_t bottom() const { return bottom_; }
    // Heyting implication u→x: the greatest z with z∧u ≤ x
    std::size_t implies(std::size_t u, std::size_t x) const { return imp_[u * n_ + x]; }
    Subset up(std::size_t x) const { return up_[x]; }
    Subset down(std::size_t x) const { return down_[x]; }
    Subset all() const { return n_ == 64 ? ~Subset{0} : bit(n_) - 1; }

private:
    std::size_t n_ = 0, top_ = 0, bottom_ = 0;
    std::vector<Subset> up_, down_;
    std::vector<std::size_t> meet_, join_, imp_;
};

// Down-closed subsets ordered by inclusion; throws std::invalid_argument if
// that exceeds FiniteDL::kMaxSize elements.
FiniteDL birkhoff_from_poset(const Poset& p);

bool is_filter(const FiniteDL& l, Subset s);
bool is_ideal(const FiniteDL& l, Subset s);
bool is_prime(const FiniteDL& l, Subset s);

std::vector<Subset> enumerate_prime_filters(const FiniteDL& l);
// p+y: everything above some x∧y with x in p
Subset plus(const FiniteDL& l, Subset p, std::size_t y);
// A maximal filter containing p and missing z, found greedily in index order
// with a backtracking fallback; nullopt if no prime exists. Throws
// std::invalid_argument unless p is a filter, z an ideal, and they are disjoint.
std::optional<Subset> extend_to_prime(const FiniteDL& l, Subset p, Subset z);
// x• as a set of indices into primes
Subset rep_map(const std::vector<Subset>& primes, std::size_t x);

// • := ∧ and u⊘x := u→x
struct HeytingOps {
    std::vector<std::vector<std::size_t>> app;
    std::vector<std::vector<std::size_t>> ppa;
};
HeytingOps heyting_ops(const FiniteDL& l);

// Order embedding, ∧/∨/⊤/⊥ preservation, prime extension, the Heyting rows and
// the set-level ∗/⊘ identities, each checked over every element.
Report check_duality(const FiniteDL& l, const std::string& name);

// "N" then "i <= j" lines, or "poset N" then "i < j" cover lines; '#' comments.
FiniteDL parse_lattice(std::string_view text);

}  // namespace nomlam
