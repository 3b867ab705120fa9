#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace nomlam {

// An atom is an index into one unbounded, totally ordered alphabet.
struct Atom {
    std::uint32_t id = 0;

    constexpr Atom() = default;
    constexpr explicit Atom(std::uint32_t i) : id(i) {}

    friend constexpr auto operator<=>(Atom, Atom) = default;
};

using AtomSet = std::set<Atom>;

// a..z, then a1..z1, a2.. ; index i has letter i%26 and suffix i/26.
std::string atom_name(Atom a);
std::optional<Atom> parse_atom_name(std::string_view text);

// Least atom not in avoid.
Atom fresh_atom(const AtomSet& avoid);
// The n least atoms not in avoid, in increasing order.
std::set<Atom> fresh_atoms(const AtomSet& avoid, std::size_t n);

// Finite permutation stored canonically: identity entries are never kept.
class Perm {
public:
    Perm() = default;

    static Perm identity() { return {}; }
    static Perm swap(Atom a, Atom b);
    // Builds from an explicit finite bijection; throws std::invalid_argument
    // if the map is not a permutation of its own domain.
    static Perm from_map(const std::map<Atom, Atom>& m);

    Atom operator()(Atom a) const;
    bool is_identity() const { return map_.empty(); }
    const std::map<Atom, Atom>& mapping() const { return map_; }
    AtomSet nontriv() const;

    friend bool operator==(const Perm&, const Perm&) = default;

private:
    std::map<Atom, Atom> map_;
};

Perm swap(Atom a, Atom b);
// (compose(outer, inner))(a) = outer(inner(a))
Perm compose(const Perm& outer, const Perm& inner);
Perm invert(const Perm& p);

AtomSet act(const Perm& p, const AtomSet& s);

// Text form: sequence of transpositions "(a b)(c d)", read right to left as
// a composition; "id" or "" is the identity.
std::string to_string(const Perm& p);
std::optional<Perm> parse_perm(std::string_view text);

}  // namespace nomlam
