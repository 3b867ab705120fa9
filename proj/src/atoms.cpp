#include "nomlam/atoms.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace nomlam {

std::string atom_name(Atom a) {
    std::string s(1, static_cast<char>('a' + a.id % 26));
    if (a.id >= 26) s += std::to_string(a.id / 26);
    return s;
}

std::optional<Atom> parse_atom_name(std::string_view text) {
    if (text.empty() || text[0] < 'a' || text[0] > 'z') return std::nullopt;
    std::uint32_t letter = text[0] - 'a';
    if (text.size() == 1) return Atom{letter};
    // suffix must be a positive decimal without leading zero
    if (text[1] == '0') return std::nullopt;
    std::uint64_t suffix = 0;
    for (std::size_t i = 1; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return std::nullopt;
        suffix = suffix * 10 + (text[i] - '0');
        if (suffix > 100000000) return std::nullopt;
    }
    return Atom{static_cast<std::uint32_t>(suffix * 26 + letter)};
}

Atom fresh_atom(const AtomSet& avoid) {
    std::uint32_t i = 0;
    for (Atom a : avoid) {
        if (a.id > i) break;
        if (a.id == i) ++i;
    }
    return Atom{i};
}

std::set<Atom> fresh_atoms(const AtomSet& avoid, std::size_t n) {
    std::set<Atom> out;
    AtomSet used = avoid;
    while (out.size() < n) {
        Atom c = fresh_atom(used);
        out.insert(c);
        used.insert(c);
    }
    return out;
}

Perm Perm::swap(Atom a, Atom b) {
    Perm p;
    if (a != b) {
        p.map_[a] = b;
        p.map_[b] = a;
    }
    return p;
}

Perm Perm::from_map(const std::map<Atom, Atom>& m) {
    AtomSet dom, ran;
    for (auto [k, v] : m) {
        dom.insert(k);
        ran.insert(v);
    }
    if (dom != ran || ran.size() != m.size())
        throw std::invalid_argument("not a finite permutation");
    Perm p;
    for (auto [k, v] : m)
        if (k != v) p.map_[k] = v;
    return p;
}

Atom Perm::operator()(Atom a) const {
    auto it = map_.find(a);
    return it == map_.end() ? a : it->second;
}

AtomSet Perm::nontriv() const {
    AtomSet s;
    for (auto& kv : map_) s.insert(kv.first);
    return s;
}

Perm swap(Atom a, Atom b) { return Perm::swap(a, b); }

Perm compose(const Perm& outer, const Perm& inner) {
    AtomSet dom = outer.nontriv();
    for (auto& kv : inner.mapping()) dom.insert(kv.first);
    std::map<Atom, Atom> m;
    for (Atom a : dom) m[a] = outer(inner(a));
    return Perm::from_map(m);
}

Perm invert(const Perm& p) {
    std::map<Atom, Atom> m;
    for (auto [k, v] : p.mapping()) m[v] = k;
    return Perm::from_map(m);
}

AtomSet act(const Perm& p, const AtomSet& s) {
    AtomSet out;
    for (Atom a : s) out.insert(p(a));
    return out;
}

std::string to_string(const Perm& p) {
    if (p.is_identity()) return "id";
    // cycle decomposition, each cycle written as transpositions
    std::string out;
    AtomSet seen;
    for (auto& kv : p.mapping()) {
        Atom start = kv.first;
        if (seen.count(start)) continue;
        std::vector<Atom> cycle;
        for (Atom a = start; !seen.count(a); a = p(a)) {
            seen.insert(a);
            cycle.push_back(a);
        }
        // (c0 c1 ... ck) = (c0 ck)...(c0 c2)(c0 c1), applied right to left
        for (std::size_t i = cycle.size() - 1; i >= 1; --i)
            out += "(" + atom_name(cycle[0]) + " " + atom_name(cycle[i]) + ")";
    }
    return out;
}

std::optional<Perm> parse_perm(std::string_view text) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto name = [&]() -> std::optional<Atom> {
        skip();
        std::size_t j = i;
        while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
        auto a = parse_atom_name(text.substr(i, j - i));
        i = j;
        return a;
    };
    skip();
    if (text.substr(i) == "id") return Perm{};
    std::vector<Perm> swaps;
    while (true) {
        skip();
        if (i == text.size()) break;
        if (text[i] != '(') return std::nullopt;
        ++i;
        auto a = name();
        auto b = name();
        skip();
        if (!a || !b || i >= text.size() || text[i] != ')') return std::nullopt;
        ++i;
        swaps.push_back(Perm::swap(*a, *b));
    }
    Perm result;
    for (auto it = swaps.begin(); it != swaps.end(); ++it) result = compose(result, *it);
    return result;
}

}  // namespace nomlam
