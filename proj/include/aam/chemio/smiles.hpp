#ifndef AAM_CHEMIO_SMILES_HPP
#define AAM_CHEMIO_SMILES_HPP

// Parser for a SMILES subset: organic-subset and bracket atoms, bond symbols
// - = #, ring closures (digits and %nn), branches, and lowercase aromatic
// atoms c n o s. Hydrogens become explicit vertices.

#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aam/chemio/molecule_builder.hpp"
#include "aam/elements.hpp"
#include "aam/errors.hpp"
#include "aam/molgraph.hpp"

namespace aam::chemio {

namespace detail {

class SmilesParser {
public:
    explicit SmilesParser(std::string_view text) : s_(text) {}

    MoleculeGraph parse() {
        if (s_.empty()) throw parse_error("empty SMILES string", 0);
        parse_chain(-1);
        if (pos_ != s_.size()) {
            if (s_[pos_] == ')') fail("unbalanced ')'");
            fail(std::string("unexpected character '") + s_[pos_] + "'");
        }
        if (!rings_.empty()) fail_at("unclosed ring bond " + std::to_string(rings_.begin()->first),
                                     rings_.begin()->second.offset);
        return finish();
    }

private:
    struct Atom {
        AtomDesc desc;
        bool bracket = false;
        int explicit_h = 0;
        std::size_t offset = 0;
    };
    struct PendingBond {
        int order = 0; // 0 = unspecified
        bool explicit_symbol = false;
    };
    struct OpenRing {
        int atom;
        PendingBond bond;
        std::size_t offset;
    };

    [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
    [[noreturn]] static void fail_at(const std::string& what, std::size_t offset) {
        throw parse_error(what, offset);
    }
    [[noreturn]] void unsupported(const std::string& what) const { throw unsupported_feature(what, pos_); }

    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return at_end() ? '\0' : s_[pos_]; }

    // chain := atom (bond? (atom | ring) | '(' bond? chain ')')*
    void parse_chain(int prev) {
        bool need_atom = prev < 0;
        for (;;) {
            if (at_end()) break;
            const char c = peek();
            if (c == ')') break;
            if (c == '(') {
                if (prev < 0) fail("branch without a preceding atom");
                ++pos_;
                const PendingBond bond = parse_bond();
                if (at_end() || peek() == ')') fail("empty branch");
                const int first = parse_atom();
                add_bond(prev, first, bond);
                parse_chain(first);
                if (peek() != ')') fail("unbalanced '('");
                ++pos_;
                continue;
            }
            const PendingBond bond = parse_bond();
            if (at_end()) fail("bond symbol at end of input");
            if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '%') {
                if (prev < 0) fail("ring closure without a preceding atom");
                ring_closure(prev, bond);
                continue;
            }
            if (peek() == '(' || peek() == ')') fail("bond symbol before branch");
            const int atom = parse_atom();
            if (prev >= 0) add_bond(prev, atom, bond);
            else if (bond.explicit_symbol) fail("bond symbol before the first atom");
            prev = atom;
            need_atom = false;
        }
        if (need_atom) fail("expected an atom");
    }

    PendingBond parse_bond() {
        switch (peek()) {
        case '-': ++pos_; return {1, true};
        case '=': ++pos_; return {2, true};
        case '#': ++pos_; return {3, true};
        case '/':
        case '\\': unsupported("directional bonds are not supported");
        case '$': unsupported("quadruple bonds are not supported");
        case ':': unsupported("explicit aromatic bond symbol is not supported");
        case '.': unsupported("disconnected components are not supported; list molecules separately");
        default: return {};
        }
    }

    void ring_closure(int atom, PendingBond bond) {
        const std::size_t start = pos_;
        int number = 0;
        if (peek() == '%') {
            ++pos_;
            for (int k = 0; k < 2; ++k) {
                if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("'%' needs two digits");
                number = number * 10 + (s_[pos_++] - '0');
            }
        } else {
            number = s_[pos_++] - '0';
        }
        auto it = rings_.find(number);
        if (it == rings_.end()) {
            rings_.emplace(number, OpenRing{atom, bond, start});
            return;
        }
        OpenRing open = it->second;
        rings_.erase(it);
        if (open.atom == atom) fail_at("ring bond from an atom to itself", start);
        if (open.bond.order && bond.order && open.bond.order != bond.order)
            fail_at("conflicting ring-closure bond orders", start);
        if (!bond.order) bond = open.bond;
        add_bond(open.atom, atom, bond, start);
    }

    void add_bond(int a, int b, PendingBond bond, std::size_t offset = std::string_view::npos) {
        for (const auto& existing : bonds_)
            if ((existing.a == a && existing.b == b) || (existing.a == b && existing.b == a))
                fail_at("duplicate bond", offset == std::string_view::npos ? pos_ : offset);
        BondDesc d{a, b, bond.order ? bond.order : 1, false};
        if (!bond.explicit_symbol && atoms_[a].desc.aromatic && atoms_[b].desc.aromatic) d.aromatic = true;
        bonds_.push_back(d);
    }

    int parse_atom() {
        const std::size_t start = pos_;
        Atom atom;
        atom.offset = start;
        const char c = peek();
        if (c == '[') {
            parse_bracket(atom);
        } else if (c == '*') {
            unsupported("wildcard atoms are not supported");
        } else if (c == 'B' || c == 'C') {
            ++pos_;
            if (c == 'B' && peek() == 'r') { ++pos_; atom.desc.element = 35; }
            else if (c == 'C' && peek() == 'l') { ++pos_; atom.desc.element = 17; }
            else atom.desc.element = c == 'B' ? 5 : 6;
        } else if (c == 'N' || c == 'O' || c == 'P' || c == 'S' || c == 'F' || c == 'I' || c == 'H') {
            ++pos_;
            atom.desc.element = *atomic_number(std::string_view(&s_[start], 1));
        } else if (c == 'c' || c == 'n' || c == 'o' || c == 's') {
            ++pos_;
            atom.desc.element = *atomic_number(std::string(1, static_cast<char>(std::toupper(c))));
            atom.desc.aromatic = true;
        } else {
            fail(std::string("unexpected character '") + c + "'");
        }
        atoms_.push_back(atom);
        return static_cast<int>(atoms_.size()) - 1;
    }

    void parse_bracket(Atom& atom) {
        ++pos_; // '['
        atom.bracket = true;
        if (std::isdigit(static_cast<unsigned char>(peek()))) unsupported("isotopes are not supported");
        if (peek() == '*') unsupported("wildcard atoms are not supported");
        const std::size_t sym_start = pos_;
        if (std::islower(static_cast<unsigned char>(peek()))) {
            const char c = s_[pos_++];
            if (c != 'c' && c != 'n' && c != 'o' && c != 's')
                fail_at(std::string("unsupported aromatic atom '") + c + "'", sym_start);
            atom.desc.element = *atomic_number(std::string(1, static_cast<char>(std::toupper(c))));
            atom.desc.aromatic = true;
        } else if (std::isupper(static_cast<unsigned char>(peek()))) {
            std::string sym(1, s_[pos_++]);
            // Two-letter symbol when it exists; "[Hg]" vs "[H...]" resolved by the table.
            if (std::islower(static_cast<unsigned char>(peek()))) {
                std::string two = sym + s_[pos_];
                if (atomic_number(two)) {
                    sym = two;
                    ++pos_;
                }
            }
            auto z = atomic_number(sym);
            if (!z) fail_at("unknown element '" + sym + "'", sym_start);
            atom.desc.element = *z;
        } else {
            fail("expected element symbol in bracket atom");
        }
        if (peek() == '@') unsupported("stereo marks are not supported");
        if (peek() == 'H') {
            ++pos_;
            atom.explicit_h = 1;
            if (std::isdigit(static_cast<unsigned char>(peek()))) atom.explicit_h = s_[pos_++] - '0';
        }
        if (peek() == '+' || peek() == '-') {
            const char sign = s_[pos_++];
            int magnitude = 1;
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                magnitude = 0;
                while (std::isdigit(static_cast<unsigned char>(peek()))) magnitude = magnitude * 10 + (s_[pos_++] - '0');
            } else {
                while (peek() == sign) {
                    ++magnitude;
                    ++pos_;
                }
            }
            atom.desc.charge = sign == '+' ? magnitude : -magnitude;
        }
        if (peek() == ':') unsupported("atom classes are not supported");
        if (peek() == '@') unsupported("stereo marks are not supported");
        if (peek() != ']') {
            if (at_end()) fail("unterminated bracket atom");
            fail(std::string("unexpected character '") + peek() + "' in bracket atom");
        }
        ++pos_;
    }

    // Smallest standard valence that accommodates the bond sum.
    static int implicit_hydrogens(int element, int bond_sum) {
        const auto valences = standard_valences(element);
        for (int v : valences)
            if (v >= bond_sum) return v - bond_sum;
        return 0;
    }

    MoleculeGraph finish() {
        const int heavy = static_cast<int>(atoms_.size());
        std::vector<int> sigma(heavy, 0);
        std::vector<char> has_aromatic_bond(heavy, 0);
        for (const auto& b : bonds_) {
            sigma[b.a] += b.order;
            sigma[b.b] += b.order;
            if (b.aromatic) has_aromatic_bond[b.a] = has_aromatic_bond[b.b] = 1;
        }
        std::vector<AtomDesc> descs;
        for (const auto& a : atoms_) descs.push_back(a.desc);
        std::vector<BondDesc> bonds = bonds_;
        for (int i = 0; i < heavy; ++i) {
            const auto& a = atoms_[i];
            if (a.desc.aromatic && !has_aromatic_bond[i])
                fail_at("aromatic atom outside an aromatic ring", a.offset);
            int h = a.explicit_h;
            if (!a.bracket && a.desc.element != 1) {
                int used = sigma[i];
                // Aromatic carbon and nitrogen each donate one pi electron.
                if (a.desc.aromatic && (a.desc.element == 6 || a.desc.element == 7)) used += 1;
                h = a.desc.aromatic && a.desc.element != 6 && a.desc.element != 7
                        ? 0
                        : implicit_hydrogens(a.desc.element, used);
            }
            for (int k = 0; k < h; ++k) {
                descs.push_back(AtomDesc{1});
                bonds.push_back({i, static_cast<int>(descs.size()) - 1, 1, false});
            }
        }
        // Aromatic complexes: connected components over aromatic bonds.
        DisjointSets sets(heavy);
        for (const auto& b : bonds_)
            if (b.aromatic) sets.unite(b.a, b.b);
        std::map<int, std::vector<int>> groups;
        for (int i = 0; i < heavy; ++i)
            if (has_aromatic_bond[i]) groups[sets.find(i)].push_back(i);
        std::vector<std::vector<int>> aromatic;
        for (auto& [root, members] : groups) aromatic.push_back(std::move(members));
        return build_molecule(descs, bonds, aromatic);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::vector<Atom> atoms_;
    std::vector<BondDesc> bonds_;
    std::map<int, OpenRing> rings_;
};

} // namespace detail

/// Parses one molecule. Throws parse_error (with byte offset),
/// unsupported_feature or valence_error.
inline MoleculeGraph parse_smiles_subset(std::string_view text) { return detail::SmilesParser(text).parse(); }

} // namespace aam::chemio

#endif
