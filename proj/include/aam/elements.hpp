#ifndef AAM_ELEMENTS_HPP
#define AAM_ELEMENTS_HPP

#include <array>
#include <cctype>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace aam {

// Index i holds the symbol of atomic number i; slot 0 is unused.
inline constexpr std::array<std::string_view, 119> element_symbols = {
    "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

inline std::optional<int> atomic_number(std::string_view symbol) {
    for (std::size_t z = 1; z < element_symbols.size(); ++z)
        if (element_symbols[z] == symbol) return static_cast<int>(z);
    return std::nullopt;
}

/// "cl" / "CL" -> "Cl".
inline std::string canonical_symbol(std::string_view raw) {
    std::string s(raw);
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = static_cast<char>(i == 0 ? std::toupper(static_cast<unsigned char>(s[i]))
                                        : std::tolower(static_cast<unsigned char>(s[i])));
    return s;
}

/// Valence-shell electron count used to derive lone pairs. H uses the
/// shared-pair convention (one electron, never a lone pair when bonded).
inline std::optional<int> group_valence_electrons(int z) {
    switch (z) {
    case 1: return 1;
    case 5: return 3;
    case 6: return 4;
    case 7: case 15: return 5;
    case 8: case 16: return 6;
    case 9: case 17: case 35: case 53: return 7;
    default: return std::nullopt;
    }
}

/// Standard bonding valences for implicit-hydrogen completion, ascending.
inline std::span<const int> standard_valences(int z) {
    static constexpr int b[] = {3}, c[] = {4}, n[] = {3, 5}, o[] = {2}, p[] = {3, 5},
                         s[] = {2, 4, 6}, x[] = {1};
    switch (z) {
    case 5: return b;
    case 6: return c;
    case 7: return n;
    case 8: return o;
    case 15: return p;
    case 16: return s;
    case 9: case 17: case 35: case 53: return x;
    default: return {};
    }
}

} // namespace aam

#endif
