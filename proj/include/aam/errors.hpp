#ifndef AAM_ERRORS_HPP
#define AAM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aam {

/// Precondition violated by the caller (bad index, non-bijective map, ...).
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed textual input. `offset` is the byte position in the parsed text.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Input uses a SMILES feature outside the supported subset.
class unsupported_feature : public parse_error {
public:
    using parse_error::parse_error;
};

/// An atom ends up with a negative number of non-bonding electrons.
class valence_error : public std::runtime_error {
public:
    valence_error(const std::string& what, std::size_t atom)
        : std::runtime_error(what + " (atom " + std::to_string(atom) + ")"), atom_(atom) {}
    std::size_t atom() const noexcept { return atom_; }

private:
    std::size_t atom_;
};

/// JSON input does not follow the reaction / molecule-set schema.
class schema_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Educt and product sides do not carry the same atoms and charge.
class unbalanced_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace aam

#endif
