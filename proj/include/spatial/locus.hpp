#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spatial {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class SimplexClass : std::uint8_t { V = 0, E = 1, F = 2 };

inline constexpr std::array<SimplexClass, 3> kSimplexClasses{SimplexClass::V, SimplexClass::E,
                                                             SimplexClass::F};

inline constexpr char class_letter(SimplexClass c) {
    switch (c) {
        case SimplexClass::V: return 'V';
        case SimplexClass::E: return 'E';
        case SimplexClass::F: return 'F';
    }
    return '?';
}

/// Number of simplexes of a class per vertex on a triangulated torus.
inline constexpr int arity(SimplexClass c) {
    switch (c) {
        case SimplexClass::V: return 1;
        case SimplexClass::E: return 3;
        case SimplexClass::F: return 2;
    }
    return 0;
}

struct SimplexId {
    SimplexClass cls = SimplexClass::V;
    std::uint32_t index = 0;

    friend constexpr auto operator<=>(const SimplexId&, const SimplexId&) = default;
};

/// The nine loci. Transfer loci are named yX: upper case is the father class,
/// lower case the class of the adjacent simplex the point faces.
enum class Locus : std::uint8_t { V, E, F, eV, fV, vE, fE, vF, eF };

inline constexpr std::array<Locus, 9> kAllLoci{Locus::V,  Locus::E,  Locus::F,  Locus::eV, Locus::fV,
                                               Locus::vE, Locus::fE, Locus::vF, Locus::eF};

inline constexpr bool is_simplicial(Locus l) {
    return l == Locus::V || l == Locus::E || l == Locus::F;
}
inline constexpr bool is_transfer(Locus l) { return !is_simplicial(l); }

inline constexpr Locus simplicial_locus(SimplexClass c) { return static_cast<Locus>(c); }

/// Class of the simplex owning the data-points of a locus.
inline constexpr SimplexClass father_class(Locus l) {
    switch (l) {
        case Locus::V:
        case Locus::eV:
        case Locus::fV: return SimplexClass::V;
        case Locus::E:
        case Locus::vE:
        case Locus::fE: return SimplexClass::E;
        case Locus::F:
        case Locus::vF:
        case Locus::eF: return SimplexClass::F;
    }
    return SimplexClass::V;
}

/// For a transfer locus yX, the class Y of the simplex each point faces.
inline constexpr SimplexClass facing_class(Locus l) {
    switch (l) {
        case Locus::vE:
        case Locus::vF: return SimplexClass::V;
        case Locus::eV:
        case Locus::eF: return SimplexClass::E;
        case Locus::fV:
        case Locus::fE: return SimplexClass::F;
        default: throw Error("facing_class: simplicial locus has no facing class");
    }
}

/// The transfer locus yX for father X and facing class Y (X != Y).
inline constexpr Locus transfer_locus(SimplexClass father, SimplexClass facing) {
    using C = SimplexClass;
    if (father == C::V && facing == C::E) return Locus::eV;
    if (father == C::V && facing == C::F) return Locus::fV;
    if (father == C::E && facing == C::V) return Locus::vE;
    if (father == C::E && facing == C::F) return Locus::fE;
    if (father == C::F && facing == C::V) return Locus::vF;
    if (father == C::F && facing == C::E) return Locus::eF;
    throw Error("transfer_locus: father and facing class must differ");
}

/// Paired locus across the X-Y boundary: yX <-> xY.
inline constexpr Locus partner_locus(Locus l) {
    return transfer_locus(facing_class(l), father_class(l));
}

/// The other transfer locus with the same father.
inline constexpr Locus brother_locus(Locus l) {
    const SimplexClass x = father_class(l);
    const SimplexClass y = facing_class(l);
    for (SimplexClass c : kSimplexClasses)
        if (c != x && c != y) return transfer_locus(x, c);
    return l;
}

inline constexpr std::string_view locus_name(Locus l) {
    switch (l) {
        case Locus::V: return "V";
        case Locus::E: return "E";
        case Locus::F: return "F";
        case Locus::eV: return "eV";
        case Locus::fV: return "fV";
        case Locus::vE: return "vE";
        case Locus::fE: return "fE";
        case Locus::vF: return "vF";
        case Locus::eF: return "eF";
    }
    return "?";
}

inline std::optional<Locus> parse_locus(std::string_view s) {
    for (Locus l : kAllLoci)
        if (locus_name(l) == s) return l;
    return std::nullopt;
}

}  // namespace spatial
