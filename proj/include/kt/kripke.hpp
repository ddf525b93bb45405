// Finite persistent Kripke structures with constant domain {0..numeral_bound},
// standard forcing and global (G) forcing.
#pragma once

#include "kt/syntax.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace kt {

constexpr int kMaxStructureWorlds = 32;

struct KripkeStructure {
    std::vector<std::string> worlds;   // opaque ids; index is the world
    std::vector<std::uint32_t> up;     // up[u] has bit v iff u <= v
    std::vector<std::set<Nat>> interp;
    unsigned numeral_bound = 4;

    int size() const { return static_cast<int>(worlds.size()); }
    bool le(int u, int v) const { return (up[u] >> v) & 1u; }
    int world_index(const std::string& id) const;  // -1 if unknown
};

struct Diagnostic {
    std::string axiom;    // reflexivity | transitivity | antisymmetry | heredity | sentence | size
    std::string detail;
};

/// Empty iff M is a persistent structure.
std::vector<Diagnostic> validate(const KripkeStructure& M);

struct StructureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Worlds >= w with order and interpretation restricted.
KripkeStructure truncate(const KripkeStructure& M, int w);

/// New world below every world of M carrying X. Throws StructureError when X
/// is not contained in the interpretation of some minimal world.
KripkeStructure add_root(const KripkeStructure& M, const std::set<Nat>& X,
                         const std::string& root_id = "");

struct ForcingVerdict {
    bool holds = false;
    bool exact = true;  // false when a quantifier clause was cut off at numeral_bound
};

ForcingVerdict forces(const KripkeStructure& M, int w, const FormulaPtr& phi,
                      const EvalLimits& lim = {});
ForcingVerdict forces_global(const KripkeStructure& M, int w, const FormulaPtr& phi,
                             const EvalLimits& lim = {});
ForcingVerdict satisfies(const KripkeStructure& M, const FormulaPtr& phi, const EvalLimits& lim = {});
ForcingVerdict satisfies_global(const KripkeStructure& M, const FormulaPtr& phi,
                                const EvalLimits& lim = {});

/// Line format: `world <id>`, `le <id> <id>`, `holds <id> <formula>`,
/// `numeral_bound <n>`; `%` starts a comment. The order is closed
/// reflexively and transitively. Throws StructureError on malformed input;
/// semantic problems are left to validate().
KripkeStructure load_structure(std::string_view text);
std::string dump_structure(const KripkeStructure& M);

}  // namespace kt
