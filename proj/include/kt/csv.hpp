// Compositional supervaluations: csv-forcing, its jump, the jump of plain
// supervaluation over G-forcing, and fixed-point diagnostics.
#pragma once

#include "kt/superval.hpp"

namespace kt {

enum class CsvClause : std::uint8_t { Atom, And, Or, Imp, Forall, Exists };

std::string_view clause_name(CsvClause c);

/// One evaluated subformula. Children are indices into the trace, grouped:
/// And/Forall use one group; Or has one group per disjunct (over w' >= w);
/// Exists has one group per world w' >= w (over instances).
struct CsvStep {
    CsvClause clause = CsvClause::Atom;
    std::string formula;
    int world = -1;
    bool holds = false;
    bool exact = true;
    std::vector<std::vector<int>> groups;
};

struct CsvVerdict {
    bool holds = false;
    bool exact = true;
    CsvClause clause = CsvClause::Atom;  // clause that decided the root
    std::vector<CsvStep> trace;          // children before parents; root last
};

struct CsvError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Definition-level csv-forcing. The conditional clause quantifies over EI
/// maps from M into members of cls and G-forces the whole conditional at the
/// image. Throws CsvError on open formulas.
CsvVerdict csv_forces(const StructureClass& cls, const KripkeStructure& M, int w, const FormulaPtr& phi);

/// Recomputes every composite step from its children; true iff each stored
/// value agrees and the root matches v.holds.
bool replay(const CsvVerdict& v);

/// csv values at every pointed member of the analyzer's class, plus J_csv.
class CsvAnalysis {
public:
    explicit CsvAnalysis(Analyzer& A);

    Analyzer& analyzer() const { return *A_; }
    const PointedTable& values() const { return values_; }
    const std::vector<Mask>& jump_table() const { return jump_; }
    /// J_svi2, the intersection of plain supervaluation over G-forcing.
    const std::vector<Mask>& svi2_table() const { return A_->jump_global_table(); }

private:
    Analyzer* A_;
    PointedTable values_;
    std::vector<Mask> jump_;
};

/// csv masks for one structure given the svi2 value of every conditional node
/// at each world (imp[id] has bit w when the conditional holds there).
std::vector<WorldMask> csv_masks(const SentenceTable& T, const RawStructure& s,
                                 const std::vector<WorldMask>& global,
                                 const std::vector<WorldMask>& imp);

JumpReport jump_csv(CsvAnalysis& C, Mask X);
JumpReport jump_svi2(Analyzer& A, Mask X);

struct CsvDiagnosis {
    Mask fixed = 0;
    std::vector<CheckReport> checks;  // lemma checks, then CSV1..CSV11
    bool ok() const;
    bool exact() const;
};

/// Bounded instances of the eleven CSV axiom schemata whose Tr-sentences
/// stay inside U.
std::vector<AxiomInstance> csv_axiom_instances(const Universe& U, unsigned numeral_bound);

/// Lemma-level checks on X and the eleven schemata G-forced at the one-world
/// structure carrying X. Does not require X to be a fixed point; the caller
/// decides what a failure means.
CsvDiagnosis diagnose_fixed_point_csv(const Universe& U, Mask X, unsigned numeral_bound);

/// Embedding stability: row (i, w) of the csv table equals its fold over all
/// EI extensions, for every universe sentence. The class gets one world of
/// headroom over spec.max_worlds.
CheckReport check_lemma1(const ClassSpec& spec, const KernelOptions& opt = {});
CheckReport check_lemma1(CsvAnalysis& C);

/// For every pointed (i, w) not csv-forcing phi and every X' below its
/// interpretation, some pointed member carrying X' also fails phi. This is
/// the direction the monotonicity argument uses; the upward reading fails
/// already for atoms entering X'.
CheckReport check_monotonicity_lemma(CsvAnalysis& C);

/// Plain G-forcing at every pointed member of `big` carrying X implies
/// membership in J_csv over `small`, whose class should be one world smaller.
CheckReport check_supervaluational(Analyzer& big, CsvAnalysis& small);

/// csv at (i, w') agrees with csv at the truncation of member i at w'.
CheckReport check_csv_truncation(CsvAnalysis& C);

}  // namespace kt
