// Supervaluational forcing schemes, their jump operators over a bounded
// class, fixed points, and semantic axiom audits.
#pragma once

#include "kt/engine.hpp"

#include <memory>

namespace kt {

enum class Scheme : std::uint8_t { SVI, VBI, VCI, MCI };

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);  // case-insensitive
Admissibility admissibility_of(Scheme s);

struct SchemeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An EI extension: target class member, the map, and the image world.
struct Extension {
    int target = -1;
    WorldMap map;
    int image = -1;
};

struct SchemeVerdict {
    bool holds = true;
    bool exact = true;
    std::optional<Extension> counter;  // first refuting admissible extension
};

/// By definition: every class member M', every EI map f from M into M' that
/// meets the scheme's admissibility condition, f(w) forces phi in M'. With
/// `global` the plain forcing at the image is G-forcing (the svi2 relation).
/// M may be any structure; class members are enumerated in canonical order.
SchemeVerdict scheme_forces(Scheme s, const StructureClass& cls, const KripkeStructure& M, int w,
                            const FormulaPtr& phi, bool global = false);

/// Bounded class plus a sentence table, with all folds over EI extensions
/// computed once on first use.
class Analyzer {
public:
    /// Extra sentences join the table before any fold runs. Tr of every
    /// universe member is always added.
    Analyzer(ClassSpec spec, const std::vector<FormulaPtr>& extra = {}, KernelOptions opt = {});

    const StructureClass& cls() const { return *cls_; }
    const SentenceTable& table() const { return *table_; }
    const Universe& universe() const { return cls_->universe(); }
    const KernelOptions& options() const { return opt_; }

    /// Table id of a sentence; throws std::out_of_range when absent.
    int node(const FormulaPtr& phi) const;
    Mask restrict(const NodeSet& s) const;

    const PointedTable& forcing(bool global);
    /// Row (i, w) holds the nodes forced at (i, w) by the scheme.
    const PointedTable& supervaluation(Scheme s);
    /// svi over G-forcing.
    const PointedTable& supervaluation_global();

    /// J[X] for every X, X indexed as a universe mask.
    const std::vector<Mask>& jump_table(Scheme s);
    /// The primed jump: quantifies over pointed members whose world carries a superset of X.
    const std::vector<Mask>& jump_prime_table();
    const std::vector<Mask>& jump_global_table();
    /// Jump of plain forcing under an arbitrary admissibility condition;
    /// computed on every call.
    std::vector<Mask> jump_table_for(Admissibility a);

private:
    ClassSpec spec_;
    KernelOptions opt_;
    std::unique_ptr<StructureClass> cls_;
    std::unique_ptr<SentenceTable> table_;
    std::optional<PointedTable> plain_, global_;
    std::vector<PointedTable> folds_;  // svi, vbi, vci, mci, svi over G
    std::array<std::vector<Mask>, 4> jumps_;
    std::vector<Mask> prime_, global_jump_;

    void ensure_folds();
    std::vector<Mask> to_jump(const PointedTable& t) const;
};

// ---------------------------------------------------------------------------
// Jumps

struct JumpWitness {
    int member = -1;  // pointed structure whose world carries the input
    int world = -1;
    std::optional<Extension> extension;  // admissible extension refuting the sentence
};

struct JumpReport {
    std::string op;  // "svi", "vbi", "vci", "mci", "svi'", "csv", "svi2"
    Mask input = 0;
    Mask output = 0;
    std::vector<std::optional<JumpWitness>> witness;  // per universe index, set when excluded
    std::vector<bool> exact;  // per universe index: no quantifier cutoff below it
};

JumpReport jump(Analyzer& A, Scheme s, Mask X);
JumpReport jump_prime(Analyzer& A, Mask X);

/// First pointed member whose world carries exactly X (or a superset, when
/// `superset`) and whose row in t lacks node id; (-1, -1) if none.
std::pair<int, int> first_refuting_pointed(const StructureClass& cls, const PointedTable& t, Mask X,
                                           int id, bool superset = false);

/// First admissible extension of pointed (i, w) whose image lacks node id in
/// `values`.
std::optional<Extension> first_refuting_extension(const StructureClass& cls, int i, int w,
                                                  const PointedTable& values, int id,
                                                  Admissibility a);

// ---------------------------------------------------------------------------
// Fixed points

struct LfpResult {
    Mask fixed = 0;
    std::vector<Mask> trace;  // seed, J(seed), ..., fixed
};

struct SeedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Iterates X -> J[X] from the seed; throws SeedError unless seed is a subset of J[seed].
LfpResult lfp(const std::vector<Mask>& J, Mask seed = 0);
std::vector<Mask> fixed_points(const std::vector<Mask>& J);

// ---------------------------------------------------------------------------
// Checks

struct CheckFailure {
    std::string check;
    std::string detail;
};

struct CheckReport {
    std::string name;
    std::size_t instances = 0;
    std::vector<CheckFailure> failures;
    bool exact = true;
    bool ok() const { return failures.empty(); }
    void merge(const CheckReport& o);
};

std::string describe(const Universe& U, Mask X);

/// #phi in X iff #Tr(#phi) in X, over members whose Tr-sentence is in U.
CheckReport check_transparency(const Universe& U, Mask X);

/// At the one-world structure carrying X: w forces phi by the scheme iff w
/// forces Tr(#phi) by the scheme, for every universe member.
CheckReport check_transparent_oneworld(Analyzer& A, Scheme s, Mask X);

/// Universe members of the form ~(Tr(t) /\ Tr(neg(t))), resp.
/// (Tr(neg(t)) -> ~Tr(t)) /\ (~Tr(t) -> Tr(neg(t))).
bool is_consistency_instance(const FormulaPtr& f);
bool is_completeness_instance(const FormulaPtr& f);
FormulaPtr consistency_sentence(const TermPtr& t);
FormulaPtr completeness_sentence(const TermPtr& t);

/// Every universe instance of the respective sentence shape belongs to X.
CheckReport check_internal_consistency(const Universe& U, Mask X);
CheckReport check_internal_completeness(const Universe& U, Mask X);

// ---------------------------------------------------------------------------
// Axiom audits

enum class Theory : std::uint8_t { ISV, IVB, IVF, IMC };

std::string_view theory_name(Theory t);
std::optional<Theory> parse_theory(std::string_view name);
Scheme scheme_of(Theory t);

struct AxiomInstance {
    std::string axiom;  // "ISV1" ... "IMC8", or a derived fact name
    FormulaPtr sentence;
};

/// Sentences of the curated arithmetic axiom list used for ISV2.
std::vector<FormulaPtr> arithmetic_axioms();

/// Bounded instances of the theory's axioms whose sentences under Tr lie in U.
std::vector<AxiomInstance> axiom_instances(Theory t, const Universe& U);

struct AuditFailure {
    std::string axiom;
    std::string sentence;
    std::string world;
};

struct AuditReport {
    Theory theory = Theory::ISV;
    std::vector<std::pair<std::string, std::size_t>> counts;  // axiom, instances checked
    std::vector<AuditFailure> failures;
    bool exact = true;
    bool ok() const { return failures.empty(); }
};

/// Every instance forced at every world of M; ISV6 checks that every code
/// in every interpretation names a sentence.
AuditReport audit_axioms(Theory t, const KripkeStructure& M, const Universe& U);

/// One-world structure per fixed point and a two-world chain for each
/// strictly comparable pair.
std::vector<KripkeStructure> fixed_point_structures(const Universe& U, const std::vector<Mask>& fps,
                                                    unsigned numeral_bound);

struct Mutation {
    int structure = -1;
    int world = -1;
    int injected = -1;  // universe index added at the world and above
    bool fault = false;     // the injected sentence is not forced there afterwards
    bool detected = false;  // the audit fails on the mutant
};

/// All single-code injections into the given structures.
std::vector<Mutation> mutation_sweep(Theory t, const std::vector<KripkeStructure>& structures,
                                     const Universe& U);

KripkeStructure one_world(const Universe& U, Mask X, unsigned numeral_bound);

}  // namespace kt
