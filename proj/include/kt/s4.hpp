// First-order intuitionistic and modal formulas over finite Kripke models
// with expanding domains: G-forcing, S4 forcing, the g-translation, the two
// model transformations, and bounded countermodel search.
#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kt::modal {

/// A variable, a named constant, or an element constant #d produced by
/// instantiation.
struct MTerm {
    enum class Kind : std::uint8_t { Var, Const, Elem };
    Kind kind = Kind::Var;
    std::string name;
    int elem = -1;
    bool operator==(const MTerm&) const = default;
};

enum class MKind : std::uint8_t { Bot, Atom, And, Or, Imp, Forall, Exists, Box };

struct MFormula;
using MFormulaPtr = std::shared_ptr<const MFormula>;

struct MFormula {
    MKind kind = MKind::Bot;
    std::string pred;            // Atom
    std::vector<MTerm> args;     // Atom
    std::string var;             // quantifiers
    MFormulaPtr a, b;
};

MFormulaPtr m_bot();
MFormulaPtr m_atom(std::string pred, std::vector<MTerm> args = {});
MFormulaPtr m_and(MFormulaPtr a, MFormulaPtr b);
MFormulaPtr m_or(MFormulaPtr a, MFormulaPtr b);
MFormulaPtr m_imp(MFormulaPtr a, MFormulaPtr b);
MFormulaPtr m_neg(MFormulaPtr a);
MFormulaPtr m_forall(std::string v, MFormulaPtr a);
MFormulaPtr m_exists(std::string v, MFormulaPtr a);
MFormulaPtr m_box(MFormulaPtr a);

bool has_box(const MFormulaPtr& f);
std::size_t size(const MFormulaPtr& f);
std::size_t connectives(const MFormulaPtr& f);  // non-atomic, non-bot nodes
bool equal(const MFormulaPtr& f, const MFormulaPtr& g);
MFormulaPtr substitute(const MFormulaPtr& f, const std::string& v, const MTerm& t);
std::set<std::string> free_vars(const MFormulaPtr& f);

struct MParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grammar: `bot`, `P`, `P(x, c, #0)`, `~A`, `[]A`, `A /\ B`, `A \/ B`,
/// `A -> B` (right associative), `forall x. A`, `exists x. A`. An identifier
/// in argument position is a variable when bound, otherwise a constant.
MFormulaPtr parse_modal(std::string_view text);
std::string to_string(const MFormulaPtr& f);

/// Predicate symbols with arities and the named constants of a formula.
struct Signature {
    std::map<std::string, int> preds;
    std::set<std::string> constants;
};
Signature signature_of(const MFormulaPtr& f);
Signature signature_of(const std::vector<MFormulaPtr>& fs);

/// g(P) = []P, g(A -> B) = [](gA -> gB), g(forall x. A) = [] forall x. gA;
/// identity on bot and homomorphic on /\, \/, exists. Throws on boxed input.
MFormulaPtr translate_g(const MFormulaPtr& f);

// ---------------------------------------------------------------------------
// Models

using Tuple = std::vector<int>;

/// Worlds 0..k-1 under a reflexive, transitive order; per-world domains as
/// element bitmasks (elements 0..31); per-predicate, per-world extensions;
/// constants with one persistent value.
struct Model {
    int k = 0;
    std::vector<std::uint32_t> up;   // up[u] has bit v iff u <= v
    std::vector<std::uint32_t> dom;  // dom[w] has bit d iff d in D(w)
    std::map<std::string, std::vector<std::set<Tuple>>> val;
    std::map<std::string, int> constants;

    bool le(int u, int v) const { return (up[u] >> v) & 1u; }
    bool holds(const std::string& pred, int w, const Tuple& t) const;
};

/// S4 models: no heredity requirement on predicate extensions.
struct S4Model : Model {};
/// G models: predicate extensions grow along the order.
struct GModel : Model {};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Problems with the model: order, expanding domains, extension tuples
/// outside the world's domain, constants outside a domain, and for G models
/// heredity. Empty when valid.
std::vector<std::string> validate(const S4Model& M);
std::vector<std::string> validate(const GModel& M);

/// Kripke line format plus `dom <world> <elem>...`, `val <world> <pred>
/// <elem>...` and `const <name> <elem>`.
Model load_model(std::string_view text);
std::string dump_model(const Model& M);

/// Reading of the G existential clause. The letter asks, for every w' >= w,
/// for a d in D(w') with the instance forced at w; the alternative forces it
/// at w'.
enum class ExistsReading : std::uint8_t { Letter, AtSuccessor };

/// Throws ModelError on free variables, unknown constants, or constants
/// outside the evaluating world's domain.
bool s4_forces(const S4Model& N, int w, const MFormulaPtr& A);
bool forces_g_appendix(const GModel& M, int w, const MFormulaPtr& phi,
                       ExistsReading reading = ExistsReading::Letter);

/// World masks of the same relations, bit w set when forced at w.
std::uint32_t s4_mask(const Model& N, const MFormulaPtr& A);
std::uint32_t g_mask(const Model& M, const MFormulaPtr& phi, ExistsReading reading = ExistsReading::Letter);

/// Same frame, domains and constants; atoms copied.
S4Model to_s4_model(const GModel& M);
/// Same frame, domains and constants; P(t) holds at v iff []P(t) holds there.
GModel to_g_model(const S4Model& N);

// ---------------------------------------------------------------------------
// Bounded enumeration

struct ModelBounds {
    int max_worlds = 3;
    int max_domain = 2;
};

/// Every reflexive transitive relation on k labeled worlds.
std::vector<std::vector<std::uint32_t>> preorders(int k);

/// Calls f on every model of the signature within bounds; f returns false to
/// stop. Named constants denote element 0, which then lies in every domain.
void for_each_g_model(const Signature& sig, const ModelBounds& b, const std::function<bool(const GModel&)>& f);
void for_each_s4_model(const Signature& sig, const ModelBounds& b, const std::function<bool(const S4Model&)>& f);

struct Countermodel {
    GModel model;
    int world = -1;
};

struct IpcVerdict {
    bool valid_at_bounds = false;  // no countermodel within bounds; not a proof
    std::optional<Countermodel> countermodel;
    std::size_t models = 0;
};

IpcVerdict ipc_valid_bounded(const MFormulaPtr& phi, const ModelBounds& b = {});

/// No S4 model within bounds refutes A at any world.
bool s4_valid_bounded(const MFormulaPtr& A, const ModelBounds& b = {});

/// Every G model within bounds forcing all of gamma everywhere forces phi everywhere.
bool g_entails_bounded(const std::vector<MFormulaPtr>& gamma, const MFormulaPtr& phi, const ModelBounds& b = {});

}  // namespace kt::modal
