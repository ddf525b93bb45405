// Syntax of the arithmetic language with a truth predicate: terms, formulas,
// Goedel coding, closed-term evaluation, substitution, parsing and printing.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kt {

using Nat = boost::multiprecision::cpp_int;

// ---------------------------------------------------------------------------
// Terms

enum class FnSym : std::uint8_t {
    Succ,    // S(t)
    Add,     // s+t
    Mul,     // s*t
    DotImp,  // code of x -> y
    DotOr,   // code of x \/ y
    DotAnd,  // code of x /\ y
    DotAll,  // code of forall v. x   (v is the code of a variable term)
    DotEx,   // code of exists v. x
    Num,     // code of the numeral for n
    Subst,   // subst(x, v, t): code of x with the term coded by t for v
    DotEq,   // code of s=t, given term codes
    DotTr,   // code of Tr(n) for the numeral n
    DotNeg,  // code of ~x
};

int arity(FnSym s);
std::string_view fn_name(FnSym s);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    enum class Kind : std::uint8_t { Var, Numeral, App };
    Kind kind;
    std::string name;            // Var
    Nat value;                   // Numeral
    FnSym sym = FnSym::Succ;     // App
    std::vector<TermPtr> args;   // App
};

TermPtr var(std::string name);
TermPtr numeral(Nat n);
TermPtr app(FnSym sym, std::vector<TermPtr> args);

// ---------------------------------------------------------------------------
// Formulas. Negation is not primitive: neg(a) is imp(a, bot()).

enum class FKind : std::uint8_t { Bottom, Eq, Tr, And, Or, Imp, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FKind kind;
    TermPtr lhs, rhs;     // Eq: lhs=rhs; Tr: lhs
    FormulaPtr a, b;      // connectives; quantifier body in a
    std::string var;      // quantifiers
};

FormulaPtr bot();
FormulaPtr eq(TermPtr s, TermPtr t);
FormulaPtr tr(TermPtr t);
FormulaPtr conj(FormulaPtr a, FormulaPtr b);
FormulaPtr disj(FormulaPtr a, FormulaPtr b);
FormulaPtr imp(FormulaPtr a, FormulaPtr b);
FormulaPtr neg(FormulaPtr a);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);  // (a -> b) /\ (b -> a)
FormulaPtr forall(std::string v, FormulaPtr body);
FormulaPtr exists(std::string v, FormulaPtr body);

/// True when f is imp(x, bot()); x is stored to *inner when non-null.
bool is_neg(const FormulaPtr& f, FormulaPtr* inner = nullptr);

bool equal(const TermPtr& s, const TermPtr& t);
bool equal(const FormulaPtr& f, const FormulaPtr& g);

std::set<std::string> free_vars(const TermPtr& t);
std::set<std::string> free_vars(const FormulaPtr& f);
bool is_sentence(const FormulaPtr& f);
bool is_closed(const TermPtr& t);

/// Number of AST nodes (formula and term nodes).
std::size_t node_count(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Substitution (capture-avoiding; bound variables are renamed when needed).

TermPtr substitute(const TermPtr& t, const std::string& v, const TermPtr& s);
FormulaPtr substitute(const FormulaPtr& f, const std::string& v, const TermPtr& s);

// ---------------------------------------------------------------------------
// Goedel coding.
//
// code = kCodeBase + <tag, payload> with the Cantor pairing <x,y>. Formula
// tags are 0..7 (FKind order), term tags 8..10. Children are coded in full,
// so the scheme is independent of any universe. kCodeBase keeps every code
// away from the small numerals used in arithmetic.

inline const Nat kCodeBase = Nat(1) << 16;

struct CodingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Nat pair(const Nat& x, const Nat& y);
std::pair<Nat, Nat> unpair(const Nat& z);

Nat code_any(const FormulaPtr& f);  // open formulas allowed
Nat code_any(const TermPtr& t);
Nat code(const FormulaPtr& f);      // throws CodingError on open formulas

/// Inverse of code(): throws CodingError unless c codes a sentence.
FormulaPtr decode(const Nat& c);
/// Inverse of code_any() for formulas; nullptr if c does not code a formula.
FormulaPtr try_decode_formula(const Nat& c);
TermPtr try_decode_term(const Nat& c);
bool is_sentence_code(const Nat& c);

/// The quotation term for f: the numeral of its code.
TermPtr quote(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Closed-term evaluation.

struct EvalError : std::runtime_error {
    enum class Kind { OpenTerm, Overflow, Domain };
    Kind kind;
    EvalError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct EvalLimits {
    unsigned max_bits = 1u << 22;  // values wider than this raise Overflow
};

Nat eval_term(const TermPtr& t, const EvalLimits& lim = {});

// ---------------------------------------------------------------------------
// Text.

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(std::size_t p, const std::string& msg);
};

FormulaPtr parse(std::string_view text);
TermPtr parse_term(std::string_view text);
std::string to_string(const FormulaPtr& f);
std::string to_string(const TermPtr& t);

// ---------------------------------------------------------------------------
// Finite sentence universes.

struct UniverseSpec {
    std::vector<FormulaPtr> atoms;   // depth-0 sentences
    int depth = 0;                   // connective layers applied to atoms
    bool use_neg = true;
    bool use_and = true;
    bool use_or = true;
    bool use_imp = false;
    bool tr_closure = false;   // add Tr(#phi) for each member, one layer
    bool neg_closure = false;  // add ~phi for each member not itself a member's negation
    std::vector<FormulaPtr> extra;   // appended verbatim after generation
};

class Universe {
public:
    Universe() = default;
    explicit Universe(std::vector<FormulaPtr> members);

    std::size_t size() const { return members_.size(); }
    const FormulaPtr& member(std::size_t i) const { return members_[i]; }
    const Nat& code_at(std::size_t i) const { return codes_[i]; }
    const std::vector<FormulaPtr>& members() const { return members_; }
    const std::vector<Nat>& codes() const { return codes_; }

    /// Index of a code, or -1.
    int index_of(const Nat& c) const;
    int index_of(const FormulaPtr& f) const { return index_of(code(f)); }
    bool contains(const Nat& c) const { return index_of(c) >= 0; }

    /// Index of ~member(i) in the universe, or -1.
    int neg_index(std::size_t i) const { return neg_index_[i]; }
    /// Every member either has its negation present or is the negation of a member.
    bool negation_closed() const;

private:
    std::vector<FormulaPtr> members_;
    std::vector<Nat> codes_;
    std::map<Nat, int> index_;
    std::vector<int> neg_index_;
};

Universe enumerate_universe(const UniverseSpec& spec);

/// Reads a universe description: lines `atom <f>`, `depth <n>`,
/// `connectives neg,and,or,imp`, `close tr|neg`, `sentence <f>`; `%` comments.
Universe load_universe(std::string_view text);

}  // namespace kt
