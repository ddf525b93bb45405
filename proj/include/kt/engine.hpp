// Bit-parallel evaluation over a structure class: a deduplicated table of
// sentences, per-structure forcing masks, and the pair kernel that folds
// forcing values across all EI extensions.
#pragma once

#include "kt/search.hpp"

#include <boost/dynamic_bitset.hpp>

#include <map>

namespace kt {

using NodeSet = boost::dynamic_bitset<std::uint64_t>;

using WorldMask = std::uint8_t;  // bit w = world w of a class member

enum class NodeKind : std::uint8_t { Const, Tr, And, Or, Imp, Forall, Exists };

struct Node {
    NodeKind kind = NodeKind::Const;
    bool value = false;          // Const
    int tr = -1;                 // Tr: universe index of the named sentence, -1 if outside
    int a = -1, b = -1;          // binary children
    std::vector<int> inst;       // quantifier instances 0..N (one entry if vacuous)
    bool cutoff = false;         // this quantifier ranges over 0..N instead of all numerals
    FormulaPtr formula;
};

/// Sentences closed under subformulas and bounded instantiation. Universe
/// members occupy ids 0..|U|-1 in universe order.
class SentenceTable {
public:
    SentenceTable(const Universe& U, unsigned numeral_bound, EvalLimits lim = {});

    int add(const FormulaPtr& sentence);
    int find(const Nat& code) const;
    std::size_t size() const { return nodes_.size(); }
    const Node& node(int id) const { return nodes_[id]; }
    const Universe& universe() const { return universe_; }
    unsigned numeral_bound() const { return bound_; }
    /// Some quantifier below this node was cut off at the numeral bound.
    bool inexact(int id) const { return inexact_[id]; }
    /// Node ids with children before parents.
    const std::vector<int>& order() const { return order_; }

private:
    Universe universe_;
    unsigned bound_;
    EvalLimits lim_;
    std::vector<Node> nodes_;
    std::vector<bool> inexact_;
    std::vector<bool> filled_;
    std::vector<int> order_;  // children before parents
    std::map<Nat, int> index_;

    void fill(int id);
};

/// Forcing masks for every table node at one structure: masks[node] has
/// bit w iff w forces the node. `global` selects the G clauses.
std::vector<WorldMask> forcing_masks(const SentenceTable& T, const RawStructure& s, bool global);

/// Same, but extends an earlier result after new nodes were added.
void extend_forcing_masks(const SentenceTable& T, const RawStructure& s, bool global,
                          std::vector<WorldMask>& masks);

/// Per-(member, world) node sets: row(i, w).
class PointedTable {
public:
    PointedTable() = default;
    PointedTable(const StructureClass& cls, std::size_t nodes);
    NodeSet& row(std::size_t i, int w) { return rows_[offset_[i] + w]; }
    const NodeSet& row(std::size_t i, int w) const { return rows_[offset_[i] + w]; }
    std::size_t rows() const { return rows_.size(); }
    std::size_t nodes() const { return nodes_; }
    bool operator==(const PointedTable& o) const { return rows_ == o.rows_; }

private:
    std::size_t nodes_ = 0;
    std::vector<std::size_t> offset_;
    std::vector<NodeSet> rows_;
};

/// Values of every node at every pointed member under plain or G forcing.
PointedTable pointed_forcing(const StructureClass& cls, const SentenceTable& T, bool global);

/// Target-side admissibility condition on an EI image world.
enum class Admissibility : std::uint8_t {
    Any,         // bare embeddability
    NoNegation,  // no world above the image holds the negation of a source truth
    Consistent,  // no world above the image holds both a sentence and its negation
    Maximal,     // every world above the image decides each universe pair exactly once
    NoAntiExtension,  // no world above the image holds a sentence whose negation the source holds
};

/// One fold: out(i,w) = AND of values(j,v) over every class member j and
/// world v = f(w) for an EI map f from i into j with v admissible.
struct Channel {
    const PointedTable* values = nullptr;
    Admissibility admissible = Admissibility::Any;
};

struct KernelOptions {
    int workers = 0;  // 0: OpenMP default
};

/// Parallel over source members; output is independent of the worker count.
std::vector<PointedTable> fold_extensions(const StructureClass& cls,
                                          const std::vector<Channel>& channels,
                                          const KernelOptions& opt = {});

/// Straightforward serial version of fold_extensions that enumerates EI maps
/// member by member. Kept as the reference the kernel is tested against.
std::vector<PointedTable> fold_extensions_reference(const StructureClass& cls,
                                                    const std::vector<Channel>& channels);

/// Admissibility of image world v of member j for a source world carrying X.
bool admissible_image(const StructureClass& cls, std::size_t j, int v, Mask X, Admissibility a);

/// Interpretation tests relative to the universe's negation pairs.
bool mcx(const Universe& U, Mask X);
bool consistent(const Universe& U, Mask X);
Mask negations_of(const Universe& U, Mask X);
/// Members whose negation lies in X.
Mask anti_extension(const Universe& U, Mask X);

/// AND of rows over all pointed members whose world carries exactly X,
/// indexed by X; the empty intersection (no such pointed member) is all-ones.
std::vector<NodeSet> intersect_by_interp(const StructureClass& cls, const PointedTable& t);

}  // namespace kt
