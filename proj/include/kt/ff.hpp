// Fixed-frame supervaluation: interpretation extensions over one frame, the
// frame-local jump, and the frame-restricted svi_M scheme.
#pragma once

#include "kt/superval.hpp"

namespace kt {

/// A frame with a per-world interpretation over universe masks. Only the
/// first k entries of `up` and `interp` are meaningful.
using FrameInterpretation = RawStructure;

struct FrameError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Reflexive, transitive, antisymmetric order on k <= kMaxClassWorlds worlds.
bool is_frame(const FrameInterpretation& I);
/// Interpretations grow along the order.
bool is_hereditary(const FrameInterpretation& I);
/// Pointwise inclusion on the same frame (the extension order).
bool extends(const FrameInterpretation& I, const FrameInterpretation& J);

FrameInterpretation frame_of(const Poset& p);
KripkeStructure to_structure(const Universe& U, const FrameInterpretation& I, unsigned numeral_bound);
FrameInterpretation from_structure(const Universe& U, const KripkeStructure& M);

/// Every hereditary J on I's frame with I <= J and values inside U, in
/// lexicographic order of per-member entry sets. I comes first.
std::vector<FrameInterpretation> hereditary_extensions(const FrameInterpretation& I, const Universe& U);

/// By definition: every hereditary extension forces phi at w. Throws
/// FrameError when I is not a hereditary frame interpretation.
ForcingVerdict ff_forces(const Universe& U, const FrameInterpretation& I, int w, const FormulaPtr& phi,
                         unsigned numeral_bound);

/// Table-backed fixed-frame evaluation on one frame.
class FixedFrame {
public:
    FixedFrame(const FrameInterpretation& frame, const Universe& U, unsigned numeral_bound);

    const SentenceTable& table() const { return table_; }
    const Universe& universe() const { return table_.universe(); }
    const FrameInterpretation& frame() const { return frame_; }

    /// ff masks for every table node under I.
    std::vector<WorldMask> values(const FrameInterpretation& I) const;
    FrameInterpretation jump(const FrameInterpretation& I) const;
    /// All hereditary interpretations on the frame.
    std::vector<FrameInterpretation> interpretations() const;
    std::vector<FrameInterpretation> fixed_points() const;

    struct Lfp {
        FrameInterpretation fixed;
        std::vector<FrameInterpretation> trace;
    };
    /// Iterates from the seed; the empty interpretation by default. Throws
    /// FrameError unless the seed is hereditary and below its own jump.
    Lfp lfp(std::optional<FrameInterpretation> seed = std::nullopt) const;

private:
    FrameInterpretation frame_;
    SentenceTable table_;
    unsigned bound_;
};

/// Literal svi_M: every class member P whose frame is isomorphic to M's by
/// some tau with I_P(p) containing I_M(tau(p)), and every EI map f from N
/// into P, f(n) forces phi in P.
SchemeVerdict svi_M_forces(const StructureClass& cls, const KripkeStructure& M, const KripkeStructure& N,
                           int n, const FormulaPtr& phi);

/// J^M_svi(X) over the analyzer's class, with targets realized as the
/// hereditary extensions of M on its own frame.
Mask jump_svi_M(Analyzer& A, const FrameInterpretation& M, Mask X);

/// svi_M values at (M, w) for every universe member, via the same targets.
Mask svi_M_on_self(Analyzer& A, const FrameInterpretation& M, int w);

/// Intersection of the interpretations of M is a fixed point of J^M_svi.
CheckReport check_intersection_theorem(Analyzer& A, const FrameInterpretation& M);

/// For a one-world M: I(w) = J^M_svi(I(w)) iff I is a J_ff fixed point,
/// scanned over every X in the universe.
CheckReport check_oneworld_correspondence(Analyzer& A);

/// Under a J_ff fixed point, ff-forcing phi and Tr(#phi) agree at every
/// world, for every universe member phi.
CheckReport ff_transparency(const FixedFrame& F, const FrameInterpretation& I);

/// svi_M at M itself agrees with the ff values of every universe member.
CheckReport check_svi_M_equals_ff(Analyzer& A, const FixedFrame& F, const FrameInterpretation& M);

}  // namespace kt
