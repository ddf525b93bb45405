#include "kt/ff.hpp"

#include <algorithm>
#include <numeric>

namespace kt {

namespace {

std::uint8_t all_worlds(int k) { return static_cast<std::uint8_t>((1u << k) - 1); }

// Up-sets of the frame, ascending as integers.
std::vector<std::uint8_t> upsets(const FrameInterpretation& I) {
    std::vector<std::uint8_t> out;
    for (unsigned s = 0; s <= all_worlds(I.k); ++s) {
        bool closed = true;
        for (int w = 0; w < I.k && closed; ++w)
            if (((s >> w) & 1u) && (I.up[w] & ~s)) closed = false;
        if (closed) out.push_back(static_cast<std::uint8_t>(s));
    }
    return out;
}

// Worlds whose interpretation contains member i.
std::uint8_t entry(const FrameInterpretation& I, std::size_t i) {
    std::uint8_t s = 0;
    for (int w = 0; w < I.k; ++w)
        if ((I.interp[w] >> i) & 1u) s |= static_cast<std::uint8_t>(1u << w);
    return s;
}

void check_input(const FrameInterpretation& I) {
    if (!is_frame(I)) throw FrameError("not a frame");
    if (!is_hereditary(I)) throw FrameError("interpretation is not hereditary");
}

}  // namespace

bool is_frame(const FrameInterpretation& I) {
    if (I.k < 1 || I.k > kMaxClassWorlds) return false;
    const auto all = all_worlds(I.k);
    for (int u = 0; u < I.k; ++u) {
        if (!((I.up[u] >> u) & 1u) || (I.up[u] & ~all)) return false;
        for (int v = 0; v < I.k; ++v) {
            if (!((I.up[u] >> v) & 1u)) continue;
            if (u != v && ((I.up[v] >> u) & 1u)) return false;
            if (I.up[v] & ~I.up[u]) return false;
        }
    }
    return true;
}

bool is_hereditary(const FrameInterpretation& I) {
    for (int u = 0; u < I.k; ++u)
        for (int v = 0; v < I.k; ++v)
            if (((I.up[u] >> v) & 1u) && (I.interp[u] & ~I.interp[v])) return false;
    return true;
}

bool extends(const FrameInterpretation& I, const FrameInterpretation& J) {
    if (I.k != J.k) return false;
    for (int w = 0; w < I.k; ++w)
        if (I.up[w] != J.up[w] || (I.interp[w] & ~J.interp[w])) return false;
    return true;
}

FrameInterpretation frame_of(const Poset& p) {
    FrameInterpretation I;
    I.k = p.k;
    I.up = p.up;
    return I;
}

KripkeStructure to_structure(const Universe& U, const FrameInterpretation& I, unsigned N) {
    KripkeStructure M;
    M.numeral_bound = N;
    for (int w = 0; w < I.k; ++w) {
        M.worlds.push_back("w" + std::to_string(w));
        M.up.push_back(I.up[w]);
        std::set<Nat> s;
        for (std::size_t i = 0; i < U.size(); ++i)
            if ((I.interp[w] >> i) & 1u) s.insert(U.code_at(i));
        M.interp.push_back(std::move(s));
    }
    return M;
}

FrameInterpretation from_structure(const Universe& U, const KripkeStructure& M) {
    if (M.size() > kMaxClassWorlds) throw FrameError("too many worlds for a frame");
    FrameInterpretation I;
    I.k = M.size();
    for (int w = 0; w < I.k; ++w) {
        I.up[w] = static_cast<std::uint8_t>(M.up[w]);
        for (const auto& c : M.interp[w]) {
            const int i = U.index_of(c);
            if (i < 0) throw FrameError("interpretation leaves the universe");
            I.interp[w] |= Mask(1) << i;
        }
    }
    return I;
}

std::vector<FrameInterpretation> hereditary_extensions(const FrameInterpretation& I, const Universe& U) {
    check_input(I);
    const auto ups = upsets(I);
    const std::size_t n = U.size();
    std::vector<std::vector<std::uint8_t>> choice(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto e = entry(I, i);
        for (auto s : ups)
            if ((s & e) == e) choice[i].push_back(s);
    }
    std::vector<FrameInterpretation> out;
    std::vector<std::size_t> pos(n, 0);
    while (true) {
        FrameInterpretation J = I;
        for (int w = 0; w < I.k; ++w) J.interp[w] = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto s = choice[i][pos[i]];
            for (int w = 0; w < I.k; ++w)
                if ((s >> w) & 1u) J.interp[w] |= Mask(1) << i;
        }
        out.push_back(J);
        std::size_t d = 0;
        while (d < n && ++pos[d] == choice[d].size()) pos[d++] = 0;
        if (d == n) break;
    }
    return out;
}

ForcingVerdict ff_forces(const Universe& U, const FrameInterpretation& I, int w, const FormulaPtr& phi,
                         unsigned N) {
    check_input(I);
    if (w < 0 || w >= I.k) throw FrameError("world out of range");
    ForcingVerdict r{true, true};
    for (const auto& J : hereditary_extensions(I, U)) {
        const auto v = forces(to_structure(U, J, N), w, phi);
        r.exact = r.exact && v.exact;
        if (!v.holds) {
            r.holds = false;
            break;
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// FixedFrame

FixedFrame::FixedFrame(const FrameInterpretation& frame, const Universe& U, unsigned N)
    : frame_(frame), table_(U, N), bound_(N) {
    if (!is_frame(frame_)) throw FrameError("not a frame");
    for (int w = 0; w < frame_.k; ++w) frame_.interp[w] = 0;
    for (const auto& f : U.members()) table_.add(tr(quote(f)));
}

std::vector<WorldMask> FixedFrame::values(const FrameInterpretation& I) const {
    std::vector<WorldMask> acc(table_.size(), all_worlds(I.k));
    for (const auto& J : hereditary_extensions(I, universe())) {
        const auto m = forcing_masks(table_, J, false);
        for (std::size_t id = 0; id < acc.size(); ++id) acc[id] &= m[id];
    }
    return acc;
}

FrameInterpretation FixedFrame::jump(const FrameInterpretation& I) const {
    const auto v = values(I);
    FrameInterpretation out = I;
    for (int w = 0; w < I.k; ++w) out.interp[w] = 0;
    for (std::size_t i = 0; i < universe().size(); ++i)
        for (int w = 0; w < I.k; ++w)
            if ((v[i] >> w) & 1u) out.interp[w] |= Mask(1) << i;
    return out;
}

std::vector<FrameInterpretation> FixedFrame::interpretations() const {
    return hereditary_extensions(frame_, universe());
}

std::vector<FrameInterpretation> FixedFrame::fixed_points() const {
    std::vector<FrameInterpretation> out;
    for (const auto& I : interpretations())
        if (jump(I).interp == I.interp) out.push_back(I);
    return out;
}

FixedFrame::Lfp FixedFrame::lfp(std::optional<FrameInterpretation> seed) const {
    FrameInterpretation I = seed.value_or(frame_);
    if (I.k != frame_.k || I.up != frame_.up) throw FrameError("seed lives on another frame");
    check_input(I);
    Lfp r;
    r.trace.push_back(I);
    FrameInterpretation J = jump(I);
    if (!extends(I, J)) throw FrameError("seed is not contained in its jump");
    while (J.interp != I.interp) {
        I = J;
        r.trace.push_back(I);
        J = jump(I);
    }
    r.fixed = I;
    return r;
}

// ---------------------------------------------------------------------------
// svi_M

SchemeVerdict svi_M_forces(const StructureClass& cls, const KripkeStructure& M, const KripkeStructure& N,
                           int n, const FormulaPtr& phi) {
    SchemeVerdict r;
    const int k = M.size();
    for (std::size_t j = 0; j < cls.size(); ++j) {
        if (cls.worlds(j) != k) continue;
        const KripkeStructure P = cls.structure(j);
        // Some order isomorphism tau: P -> M with I_P(p) containing I_M(tau(p)).
        std::vector<int> tau(k);
        std::iota(tau.begin(), tau.end(), 0);
        bool admissible = false;
        do {
            bool ok = true;
            for (int p = 0; p < k && ok; ++p)
                for (int q = 0; q < k && ok; ++q)
                    if (P.le(p, q) != M.le(tau[p], tau[q])) ok = false;
            for (int p = 0; p < k && ok; ++p)
                ok = std::includes(P.interp[p].begin(), P.interp[p].end(), M.interp[tau[p]].begin(),
                                   M.interp[tau[p]].end());
            admissible = ok;
        } while (!admissible && std::next_permutation(tau.begin(), tau.end()));
        if (!admissible) continue;
        for (auto& f : enumerate_ei(N, P)) {
            const int v = f.map[n];
            const auto fv = forces(P, v, phi);
            r.exact = r.exact && fv.exact;
            if (!fv.holds) {
                r.holds = false;
                r.counter = Extension{static_cast<int>(j), std::move(f), v};
                return r;
            }
        }
    }
    return r;
}

namespace {

// Canonical class indices of the hereditary extensions of M.
std::vector<int> targets(const StructureClass& cls, const FrameInterpretation& M) {
    std::vector<int> out;
    for (const auto& J : hereditary_extensions(M, cls.universe())) {
        const auto c = cls.canonicalize(J);
        if (!c) throw FrameError("extension outside the class; raise max_worlds");
        out.push_back(c->index);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Mask fold_targets(Analyzer& A, const std::vector<int>& T, std::size_t i, int w, Mask acc) {
    const PointedTable& F = A.forcing(false);
    for (int j : T)
        for (const auto& f : A.cls().ei_maps(i, j)) acc &= A.restrict(F.row(j, f.map[w]));
    return acc;
}

}  // namespace

Mask jump_svi_M(Analyzer& A, const FrameInterpretation& M, Mask X) {
    const auto T = targets(A.cls(), M);
    Mask acc = A.cls().full_mask();
    for (auto [i, w] : A.cls().pointed(X)) acc = fold_targets(A, T, i, w, acc);
    return acc;
}

Mask svi_M_on_self(Analyzer& A, const FrameInterpretation& M, int w) {
    const auto c = A.cls().canonicalize(M);
    if (!c) throw FrameError("structure outside the class");
    return fold_targets(A, targets(A.cls(), M), c->index, c->world[w], A.cls().full_mask());
}

CheckReport check_intersection_theorem(Analyzer& A, const FrameInterpretation& M) {
    CheckReport r{"intersection theorem", 1, {}, true};
    Mask X = A.cls().full_mask();
    for (int w = 0; w < M.k; ++w) X &= M.interp[w];
    const Mask J = jump_svi_M(A, M, X);
    if (J != X)
        r.failures.push_back({r.name, "intersection " + describe(A.universe(), X) + " but J^M_svi gives " +
                                          describe(A.universe(), J)});
    for (std::size_t i = 0; i < A.universe().size(); ++i) r.exact = r.exact && !A.table().inexact(int(i));
    return r;
}

CheckReport check_oneworld_correspondence(Analyzer& A) {
    CheckReport r{"one-world correspondence", 0, {}, true};
    const Universe& U = A.universe();
    FrameInterpretation one;
    one.k = 1;
    one.up[0] = 1;
    const FixedFrame F(one, U, A.cls().spec().numeral_bound);
    for (Mask X = 0; X <= A.cls().full_mask(); ++X) {
        one.interp[0] = X;
        ++r.instances;
        const bool ff_fixed = F.jump(one).interp[0] == X;
        const bool svi_fixed = jump_svi_M(A, one, X) == X;
        if (ff_fixed != svi_fixed)
            r.failures.push_back({r.name, describe(U, X) + (ff_fixed ? " is a J_ff fixed point only"
                                                                     : " is a J^M_svi fixed point only")});
    }
    return r;
}

CheckReport ff_transparency(const FixedFrame& F, const FrameInterpretation& I) {
    CheckReport r{"ff transparency", 0, {}, true};
    const auto v = F.values(I);
    const Universe& U = F.universe();
    for (std::size_t i = 0; i < U.size(); ++i) {
        const int t = F.table().find(code(tr(quote(U.member(i)))));
        r.exact = r.exact && !F.table().inexact(int(i));
        for (int w = 0; w < I.k; ++w) {
            ++r.instances;
            if (((v[i] >> w) & 1u) != ((v[t] >> w) & 1u))
                r.failures.push_back({r.name, to_string(U.member(i)) + " at w" + std::to_string(w)});
        }
    }
    return r;
}

CheckReport check_svi_M_equals_ff(Analyzer& A, const FixedFrame& F, const FrameInterpretation& M) {
    CheckReport r{"svi_M on M equals ff", 0, {}, true};
    const auto v = F.values(M);
    const Universe& U = A.universe();
    for (int w = 0; w < M.k; ++w) {
        const Mask s = svi_M_on_self(A, M, w);
        for (std::size_t i = 0; i < U.size(); ++i) {
            ++r.instances;
            if (((s >> i) & 1u) != ((v[i] >> w) & 1u))
                r.failures.push_back({r.name, to_string(U.member(i)) + " at w" + std::to_string(w)});
        }
    }
    return r;
}

}  // namespace kt
