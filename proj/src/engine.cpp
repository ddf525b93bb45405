#include "kt/engine.hpp"

#include <omp.h>

namespace kt {

// ---------------------------------------------------------------------------
// Sentence table

SentenceTable::SentenceTable(const Universe& U, unsigned numeral_bound, EvalLimits lim)
    : universe_(U), bound_(numeral_bound), lim_(lim) {
    const std::size_t n = U.size();
    nodes_.resize(n);
    inexact_.assign(n, false);
    filled_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        nodes_[i].formula = U.member(i);
        index_.emplace(U.code_at(i), static_cast<int>(i));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!filled_[i]) fill(static_cast<int>(i));
}

int SentenceTable::find(const Nat& c) const {
    auto it = index_.find(c);
    return it == index_.end() ? -1 : it->second;
}

int SentenceTable::add(const FormulaPtr& f) {
    Nat c = code(f);
    if (auto it = index_.find(c); it != index_.end()) {
        if (!filled_[it->second]) fill(it->second);
        return it->second;
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_.back().formula = f;
    inexact_.push_back(false);
    filled_.push_back(false);
    index_.emplace(std::move(c), id);
    fill(id);
    return id;
}

void SentenceTable::fill(int id) {
    filled_[id] = true;  // subformulas are strictly smaller, so no cycle reaches id
    const FormulaPtr f = nodes_[id].formula;
    Node n;
    n.formula = f;
    bool inexact = false;
    switch (f->kind) {
        case FKind::Bottom: n.kind = NodeKind::Const; break;
        case FKind::Eq:
            n.kind = NodeKind::Const;
            n.value = eval_term(f->lhs, lim_) == eval_term(f->rhs, lim_);
            break;
        case FKind::Tr:
            n.kind = NodeKind::Tr;
            n.tr = universe_.index_of(eval_term(f->lhs, lim_));
            break;
        case FKind::And:
        case FKind::Or:
        case FKind::Imp:
            n.kind = f->kind == FKind::And ? NodeKind::And
                     : f->kind == FKind::Or ? NodeKind::Or
                                             : NodeKind::Imp;
            n.a = add(f->a);
            n.b = add(f->b);
            inexact = inexact_[n.a] || inexact_[n.b];
            break;
        case FKind::Forall:
        case FKind::Exists:
            n.kind = f->kind == FKind::Forall ? NodeKind::Forall : NodeKind::Exists;
            if (free_vars(f->a).count(f->var)) {
                n.cutoff = true;
                inexact = true;
                for (unsigned k = 0; k <= bound_; ++k) n.inst.push_back(add(substitute(f->a, f->var, numeral(k))));
            } else {
                n.inst.push_back(add(f->a));
            }
            for (int c : n.inst) inexact = inexact || inexact_[c];
            break;
    }
    nodes_[id] = std::move(n);
    inexact_[id] = inexact;
    order_.push_back(id);
}

// ---------------------------------------------------------------------------
// Forcing masks

namespace {

struct Frame {
    int k;
    WorldMask all;
    std::array<WorldMask, kMaxClassWorlds> up;
    WorldMask box(WorldMask s) const {
        WorldMask r = 0;
        for (int w = 0; w < k; ++w)
            if ((up[w] & ~s & all) == 0) r |= static_cast<WorldMask>(1u << w);
        return r;
    }
};

}  // namespace

void extend_forcing_masks(const SentenceTable& T, const RawStructure& s, bool global,
                          std::vector<WorldMask>& masks) {
    Frame F{s.k, static_cast<WorldMask>((1u << s.k) - 1), {}};
    for (int w = 0; w < s.k; ++w) F.up[w] = s.up[w];
    const std::size_t from = masks.size();
    masks.resize(T.size(), 0);
    const auto& order = T.order();
    for (std::size_t p = from; p < order.size(); ++p) {
        const int id = order[p];
        const Node& n = T.node(id);
        WorldMask r = 0;
        switch (n.kind) {
            case NodeKind::Const: r = n.value ? F.all : 0; break;
            case NodeKind::Tr:
                if (n.tr >= 0)
                    for (int w = 0; w < s.k; ++w)
                        if ((s.interp[w] >> n.tr) & 1u) r |= static_cast<WorldMask>(1u << w);
                break;
            case NodeKind::And: r = masks[n.a] & masks[n.b]; break;
            case NodeKind::Or:
                r = global ? (F.box(masks[n.a]) | F.box(masks[n.b])) : (masks[n.a] | masks[n.b]);
                break;
            case NodeKind::Imp: r = F.box(static_cast<WorldMask>(~masks[n.a] | masks[n.b])); break;
            case NodeKind::Forall: {
                WorldMask all = F.all;
                for (int c : n.inst) all &= masks[c];
                r = global ? all : F.box(all);
                break;
            }
            case NodeKind::Exists: {
                // The G clause asks, at every w' >= w, for a witness forced at
                // w itself; with a constant domain that is the local clause.
                for (int c : n.inst) r |= masks[c];
                break;
            }
        }
        masks[id] = r;
    }
}

std::vector<WorldMask> forcing_masks(const SentenceTable& T, const RawStructure& s, bool global) {
    std::vector<WorldMask> m;
    extend_forcing_masks(T, s, global, m);
    return m;
}

// ---------------------------------------------------------------------------
// Pointed tables

PointedTable::PointedTable(const StructureClass& cls, std::size_t nodes) : nodes_(nodes) {
    offset_.resize(cls.size() + 1);
    std::size_t total = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        offset_[i] = total;
        total += cls.worlds(i);
    }
    offset_[cls.size()] = total;
    rows_.assign(total, NodeSet(nodes));
}

PointedTable pointed_forcing(const StructureClass& cls, const SentenceTable& T, bool global) {
    PointedTable out(cls, T.size());
    const auto n = static_cast<std::int64_t>(cls.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        const RawStructure s = cls.raw(i);
        const auto masks = forcing_masks(T, s, global);
        for (int w = 0; w < s.k; ++w) {
            NodeSet& row = out.row(i, w);
            for (std::size_t id = 0; id < masks.size(); ++id)
                if ((masks[id] >> w) & 1u) row.set(id);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Admissibility

Mask negations_of(const Universe& U, Mask X) {
    Mask r = 0;
    for (std::size_t i = 0; i < U.size(); ++i)
        if (((X >> i) & 1u) && U.neg_index(i) >= 0) r |= Mask(1) << U.neg_index(i);
    return r;
}

Mask anti_extension(const Universe& U, Mask X) {
    Mask r = 0;
    for (std::size_t i = 0; i < U.size(); ++i)
        if (U.neg_index(i) >= 0 && ((X >> U.neg_index(i)) & 1u)) r |= Mask(1) << i;
    return r;
}

bool consistent(const Universe& U, Mask X) {
    return (X & negations_of(U, X)) == 0;
}

bool mcx(const Universe& U, Mask X) {
    for (std::size_t i = 0; i < U.size(); ++i) {
        const int n = U.neg_index(i);
        if (n < 0) continue;
        if (((X >> i) & 1u) == ((X >> n) & 1u)) return false;
    }
    return true;
}

bool admissible_image(const StructureClass& cls, std::size_t j, int v, Mask X, Admissibility a) {
    if (a == Admissibility::Any) return true;
    const auto& m = cls.member(j);
    const Poset& P = cls.poset_of(j);
    const Mask negX = negations_of(cls.universe(), X);
    const Mask antiX = anti_extension(cls.universe(), X);
    for (int u = 0; u < P.k; ++u) {
        if (!P.le(v, u)) continue;
        const Mask I = m.interp[u];
        switch (a) {
            case Admissibility::NoNegation:
                if (I & negX) return false;
                break;
            case Admissibility::NoAntiExtension:
                if (I & antiX) return false;
                break;
            case Admissibility::Consistent:
                if (!consistent(cls.universe(), I)) return false;
                break;
            case Admissibility::Maximal:
                if (!mcx(cls.universe(), I)) return false;
                break;
            case Admissibility::Any: break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Kernel

namespace {

// Per-(member, world) target data precomputed once per kernel run.
struct TargetInfo {
    std::vector<std::size_t> offset;
    std::vector<Mask> up_interp;   // union of interpretations at or above
    std::vector<std::uint8_t> cons, max;  // every world above consistent / MCX
};

TargetInfo target_info(const StructureClass& cls) {
    TargetInfo t;
    t.offset.resize(cls.size());
    const Universe& U = cls.universe();
    for (std::size_t j = 0; j < cls.size(); ++j) {
        t.offset[j] = t.up_interp.size();
        const auto& m = cls.member(j);
        const Poset& P = cls.poset_of(j);
        for (int v = 0; v < P.k; ++v) {
            Mask up = 0;
            bool c = true, x = true;
            for (int u = 0; u < P.k; ++u)
                if (P.le(v, u)) {
                    up |= m.interp[u];
                    c = c && consistent(U, m.interp[u]);
                    x = x && mcx(U, m.interp[u]);
                }
            t.up_interp.push_back(up);
            t.cons.push_back(c);
            t.max.push_back(x);
        }
    }
    return t;
}

// Members are grouped by poset; ranges[p] = [first, last).
std::vector<std::pair<std::size_t, std::size_t>> poset_ranges(const StructureClass& cls) {
    std::vector<std::pair<std::size_t, std::size_t>> r(cls.posets().size(), {0, 0});
    for (std::size_t i = 0; i < cls.size();) {
        const int p = cls.member(i).poset;
        std::size_t e = i;
        while (e < cls.size() && cls.member(e).poset == p) ++e;
        r[p] = {i, e};
        i = e;
    }
    return r;
}

}  // namespace

std::vector<PointedTable> fold_extensions(const StructureClass& cls,
                                          const std::vector<Channel>& channels,
                                          const KernelOptions& opt) {
    std::vector<PointedTable> out;
    for (const auto& c : channels) {
        PointedTable t(cls, c.values->nodes());
        out.push_back(std::move(t));
    }
    const TargetInfo info = target_info(cls);
    const auto ranges = poset_ranges(cls);
    const Universe& U = cls.universe();
    const auto n = static_cast<std::int64_t>(cls.size());
    const int threads = opt.workers > 0 ? opt.workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& src = cls.member(i);
        const int k = cls.worlds(i);
        std::array<Mask, kMaxClassWorlds> negX{}, antiX{};
        for (int w = 0; w < k; ++w) {
            negX[w] = negations_of(U, src.interp[w]);
            antiX[w] = anti_extension(U, src.interp[w]);
            for (auto& t : out) t.row(i, w).set();
        }
        for (std::size_t q = 0; q < cls.posets().size(); ++q) {
            const auto& embs = cls.frame_embeddings(src.poset, static_cast<int>(q));
            if (embs.empty()) continue;
            for (std::size_t j = ranges[q].first; j < ranges[q].second; ++j) {
                const auto& tgt = cls.member(j);
                std::array<WorldMask, kMaxClassWorlds> reach{};
                for (const auto& g : embs) {
                    bool ok = true;
                    for (int u = 0; ok && u < k; ++u) ok = (src.interp[u] & ~tgt.interp[g[u]]) == 0;
                    if (!ok) continue;
                    for (int u = 0; u < k; ++u) reach[u] |= static_cast<WorldMask>(1u << g[u]);
                }
                for (int w = 0; w < k; ++w) {
                    for (int v = 0; reach[w] >> v; ++v) {
                        if (!((reach[w] >> v) & 1u)) continue;
                        const std::size_t tv = info.offset[j] + v;
                        for (std::size_t c = 0; c < channels.size(); ++c) {
                            bool adm = true;
                            switch (channels[c].admissible) {
                                case Admissibility::Any: break;
                                case Admissibility::NoNegation: adm = (info.up_interp[tv] & negX[w]) == 0; break;
                                case Admissibility::NoAntiExtension: adm = (info.up_interp[tv] & antiX[w]) == 0; break;
                                case Admissibility::Consistent: adm = info.cons[tv]; break;
                                case Admissibility::Maximal: adm = info.max[tv]; break;
                            }
                            if (adm) out[c].row(i, w) &= channels[c].values->row(j, v);
                        }
                    }
                }
            }
        }
    }
    return out;
}

std::vector<PointedTable> fold_extensions_reference(const StructureClass& cls,
                                                    const std::vector<Channel>& channels) {
    std::vector<PointedTable> out;
    for (const auto& c : channels) out.emplace_back(cls, c.values->nodes());
    std::vector<KripkeStructure> structs;
    for (std::size_t j = 0; j < cls.size(); ++j) structs.push_back(cls.structure(j));
    for (std::size_t i = 0; i < cls.size(); ++i) {
        for (int w = 0; w < cls.worlds(i); ++w)
            for (auto& t : out) t.row(i, w).set();
        for (std::size_t j = 0; j < cls.size(); ++j) {
            for (const auto& f : enumerate_ei(structs[i], structs[j])) {
                for (int w = 0; w < cls.worlds(i); ++w) {
                    const int v = f.map[w];
                    for (std::size_t c = 0; c < channels.size(); ++c)
                        if (admissible_image(cls, j, v, cls.member(i).interp[w], channels[c].admissible))
                            out[c].row(i, w) &= channels[c].values->row(j, v);
                }
            }
        }
    }
    return out;
}

std::vector<NodeSet> intersect_by_interp(const StructureClass& cls, const PointedTable& t) {
    const std::size_t n = cls.universe().size();
    if (n > 20) throw std::invalid_argument("jump tables need a universe of at most 20 sentences");
    std::vector<NodeSet> out(std::size_t(1) << n, NodeSet(t.nodes()));
    for (auto& s : out) s.set();
    for (std::size_t i = 0; i < cls.size(); ++i)
        for (int w = 0; w < cls.worlds(i); ++w) out[cls.member(i).interp[w]] &= t.row(i, w);
    return out;
}

}  // namespace kt
