#include "kt/search.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace kt {

// ---------------------------------------------------------------------------
// EI maps between arbitrary structures

bool is_ei(const KripkeStructure& M, const KripkeStructure& N, const std::vector<int>& map) {
    if (static_cast<int>(map.size()) != M.size()) return false;
    for (int u = 0; u < M.size(); ++u) {
        if (map[u] < 0 || map[u] >= N.size()) return false;
        for (int v = 0; v < M.size(); ++v) {
            if (u != v && map[u] == map[v]) return false;
            if (M.le(u, v) != N.le(map[u], map[v])) return false;
        }
        for (const auto& c : M.interp[u])
            if (!N.interp[map[u]].count(c)) return false;
    }
    return true;
}

std::vector<WorldMap> enumerate_ei(const KripkeStructure& M, const KripkeStructure& N) {
    std::vector<WorldMap> out;
    const int n = M.size();
    std::vector<int> map(n, -1);
    std::vector<bool> used(N.size(), false);
    std::function<void(int)> go = [&](int u) {
        if (u == n) {
            out.push_back({map});
            return;
        }
        for (int x = 0; x < N.size(); ++x) {
            if (used[x]) continue;
            bool ok = std::includes(N.interp[x].begin(), N.interp[x].end(), M.interp[u].begin(),
                                    M.interp[u].end());
            for (int v = 0; ok && v < u; ++v)
                ok = M.le(u, v) == N.le(x, map[v]) && M.le(v, u) == N.le(map[v], x);
            if (!ok) continue;
            used[x] = true;
            map[u] = x;
            go(u + 1);
            used[x] = false;
        }
        map[u] = -1;
    };
    go(0);
    return out;
}

bool is_embeddable(const KripkeStructure& M, const KripkeStructure& N) {
    return !enumerate_ei(M, N).empty();
}

// ---------------------------------------------------------------------------
// Posets

namespace {

// Upper-triangular relation code: pair (u,v), u<v, in row-major order; earlier
// pairs are more significant so the chain has the largest code.
std::uint32_t rel_code(int k, const std::array<std::uint8_t, kMaxClassWorlds>& up) {
    std::uint32_t c = 0;
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v) c = (c << 1) | ((up[u] >> v) & 1u);
    return c;
}

// Relabels by perm (new label of u is perm[u]); false if the result is not
// topologically labeled.
bool permute(int k, const std::array<std::uint8_t, kMaxClassWorlds>& up, const WorldPerm& perm,
             std::array<std::uint8_t, kMaxClassWorlds>& out) {
    out.fill(0);
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v)
            if ((up[u] >> v) & 1u) {
                if (perm[u] > perm[v]) return false;
                out[perm[u]] |= static_cast<std::uint8_t>(1u << perm[v]);
            }
    return true;
}

WorldPerm identity_perm(int k) {
    WorldPerm p{};
    for (int i = 0; i < k; ++i) p[i] = static_cast<std::int8_t>(i);
    return p;
}

template <class F>
void for_each_perm(int k, F&& fn) {
    WorldPerm p = identity_perm(k);
    do {
        fn(p);
    } while (std::next_permutation(p.begin(), p.begin() + k));
}

std::uint32_t canonical_code(int k, const std::array<std::uint8_t, kMaxClassWorlds>& up) {
    std::uint32_t best = 0;
    std::array<std::uint8_t, kMaxClassWorlds> tmp{};
    for_each_perm(k, [&](const WorldPerm& p) {
        if (permute(k, up, p, tmp)) best = std::max(best, rel_code(k, tmp));
    });
    return best;
}

}  // namespace

std::vector<Poset> poset_catalogue(int m) {
    if (m < 1 || m > kMaxClassWorlds)
        throw std::invalid_argument("max worlds must be in 1.." + std::to_string(kMaxClassWorlds));
    std::vector<Poset> out;
    for (int k = 1; k <= m; ++k) {
        std::vector<std::pair<int, int>> pairs;
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v) pairs.emplace_back(u, v);
        std::vector<std::pair<std::uint32_t, Poset>> found;
        for (std::uint32_t bits = 0; bits < (1u << pairs.size()); ++bits) {
            Poset P;
            P.k = k;
            for (int u = 0; u < k; ++u) P.up[u] = static_cast<std::uint8_t>(1u << u);
            for (std::size_t i = 0; i < pairs.size(); ++i)
                if ((bits >> (pairs.size() - 1 - i)) & 1u)
                    P.up[pairs[i].first] |= static_cast<std::uint8_t>(1u << pairs[i].second);
            bool transitive = true;
            for (int u = 0; u < k && transitive; ++u)
                for (int v = 0; v < k && transitive; ++v)
                    if (P.le(u, v) && (P.up[v] & ~P.up[u])) transitive = false;
            if (!transitive) continue;
            const std::uint32_t code = rel_code(k, P.up);
            if (canonical_code(k, P.up) != code) continue;
            std::array<std::uint8_t, kMaxClassWorlds> tmp{};
            for_each_perm(k, [&](const WorldPerm& p) {
                if (permute(k, P.up, p, tmp) && tmp == P.up) P.automorphisms.push_back(p);
            });
            found.emplace_back(code, std::move(P));
        }
        std::sort(found.begin(), found.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        for (auto& f : found) out.push_back(std::move(f.second));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Class enumeration

const std::vector<std::pair<int, int>> StructureClass::kNone;

std::string StructureClass::key(int poset, const std::array<Mask, kMaxClassWorlds>& interp, int k) {
    std::string s(reinterpret_cast<const char*>(&poset), sizeof poset);
    s.append(reinterpret_cast<const char*>(interp.data()), sizeof(Mask) * k);
    return s;
}

StructureClass::StructureClass(ClassSpec spec) : spec_(std::move(spec)) {
    const int n = static_cast<int>(spec_.universe.size());
    if (n > kMaxUniverse) throw std::invalid_argument("universe larger than 64 sentences");
    posets_ = poset_catalogue(spec_.max_worlds);
    const Mask full = full_mask();

    for (int p = 0; p < static_cast<int>(posets_.size()); ++p) {
        const Poset& P = posets_[p];
        ClassMember cur;
        cur.poset = p;
        std::function<void(int)> fill = [&](int v) {
            if (v == P.k) {
                for (std::size_t a = 1; a < P.automorphisms.size(); ++a) {
                    std::array<Mask, kMaxClassWorlds> img{};
                    for (int u = 0; u < P.k; ++u) img[P.automorphisms[a][u]] = cur.interp[u];
                    if (std::lexicographical_compare(img.begin(), img.begin() + P.k,
                                                     cur.interp.begin(), cur.interp.begin() + P.k))
                        return;
                }
                members_.push_back(cur);
                return;
            }
            Mask req = 0;
            for (int u = 0; u < v; ++u)
                if (P.le(u, v)) req |= cur.interp[u];
            const Mask free = full & ~req;
            Mask sub = 0;
            while (true) {
                cur.interp[v] = req | sub;
                fill(v + 1);
                if (sub == free) break;
                sub = (sub - free) & free;
            }
            cur.interp[v] = 0;
        };
        fill(0);
    }

    for (std::size_t i = 0; i < members_.size(); ++i) {
        const auto& m = members_[i];
        index_.emplace(key(m.poset, m.interp, posets_[m.poset].k), static_cast<int>(i));
        for (int w = 0; w < posets_[m.poset].k; ++w)
            pointed_[m.interp[w]].emplace_back(static_cast<int>(i), w);
    }

    const std::size_t np = posets_.size();
    frame_emb_.assign(np * np, {});
    for (std::size_t p = 0; p < np; ++p)
        for (std::size_t q = 0; q < np; ++q) {
            const Poset& P = posets_[p];
            const Poset& Q = posets_[q];
            if (P.k > Q.k) continue;
            auto& out = frame_emb_[p * np + q];
            WorldPerm g{};
            std::uint8_t used = 0;
            std::function<void(int)> go = [&](int u) {
                if (u == P.k) {
                    out.push_back(g);
                    return;
                }
                for (int x = 0; x < Q.k; ++x) {
                    if ((used >> x) & 1u) continue;
                    bool ok = true;
                    for (int v = 0; ok && v < u; ++v)
                        ok = P.le(u, v) == Q.le(x, g[v]) && P.le(v, u) == Q.le(g[v], x);
                    if (!ok) continue;
                    used |= static_cast<std::uint8_t>(1u << x);
                    g[u] = static_cast<std::int8_t>(x);
                    go(u + 1);
                    used &= static_cast<std::uint8_t>(~(1u << x));
                }
            };
            go(0);
        }
}

Mask StructureClass::full_mask() const {
    const auto n = spec_.universe.size();
    return n >= 64 ? ~Mask(0) : ((Mask(1) << n) - 1);
}

KripkeStructure StructureClass::structure(std::size_t i) const {
    const auto& m = members_[i];
    const Poset& P = posets_[m.poset];
    KripkeStructure M;
    M.numeral_bound = spec_.numeral_bound;
    for (int u = 0; u < P.k; ++u) {
        M.worlds.push_back("w" + std::to_string(u));
        M.up.push_back(P.up[u]);
        M.interp.push_back(codes_of(m.interp[u]));
    }
    return M;
}

RawStructure StructureClass::raw(std::size_t i) const {
    const auto& m = members_[i];
    RawStructure r;
    r.k = posets_[m.poset].k;
    r.up = posets_[m.poset].up;
    r.interp = m.interp;
    return r;
}

std::optional<Canonical> StructureClass::canonicalize(const RawStructure& s) const {
    if (s.k < 1 || s.k > spec_.max_worlds) return std::nullopt;
    for (int u = 0; u < s.k; ++u)
        if (s.interp[u] & ~full_mask()) return std::nullopt;
    std::uint32_t best = 0;
    bool any = false;
    std::array<std::uint8_t, kMaxClassWorlds> tmp{};
    std::vector<WorldPerm> best_perms;
    for_each_perm(s.k, [&](const WorldPerm& p) {
        if (!permute(s.k, s.up, p, tmp)) return;
        const auto c = rel_code(s.k, tmp);
        if (!any || c > best) {
            best = c;
            any = true;
            best_perms.clear();
        }
        if (c == best) best_perms.push_back(p);
    });
    if (!any) return std::nullopt;  // cyclic order
    int poset = -1;
    for (int p = 0; p < static_cast<int>(posets_.size()); ++p)
        if (posets_[p].k == s.k && rel_code(s.k, posets_[p].up) == best) poset = p;
    if (poset < 0) return std::nullopt;
    std::array<Mask, kMaxClassWorlds> chosen{};
    WorldPerm chosen_perm{};
    bool have = false;
    for (const auto& p : best_perms) {
        std::array<Mask, kMaxClassWorlds> img{};
        for (int u = 0; u < s.k; ++u) img[p[u]] = s.interp[u];
        if (!have || std::lexicographical_compare(img.begin(), img.begin() + s.k, chosen.begin(),
                                                  chosen.begin() + s.k)) {
            chosen = img;
            chosen_perm = p;
            have = true;
        }
    }
    auto it = index_.find(key(poset, chosen, s.k));
    if (it == index_.end()) return std::nullopt;  // violates heredity
    return Canonical{it->second, chosen_perm};
}

std::optional<Canonical> StructureClass::canonicalize(const KripkeStructure& M) const {
    if (M.size() > spec_.max_worlds || M.size() < 1) return std::nullopt;
    RawStructure r;
    r.k = M.size();
    for (int u = 0; u < r.k; ++u) {
        r.up[u] = static_cast<std::uint8_t>(M.up[u]);
        auto m = mask_of(M.interp[u]);
        if (!m) return std::nullopt;
        r.interp[u] = *m;
    }
    return canonicalize(r);
}

std::vector<WorldMap> StructureClass::ei_maps(std::size_t i, std::size_t j) const {
    std::vector<WorldMap> out;
    const auto& a = members_[i];
    const auto& b = members_[j];
    const int k = posets_[a.poset].k;
    for (const auto& g : frame_embeddings(a.poset, b.poset)) {
        bool ok = true;
        for (int u = 0; ok && u < k; ++u) ok = (a.interp[u] & ~b.interp[g[u]]) == 0;
        if (!ok) continue;
        WorldMap m;
        for (int u = 0; u < k; ++u) m.map.push_back(g[u]);
        out.push_back(std::move(m));
    }
    return out;
}

const std::vector<std::pair<int, int>>& StructureClass::pointed(Mask X) const {
    auto it = pointed_.find(X);
    return it == pointed_.end() ? kNone : it->second;
}

std::optional<Mask> StructureClass::mask_of(const std::set<Nat>& codes) const {
    Mask m = 0;
    for (const auto& c : codes) {
        const int i = spec_.universe.index_of(c);
        if (i < 0) return std::nullopt;
        m |= Mask(1) << i;
    }
    return m;
}

std::set<Nat> StructureClass::codes_of(Mask m) const {
    std::set<Nat> out;
    for (std::size_t i = 0; i < spec_.universe.size(); ++i)
        if ((m >> i) & 1u) out.insert(spec_.universe.code_at(i));
    return out;
}

StructureClass enumerate_structures(const ClassSpec& spec) { return StructureClass(spec); }

std::vector<std::pair<int, int>> enumerate_pointed(const StructureClass& cls, const std::set<Nat>& X) {
    auto m = cls.mask_of(X);
    if (!m) return {};
    return cls.pointed(*m);
}

}  // namespace kt
