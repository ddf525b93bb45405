// Embedding-interpretation maps and exhaustive enumeration of the bounded
// class of structures (canonical representatives up to relabeling).
#pragma once

#include "kt/kripke.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace kt {

constexpr int kMaxClassWorlds = 6;
constexpr int kMaxUniverse = 64;

using Mask = std::uint64_t;  // subset of a universe, bit i = member i
using WorldPerm = std::array<std::int8_t, kMaxClassWorlds>;

/// An embedding-interpretation map: map[w] is the image of source world w.
struct WorldMap {
    std::vector<int> map;
    bool operator==(const WorldMap&) const = default;
};

/// Injective, order-reflecting and -preserving, interpretation-including.
bool is_ei(const KripkeStructure& M, const KripkeStructure& N, const std::vector<int>& map);
/// All EI maps from M into N in lexicographic order of the image vectors.
std::vector<WorldMap> enumerate_ei(const KripkeStructure& M, const KripkeStructure& N);
bool is_embeddable(const KripkeStructure& M, const KripkeStructure& N);

/// Unlabeled finite poset in canonical labeling. Labels are topological
/// (u <= v implies u <= v as integers); up[u] has bit v iff u <= v.
struct Poset {
    int k = 0;
    std::array<std::uint8_t, kMaxClassWorlds> up{};
    std::vector<WorldPerm> automorphisms;  // identity first
    bool le(int u, int v) const { return (up[u] >> v) & 1u; }
};

/// Canonical posets with 1..m worlds, ordered by size, then chain-like first.
std::vector<Poset> poset_catalogue(int m);

struct ClassSpec {
    int max_worlds = 3;
    Universe universe;
    unsigned numeral_bound = 4;
};

struct ClassMember {
    int poset = 0;
    std::array<Mask, kMaxClassWorlds> interp{};
};

/// A labeled structure over universe masks, not necessarily canonical.
struct RawStructure {
    int k = 0;
    std::array<std::uint8_t, kMaxClassWorlds> up{};
    std::array<Mask, kMaxClassWorlds> interp{};
};

struct Canonical {
    int index = -1;
    WorldPerm world{};  // world[original] = world in the representative
};

/// Every persistent structure with at most max_worlds worlds and
/// interpretations inside the universe, once per isomorphism class.
/// Order: world count, poset, then interpretation vector ascending.
class StructureClass {
public:
    explicit StructureClass(ClassSpec spec);

    const ClassSpec& spec() const { return spec_; }
    const Universe& universe() const { return spec_.universe; }
    std::size_t size() const { return members_.size(); }
    const ClassMember& member(std::size_t i) const { return members_[i]; }
    const Poset& poset_of(std::size_t i) const { return posets_[members_[i].poset]; }
    int worlds(std::size_t i) const { return poset_of(i).k; }
    const std::vector<Poset>& posets() const { return posets_; }

    /// Worlds named w0, w1, ... in representative labeling.
    KripkeStructure structure(std::size_t i) const;
    RawStructure raw(std::size_t i) const;

    std::optional<Canonical> canonicalize(const RawStructure& s) const;
    std::optional<Canonical> canonicalize(const KripkeStructure& M) const;

    /// Frame embeddings between catalogue posets p and q.
    const std::vector<WorldPerm>& frame_embeddings(int p, int q) const {
        return frame_emb_[p * posets_.size() + q];
    }

    /// EI maps between two members, in lexicographic order of images.
    std::vector<WorldMap> ei_maps(std::size_t i, std::size_t j) const;

    /// Pointed structures (member, world) whose world carries exactly X.
    const std::vector<std::pair<int, int>>& pointed(Mask X) const;

    std::optional<Mask> mask_of(const std::set<Nat>& codes) const;
    std::set<Nat> codes_of(Mask m) const;
    Mask full_mask() const;

private:
    ClassSpec spec_;
    std::vector<Poset> posets_;
    std::vector<ClassMember> members_;
    std::vector<std::vector<WorldPerm>> frame_emb_;
    std::unordered_map<std::string, int> index_;
    std::unordered_map<Mask, std::vector<std::pair<int, int>>> pointed_;
    static const std::vector<std::pair<int, int>> kNone;

    static std::string key(int poset, const std::array<Mask, kMaxClassWorlds>& interp, int k);
};

/// Convenience wrappers with the names used in reports.
StructureClass enumerate_structures(const ClassSpec& spec);
std::vector<std::pair<int, int>> enumerate_pointed(const StructureClass& cls, const std::set<Nat>& X);

}  // namespace kt
