#include "kt/kripke.hpp"

#include <bit>
#include <sstream>

namespace kt {

int KripkeStructure::world_index(const std::string& id) const {
    for (int i = 0; i < size(); ++i)
        if (worlds[i] == id) return i;
    return -1;
}

std::vector<Diagnostic> validate(const KripkeStructure& M) {
    std::vector<Diagnostic> out;
    const int n = M.size();
    if (n == 0) out.push_back({"size", "structure has no worlds"});
    if (n > kMaxStructureWorlds) {
        out.push_back({"size", "more than " + std::to_string(kMaxStructureWorlds) + " worlds"});
        return out;
    }
    if (static_cast<int>(M.up.size()) != n || static_cast<int>(M.interp.size()) != n) {
        out.push_back({"size", "order or interpretation table does not match world count"});
        return out;
    }
    for (int u = 0; u < n; ++u)
        if (!M.le(u, u)) out.push_back({"reflexivity", M.worlds[u] + " is not <= itself"});
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            for (int x = 0; x < n; ++x)
                if (M.le(u, v) && M.le(v, x) && !M.le(u, x))
                    out.push_back({"transitivity", M.worlds[u] + " <= " + M.worlds[v] + " <= " +
                                                       M.worlds[x] + " but not " + M.worlds[u] +
                                                       " <= " + M.worlds[x]});
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (M.le(u, v) && M.le(v, u))
                out.push_back({"antisymmetry", M.worlds[u] + " and " + M.worlds[v] +
                                                   " are mutually accessible"});
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v || !M.le(u, v)) continue;
            for (const auto& c : M.interp[u])
                if (!M.interp[v].count(c)) {
                    auto f = try_decode_formula(c);
                    out.push_back({"heredity", "(" + M.worlds[u] + "," + M.worlds[v] + "): " +
                                                   (f ? to_string(f) : c.str()) + " lost"});
                }
        }
    for (int u = 0; u < n; ++u)
        for (const auto& c : M.interp[u])
            if (!is_sentence_code(c))
                out.push_back({"sentence", M.worlds[u] + ": " + c.str() + " does not code a sentence"});
    return out;
}

KripkeStructure truncate(const KripkeStructure& M, int w) {
    if (w < 0 || w >= M.size()) throw StructureError("truncate: unknown world");
    std::vector<int> keep;
    for (int v = 0; v < M.size(); ++v)
        if (M.le(w, v)) keep.push_back(v);
    KripkeStructure T;
    T.numeral_bound = M.numeral_bound;
    for (int v : keep) {
        T.worlds.push_back(M.worlds[v]);
        T.interp.push_back(M.interp[v]);
        std::uint32_t row = 0;
        for (std::size_t j = 0; j < keep.size(); ++j)
            if (M.le(v, keep[j])) row |= 1u << j;
        T.up.push_back(row);
    }
    return T;
}

KripkeStructure add_root(const KripkeStructure& M, const std::set<Nat>& X, const std::string& root_id) {
    if (M.size() + 1 > kMaxStructureWorlds) throw StructureError("add_root: too many worlds");
    for (int v = 0; v < M.size(); ++v) {
        bool minimal = true;
        for (int u = 0; u < M.size(); ++u)
            if (u != v && M.le(u, v)) minimal = false;
        if (!minimal) continue;
        for (const auto& c : X)
            if (!M.interp[v].count(c)) {
                auto f = try_decode_formula(c);
                throw StructureError("add_root: heredity violated at " + M.worlds[v] + " by " +
                                     (f ? to_string(f) : c.str()));
            }
    }
    std::string id = root_id;
    if (id.empty()) {
        id = "r";
        for (int i = 0; M.world_index(id) >= 0; ++i) id = "r" + std::to_string(i);
    } else if (M.world_index(id) >= 0) {
        throw StructureError("add_root: world id already used: " + id);
    }
    KripkeStructure R;
    R.numeral_bound = M.numeral_bound;
    R.worlds.push_back(id);
    R.interp.push_back(X);
    const std::uint32_t all = M.size() == 32 ? ~0u : ((1u << M.size()) - 1);
    R.up.push_back(1u | (all << 1));
    for (int v = 0; v < M.size(); ++v) {
        R.worlds.push_back(M.worlds[v]);
        R.interp.push_back(M.interp[v]);
        R.up.push_back(M.up[v] << 1);
    }
    return R;
}

// ---------------------------------------------------------------------------
// Forcing

namespace {

ForcingVerdict v_not(ForcingVerdict v) { return {!v.holds, v.exact}; }

// Conjunction/disjunction accumulators. A true conjunction is exact only if
// every conjunct is; a false one is exact if some false conjunct is.
struct AllOf {
    bool holds = true, all_exact = true, some_false_exact = false;
    void add(ForcingVerdict v) {
        holds = holds && v.holds;
        all_exact = all_exact && v.exact;
        if (!v.holds && v.exact) some_false_exact = true;
    }
    ForcingVerdict get() const { return {holds, holds ? all_exact : some_false_exact}; }
};

struct AnyOf {
    bool holds = false, all_exact = true, some_true_exact = false;
    void add(ForcingVerdict v) {
        holds = holds || v.holds;
        all_exact = all_exact && v.exact;
        if (v.holds && v.exact) some_true_exact = true;
    }
    ForcingVerdict get() const { return {holds, holds ? some_true_exact : all_exact}; }
};

class Evaluator {
public:
    Evaluator(const KripkeStructure& M, bool global, const EvalLimits& lim)
        : M_(M), global_(global), lim_(lim) {}

    ForcingVerdict at(int w, const FormulaPtr& f) {
        switch (f->kind) {
            case FKind::Bottom: return {false, true};
            case FKind::Eq: return {eval_term(f->lhs, lim_) == eval_term(f->rhs, lim_), true};
            case FKind::Tr: return {M_.interp[w].count(eval_term(f->lhs, lim_)) > 0, true};
            case FKind::And: {
                AllOf acc;
                acc.add(at(w, f->a));
                acc.add(at(w, f->b));
                return acc.get();
            }
            case FKind::Or: {
                if (!global_) {
                    AnyOf acc;
                    acc.add(at(w, f->a));
                    acc.add(at(w, f->b));
                    return acc.get();
                }
                AnyOf acc;
                acc.add(everywhere_above(w, f->a));
                acc.add(everywhere_above(w, f->b));
                return acc.get();
            }
            case FKind::Imp: {
                AllOf acc;
                for (int v : above(w)) {
                    AnyOf local;
                    local.add(v_not(at(v, f->a)));
                    local.add(at(v, f->b));
                    acc.add(local.get());
                }
                return acc.get();
            }
            case FKind::Exists: {
                // G clause: for every w' >= w some d in D(w') with w forcing the
                // instance. The domain is constant, so this is the local clause.
                auto local = [&] {
                    AnyOf acc;
                    for_instances(f, [&](const FormulaPtr& inst) { acc.add(at(w, inst)); });
                    auto r = acc.get();
                    if (!r.holds && cut_off(f)) r.exact = false;
                    return r;
                };
                if (!global_) return local();
                AllOf acc;
                for (int v : above(w)) {
                    (void)v;
                    acc.add(local());
                }
                return acc.get();
            }
            case FKind::Forall: {
                AllOf acc;
                if (global_) {
                    for_instances(f, [&](const FormulaPtr& inst) { acc.add(at(w, inst)); });
                } else {
                    for (int v : above(w))
                        for_instances(f, [&](const FormulaPtr& inst) { acc.add(at(v, inst)); });
                }
                auto r = acc.get();
                if (r.holds && cut_off(f)) r.exact = false;
                return r;
            }
        }
        return {false, true};
    }

private:
    const KripkeStructure& M_;
    bool global_;
    EvalLimits lim_;

    std::vector<int> above(int w) const {
        std::vector<int> out;
        for (int v = 0; v < M_.size(); ++v)
            if (M_.le(w, v)) out.push_back(v);
        return out;
    }

    ForcingVerdict everywhere_above(int w, const FormulaPtr& f) {
        AllOf acc;
        for (int v : above(w)) acc.add(at(v, f));
        return acc.get();
    }

    static bool cut_off(const FormulaPtr& q) { return free_vars(q->a).count(q->var) > 0; }

    template <class F>
    void for_instances(const FormulaPtr& q, F&& fn) {
        if (!cut_off(q)) {
            fn(q->a);
            return;
        }
        for (unsigned n = 0; n <= M_.numeral_bound; ++n) fn(substitute(q->a, q->var, numeral(n)));
    }
};

ForcingVerdict run(const KripkeStructure& M, int w, const FormulaPtr& phi, bool global,
                   const EvalLimits& lim) {
    if (w < 0 || w >= M.size()) throw StructureError("unknown world index " + std::to_string(w));
    if (!is_sentence(phi)) throw CodingError("forcing is defined for sentences: " + to_string(phi));
    return Evaluator(M, global, lim).at(w, phi);
}

ForcingVerdict all_worlds(const KripkeStructure& M, const FormulaPtr& phi, bool global,
                          const EvalLimits& lim) {
    AllOf acc;
    for (int w = 0; w < M.size(); ++w) acc.add(run(M, w, phi, global, lim));
    return acc.get();
}

}  // namespace

ForcingVerdict forces(const KripkeStructure& M, int w, const FormulaPtr& phi, const EvalLimits& lim) {
    return run(M, w, phi, false, lim);
}

ForcingVerdict forces_global(const KripkeStructure& M, int w, const FormulaPtr& phi,
                             const EvalLimits& lim) {
    return run(M, w, phi, true, lim);
}

ForcingVerdict satisfies(const KripkeStructure& M, const FormulaPtr& phi, const EvalLimits& lim) {
    return all_worlds(M, phi, false, lim);
}

ForcingVerdict satisfies_global(const KripkeStructure& M, const FormulaPtr& phi,
                                const EvalLimits& lim) {
    return all_worlds(M, phi, true, lim);
}

// ---------------------------------------------------------------------------
// Text format

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto z = s.find_last_not_of(" \t\r");
    return s.substr(a, z - a + 1);
}

std::pair<std::string, std::string> split_word(const std::string& s) {
    const auto sp = s.find_first_of(" \t");
    if (sp == std::string::npos) return {s, ""};
    return {s.substr(0, sp), trim(s.substr(sp))};
}
}  // namespace

KripkeStructure load_structure(std::string_view text) {
    KripkeStructure M;
    std::vector<std::pair<int, int>> edges;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    auto bad = [&](const std::string& msg) {
        throw StructureError("line " + std::to_string(line) + ": " + msg);
    };
    auto world = [&](const std::string& id) {
        int i = M.world_index(id);
        if (i < 0) bad("unknown world '" + id + "'");
        return i;
    };
    while (std::getline(in, raw)) {
        ++line;
        if (auto pct = raw.find('%'); pct != std::string::npos) raw.erase(pct);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        auto [key, rest] = split_word(s);
        if (key == "world") {
            if (rest.empty() || rest.find_first_of(" \t") != std::string::npos) bad("bad world id");
            if (M.world_index(rest) >= 0) bad("duplicate world '" + rest + "'");
            if (M.size() >= kMaxStructureWorlds) bad("too many worlds");
            M.worlds.push_back(rest);
            M.interp.emplace_back();
        } else if (key == "le") {
            auto [a, b] = split_word(rest);
            edges.emplace_back(world(a), world(b));
        } else if (key == "holds") {
            auto [id, ftext] = split_word(rest);
            const int w = world(id);
            FormulaPtr f;
            try {
                f = parse(ftext);
            } catch (const ParseError& e) {
                bad(e.what());
            }
            if (!is_sentence(f)) bad("not a sentence: " + ftext);
            M.interp[w].insert(code(f));
        } else if (key == "numeral_bound") {
            try {
                const long n = std::stol(rest);
                if (n < 0 || n > 64) bad("numeral_bound must be in 0..64");
                M.numeral_bound = static_cast<unsigned>(n);
            } catch (const std::logic_error&) {
                bad("bad numeral_bound '" + rest + "'");
            }
        } else {
            bad("unknown directive '" + key + "'");
        }
    }
    const int n = M.size();
    M.up.assign(n, 0);
    for (int u = 0; u < n; ++u) M.up[u] |= 1u << u;
    for (auto [a, b] : edges) M.up[a] |= 1u << b;
    for (int k = 0; k < n; ++k)
        for (int u = 0; u < n; ++u)
            if (M.le(u, k)) M.up[u] |= M.up[k];
    return M;
}

std::string dump_structure(const KripkeStructure& M) {
    std::ostringstream out;
    out << "numeral_bound " << M.numeral_bound << "\n";
    for (const auto& id : M.worlds) out << "world " << id << "\n";
    for (int u = 0; u < M.size(); ++u)
        for (int v = 0; v < M.size(); ++v) {
            if (u == v || !M.le(u, v)) continue;
            bool cover = true;
            for (int x = 0; x < M.size(); ++x)
                if (x != u && x != v && M.le(u, x) && M.le(x, v)) cover = false;
            if (cover) out << "le " << M.worlds[u] << " " << M.worlds[v] << "\n";
        }
    for (int u = 0; u < M.size(); ++u)
        for (const auto& c : M.interp[u]) {
            auto f = try_decode_formula(c);
            out << "holds " << M.worlds[u] << " " << (f ? to_string(f) : c.str()) << "\n";
        }
    return out.str();
}

}  // namespace kt
