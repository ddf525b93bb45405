#include "kt/csv.hpp"

#include <map>

#include <omp.h>

namespace kt {

std::string_view clause_name(CsvClause c) {
    switch (c) {
        case CsvClause::Atom: return "atom";
        case CsvClause::And: return "and";
        case CsvClause::Or: return "or";
        case CsvClause::Imp: return "imp";
        case CsvClause::Forall: return "forall";
        case CsvClause::Exists: return "exists";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Definition level

namespace {

class CsvEvaluator {
public:
    CsvEvaluator(const StructureClass& cls, const KripkeStructure& M) : cls_(cls), M_(M) {}

    int eval(const FormulaPtr& f, int w) {
        const auto key = std::make_pair(code(f), w);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        CsvStep st;
        st.formula = to_string(f);
        st.world = w;
        switch (f->kind) {
            case FKind::Bottom:
            case FKind::Eq:
            case FKind::Tr: {
                st.clause = CsvClause::Atom;
                const auto v = forces_global(M_, w, f);
                st.holds = v.holds;
                st.exact = v.exact;
                break;
            }
            case FKind::And: {
                st.clause = CsvClause::And;
                st.groups = {{eval(f->a, w), eval(f->b, w)}};
                break;
            }
            case FKind::Or: {
                st.clause = CsvClause::Or;
                st.groups.resize(2);
                for (int u = 0; u < M_.size(); ++u)
                    if (M_.le(w, u)) {
                        st.groups[0].push_back(eval(f->a, u));
                        st.groups[1].push_back(eval(f->b, u));
                    }
                break;
            }
            case FKind::Imp: {
                st.clause = CsvClause::Imp;
                const auto v = scheme_forces(Scheme::SVI, cls_, M_, w, f, true);
                st.holds = v.holds;
                st.exact = v.exact;
                break;
            }
            case FKind::Forall: {
                st.clause = CsvClause::Forall;
                st.groups.resize(1);
                for (const auto& inst : instances(f)) st.groups[0].push_back(eval(inst, w));
                break;
            }
            case FKind::Exists: {
                st.clause = CsvClause::Exists;
                const auto insts = instances(f);
                for (int u = 0; u < M_.size(); ++u)
                    if (M_.le(w, u)) {
                        st.groups.emplace_back();
                        for (const auto& inst : insts) st.groups.back().push_back(eval(inst, u));
                    }
                break;
            }
        }
        if (!st.groups.empty()) {
            st.holds = combine(st);
            for (const auto& g : st.groups)
                for (int c : g) st.exact = st.exact && trace_[c].exact;
        }
        if (f->kind == FKind::Forall || f->kind == FKind::Exists)
            st.exact = st.exact && !free_vars(f->a).count(f->var);
        trace_.push_back(std::move(st));
        const int id = static_cast<int>(trace_.size()) - 1;
        memo_.emplace(key, id);
        return id;
    }

    std::vector<CsvStep> take() { return std::move(trace_); }

    static bool combine(const CsvStep& st, const std::vector<CsvStep>& trace) {
        auto all = [&](const std::vector<int>& g) {
            for (int c : g)
                if (!trace[c].holds) return false;
            return true;
        };
        auto any = [&](const std::vector<int>& g) {
            for (int c : g)
                if (trace[c].holds) return true;
            return false;
        };
        switch (st.clause) {
            case CsvClause::Atom:
            case CsvClause::Imp: return st.holds;
            case CsvClause::And:
            case CsvClause::Forall: return all(st.groups.at(0));
            case CsvClause::Or: return all(st.groups.at(0)) || all(st.groups.at(1));
            case CsvClause::Exists:
                for (const auto& g : st.groups)
                    if (!any(g)) return false;
                return true;
        }
        return false;
    }

private:
    const StructureClass& cls_;
    const KripkeStructure& M_;
    std::map<std::pair<Nat, int>, int> memo_;
    std::vector<CsvStep> trace_;

    bool combine(const CsvStep& st) const { return combine(st, trace_); }

    std::vector<FormulaPtr> instances(const FormulaPtr& f) const {
        if (!free_vars(f->a).count(f->var)) return {f->a};
        std::vector<FormulaPtr> out;
        for (unsigned k = 0; k <= M_.numeral_bound; ++k) out.push_back(substitute(f->a, f->var, numeral(k)));
        return out;
    }
};

}  // namespace

CsvVerdict csv_forces(const StructureClass& cls, const KripkeStructure& M, int w, const FormulaPtr& phi) {
    if (!is_sentence(phi)) throw CsvError("csv-forcing needs a sentence: " + to_string(phi));
    if (w < 0 || w >= M.size()) throw CsvError("world out of range");
    CsvEvaluator ev(cls, M);
    const int root = ev.eval(phi, w);
    CsvVerdict v;
    v.trace = ev.take();
    v.holds = v.trace[root].holds;
    v.exact = v.trace[root].exact;
    v.clause = v.trace[root].clause;
    return v;
}

bool replay(const CsvVerdict& v) {
    if (v.trace.empty()) return false;
    for (std::size_t i = 0; i < v.trace.size(); ++i) {
        const auto& st = v.trace[i];
        for (const auto& g : st.groups)
            for (int c : g)
                if (c < 0 || static_cast<std::size_t>(c) >= i) return false;
        if (CsvEvaluator::combine(st, v.trace) != st.holds) return false;
    }
    return v.trace.back().holds == v.holds && v.trace.back().clause == v.clause;
}

// ---------------------------------------------------------------------------
// Kernel level

namespace {

WorldMask box(const RawStructure& s, WorldMask m) {
    const WorldMask all = static_cast<WorldMask>((1u << s.k) - 1);
    WorldMask r = 0;
    for (int w = 0; w < s.k; ++w)
        if ((s.up[w] & ~m & all) == 0) r |= static_cast<WorldMask>(1u << w);
    return r;
}

std::vector<WorldMask> column(const PointedTable& t, std::size_t i, int k, std::size_t nodes) {
    std::vector<WorldMask> out(nodes, 0);
    for (int w = 0; w < k; ++w) {
        const NodeSet& row = t.row(i, w);
        for (std::size_t id = row.find_first(); id != NodeSet::npos; id = row.find_next(id))
            out[id] |= static_cast<WorldMask>(1u << w);
    }
    return out;
}

}  // namespace

std::vector<WorldMask> csv_masks(const SentenceTable& T, const RawStructure& s,
                                 const std::vector<WorldMask>& global,
                                 const std::vector<WorldMask>& imp) {
    std::vector<WorldMask> m(T.size(), 0);
    for (int id : T.order()) {
        const Node& n = T.node(id);
        WorldMask r = 0;
        switch (n.kind) {
            case NodeKind::Const:
            case NodeKind::Tr: r = global[id]; break;
            case NodeKind::And: r = m[n.a] & m[n.b]; break;
            case NodeKind::Or: r = box(s, m[n.a]) | box(s, m[n.b]); break;
            case NodeKind::Imp: r = imp[id]; break;
            case NodeKind::Forall:
                r = static_cast<WorldMask>((1u << s.k) - 1);
                for (int c : n.inst) r &= m[c];
                break;
            case NodeKind::Exists:
                for (int c : n.inst) r |= m[c];
                r = box(s, r);
                break;
        }
        m[id] = r;
    }
    return m;
}

CsvAnalysis::CsvAnalysis(Analyzer& A) : A_(&A) {
    const StructureClass& cls = A.cls();
    const SentenceTable& T = A.table();
    const PointedTable& G = A.forcing(true);
    const PointedTable& S = A.supervaluation_global();
    values_ = PointedTable(cls, T.size());
    const auto n = static_cast<std::int64_t>(cls.size());
#pragma omp parallel for schedule(dynamic, 64) num_threads(A.options().workers > 0 ? A.options().workers : omp_get_max_threads())
    for (std::int64_t i = 0; i < n; ++i) {
        const RawStructure s = cls.raw(i);
        const auto m = csv_masks(T, s, column(G, i, s.k, T.size()), column(S, i, s.k, T.size()));
        for (int w = 0; w < s.k; ++w) {
            NodeSet& row = values_.row(i, w);
            for (std::size_t id = 0; id < m.size(); ++id)
                if ((m[id] >> w) & 1u) row.set(id);
        }
    }
    const auto sets = intersect_by_interp(cls, values_);
    jump_.resize(sets.size());
    for (std::size_t X = 0; X < sets.size(); ++X) jump_[X] = A.restrict(sets[X]);
}

namespace {

JumpReport report(Analyzer& A, std::string op, Mask X, Mask out, const PointedTable& t,
                  const PointedTable* ext_values) {
    JumpReport r;
    r.op = std::move(op);
    r.input = X;
    r.output = out;
    const std::size_t n = A.universe().size();
    r.witness.resize(n);
    r.exact.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.exact[i] = !A.table().inexact(static_cast<int>(i));
        if ((out >> i) & 1u) continue;
        auto [m, w] = first_refuting_pointed(A.cls(), t, X, static_cast<int>(i));
        if (m < 0) continue;
        JumpWitness jw{m, w, std::nullopt};
        if (ext_values)
            jw.extension = first_refuting_extension(A.cls(), m, w, *ext_values, static_cast<int>(i),
                                                    Admissibility::Any);
        r.witness[i] = std::move(jw);
    }
    return r;
}

}  // namespace

JumpReport jump_csv(CsvAnalysis& C, Mask X) {
    return report(C.analyzer(), "csv", X, C.jump_table().at(X), C.values(), nullptr);
}

JumpReport jump_svi2(Analyzer& A, Mask X) {
    const Mask out = A.jump_global_table().at(X);
    return report(A, "svi2", X, out, A.supervaluation_global(), &A.forcing(true));
}

// ---------------------------------------------------------------------------
// Diagnostics

bool CsvDiagnosis::ok() const {
    for (const auto& c : checks)
        if (!c.ok()) return false;
    return true;
}

bool CsvDiagnosis::exact() const {
    for (const auto& c : checks)
        if (!c.exact) return false;
    return true;
}

namespace {

TermPtr qt(const TermPtr& t) { return numeral(code_any(t)); }
TermPtr qf(const FormulaPtr& f) { return numeral(code_any(f)); }
bool bit(Mask X, int i) { return i >= 0 && ((X >> i) & 1u); }

// Instances 0..N of a quantified member, or the body alone when vacuous.
std::vector<FormulaPtr> instances(const FormulaPtr& f, unsigned N) {
    if (!free_vars(f->a).count(f->var)) return {f->a};
    std::vector<FormulaPtr> out;
    for (unsigned k = 0; k <= N; ++k) out.push_back(substitute(f->a, f->var, numeral(k)));
    return out;
}

}  // namespace

std::vector<AxiomInstance> csv_axiom_instances(const Universe& U, unsigned N) {
    std::vector<AxiomInstance> out;
    auto in = [&](const FormulaPtr& f) { return U.index_of(code(f)) >= 0; };
    auto all_in = [&](const std::vector<FormulaPtr>& fs) {
        for (const auto& f : fs)
            if (!in(f)) return false;
        return true;
    };
    for (const auto& m : U.members()) {
        FormulaPtr inner;
        if (m->kind == FKind::Eq)
            out.push_back({"CSV1", iff(tr(app(FnSym::DotEq, {qt(m->lhs), qt(m->rhs)})), m)});
        else if (is_neg(m, &inner) && inner->kind == FKind::Eq)
            out.push_back({"CSV1", iff(tr(app(FnSym::DotNeg, {app(FnSym::DotEq, {qt(inner->lhs), qt(inner->rhs)})})), m)});
        if (m->kind == FKind::Or && in(m->a) && in(m->b))
            out.push_back({"CSV2", iff(tr(app(FnSym::DotOr, {quote(m->a), quote(m->b)})),
                                       disj(tr(quote(m->a)), tr(quote(m->b))))});
        if (m->kind == FKind::And && in(m->a) && in(m->b))
            out.push_back({"CSV3", iff(tr(app(FnSym::DotAnd, {quote(m->a), quote(m->b)})),
                                       conj(tr(quote(m->a)), tr(quote(m->b))))});
        if ((m->kind == FKind::Exists || m->kind == FKind::Forall) && all_in(instances(m, N))) {
            const bool ex = m->kind == FKind::Exists;
            const TermPtr v = qt(var(m->var));
            const TermPtr body = qf(m->a);
            auto inst = tr(app(FnSym::Subst, {body, v, app(FnSym::Num, {var("z")})}));
            auto whole = tr(app(ex ? FnSym::DotEx : FnSym::DotAll, {v, body}));
            out.push_back({ex ? "CSV4" : "CSV5", iff(whole, ex ? exists("z", inst) : forall("z", inst))});
        }
        if (m->kind == FKind::Imp && in(m->a) && in(m->b))
            out.push_back({"CSV6", imp(tr(app(FnSym::DotImp, {quote(m->a), quote(m->b)})),
                                       imp(tr(quote(m->a)), tr(quote(m->b))))});
        if (in(tr(quote(m)))) out.push_back({"CSV7", iff(tr(quote(m)), tr(app(FnSym::DotTr, {quote(m)})))});
        if (in(neg(m))) out.push_back({"CSV9", consistency_sentence(quote(m))});
        out.push_back({"CSV11", imp(tr(quote(m)), m)});
    }
    for (const auto& a : arithmetic_axioms())
        if (in(a)) out.push_back({"CSV8", tr(quote(a))});
    std::stable_sort(out.begin(), out.end(), [](const AxiomInstance& a, const AxiomInstance& b) {
        auto num = [](const std::string& s) { return std::stoi(s.substr(3)); };
        return num(a.axiom) < num(b.axiom);
    });
    return out;
}

CsvDiagnosis diagnose_fixed_point_csv(const Universe& U, Mask X, unsigned N) {
    CsvDiagnosis d;
    d.fixed = X;
    auto idx = [&](const FormulaPtr& f) { return U.index_of(code(f)); };

    CheckReport disj_p{"disjunction property", 0, {}, true};
    CheckReport ex_p{"existence property", 0, {}, true};
    CheckReport mp{"modus ponens closure", 0, {}, true};
    CheckReport cons{"consistency", 0, {}, true};
    for (std::size_t i = 0; i < U.size(); ++i) {
        const auto& m = U.member(i);
        const bool inX = bit(X, static_cast<int>(i));
        if (m->kind == FKind::Or) {
            const int a = idx(m->a), b = idx(m->b);
            if (a >= 0 && b >= 0) {
                ++disj_p.instances;
                if (inX && !bit(X, a) && !bit(X, b))
                    disj_p.failures.push_back({disj_p.name, to_string(m) + " without either disjunct"});
            }
        }
        if (m->kind == FKind::Exists) {
            const auto insts = instances(m, N);
            const bool vacuous = !free_vars(m->a).count(m->var);
            bool found = false, all_in = true;
            for (const auto& f : insts) {
                const int k = idx(f);
                if (k < 0) all_in = false;
                found = found || bit(X, k);
            }
            if (all_in) {
                ++ex_p.instances;
                if (!vacuous) ex_p.exact = false;
                if (inX && !found)
                    ex_p.failures.push_back({ex_p.name, to_string(m) + " without a witness <= " + std::to_string(N)});
            } else if (inX && !found) {
                ex_p.exact = false;  // a witness may lie outside the universe
            }
        }
        if (m->kind == FKind::Imp && m->b->kind != FKind::Bottom) {
            const int a = idx(m->a), b = idx(m->b);
            if (a >= 0 && b >= 0) {
                ++mp.instances;
                if (inX && bit(X, a) && !bit(X, b))
                    mp.failures.push_back({mp.name, to_string(m) + " and antecedent without consequent"});
            }
        }
        if (const int n = U.neg_index(i); n >= 0) {
            ++cons.instances;
            if (inX && bit(X, n))
                cons.failures.push_back({cons.name, to_string(m) + " with its negation"});
        }
    }
    CheckReport transp = check_transparency(U, X);
    transp.name = "Tr-transparency";
    for (auto& f : transp.failures) f.check = transp.name;
    d.checks = {disj_p, ex_p, transp, mp, cons};

    // The schemata, G-forced at the one-world structure carrying X.
    const KripkeStructure M = one_world(U, X, N);
    std::map<int, CheckReport> by;
    for (int k = 1; k <= 11; ++k) by[k] = CheckReport{"CSV" + std::to_string(k), 0, {}, true};
    for (const auto& inst : csv_axiom_instances(U, N)) {
        auto& r = by[std::stoi(inst.axiom.substr(3))];
        ++r.instances;
        const auto v = forces_global(M, 0, inst.sentence);
        r.exact = r.exact && v.exact;
        if (!v.holds) r.failures.push_back({r.name, to_string(inst.sentence)});
    }
    // CSV10: the jump only ever collects sentence codes.
    for (const auto& c : M.interp[0]) {
        ++by[10].instances;
        if (!is_sentence_code(c)) by[10].failures.push_back({"CSV10", c.str()});
    }
    for (auto& [k, r] : by) d.checks.push_back(std::move(r));
    return d;
}

// ---------------------------------------------------------------------------
// Lemma checks over the class

CheckReport check_lemma1(CsvAnalysis& C) {
    Analyzer& A = C.analyzer();
    const StructureClass& cls = A.cls();
    const auto folded = fold_extensions(cls, {{&C.values(), Admissibility::Any}}, A.options());
    CheckReport r{"embedding stability", 0, {}, true};
    const std::size_t n = A.universe().size();
    for (std::size_t i = 0; i < cls.size(); ++i)
        for (int w = 0; w < cls.worlds(i); ++w) {
            const NodeSet& a = C.values().row(i, w);
            const NodeSet& b = folded[0].row(i, w);
            for (std::size_t id = 0; id < n; ++id) {
                ++r.instances;
                if (a[id] != b[id])
                    r.failures.push_back({r.name, "member " + std::to_string(i) + " world " + std::to_string(w) +
                                                      ": " + to_string(A.universe().member(id))});
            }
        }
    return r;
}

CheckReport check_lemma1(const ClassSpec& spec, const KernelOptions& opt) {
    ClassSpec big = spec;
    big.max_worlds = spec.max_worlds + 1;
    Analyzer A(big, {}, opt);
    CsvAnalysis C(A);
    return check_lemma1(C);
}

CheckReport check_monotonicity_lemma(CsvAnalysis& C) {
    Analyzer& A = C.analyzer();
    const StructureClass& cls = A.cls();
    const std::size_t n = A.universe().size();
    const Mask full = cls.full_mask();
    // refuted[X] bit id: some pointed member carrying X fails node id.
    std::vector<Mask> refuted(std::size_t(1) << n, 0);
    for (std::size_t i = 0; i < cls.size(); ++i)
        for (int w = 0; w < cls.worlds(i); ++w) {
            const NodeSet& row = C.values().row(i, w);
            Mask bad = 0;
            for (std::size_t id = 0; id < n; ++id)
                if (!row[id]) bad |= Mask(1) << id;
            refuted[cls.member(i).interp[w]] |= bad;
        }
    CheckReport r{"monotonicity lemma", 0, {}, true};
    for (Mask X = 0; X <= full; ++X) {
        if (cls.pointed(X).empty()) continue;
        for (Mask Y = X;; Y = (Y + 1) | X) {
            if (!cls.pointed(Y).empty()) {
                ++r.instances;
                const Mask lost = refuted[Y] & ~refuted[X];
                for (std::size_t id = 0; id < n; ++id)
                    if ((lost >> id) & 1u)
                        r.failures.push_back({r.name, to_string(A.universe().member(id)) + " refuted at " +
                                                          describe(A.universe(), Y) + " but not at " +
                                                          describe(A.universe(), X)});
            }
            if (Y == full) break;
        }
    }
    return r;
}

CheckReport check_supervaluational(Analyzer& big, CsvAnalysis& small) {
    CheckReport r{"csv is supervaluational", 0, {}, true};
    const auto sets = intersect_by_interp(big.cls(), big.forcing(true));
    const auto& J = small.jump_table();
    const Universe& U = big.universe();
    for (Mask X = 0; X < J.size(); ++X) {
        if (big.cls().pointed(X).empty()) continue;
        const Mask g = big.restrict(sets[X]);
        ++r.instances;
        const Mask missing = g & ~J[X];
        for (std::size_t id = 0; id < U.size(); ++id)
            if ((missing >> id) & 1u)
                r.failures.push_back({r.name, to_string(U.member(id)) + " G-forced everywhere at " +
                                                  describe(U, X) + " but outside J_csv"});
    }
    return r;
}

CheckReport check_csv_truncation(CsvAnalysis& C) {
    Analyzer& A = C.analyzer();
    const StructureClass& cls = A.cls();
    const std::size_t n = A.universe().size();
    CheckReport r{"csv truncation neutrality", 0, {}, true};
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const RawStructure s = cls.raw(i);
        for (int w = 0; w < s.k; ++w) {
            RawStructure t;
            std::array<int, kMaxClassWorlds> to{};
            for (int u = 0; u < s.k; ++u)
                if ((s.up[w] >> u) & 1u) to[u] = t.k++;
            for (int u = 0; u < s.k; ++u) {
                if (!((s.up[w] >> u) & 1u)) continue;
                t.interp[to[u]] = s.interp[u];
                for (int v = 0; v < s.k; ++v)
                    if (((s.up[w] >> v) & 1u) && ((s.up[u] >> v) & 1u)) t.up[to[u]] |= static_cast<std::uint8_t>(1u << to[v]);
            }
            const auto c = cls.canonicalize(t);
            if (!c) continue;
            for (int u = 0; u < s.k; ++u) {
                if (!((s.up[w] >> u) & 1u)) continue;
                const NodeSet& a = C.values().row(i, u);
                const NodeSet& b = C.values().row(c->index, c->world[to[u]]);
                for (std::size_t id = 0; id < n; ++id) {
                    ++r.instances;
                    if (a[id] != b[id])
                        r.failures.push_back({r.name, "member " + std::to_string(i) + " cut at world " +
                                                          std::to_string(w) + ", world " + std::to_string(u) +
                                                          ": " + to_string(A.universe().member(id))});
                }
            }
        }
    }
    return r;
}

}  // namespace kt
