#include "kt/superval.hpp"

#include <algorithm>
#include <cctype>

namespace kt {

std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::SVI: return "svi";
        case Scheme::VBI: return "vbi";
        case Scheme::VCI: return "vci";
        case Scheme::MCI: return "mci";
    }
    return "?";
}

namespace {
std::string lower(std::string_view s) {
    std::string r(s);
    for (auto& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return r;
}
}  // namespace

std::optional<Scheme> parse_scheme(std::string_view name) {
    const auto n = lower(name);
    for (Scheme s : {Scheme::SVI, Scheme::VBI, Scheme::VCI, Scheme::MCI})
        if (n == scheme_name(s)) return s;
    return std::nullopt;
}

Admissibility admissibility_of(Scheme s) {
    switch (s) {
        case Scheme::SVI: return Admissibility::Any;
        case Scheme::VBI: return Admissibility::NoNegation;
        case Scheme::VCI: return Admissibility::Consistent;
        case Scheme::MCI: return Admissibility::Maximal;
    }
    return Admissibility::Any;
}

// ---------------------------------------------------------------------------
// Definition-level scheme forcing

namespace {

Nat neg_code(const Nat& c) { return code(neg(decode(c))); }

bool admissible_by_definition(Scheme s, const Universe& U, const std::set<Nat>& source,
                              const KripkeStructure& T, int v) {
    if (s == Scheme::SVI) return true;
    std::set<Nat> negs;
    if (s == Scheme::VBI)
        for (const auto& c : source) negs.insert(neg_code(c));
    for (int u = 0; u < T.size(); ++u) {
        if (!T.le(v, u)) continue;
        const auto& I = T.interp[u];
        switch (s) {
            case Scheme::SVI: break;
            case Scheme::VBI:
                for (const auto& c : I)
                    if (negs.count(c)) return false;
                break;
            case Scheme::VCI:
                for (const auto& c : I)
                    if (I.count(neg_code(c))) return false;
                break;
            case Scheme::MCI:
                for (std::size_t i = 0; i < U.size(); ++i) {
                    const int n = U.neg_index(i);
                    if (n < 0) continue;
                    if (I.count(U.code_at(i)) == I.count(U.code_at(n))) return false;
                }
                break;
        }
    }
    return true;
}

}  // namespace

SchemeVerdict scheme_forces(Scheme s, const StructureClass& cls, const KripkeStructure& M, int w,
                            const FormulaPtr& phi, bool global) {
    if (s == Scheme::MCI && !cls.universe().negation_closed())
        throw SchemeError("mci needs a negation-closed universe");
    SchemeVerdict r;
    for (std::size_t j = 0; j < cls.size(); ++j) {
        const KripkeStructure T = cls.structure(j);
        for (auto& f : enumerate_ei(M, T)) {
            const int v = f.map[w];
            if (!admissible_by_definition(s, cls.universe(), M.interp[w], T, v)) continue;
            const auto fv = global ? forces_global(T, v, phi) : forces(T, v, phi);
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

// ---------------------------------------------------------------------------
// Analyzer

Analyzer::Analyzer(ClassSpec spec, const std::vector<FormulaPtr>& extra, KernelOptions opt)
    : spec_(std::move(spec)), opt_(opt) {
    cls_ = std::make_unique<StructureClass>(spec_);
    table_ = std::make_unique<SentenceTable>(cls_->universe(), spec_.numeral_bound);
    for (const auto& f : cls_->universe().members()) table_->add(tr(quote(f)));
    for (const auto& f : extra) table_->add(f);
}

int Analyzer::node(const FormulaPtr& phi) const {
    const int id = table_->find(code(phi));
    if (id < 0) throw std::out_of_range("sentence not in table: " + to_string(phi));
    return id;
}

Mask Analyzer::restrict(const NodeSet& s) const {
    Mask m = 0;
    for (std::size_t i = 0; i < universe().size(); ++i)
        if (s[i]) m |= Mask(1) << i;
    return m;
}

const PointedTable& Analyzer::forcing(bool global) {
    auto& slot = global ? global_ : plain_;
    if (!slot) slot = pointed_forcing(*cls_, *table_, global);
    return *slot;
}

void Analyzer::ensure_folds() {
    if (!folds_.empty()) return;
    const PointedTable& F = forcing(false);
    const PointedTable& G = forcing(true);
    folds_ = fold_extensions(*cls_,
                             {{&F, Admissibility::Any},
                              {&F, Admissibility::NoNegation},
                              {&F, Admissibility::Consistent},
                              {&F, Admissibility::Maximal},
                              {&G, Admissibility::Any}},
                             opt_);
}

const PointedTable& Analyzer::supervaluation(Scheme s) {
    if (s == Scheme::MCI && !universe().negation_closed())
        throw SchemeError("mci needs a negation-closed universe");
    ensure_folds();
    return folds_[static_cast<int>(s)];
}

const PointedTable& Analyzer::supervaluation_global() {
    ensure_folds();
    return folds_[4];
}

std::vector<Mask> Analyzer::to_jump(const PointedTable& t) const {
    const auto sets = intersect_by_interp(*cls_, t);
    std::vector<Mask> out(sets.size());
    for (std::size_t X = 0; X < sets.size(); ++X) out[X] = restrict(sets[X]);
    return out;
}

const std::vector<Mask>& Analyzer::jump_table(Scheme s) {
    auto& slot = jumps_[static_cast<int>(s)];
    if (slot.empty()) slot = to_jump(supervaluation(s));
    return slot;
}

std::vector<Mask> Analyzer::jump_table_for(Admissibility a) {
    const auto folded = fold_extensions(*cls_, {{&forcing(false), a}}, opt_);
    return to_jump(folded[0]);
}

const std::vector<Mask>& Analyzer::jump_prime_table() {
    if (prime_.empty()) {
        prime_ = jump_table(Scheme::SVI);
        const std::size_t n = universe().size();
        // AND over supersets, one bit at a time.
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t X = 0; X < prime_.size(); ++X)
                if (!((X >> b) & 1u)) prime_[X] &= prime_[X | (std::size_t(1) << b)];
    }
    return prime_;
}

const std::vector<Mask>& Analyzer::jump_global_table() {
    if (global_jump_.empty()) global_jump_ = to_jump(supervaluation_global());
    return global_jump_;
}

// ---------------------------------------------------------------------------
// Jump reports

std::pair<int, int> first_refuting_pointed(const StructureClass& cls, const PointedTable& t, Mask X,
                                           int id, bool superset) {
    for (std::size_t i = 0; i < cls.size(); ++i)
        for (int w = 0; w < cls.worlds(i); ++w) {
            const Mask I = cls.member(i).interp[w];
            const bool match = superset ? (I & X) == X : I == X;
            if (match && !t.row(i, w)[id]) return {static_cast<int>(i), w};
        }
    return {-1, -1};
}

std::optional<Extension> first_refuting_extension(const StructureClass& cls, int i, int w,
                                                  const PointedTable& values, int id,
                                                  Admissibility a) {
    const Mask X = cls.member(i).interp[w];
    for (std::size_t j = 0; j < cls.size(); ++j)
        for (auto& m : cls.ei_maps(i, j)) {
            const int v = m.map[w];
            if (!admissible_image(cls, j, v, X, a)) continue;
            if (!values.row(j, v)[id]) return Extension{static_cast<int>(j), std::move(m), v};
        }
    return std::nullopt;
}

namespace {

JumpReport make_report(Analyzer& A, std::string op, Mask X, Mask out, const PointedTable& sv,
                       Admissibility a, bool superset) {
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
        auto [m, w] = first_refuting_pointed(A.cls(), sv, X, static_cast<int>(i), superset);
        if (m < 0) continue;
        JumpWitness jw{m, w, first_refuting_extension(A.cls(), m, w, A.forcing(false),
                                                      static_cast<int>(i), a)};
        r.witness[i] = std::move(jw);
    }
    return r;
}

}  // namespace

JumpReport jump(Analyzer& A, Scheme s, Mask X) {
    const Mask out = A.jump_table(s).at(X);
    return make_report(A, std::string(scheme_name(s)), X, out, A.supervaluation(s), admissibility_of(s),
                       false);
}

JumpReport jump_prime(Analyzer& A, Mask X) {
    const Mask out = A.jump_prime_table().at(X);
    return make_report(A, "svi'", X, out, A.supervaluation(Scheme::SVI), Admissibility::Any, true);
}

// ---------------------------------------------------------------------------
// Fixed points

LfpResult lfp(const std::vector<Mask>& J, Mask seed) {
    if (seed >= J.size()) throw SeedError("seed outside the universe");
    if ((seed & ~J[seed]) != 0) throw SeedError("seed is not contained in its jump; iteration would not ascend");
    LfpResult r;
    Mask X = seed;
    r.trace.push_back(X);
    while (J[X] != X) {
        X = J[X];
        r.trace.push_back(X);
    }
    r.fixed = X;
    return r;
}

std::vector<Mask> fixed_points(const std::vector<Mask>& J) {
    std::vector<Mask> out;
    for (Mask X = 0; X < J.size(); ++X)
        if (J[X] == X) out.push_back(X);
    return out;
}

// ---------------------------------------------------------------------------
// Checks

void CheckReport::merge(const CheckReport& o) {
    instances += o.instances;
    failures.insert(failures.end(), o.failures.begin(), o.failures.end());
    exact = exact && o.exact;
}

std::string describe(const Universe& U, Mask X) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < U.size(); ++i)
        if ((X >> i) & 1u) {
            if (!first) s += ", ";
            s += to_string(U.member(i));
            first = false;
        }
    return s + "}";
}

CheckReport check_transparency(const Universe& U, Mask X) {
    CheckReport r{"transparency", 0, {}, true};
    for (std::size_t i = 0; i < U.size(); ++i) {
        const int t = U.index_of(tr(quote(U.member(i))));
        if (t < 0) continue;
        ++r.instances;
        if (((X >> i) & 1u) != ((X >> t) & 1u))
            r.failures.push_back({"transparency", to_string(U.member(i)) + " vs " + to_string(U.member(t))});
    }
    return r;
}

KripkeStructure one_world(const Universe& U, Mask X, unsigned numeral_bound) {
    KripkeStructure M;
    M.worlds = {"w0"};
    M.up = {1u};
    M.numeral_bound = numeral_bound;
    std::set<Nat> I;
    for (std::size_t i = 0; i < U.size(); ++i)
        if ((X >> i) & 1u) I.insert(U.code_at(i));
    M.interp = {I};
    return M;
}

CheckReport check_transparent_oneworld(Analyzer& A, Scheme s, Mask X) {
    CheckReport r{"one-world transparency", 0, {}, true};
    RawStructure raw;
    raw.k = 1;
    raw.up[0] = 1;
    raw.interp[0] = X;
    const auto c = A.cls().canonicalize(raw);
    if (!c) {
        r.failures.push_back({"one-world transparency", "set is outside the class"});
        return r;
    }
    const NodeSet& row = A.supervaluation(s).row(c->index, 0);
    const Universe& U = A.universe();
    for (std::size_t i = 0; i < U.size(); ++i) {
        const int t = A.node(tr(quote(U.member(i))));
        ++r.instances;
        r.exact = r.exact && !A.table().inexact(static_cast<int>(i));
        if (row[i] != row[t])
            r.failures.push_back({"one-world transparency",
                                  to_string(U.member(i)) + (row[i] ? " forced, its Tr not" : " not forced, its Tr is")});
    }
    return r;
}

FormulaPtr consistency_sentence(const TermPtr& t) {
    return neg(conj(tr(t), tr(app(FnSym::DotNeg, {t}))));
}

FormulaPtr completeness_sentence(const TermPtr& t) {
    return iff(tr(app(FnSym::DotNeg, {t})), neg(tr(t)));
}

bool is_consistency_instance(const FormulaPtr& f) {
    FormulaPtr inner;
    if (!is_neg(f, &inner) || inner->kind != FKind::And || inner->a->kind != FKind::Tr) return false;
    return code(f) == code(consistency_sentence(inner->a->lhs));
}

bool is_completeness_instance(const FormulaPtr& f) {
    if (f->kind != FKind::And || f->a->kind != FKind::Imp || f->a->b->kind != FKind::Imp ||
        f->a->b->a->kind != FKind::Tr)
        return false;
    return code(f) == code(completeness_sentence(f->a->b->a->lhs));
}

namespace {
CheckReport membership(const char* name, const Universe& U, Mask X, bool (*pred)(const FormulaPtr&)) {
    CheckReport r{name, 0, {}, true};
    for (std::size_t i = 0; i < U.size(); ++i) {
        if (!pred(U.member(i))) continue;
        ++r.instances;
        if (!((X >> i) & 1u)) r.failures.push_back({name, to_string(U.member(i)) + " missing"});
    }
    return r;
}
}  // namespace

CheckReport check_internal_consistency(const Universe& U, Mask X) {
    return membership("internal consistency", U, X, is_consistency_instance);
}

CheckReport check_internal_completeness(const Universe& U, Mask X) {
    return membership("internal completeness", U, X, is_completeness_instance);
}

// ---------------------------------------------------------------------------
// Audits

std::string_view theory_name(Theory t) {
    switch (t) {
        case Theory::ISV: return "ISV";
        case Theory::IVB: return "IVB";
        case Theory::IVF: return "IVF";
        case Theory::IMC: return "IMC";
    }
    return "?";
}

std::optional<Theory> parse_theory(std::string_view name) {
    std::string n(name);
    for (auto& c : n) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Theory t : {Theory::ISV, Theory::IVB, Theory::IVF, Theory::IMC})
        if (n == theory_name(t)) return t;
    return std::nullopt;
}

Scheme scheme_of(Theory t) {
    switch (t) {
        case Theory::ISV: return Scheme::SVI;
        case Theory::IVB: return Scheme::VBI;
        case Theory::IVF: return Scheme::VCI;
        case Theory::IMC: return Scheme::MCI;
    }
    return Scheme::SVI;
}

std::vector<FormulaPtr> arithmetic_axioms() {
    std::vector<FormulaPtr> out;
    for (const char* s : {"0=0", "~S(0)=0", "forall x. x=x", "forall x. x+0=x", "forall x. ~S(x)=0",
                          "forall x. x*0=0", "forall x. forall y. x+S(y)=S(x+y)"})
        out.push_back(parse(s));
    return out;
}

namespace {

TermPtr qt(const TermPtr& t) { return numeral(code_any(t)); }
TermPtr qf(const FormulaPtr& f) { return numeral(code_any(f)); }

}  // namespace

std::vector<AxiomInstance> axiom_instances(Theory th, const Universe& U) {
    std::vector<AxiomInstance> out;
    auto in = [&](const FormulaPtr& f) { return U.index_of(code(f)) >= 0; };
    const bool has7 = th != Theory::IMC;
    const bool ivb = th != Theory::ISV;

    for (const auto& m : U.members()) {
        FormulaPtr inner;
        // ISV1: equations and negated equations.
        if (m->kind == FKind::Eq) {
            out.push_back({"ISV1", iff(tr(app(FnSym::DotEq, {qt(m->lhs), qt(m->rhs)})), m)});
        } else if (is_neg(m, &inner) && inner->kind == FKind::Eq) {
            out.push_back({"ISV1", iff(tr(app(FnSym::DotNeg, {app(FnSym::DotEq, {qt(inner->lhs), qt(inner->rhs)})})), m)});
        }
        // ISV3: universal members.
        if (m->kind == FKind::Forall) {
            const TermPtr v = qt(var(m->var));
            const TermPtr body = qf(m->a);
            auto inst = tr(app(FnSym::Subst, {body, v, app(FnSym::Num, {var("z")})}));
            out.push_back({"ISV3", imp(forall("z", inst), tr(app(FnSym::DotAll, {v, body})))});
        }
        // ISV4.
        if (in(tr(quote(m)))) out.push_back({"ISV4", imp(tr(quote(m)), tr(app(FnSym::DotTr, {quote(m)})))});
        // ISV5.
        if (m->kind == FKind::Imp && in(m->a) && in(m->b))
            out.push_back({"ISV5", imp(tr(app(FnSym::DotImp, {quote(m->a), quote(m->b)})),
                                       imp(tr(quote(m->a)), tr(quote(m->b))))});
        if (has7) out.push_back({"ISV7", imp(tr(quote(m)), m)});
        if (ivb && in(neg(m)) && in(neg(tr(quote(m)))))
            out.push_back({"IVB8", imp(tr(app(FnSym::DotNeg, {quote(m)})),
                                       tr(app(FnSym::DotNeg, {app(FnSym::DotTr, {quote(m)})})))});
        if ((th == Theory::IVF) && is_consistency_instance(m)) out.push_back({"IVF9", tr(quote(m))});
        if (th == Theory::IMC && is_completeness_instance(m)) out.push_back({"IMC8", tr(quote(m))});
        // Derived facts.
        if (has7 && m->kind == FKind::And && in(m->a) && in(m->b))
            out.push_back({"and-compositional", iff(tr(quote(m)), conj(tr(quote(m->a)), tr(quote(m->b))))});
        if (has7 && m->kind == FKind::Or && in(m->a) && in(m->b))
            out.push_back({"or-introduction", imp(disj(tr(quote(m->a)), tr(quote(m->b))), tr(quote(m)))});
        if (in(neg(m))) out.push_back({"consistency", consistency_sentence(quote(m))});
    }
    for (const auto& a : arithmetic_axioms())
        if (in(a)) out.push_back({"ISV2", tr(quote(a))});
    std::stable_sort(out.begin(), out.end(),
                     [](const AxiomInstance& a, const AxiomInstance& b) { return a.axiom < b.axiom; });
    return out;
}

AuditReport audit_axioms(Theory th, const KripkeStructure& M, const Universe& U) {
    AuditReport r;
    r.theory = th;
    const auto instances = axiom_instances(th, U);
    std::map<std::string, std::size_t> counts;
    for (const auto& inst : instances) {
        ++counts[inst.axiom];
        for (int w = 0; w < M.size(); ++w) {
            const auto v = forces(M, w, inst.sentence);
            r.exact = r.exact && v.exact;
            if (!v.holds) r.failures.push_back({inst.axiom, to_string(inst.sentence), M.worlds[w]});
        }
    }
    // ISV6: only sentences are ever true.
    std::size_t n6 = 0;
    for (int w = 0; w < M.size(); ++w)
        for (const auto& c : M.interp[w]) {
            ++n6;
            if (!is_sentence_code(c)) r.failures.push_back({"ISV6", c.str(), M.worlds[w]});
        }
    counts["ISV6"] += n6;
    r.counts.assign(counts.begin(), counts.end());
    return r;
}

std::vector<KripkeStructure> fixed_point_structures(const Universe& U, const std::vector<Mask>& fps,
                                                    unsigned numeral_bound) {
    std::vector<KripkeStructure> out;
    for (Mask X : fps) out.push_back(one_world(U, X, numeral_bound));
    for (Mask X : fps)
        for (Mask Y : fps) {
            if (X == Y || (X & Y) != X) continue;
            KripkeStructure M = one_world(U, X, numeral_bound);
            M.worlds.push_back("w1");
            M.up = {0b11u, 0b10u};
            M.interp.push_back(one_world(U, Y, numeral_bound).interp[0]);
            out.push_back(std::move(M));
        }
    return out;
}

std::vector<Mutation> mutation_sweep(Theory th, const std::vector<KripkeStructure>& structures,
                                     const Universe& U) {
    std::vector<Mutation> out;
    for (std::size_t s = 0; s < structures.size(); ++s) {
        const auto& M = structures[s];
        for (int w = 0; w < M.size(); ++w)
            for (std::size_t i = 0; i < U.size(); ++i) {
                if (M.interp[w].count(U.code_at(i))) continue;
                KripkeStructure mut = M;
                for (int u = 0; u < M.size(); ++u)
                    if (M.le(w, u)) mut.interp[u].insert(U.code_at(i));
                Mutation m{static_cast<int>(s), w, static_cast<int>(i)};
                m.fault = !forces(mut, w, U.member(i)).holds;
                m.detected = !audit_axioms(th, mut, U).ok();
                out.push_back(m);
            }
    }
    return out;
}

}  // namespace kt
