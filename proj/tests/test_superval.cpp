#include "kt/superval.hpp"
#include "fixtures.hpp"

#include <doctest.h>

using namespace kt;
using fixture::c;

namespace {

constexpr Scheme kSchemes[] = {Scheme::SVI, Scheme::VBI, Scheme::VCI, Scheme::MCI};

ClassSpec negation_class(int m = 3) {
    return fixture::spec(m, {"S(0)=0", "~S(0)=0", "Tr(#\"S(0)=0\")", "~Tr(#\"S(0)=0\")"});
}

// Negation-closed, as the mci scheme requires.
ClassSpec excluded_middle_class(int m = 2) {
    return fixture::spec(m, {"0=0", "~0=0", "Tr(#\"0=0\")", "~Tr(#\"0=0\")",
                             "Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")", "~(Tr(#\"0=0\") \\/ ~Tr(#\"0=0\"))"});
}

bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

}  // namespace

TEST_CASE("scheme names round-trip") {
    for (auto s : kSchemes) CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK(parse_scheme("vbi") == Scheme::VBI);
    CHECK_FALSE(parse_scheme("xyz").has_value());
    for (auto t : {Theory::ISV, Theory::IVB, Theory::IVF, Theory::IMC})
        CHECK(parse_theory(theory_name(t)) == t);
}

TEST_CASE("definition-level scheme forcing agrees with the folded tables") {
    const std::vector<FormulaPtr> named = {parse("Tr(#\"S(0)=0\") \\/ ~Tr(#\"S(0)=0\")"),
                                           parse("exists x. Tr(x)"), parse("~S(0)=0"),
                                           parse("Tr(#\"~S(0)=0\")"), parse("~Tr(#\"S(0)=0\")"),
                                           parse("Tr(#\"S(0)=0\") -> Tr(#\"~S(0)=0\")")};
    Analyzer A(negation_class(2), named);
    const auto& cls = A.cls();
    std::vector<int> ids;
    for (const auto& f : named) ids.push_back(A.node(f));
    for (auto s : kSchemes) {
        const auto& t = A.supervaluation(s);
        for (std::size_t i = 0; i < cls.size(); ++i) {
            const auto M = cls.structure(i);
            for (int w = 0; w < M.size(); ++w)
                for (int id : ids) {
                    const auto& phi = A.table().node(id).formula;
                    const auto v = scheme_forces(s, cls, M, w, phi);
                    CHECK(v.holds == t.row(i, w).test(id));
                    if (!v.holds) {
                        REQUIRE(v.counter.has_value());
                        const auto N = cls.structure(v.counter->target);
                        CHECK(is_ei(M, N, v.counter->map.map));
                        CHECK(v.counter->map.map[w] == v.counter->image);
                        CHECK_FALSE(forces(N, v.counter->image, phi).holds);
                    }
                }
        }
    }
    const auto& g = A.supervaluation_global();
    for (std::size_t i = 0; i < cls.size(); ++i)
        for (int w = 0; w < cls.worlds(i); ++w)
            for (int id : ids)
                CHECK(scheme_forces(Scheme::SVI, cls, cls.structure(i), w, A.table().node(id).formula, true).holds ==
                      g.row(i, w).test(id));
}

TEST_CASE("the excluded-middle sentence leaves the svi jump of a set omitting both halves") {
    Analyzer A(excluded_middle_class());
    const auto& U = A.universe();
    const int lem = U.index_of(parse("Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")"));
    for (Mask X : {Mask(0), Mask(1) << U.index_of(parse("Tr(#\"0=0\")"))}) {
        const auto r = jump(A, Scheme::SVI, X);
        CHECK(((r.output >> lem) & 1u) == 0);
        REQUIRE(r.witness[lem].has_value());
        const auto& wit = *r.witness[lem];
        CHECK(A.cls().member(wit.member).interp[wit.world] == X);
        REQUIRE(wit.extension.has_value());
        const auto N = A.cls().structure(wit.extension->target);
        // Witness: a 2-chain whose bottom lacks 0=0 and whose top has it.
        CHECK(N.size() == 2);
        CHECK(N.le(0, 1));
        CHECK(wit.extension->image == 0);
        CHECK_FALSE(N.interp[0].count(c("0=0")));
        CHECK(N.interp[1].count(c("0=0")));
        CHECK_FALSE(forces(N, 0, U.member(lem)).holds);
    }
    // With 0=0 in the input the disjunction is supervaluationally forced.
    const Mask with = Mask(1) << U.index_of(parse("0=0"));
    CHECK(((jump(A, Scheme::SVI, with).output >> lem) & 1u) == 1);
}

TEST_CASE("jumps are monotone, chained, and match their reports") {
    for (const auto& spec : {negation_class(), excluded_middle_class()}) {
        Analyzer A(spec);
        const std::size_t n = std::size_t(1) << A.universe().size();
        std::vector<const std::vector<Mask>*> tables;
        for (auto s : kSchemes) tables.push_back(&A.jump_table(s));
        tables.push_back(&A.jump_prime_table());
        for (const auto* J : tables) {
            REQUIRE(J->size() == n);
            for (Mask X = 0; X < n; ++X)
                for (Mask Y = 0; Y < n; ++Y)
                    if (subset(X, Y)) CHECK(subset((*J)[X], (*J)[Y]));
        }
        for (Mask X = 0; X < n; ++X) {
            for (int k = 0; k + 1 < 4; ++k) CHECK(subset((*tables[k])[X], (*tables[k + 1])[X]));
            CHECK(subset(A.jump_prime_table()[X], A.jump_table(Scheme::SVI)[X]));
            for (auto s : kSchemes) {
                const auto r = jump(A, s, X);
                CHECK(r.output == A.jump_table(s)[X]);
                for (std::size_t u = 0; u < A.universe().size(); ++u)
                    CHECK(r.witness[u].has_value() == !((r.output >> u) & 1u));
            }
            CHECK(jump_prime(A, X).output == A.jump_prime_table()[X]);
        }
    }
}

TEST_CASE("svi forcing implies plain forcing through the identity embedding") {
    Analyzer A(negation_class());
    const auto& sv = A.supervaluation(Scheme::SVI);
    const auto& plain = A.forcing(false);
    for (std::size_t i = 0; i < A.cls().size(); ++i)
        for (int w = 0; w < A.cls().worlds(i); ++w) CHECK(sv.row(i, w).is_subset_of(plain.row(i, w)));
}

TEST_CASE("least fixed points") {
    Analyzer A(negation_class());
    for (auto s : kSchemes) {
        const auto& J = A.jump_table(s);
        const auto r = lfp(J);
        CHECK(J[r.fixed] == r.fixed);
        CHECK(r.trace.front() == 0);
        CHECK(r.trace.back() == r.fixed);
        for (std::size_t k = 0; k + 1 < r.trace.size(); ++k) CHECK(subset(r.trace[k], r.trace[k + 1]));
        const auto fps = fixed_points(J);
        REQUIRE_FALSE(fps.empty());
        for (Mask F : fps) {
            CHECK(J[F] == F);
            CHECK(subset(r.fixed, F));
        }
        CHECK(check_transparency(A.universe(), r.fixed).ok());
    }
    // A seed outside its own jump is rejected.
    const auto& J = A.jump_table(Scheme::SVI);
    const Mask bad = Mask(1) << A.universe().index_of(parse("S(0)=0"));
    CHECK_FALSE(subset(bad, J[bad]));
    CHECK_THROWS_AS(lfp(J, bad), SeedError);
}

TEST_CASE("internal consistency and completeness at the least fixed points") {
    const auto t = quote(parse("0=0"));
    const auto cons = consistency_sentence(t);
    const auto comp = completeness_sentence(t);
    CHECK(is_consistency_instance(cons));
    CHECK(is_completeness_instance(comp));
    CHECK_FALSE(is_consistency_instance(comp));

    ClassSpec spec;
    spec.max_worlds = 2;
    spec.universe = Universe({parse("0=0"), parse("~0=0"), cons, neg(cons), comp, neg(comp)});
    Analyzer A(spec);
    const auto vci = lfp(A.jump_table(Scheme::VCI)).fixed;
    const auto mci = lfp(A.jump_table(Scheme::MCI)).fixed;
    const auto r1 = check_internal_consistency(A.universe(), vci);
    CHECK(r1.instances == 1);
    CHECK(r1.ok());
    const auto r2 = check_internal_completeness(A.universe(), mci);
    CHECK(r2.instances == 1);
    CHECK(r2.ok());
    // svi does not validate consistency.
    CHECK_FALSE(check_internal_consistency(A.universe(), lfp(A.jump_table(Scheme::SVI)).fixed).ok());
}

TEST_CASE("one-world transparency holds at every fixed point") {
    Analyzer A(excluded_middle_class());
    for (auto s : kSchemes)
        for (Mask F : fixed_points(A.jump_table(s))) {
            const auto r = check_transparent_oneworld(A, s, F);
            CHECK_MESSAGE(r.ok(), scheme_name(s) << " " << describe(A.universe(), F));
        }
}

TEST_CASE("axiom audits pass at fixed points and catch every injected fault") {
    const auto spec = negation_class();
    Analyzer A(spec);
    for (auto t : {Theory::ISV, Theory::IVF, Theory::IMC}) {
        std::vector<Mask> cons;
        for (Mask F : fixed_points(A.jump_table(scheme_of(t))))
            if (consistent(A.universe(), F)) cons.push_back(F);
        REQUIRE_FALSE(cons.empty());
        const auto structures = fixed_point_structures(A.universe(), cons, spec.numeral_bound);
        for (const auto& M : structures) {
            const auto r = audit_axioms(t, M, A.universe());
            CHECK_MESSAGE(r.ok(), theory_name(t));
            for (const auto& f : r.failures) MESSAGE(f.axiom << " " << f.sentence << " @" << f.world);
        }
        std::size_t faults = 0;
        for (const auto& m : mutation_sweep(t, structures, A.universe())) {
            if (!m.fault) continue;
            ++faults;
            CHECK(m.detected);
        }
        CHECK(faults > 0);
    }
}

TEST_CASE("the negation-transfer axiom fails at the vbi least fixed point and holds without the anti-extension") {
    const auto spec = negation_class();
    Analyzer A(spec);
    const auto& U = A.universe();
    const Mask neg_atom = Mask(1) << U.index_of(parse("~S(0)=0"));
    const Mask neg_tr = Mask(1) << U.index_of(parse("~Tr(#\"S(0)=0\")"));

    const auto vbi = lfp(A.jump_table(Scheme::VBI)).fixed;
    CHECK(vbi == neg_atom);
    const auto r = audit_axioms(Theory::IVB, one_world(U, vbi, spec.numeral_bound), U);
    REQUIRE_FALSE(r.ok());
    CHECK(r.failures.front().axiom == "IVB8");

    const auto fixed = lfp(A.jump_table_for(Admissibility::NoAntiExtension)).fixed;
    CHECK(fixed == (neg_atom | neg_tr));
    CHECK(audit_axioms(Theory::IVB, one_world(U, fixed, spec.numeral_bound), U).ok());
}
