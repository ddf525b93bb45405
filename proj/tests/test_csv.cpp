#include "kt/csv.hpp"
#include "fixtures.hpp"

#include <doctest.h>

using namespace kt;

namespace {

ClassSpec csv_class(int m = 3) {
    return fixture::spec(m, {"0=0", "~0=0", "Tr(#\"0=0\")", "~Tr(#\"0=0\")"});
}

std::vector<FormulaPtr> named() {
    return {parse("Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")"), parse("exists x. Tr(x)"),
            parse("Tr(#\"0=0\") -> Tr(#\"~0=0\")"), parse("~~Tr(#\"0=0\")"),
            parse("forall x. (Tr(x) \\/ ~Tr(x))"), parse("Tr(#\"0=0\") /\\ ~Tr(#\"~0=0\")")};
}

bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

}  // namespace

TEST_CASE("definition-level csv forcing agrees with the kernel and replays") {
    const auto fs = named();
    Analyzer A(csv_class(2), fs);
    CsvAnalysis C(A);
    const auto& cls = A.cls();
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const auto M = cls.structure(i);
        for (int w = 0; w < M.size(); ++w) {
            std::vector<FormulaPtr> all = fs;
            for (const auto& m : A.universe().members()) all.push_back(m);
            for (const auto& phi : all) {
                const auto v = csv_forces(cls, M, w, phi);
                CHECK(v.holds == C.values().row(i, w).test(A.node(phi)));
                CHECK(replay(v));
                CHECK(v.trace.back().holds == v.holds);
            }
        }
    }
}

TEST_CASE("replay rejects a tampered step and open formulas are refused") {
    Analyzer A(csv_class(2));
    const auto M = A.cls().structure(0);
    auto v = csv_forces(A.cls(), M, 0, parse("Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")"));
    CHECK(v.clause == CsvClause::Or);
    CHECK(clause_name(v.clause) == "or");
    REQUIRE(replay(v));
    for (auto& s : v.trace)
        if (s.clause == CsvClause::Or) s.holds = !s.holds;
    CHECK_FALSE(replay(v));
    CHECK_THROWS_AS(csv_forces(A.cls(), M, 0, parse("Tr(x)")), CsvError);
}

TEST_CASE("the csv jump equals supervaluation over global forcing and is monotone") {
    Analyzer A(csv_class());
    CsvAnalysis C(A);
    const auto& J = C.jump_table();
    REQUIRE(J.size() == 16);
    for (Mask X = 0; X < 16; ++X) {
        CHECK(J[X] == C.svi2_table()[X]);
        CHECK(jump_csv(C, X).output == J[X]);
        CHECK(jump_svi2(A, X).output == J[X]);
        for (Mask Y = 0; Y < 16; ++Y)
            if (subset(X, Y)) CHECK(subset(J[X], J[Y]));
    }
}

TEST_CASE("lemma checks hold on the bounded class") {
    const auto spec = csv_class(2);
    const auto l1 = check_lemma1(spec);
    CHECK(l1.ok());
    CHECK(l1.instances > 0);

    Analyzer A(spec, named());
    CsvAnalysis C(A);
    CHECK(check_lemma1(C).ok());
    CHECK(check_monotonicity_lemma(C).ok());
    CHECK(check_csv_truncation(C).ok());

    Analyzer big(csv_class(3), named());
    const auto sv = check_supervaluational(big, C);
    CHECK(sv.ok());
    CHECK(sv.instances > 0);
}

TEST_CASE("the least csv fixed point passes every diagnostic and a corrupted set does not") {
    const auto spec = csv_class();
    Analyzer A(spec);
    CsvAnalysis C(A);
    const auto fixed = lfp(C.jump_table()).fixed;
    const auto d = diagnose_fixed_point_csv(A.universe(), fixed, spec.numeral_bound);
    CHECK(d.fixed == fixed);
    CHECK(d.ok());
    for (const auto& ch : d.checks) CHECK_MESSAGE(ch.ok(), ch.name);

    // Both 0=0 and its negation, and Tr of neither: consistency and transparency break.
    const auto& U = A.universe();
    const Mask bad = (Mask(1) << U.index_of(parse("0=0"))) | (Mask(1) << U.index_of(parse("~0=0")));
    CHECK_FALSE(diagnose_fixed_point_csv(U, bad, spec.numeral_bound).ok());
    CHECK_FALSE(csv_axiom_instances(U, spec.numeral_bound).empty());
}
