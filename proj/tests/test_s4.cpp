#include "kt/s4.hpp"
#include "kt/search.hpp"
#include "corpus.hpp"
#include "fixtures.hpp"

#include <doctest.h>

using namespace kt::modal;

namespace {

GModel as_g(const Model& m) {
    GModel g;
    static_cast<Model&>(g) = m;
    return g;
}

S4Model as_s4(const Model& m) {
    S4Model s;
    static_cast<Model&>(s) = m;
    return s;
}

}  // namespace

TEST_CASE("parse and print") {
    const auto f = parse_modal("forall x. (P(x) -> exists y. Q(y, c))");
    REQUIRE(f->kind == MKind::Forall);
    CHECK(to_string(parse_modal(to_string(f))) == to_string(f));
    CHECK(equal(parse_modal(to_string(f)), f));
    const auto sig = signature_of(f);
    CHECK(sig.preds.at("P") == 1);
    CHECK(sig.preds.at("Q") == 2);
    CHECK(sig.constants == std::set<std::string>{"c"});
    CHECK(free_vars(f).empty());
    CHECK(parse_modal("p -> q -> r")->b->kind == MKind::Imp);
    CHECK(parse_modal("[]p /\\ q")->kind == MKind::And);
    CHECK(has_box(parse_modal("p -> []q")));
    CHECK_THROWS_AS(parse_modal("p /\\"), MParseError);
    CHECK_THROWS_AS(signature_of(parse_modal("P(c) /\\ P(c, c)")), MParseError);
}

TEST_CASE("g-translation examples and size bound") {
    CHECK(to_string(translate_g(parse_modal("p"))) == to_string(parse_modal("[]p")));
    CHECK(equal(translate_g(parse_modal("p -> q")), parse_modal("[]([]p -> []q)")));
    CHECK(equal(translate_g(parse_modal("forall x. P(x)")), parse_modal("[]forall x. []P(x)")));
    CHECK(equal(translate_g(parse_modal("exists x. P(x) \\/ bot")), parse_modal("exists x. []P(x) \\/ bot")));
    CHECK(equal(translate_g(parse_modal("~p")), parse_modal("[](([]p) -> bot)")));
    CHECK_THROWS(translate_g(parse_modal("[]p")));
    for (const auto& e : corpus::ipc_corpus()) {
        const auto f = parse_modal(e.formula);
        CHECK(size(translate_g(f)) <= 2 * size(f));
        CHECK(connectives(f) <= 3);
        CHECK(signature_of(f).preds.size() <= 2);
    }
}

TEST_CASE("masks agree with the definition-level evaluators") {
    std::vector<MFormulaPtr> fs;
    for (const auto& e : corpus::ipc_corpus()) fs.push_back(parse_modal(e.formula));
    int checked = 0;
    for (std::size_t k = 0; k < fs.size(); k += 3) {
        const auto& phi = fs[k];
        const auto A = translate_g(phi);
        for_each_g_model(signature_of(phi), {2, 2}, [&](const GModel& M) {
            const auto gm = g_mask(M, phi);
            const auto alt = g_mask(M, phi, ExistsReading::AtSuccessor);
            const auto S = to_s4_model(M);
            const auto sm = s4_mask(S, A);
            for (int w = 0; w < M.k; ++w) {
                CHECK(bool((gm >> w) & 1u) == forces_g_appendix(M, w, phi));
                CHECK(bool((alt >> w) & 1u) == forces_g_appendix(M, w, phi, ExistsReading::AtSuccessor));
                CHECK(bool((sm >> w) & 1u) == s4_forces(S, w, A));
            }
            ++checked;
            return true;
        });
    }
    CHECK(checked > 100);
}

TEST_CASE("G forcing is hereditary and both existential readings coincide") {
    const char* const fs[] = {"exists x. P(x)", "exists x. (P(x) -> Q(x))", "~exists x. P(x)",
                              "exists x. ~P(x)", "exists x. P(x) \\/ Q(c)", "forall x. exists y. (P(x) -> P(y))"};
    for (const char* s : fs) {
        const auto phi = parse_modal(s);
        for_each_g_model(signature_of(phi), {3, 2}, [&](const GModel& M) {
            CHECK(validate(M).empty());
            const auto m = g_mask(M, phi);
            CHECK(m == g_mask(M, phi, ExistsReading::AtSuccessor));
            for (int u = 0; u < M.k; ++u)
                for (int v = 0; v < M.k; ++v)
                    if (M.le(u, v) && ((m >> u) & 1u)) CHECK(((m >> v) & 1u));
            return true;
        });
    }
}

TEST_CASE("both transformation lemmas over the corpus at small bounds") {
    for (const auto& e : corpus::ipc_corpus()) {
        const auto phi = parse_modal(e.formula);
        const auto A = translate_g(phi);
        const auto sig = signature_of(phi);
        for_each_g_model(sig, {2, 2}, [&](const GModel& M) {
            CHECK_MESSAGE(g_mask(M, phi) == s4_mask(to_s4_model(M), A), e.formula);
            return true;
        });
        for_each_s4_model(sig, {2, 2}, [&](const S4Model& N) {
            const auto G = to_g_model(N);
            CHECK(validate(G).empty());
            CHECK_MESSAGE(g_mask(G, phi) == s4_mask(N, A), e.formula);
            return true;
        });
    }
}

TEST_CASE("box laws on S4 models") {
    const auto ab = parse_modal("[](p /\\ q)");
    const auto split = parse_modal("[]p /\\ []q");
    const auto t = parse_modal("[]p -> p");
    const auto four = parse_modal("[]p -> [][]p");
    for_each_s4_model(signature_of(ab), {3, 1}, [&](const S4Model& N) {
        CHECK(s4_mask(N, ab) == s4_mask(N, split));
        const std::uint32_t all = (1u << N.k) - 1;
        CHECK(s4_mask(N, t) == all);
        CHECK(s4_mask(N, four) == all);
        return true;
    });
}

TEST_CASE("corpus labels agree with bounded search on both sides of the translation") {
    for (const auto& e : corpus::ipc_corpus()) {
        const auto phi = parse_modal(e.formula);
        const auto v = ipc_valid_bounded(phi, {3, 2});
        CHECK_MESSAGE(v.valid_at_bounds == e.valid, e.formula);
        CHECK(s4_valid_bounded(translate_g(phi), {3, 2}) == e.valid);
        if (!e.valid) {
            REQUIRE(v.countermodel.has_value());
            const auto& cm = *v.countermodel;
            CHECK(validate(cm.model).empty());
            CHECK_FALSE(forces_g_appendix(cm.model, cm.world, phi));
            // The countermodel survives a file round-trip.
            const auto again = as_g(load_model(dump_model(cm.model)));
            CHECK_FALSE(forces_g_appendix(again, cm.world, phi));
        }
    }
}

TEST_CASE("curated entailments hold and a classical one does not") {
    for (const auto& e : corpus::entailments()) {
        std::vector<MFormulaPtr> gamma;
        for (const auto& p : e.premises) gamma.push_back(parse_modal(p));
        CHECK_MESSAGE(g_entails_bounded(gamma, parse_modal(e.conclusion)), e.conclusion);
    }
    CHECK_FALSE(g_entails_bounded({parse_modal("~~p")}, parse_modal("p")));
    CHECK_FALSE(g_entails_bounded({parse_modal("p -> q")}, parse_modal("~p \\/ q")));
}

TEST_CASE("model validation and constants outside a domain") {
    const char* text =
        "world a\nworld b\nle a b\n"
        "dom a 0\ndom b 0 1\n"
        "val a P 0\nval b P 0\nval b P 1\n"
        "const c 1\n";
    const auto M = load_model(text);
    CHECK(M.k == 2);
    const auto issues = validate(as_g(M));
    CHECK_FALSE(issues.empty());  // c denotes 1, missing from D(a)
    CHECK_THROWS_AS(forces_g_appendix(as_g(M), 0, parse_modal("P(c)")), ModelError);
    CHECK(forces_g_appendix(as_g(M), 1, parse_modal("P(c)")));
    CHECK_THROWS_AS(s4_forces(as_s4(M), 0, parse_modal("P(c)")), ModelError);

    auto ok = M;
    ok.constants["c"] = 0;
    CHECK(validate(as_g(ok)).empty());
    CHECK(dump_model(load_model(dump_model(ok))) == dump_model(ok));

    auto shrinking = ok;
    shrinking.dom[1] = 0;
    CHECK_FALSE(validate(as_s4(shrinking)).empty());

    auto unhereditary = ok;
    unhereditary.val["P"][1].clear();
    CHECK(validate(as_s4(unhereditary)).empty());
    CHECK_FALSE(validate(as_g(unhereditary)).empty());
    CHECK_THROWS_AS(load_model("world a\nle a b\n"), ModelError);
}

TEST_CASE("propositional G forcing agrees with global forcing on constant-domain structures") {
    using kt::parse;
    const std::pair<const char*, const char*> pairs[] = {
        {"Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")", "p \\/ ~p"},
        {"~~Tr(#\"0=0\") -> Tr(#\"0=0\")", "~~p -> p"},
        {"(Tr(#\"0=0\") -> Tr(#\"S(0)=0\")) \\/ (Tr(#\"S(0)=0\") -> Tr(#\"0=0\"))", "(p -> q) \\/ (q -> p)"},
        {"~(Tr(#\"0=0\") /\\ Tr(#\"S(0)=0\")) -> ~Tr(#\"0=0\") \\/ ~Tr(#\"S(0)=0\")", "~(p /\\ q) -> ~p \\/ ~q"},
    };
    auto cls = kt::enumerate_structures(fixture::spec(3, {"0=0", "S(0)=0"}));
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const auto K = cls.structure(i);
        GModel G;
        G.k = K.size();
        G.up.assign(K.up.begin(), K.up.end());
        G.dom.assign(G.k, 1u);
        G.val["p"].resize(G.k);
        G.val["q"].resize(G.k);
        for (int w = 0; w < G.k; ++w) {
            if (K.interp[w].count(fixture::c("0=0"))) G.val["p"][w].insert(Tuple{});
            if (K.interp[w].count(fixture::c("S(0)=0"))) G.val["q"][w].insert(Tuple{});
        }
        for (auto [lt, m] : pairs)
            for (int w = 0; w < G.k; ++w)
                CHECK(kt::forces_global(K, w, parse(lt)).holds == forces_g_appendix(G, w, parse_modal(m)));
    }
}
