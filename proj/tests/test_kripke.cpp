#include "kt/kripke.hpp"
#include "kt/search.hpp"
#include "corpus.hpp"
#include "fixtures.hpp"

#include <doctest.h>

using namespace kt;
using fixture::c;

namespace {

const char* const kSentences[] = {
    "0=0", "S(0)=0", "bot", "Tr(#\"0=0\")", "Tr(#\"S(0)=0\")", "~Tr(#\"0=0\")",
    "Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")", "~~Tr(#\"0=0\") -> Tr(#\"0=0\")",
    "Tr(#\"0=0\") -> Tr(#\"S(0)=0\")", "Tr(#\"Tr(#\"0=0\")\")",
    "exists x. Tr(x)", "forall x. ~Tr(x)", "Tr(#\"0=0\") /\\ ~Tr(#\"S(0)=0\")",
    "~(Tr(#\"S(0)=0\") -> Tr(#\"0=0\"))",
};

ClassSpec small_class() {
    return fixture::spec(3, {"0=0", "S(0)=0", "Tr(#\"0=0\")"});
}

}  // namespace

TEST_CASE("validate accepts the 2-chain and reports each broken axiom") {
    auto M = fixture::chain2({}, {c("0=0")});
    CHECK(validate(M).empty());

    auto bad = fixture::chain2({c("0=0")}, {});
    auto d = validate(bad);
    REQUIRE(d.size() == 1);
    CHECK(d[0].axiom == "heredity");

    auto refl = M;
    refl.up[1] = 0;
    CHECK(validate(refl).front().axiom == "reflexivity");

    auto anti = M;
    anti.up[1] = 0b11;
    bool found = false;
    for (const auto& x : validate(anti)) found |= x.axiom == "antisymmetry";
    CHECK(found);

    auto nonsentence = fixture::one_world({Nat(5)});
    CHECK(validate(nonsentence).front().axiom == "sentence");
}

TEST_CASE("bottom is never forced and excluded middle fails on the 2-chain") {
    auto M = fixture::chain2({}, {c("0=0")});
    const auto lem = parse("Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")");
    const auto dne = parse("~~Tr(#\"0=0\") -> Tr(#\"0=0\")");
    for (int w = 0; w < 2; ++w) {
        CHECK_FALSE(forces(M, w, parse("bot")).holds);
        CHECK_FALSE(forces_global(M, w, parse("bot")).holds);
    }
    CHECK_FALSE(forces(M, 0, lem).holds);
    CHECK(forces(M, 1, lem).holds);
    CHECK_FALSE(forces(M, 0, dne).holds);
    CHECK_FALSE(forces_global(M, 0, lem).holds);
    CHECK_FALSE(satisfies(M, lem).holds);
    CHECK(satisfies(M, parse("~~(Tr(#\"0=0\") \\/ ~Tr(#\"0=0\"))")).holds);
}

TEST_CASE("quantifiers range over numerals up to the bound and flag the cutoff") {
    auto M = fixture::one_world({Nat(3), c("0=0")});
    M.numeral_bound = 4;
    auto v = forces(M, 0, parse("exists x. Tr(x)"));
    CHECK(v.holds);
    auto u = forces(M, 0, parse("forall x. ~Tr(x)"));
    CHECK_FALSE(u.holds);
    auto w = forces(M, 0, parse("forall x. (Tr(x) -> Tr(x))"));
    CHECK(w.holds);
    CHECK_FALSE(w.exact);
    CHECK(forces(M, 0, parse("Tr(#\"0=0\")")).exact);
}

TEST_CASE("heredity, truncation neutrality and agreement of G forcing over a class") {
    auto cls = enumerate_structures(small_class());
    std::vector<FormulaPtr> fs;
    for (const char* s : kSentences) fs.push_back(parse(s));
    std::size_t checks = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const auto M = cls.structure(i);
        for (const auto& phi : fs) {
            std::vector<bool> val(M.size()), gval(M.size());
            for (int w = 0; w < M.size(); ++w) {
                val[w] = forces(M, w, phi).holds;
                gval[w] = forces_global(M, w, phi).holds;
                CHECK(val[w] == gval[w]);
                CHECK(forces(truncate(M, w), 0, phi).holds == val[w]);
                ++checks;
            }
            for (int u = 0; u < M.size(); ++u)
                for (int v = 0; v < M.size(); ++v)
                    if (M.le(u, v)) {
                        CHECK((!val[u] || val[v]));
                        CHECK((!gval[u] || gval[v]));
                    }
        }
    }
    CHECK(checks > 1000);
}

TEST_CASE("curated intuitionistic tautologies are forced everywhere in the class") {
    auto cls = enumerate_structures(small_class());
    const auto taut = corpus::lines("ipc_tautologies_lt.txt");
    CHECK(taut.size() == 20);
    for (const auto& t : taut) {
        const auto phi = parse(t);
        for (std::size_t i = 0; i < cls.size(); ++i) {
            const auto M = cls.structure(i);
            for (int w = 0; w < M.size(); ++w) CHECK_MESSAGE(forces(M, w, phi).holds, t);
        }
    }
}

TEST_CASE("add_root puts a new minimum below the structure") {
    auto M = fixture::chain2({c("0=0")}, {c("0=0"), c("S(0)=0")});
    auto R = add_root(M, {c("0=0")}, "r");
    REQUIRE(R.size() == 3);
    const int r = R.world_index("r");
    REQUIRE(r >= 0);
    for (int w = 0; w < R.size(); ++w) CHECK(R.le(r, w));
    CHECK(validate(R).empty());
    CHECK_THROWS_AS(add_root(M, {c("S(0)=0")}), StructureError);
}

TEST_CASE("structure files round-trip") {
    const char* text =
        "% a diamond\n"
        "numeral_bound 3\n"
        "world a\nworld b\nworld c\nworld d\n"
        "le a b\nle a c\nle b d\nle c d\n"
        "holds b 0=0\nholds c S(0)=0\nholds d 0=0\nholds d S(0)=0\n";
    auto M = load_structure(text);
    CHECK(M.size() == 4);
    CHECK(M.numeral_bound == 3);
    CHECK(M.le(M.world_index("a"), M.world_index("d")));
    CHECK(validate(M).empty());
    auto again = load_structure(dump_structure(M));
    CHECK(again.worlds == M.worlds);
    CHECK(again.up == M.up);
    CHECK(again.interp == M.interp);
    CHECK(dump_structure(again) == dump_structure(M));
    CHECK_THROWS_AS(load_structure("le a b\n"), StructureError);
    CHECK_THROWS_AS(load_structure("world a\nholds a (\n"), std::exception);
}
