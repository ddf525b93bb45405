#include "kt/engine.hpp"
#include "fixtures.hpp"

#include <doctest.h>

using namespace kt;
using fixture::c;

namespace {

ClassSpec negation_class() {
    return fixture::spec(3, {"S(0)=0", "~S(0)=0", "Tr(#\"S(0)=0\")", "~Tr(#\"S(0)=0\")"});
}

const char* const kExtra[] = {
    "Tr(#\"S(0)=0\") \\/ ~Tr(#\"S(0)=0\")", "~~Tr(#\"~S(0)=0\")",
    "Tr(#\"S(0)=0\") -> Tr(#\"~S(0)=0\")", "exists x. Tr(x)", "forall x. ~Tr(x)", "bot",
};

SentenceTable table_for(const Universe& U) {
    SentenceTable T(U, 4);
    for (const char* s : kExtra) T.add(parse(s));
    for (const auto& m : U.members()) T.add(tr(quote(m)));
    return T;
}

}  // namespace

TEST_CASE("forcing masks match definition-level forcing") {
    auto cls = enumerate_structures(negation_class());
    auto T = table_for(cls.universe());
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const auto M = cls.structure(i);
        const auto plain = forcing_masks(T, cls.raw(i), false);
        const auto glob = forcing_masks(T, cls.raw(i), true);
        for (std::size_t id = 0; id < T.size(); ++id)
            for (int w = 0; w < M.size(); ++w) {
                const auto& phi = T.node(static_cast<int>(id)).formula;
                CHECK(((plain[id] >> w) & 1u) == forces(M, w, phi).holds);
                CHECK(((glob[id] >> w) & 1u) == forces_global(M, w, phi).holds);
            }
    }
}

TEST_CASE("table ids: universe first, deduplicated, inexact below cutoffs") {
    const auto U = negation_class().universe;
    auto T = table_for(U);
    for (std::size_t i = 0; i < U.size(); ++i) CHECK(T.find(U.code_at(i)) == int(i));
    const int before = static_cast<int>(T.size());
    CHECK(T.add(parse("exists x. Tr(x)")) < before);
    CHECK(T.size() == std::size_t(before));
    CHECK(T.inexact(T.find(c("exists x. Tr(x)"))));
    CHECK_FALSE(T.inexact(T.find(c("Tr(#\"S(0)=0\") \\/ ~Tr(#\"S(0)=0\")"))));
    CHECK(T.find(c("0=0")) == -1);
    const auto& ord = T.order();
    std::vector<int> pos(T.size());
    for (std::size_t k = 0; k < ord.size(); ++k) pos[ord[k]] = static_cast<int>(k);
    for (std::size_t id = 0; id < T.size(); ++id) {
        const auto& n = T.node(static_cast<int>(id));
        if (n.a >= 0) CHECK(pos[n.a] < pos[id]);
        if (n.b >= 0) CHECK(pos[n.b] < pos[id]);
        for (int k : n.inst) CHECK(pos[k] < pos[id]);
    }
}

TEST_CASE("parallel fold equals the serial reference for every admissibility and worker count") {
    auto cls = enumerate_structures(negation_class());
    auto T = table_for(cls.universe());
    const auto plain = pointed_forcing(cls, T, false);
    const auto glob = pointed_forcing(cls, T, true);
    std::vector<Channel> ch;
    for (auto a : {Admissibility::Any, Admissibility::NoNegation, Admissibility::Consistent,
                   Admissibility::Maximal, Admissibility::NoAntiExtension})
        ch.push_back({&plain, a});
    ch.push_back({&glob, Admissibility::Any});
    const auto ref = fold_extensions_reference(cls, ch);
    for (int workers : {1, 2, 3}) {
        const auto par = fold_extensions(cls, ch, {workers});
        REQUIRE(par.size() == ref.size());
        for (std::size_t k = 0; k < ref.size(); ++k) CHECK_MESSAGE(par[k] == ref[k], "channel " << k);
    }
}

TEST_CASE("reference fold matches a direct enumeration of admissible EI maps") {
    auto cls = enumerate_structures(fixture::spec(2, {"S(0)=0", "~S(0)=0", "Tr(#\"S(0)=0\")"}));
    auto T = table_for(cls.universe());
    const auto plain = pointed_forcing(cls, T, false);
    for (auto a : {Admissibility::Any, Admissibility::NoNegation, Admissibility::NoAntiExtension}) {
        const auto out = fold_extensions_reference(cls, {{&plain, a}}).front();
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (int w = 0; w < cls.worlds(i); ++w) {
                NodeSet expect(T.size());
                expect.set();
                const Mask X = cls.member(i).interp[w];
                for (std::size_t j = 0; j < cls.size(); ++j)
                    for (const auto& f : enumerate_ei(cls.structure(i), cls.structure(j))) {
                        const int v = f.map[w];
                        if (!admissible_image(cls, j, v, X, a)) continue;
                        expect &= plain.row(j, v);
                    }
                CHECK(out.row(i, w) == expect);
            }
    }
}

TEST_CASE("admissibility conditions by definition") {
    auto cls = enumerate_structures(fixture::spec(2, {"S(0)=0", "~S(0)=0"}));
    const auto& U = cls.universe();
    for (std::size_t j = 0; j < cls.size(); ++j) {
        const auto& p = cls.poset_of(j);
        for (int v = 0; v < p.k; ++v)
            for (Mask X = 0; X < 4; ++X) {
                bool noneg = true, cons = true, maxi = true, noanti = true;
                for (int u = 0; u < p.k; ++u) {
                    if (!p.le(v, u)) continue;
                    const Mask I = cls.member(j).interp[u];
                    if (X & 1 && I & 2) noneg = false;        // source S(0)=0, image ~S(0)=0
                    if (X & 2 && I & 1) noanti = false;       // source ~S(0)=0, image S(0)=0
                    if ((I & 3) == 3) cons = false;
                    if ((I & 3) != 1 && (I & 3) != 2) maxi = false;
                }
                CHECK(admissible_image(cls, j, v, X, Admissibility::Any));
                CHECK(admissible_image(cls, j, v, X, Admissibility::NoNegation) == noneg);
                CHECK(admissible_image(cls, j, v, X, Admissibility::Consistent) == cons);
                CHECK(admissible_image(cls, j, v, X, Admissibility::Maximal) == maxi);
                CHECK(admissible_image(cls, j, v, X, Admissibility::NoAntiExtension) == noanti);
            }
    }
    CHECK(mcx(U, 1));
    CHECK(mcx(U, 2));
    CHECK_FALSE(mcx(U, 0));
    CHECK_FALSE(mcx(U, 3));
    CHECK(consistent(U, 0));
    CHECK_FALSE(consistent(U, 3));
    CHECK(negations_of(U, 1) == 2);
    CHECK(anti_extension(U, 2) == 1);
    CHECK(anti_extension(U, 1) == 0);
}

TEST_CASE("intersect_by_interp is the AND over pointed members") {
    auto cls = enumerate_structures(fixture::spec(3, {"0=0", "S(0)=0"}));
    auto T = table_for(cls.universe());
    const auto plain = pointed_forcing(cls, T, false);
    const auto inter = intersect_by_interp(cls, plain);
    for (Mask X = 0; X < 4; ++X) {
        NodeSet expect(T.size());
        expect.set();
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (int w = 0; w < cls.worlds(i); ++w)
                if (cls.member(i).interp[w] == X) expect &= plain.row(i, w);
        CHECK(inter[X] == expect);
    }
}
