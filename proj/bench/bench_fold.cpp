// Parallel EI-fold kernel against the serial reference on one class.
#include "kt/engine.hpp"

#include <benchmark/benchmark.h>

using namespace kt;

namespace {

struct Fixture {
    StructureClass cls;
    SentenceTable table;
    PointedTable plain;
    std::vector<Channel> channels;

    explicit Fixture(int max_worlds)
        : cls(ClassSpec{max_worlds,
                        Universe({parse("S(0)=0"), parse("~S(0)=0"), parse("Tr(#\"S(0)=0\")"),
                                  parse("~Tr(#\"S(0)=0\")")}),
                        4}),
          table(cls.universe(), 4) {
        for (const auto& m : cls.universe().members()) table.add(tr(quote(m)));
        table.add(parse("Tr(#\"S(0)=0\") \\/ ~Tr(#\"S(0)=0\")"));
        plain = pointed_forcing(cls, table, false);
        for (auto a : {Admissibility::Any, Admissibility::NoNegation, Admissibility::Consistent,
                       Admissibility::Maximal})
            channels.push_back({&plain, a});
    }
};

const Fixture& fixture(int m) {
    if (m == 2) {
        static const Fixture f2(2);
        return f2;
    }
    static const Fixture f3(3);
    return f3;
}

void BM_FoldParallel(benchmark::State& state) {
    const auto& f = fixture(static_cast<int>(state.range(0)));
    const KernelOptions opt{static_cast<int>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(fold_extensions(f.cls, f.channels, opt));
    state.counters["members"] = static_cast<double>(f.cls.size());
}

void BM_FoldReference(benchmark::State& state) {
    const auto& f = fixture(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(fold_extensions_reference(f.cls, f.channels));
    state.counters["members"] = static_cast<double>(f.cls.size());
}

}  // namespace

BENCHMARK(BM_FoldParallel)->ArgsProduct({{2, 3}, {1, 2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FoldReference)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
