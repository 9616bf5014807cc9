#include <benchmark/benchmark.h>

#include <random>

#include "sfl/fourier.hpp"
#include "sfl/nonconc.hpp"
#include "sfl/walk.hpp"

using namespace sfl;

namespace {

const SchottkyGroup& dense() {
    static const SchottkyGroup g(dense4());
    return g;
}

const PSMeasure& dense_mu() {
    static const PSMeasure mu(dense(), estimate_delta(dense(), 8), 8);
    return mu;
}

}  // namespace

static void BM_Compose(benchmark::State& state) {
    const MoebiusMap f = dense().generator(0), g = dense().generator(1);
    for (auto _ : state) benchmark::DoNotOptimize(compose(f, g));
}
BENCHMARK(BM_Compose);

static void BM_SphericalDerivative(benchmark::State& state) {
    const MoebiusMap g = dense().matrix_of(Word{0, 1, 0, 3, 3});
    const BoundaryPoint p(cplx(0.3, -0.2));
    for (auto _ : state) benchmark::DoNotOptimize(spherical_derivative(g, p));
}
BENCHMARK(BM_SphericalDerivative);

static void BM_EstimateDelta(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(estimate_delta(dense(), static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EstimateDelta)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_PSMeasure(benchmark::State& state) {
    const double delta = estimate_delta(dense(), 8);
    for (auto _ : state) benchmark::DoNotOptimize(PSMeasure(dense(), delta, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PSMeasure)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_MuHat(benchmark::State& state) {
    const DiscreteMeasure& mu = dense_mu().discrete();
    for (auto _ : state) benchmark::DoNotOptimize(mu_hat(mu, cplx(300.0, 120.0)));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mu.atoms.size()));
}
BENCHMARK(BM_MuHat);

static void BM_ExponentialSum(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const Partition Z = build_partition(dense_mu(), 1.0 / 64);
    std::mt19937_64 rng(1);
    const TupleSystem ts = make_tuple_system(Z, random_tuple(Z, k, rng));
    const ZetaTable zt = make_zeta_table(dense(), ts, Z.tau);
    const cplx eta = std::polar(std::pow(Z.tau, -0.3), 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(exponential_sum(ts, zt, eta));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ts.tuple_count()));
}
BENCHMARK(BM_ExponentialSum)->Arg(1)->Arg(2)->Arg(3);

static void BM_LineConcentration(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LambdaMeasure lam;
    lam.atom_mass = 1.0 / static_cast<double>(state.range(0));
    for (int i = 0; i < state.range(0); ++i) lam.atoms.emplace_back(u(rng), u(rng));
    for (auto _ : state) benchmark::DoNotOptimize(line_concentration(lam, 0.1));
}
BENCHMARK(BM_LineConcentration)->Arg(64)->Arg(1024);

static void BM_EnumerateShells(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_shells(dense(), 2.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EnumerateShells)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_FGamma(benchmark::State& state) {
    const AtlasEntry e = make_entry(dense(), Word{0, 1, 1, 2, 3, 3});
    const BoundaryPoint p(cplx(-0.4, 0.1));
    for (auto _ : state) benchmark::DoNotOptimize(f_gamma(e, p, 0.43));
}
BENCHMARK(BM_FGamma);

BENCHMARK_MAIN();
