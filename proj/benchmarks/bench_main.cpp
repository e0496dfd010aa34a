#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "grasslab/catalog.hpp"
#include "grasslab/curvature_algebra.hpp"
#include "grasslab/immersion.hpp"
#include "grasslab/jordan.hpp"
#include "grasslab/wfunction.hpp"

namespace {

using namespace grasslab;

void BM_JordanDecomposition(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int d = 2 * m + 1;
    Rng rng(1);
    const Subspace p = Subspace::random(rng, d, m);
    const Subspace q0 = Subspace::random(rng, d, m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(jordan_decomposition(p, q0));
    }
}
BENCHMARK(BM_JordanDecomposition)->Arg(2)->Arg(4)->Arg(8);

void BM_AlignedBases(benchmark::State& state) {
    Rng rng(2);
    Subspace p = Subspace::random(rng, 7, 3);
    Subspace q0 = Subspace::random(rng, 7, 3);
    while (detail::w_det(p, q0) <= 0.1) {
        p = Subspace::random(rng, 7, 3);
        q0 = Subspace::random(rng, 7, 3);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(aligned_bases(p, q0));
    }
}
BENCHMARK(BM_AlignedBases);

void BM_WInner(benchmark::State& state) {
    Rng rng(3);
    const Subspace p = Subspace::random(rng, 9, 4);
    const Subspace q0 = Subspace::random(rng, 9, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(w_inner(p, q0));
    }
}
BENCHMARK(BM_WInner);

void BM_LaplacianQuadratic(benchmark::State& state) {
    Rng rng(4);
    const SffTable t = sample_table(rng, 5, 4, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(laplacian_v_quadratic(t));
    }
}
BENCHMARK(BM_LaplacianQuadratic);

void BM_CertifyIII(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(certify_iii_positive(state.range(0), 42));
    }
}
BENCHMARK(BM_CertifyIII)->Arg(1000)->Arg(10000);

void BM_ScanRegionF(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(scan_region_f(static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_ScanRegionF)->Arg(20)->Arg(50);

void BM_PatchAt(benchmark::State& state) {
    const auto obj = make_object("lawson-osserman");
    Rng rng(5);
    const Eigen::VectorXd x = rng.unit_vector(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(patch_at(obj.immersion, x, 1e-4));
    }
}
BENCHMARK(BM_PatchAt);

void BM_LaplacianDirect(benchmark::State& state) {
    const auto obj = make_object("clifford-cone");
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            laplacian_v_direct(obj.immersion, obj.default_q0, obj.center, 1e-3));
    }
}
BENCHMARK(BM_LaplacianDirect);

}  // namespace

BENCHMARK_MAIN();
