#include "xxz/contour.hpp"
#include "xxz/dressed.hpp"
#include "xxz/saddle.hpp"

#include <benchmark/benchmark.h>

using namespace xxz;

namespace {

ModelParams figure_params(int order)
{
    ModelParams p;
    p.zeta = 0.5365 * pi;
    p.q = 0.2;
    p.order = order;
    return p;
}

void BM_NystromSolve(benchmark::State& state)
{
    const int order = static_cast<int>(state.range(0));
    const KernelFn k = [](cplx l, double mu, int d) { return kernel_k(l - mu, 0.5365 * pi, d); };
    const DrivingFn g = [](cplx l, int d) { return d == 0 ? cplx(1.0) + 0.0 * l : cplx(0.0); };
    for (auto _ : state) benchmark::DoNotOptimize(solve_fredholm2(k, g, 0.2, order).values().data());
}
BENCHMARK(BM_NystromSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_FindFermiEndpoint(benchmark::State& state)
{
    ModelParams p = figure_params(static_cast<int>(state.range(0)));
    p.q.reset();
    p.h = 3.3;
    for (auto _ : state) benchmark::DoNotOptimize(find_fermi_endpoint(p).q());
}
BENCHMARK(BM_FindFermiEndpoint)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ClassifyStructure(benchmark::State& state)
{
    const DressedSet ds = find_fermi_endpoint(figure_params(128));
    const double v = 0.5 * fermi_velocity(ds);
    for (auto _ : state) benchmark::DoNotOptimize(classify_structure(v, ds).minimal);
}
BENCHMARK(BM_ClassifyStructure)->Unit(benchmark::kMillisecond);

void BM_ContourIdentityN2(benchmark::State& state)
{
    ContourParams p;
    const TestFunctionJ J = cosh_family(2, {2.0, 1.5});
    for (auto _ : state) benchmark::DoNotOptimize(eval_identity_n2(J, p).rel_diff);
}
BENCHMARK(BM_ContourIdentityN2)->Unit(benchmark::kSecond)->Iterations(1);

} // namespace

BENCHMARK_MAIN();
