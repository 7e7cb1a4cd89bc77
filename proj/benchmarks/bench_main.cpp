#include <fockcis/criterion.hpp>
#include <fockcis/products.hpp>
#include <fockcis/spaces.hpp>
#include <fockcis/toperator.hpp>

#include <benchmark/benchmark.h>

using namespace fockcis;

namespace
{

SequenceSpec base_spec(double delta, Side side)
{
    return SequenceSpec::create(TailedSpec::constant(delta), TailedSpec::constant(0.0), SpaceParams(1.0, 2.0, side));
}

void BM_CanonicalProduct(benchmark::State& state)
{
    const auto s = base_spec(0.25, Side::OneSided);
    const auto z = LogComplex::polar_log(static_cast<double>(state.range(0)), 0.7);
    for (auto _ : state)
        benchmark::DoNotOptimize(canonical_product(s, z, TruncationPolicy{}));
}
BENCHMARK(BM_CanonicalProduct)->Arg(0)->Arg(5)->Arg(20);

void BM_DecideCis(benchmark::State& state)
{
    const auto s = SequenceSpec::create(TailedSpec::periodic({0.3, -0.2, 0.1}), TailedSpec::constant(0.0),
                                        SpaceParams(1.0, 2.0, Side::TwoSided));
    for (auto _ : state)
        benchmark::DoNotOptimize(decide_cis(s));
}
BENCHMARK(BM_DecideCis);

void BM_AssembleSection(benchmark::State& state)
{
    const auto s = base_spec(0.25, Side::OneSided);
    const auto phases = gamma_phase_choice(s);
    const auto n = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(assemble_section(s, phases, {0, n}, {0, n}, TruncationPolicy{}));
}
BENCHMARK(BM_AssembleSection)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NormQuadrature(benchmark::State& state)
{
    const SpaceParams space(1.0, 2.0, Side::OneSided);
    const auto f = monomial(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(norm_fp(space, f));
}
BENCHMARK(BM_NormQuadrature)->Arg(0)->Arg(4)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
