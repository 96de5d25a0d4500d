#include <benchmark/benchmark.h>

#include "qsu2/probe.hpp"
#include "qsu2/spectral.hpp"

using namespace qsu2;

namespace {

ExecPolicy policy(const benchmark::State& st) { return st.range(0) ? ExecPolicy::Parallel : ExecPolicy::Serial; }

void label(benchmark::State& st) { st.SetLabel(st.range(0) ? "openmp" : "serial"); }

void BM_TruncatedZeta(benchmark::State& st) {
  const ZetaParams p(DeformationParameter::parse("1/2"), 2.0, 1.0);
  const BigComplex z(4.0, 0.5, 128);
  for (auto _ : st)
    benchmark::DoNotOptimize(truncated_zeta(p, z, HalfInt::from_int(static_cast<int>(st.range(1))), std::nullopt, 128,
                                            policy(st)));
  label(st);
}
BENCHMARK(BM_TruncatedZeta)->ArgsProduct({{0, 1}, {20, 40}})->Unit(benchmark::kMillisecond);

void BM_AssembleProbe(benchmark::State& st) {
  const auto dp = DeformationParameter::parse("1/2");
  const ProbeSpec spec{ProbeKind::LemmaRegularity, Monomial::a(), 3.0, 1.0};
  for (auto _ : st)
    benchmark::DoNotOptimize(assemble_probe(spec, dp, HalfInt::from_int(static_cast<int>(st.range(1))), 128, policy(st)));
  label(st);
}
BENCHMARK(BM_AssembleProbe)->ArgsProduct({{0, 1}, {15, 30}})->Unit(benchmark::kMillisecond);

void BM_Spmv(benchmark::State& st) {
  const auto dp = DeformationParameter::parse("1/2");
  const CsrMatrix A =
      assemble_probe({ProbeKind::TwistedCommutator, Monomial::a(), 0.0, 0.0}, dp, HalfInt::from_int(40), 128);
  std::vector<double> x(A.cols, 1.0), y(A.rows);
  for (auto _ : st) {
    spmv(A, x, y, policy(st));
    benchmark::DoNotOptimize(y.data());
  }
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * A.nnz()));
  label(st);
}
BENCHMARK(BM_Spmv)->Arg(0)->Arg(1);

void BM_Compose(benchmark::State& st) {
  const FloatContext ctx(DeformationParameter::parse("1/2"), 128);
  const auto D = build_dirac(ctx, HalfInt::from_int(12));
  for (auto _ : st) benchmark::DoNotOptimize(compose(D, D, policy(st)));
  label(st);
}
BENCHMARK(BM_Compose)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
