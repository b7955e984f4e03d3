#include <benchmark/benchmark.h>

#include "hyerslab/hyers.hpp"
#include "hyerslab/perturb.hpp"

using namespace hyerslab;

namespace {

CertifiedFunction sine_case() {
  PerturbationSpec s;
  s.amplitude = 0.1;
  return make_perturbed_affine(Matrix::scalar(2.0), Point{1.0}, s);
}

std::vector<Point> probes(std::size_t n) {
  std::vector<Point> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(Point{-10.0 + 20.0 * static_cast<double>(i) / static_cast<double>(n - 1)});
  return xs;
}

void BM_Extraction(benchmark::State& state) {
  const auto cf = sine_case();
  const auto xs = probes(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(extract_affine(cf.f, xs));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Extraction)->Arg(41)->Arg(2001);

void BM_AxiomBatch(benchmark::State& state) {
  const auto spec = FuzzyNormSpec::crisp_induced(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(check_axioms_batch(spec, 2, static_cast<std::size_t>(state.range(0)), 1));
}
BENCHMARK(BM_AxiomBatch)->Arg(100)->Arg(1000);

void BM_Hypothesis(benchmark::State& state) {
  const auto cf = sine_case();
  const auto norm = FuzzyNormSpec::crisp_induced(1.0);
  const auto triples = TripleSample::standard(1, static_cast<std::size_t>(state.range(0)), 10.0, 3);
  const auto grid = geometric_t_grid(1e-3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_hypothesis_nonuniform(cf.f, *cf.control, norm, norm, triples, grid));
  }
}
BENCHMARK(BM_Hypothesis)->Arg(1000)->Arg(10000);

void BM_PhiTilde(benchmark::State& state) {
  const auto phi = ControlFunction::power_sum(1.0, 0.5);
  const Point o{0.0};
  for (auto _ : state) benchmark::DoNotOptimize(phi_tilde(phi, o, o, Point{3.0}));
}
BENCHMARK(BM_PhiTilde);

}  // namespace

BENCHMARK_MAIN();
