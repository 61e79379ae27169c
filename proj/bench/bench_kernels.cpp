#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "nck/diffop.hpp"
#include "nck/kahler.hpp"

using namespace nck;

namespace {

NCDiffOp random_op(const std::shared_ptr<const Torus>& t, int m, int terms, std::mt19937_64& rng) {
  const int n = t->n();
  std::uniform_int_distribution<int> which(0, n - 1);
  std::uniform_int_distribution<int> ord(0, 1);
  std::uniform_int_distribution<int> shift(-1, 1);
  std::normal_distribution<double> g;
  NCDiffOp p(t, m);
  for (int k = 0; k < terms; ++k) {
    MultiIndex alpha(static_cast<std::size_t>(n), 0);
    if (ord(rng)) ++alpha[static_cast<std::size_t>(which(rng))];
    std::vector<int> e(static_cast<std::size_t>(n));
    for (auto& x : e) x = shift(rng);
    Matrix M(m, m);
    for (Eigen::Index i = 0; i < M.size(); ++i) M(i) = Complex(g(rng), g(rng));
    p.add_term(alpha, Exponent(std::move(e)), M);
  }
  return p;
}

struct ComposeInputs {
  NCDiffOp p, q;
};

ComposeInputs compose_inputs(int terms) {
  auto t = std::make_shared<const Torus>(ThetaMatrix::random(6, 5));
  std::mt19937_64 rng(11);
  return {random_op(t, 64, terms, rng), random_op(t, 64, terms, rng)};
}

void BM_Compose(benchmark::State& state) {
  const auto in = compose_inputs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compose(in.p, in.q));
}

void BM_ComposeSerial(benchmark::State& state) {
  const auto in = compose_inputs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compose_serial(in.p, in.q));
}

void BM_VerifyGrid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto t = std::make_shared<const Torus>(ThetaMatrix::random(n, 7));
  const auto ms = enumerate_matchings(n);
  for (auto _ : state) benchmark::DoNotOptimize(verify_grid(t, ms, {1, -1}));
}

void BM_VerifyGridSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto t = std::make_shared<const Torus>(ThetaMatrix::random(n, 7));
  auto rep = std::make_shared<const GammaRep>(build_gamma(n));
  const auto ms = enumerate_matchings(n);
  for (auto _ : state) {
    for (const auto& m : ms)
      for (int eps : {1, -1}) benchmark::DoNotOptimize(verify_n22(build_kahler_package(t, rep, m, eps)));
  }
}

}  // namespace

BENCHMARK(BM_Compose)->Arg(8)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComposeSerial)->Arg(8)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyGrid)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_VerifyGridSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond)->Iterations(1);

BENCHMARK_MAIN();
