// Serial reference vs OpenMP kernels: compile, restricted grid search, beta
// sweep. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>

#include "hamgame/compiler.hpp"
#include "hamgame/equilibrium.hpp"
#include "hamgame/serial.hpp"
#include "hamgame/solver.hpp"

using namespace hamgame;

namespace {

// Clock-and-shift operators X^a Z^b on C^d: d^2 unitaries, orthonormal under
// the normalized trace inner product.
StrategyBasis weyl_basis(std::size_t d) {
  StrategyBasis basis;
  const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      CMatrix m(d);
      for (std::size_t k = 0; k < d; ++k) m((k + a) % d, k) = std::pow(w, static_cast<double>(b * k));
      basis.labels.push_back("W" + std::to_string(a) + std::to_string(b));
      basis.operators.push_back(m);
    }
  return basis;
}

CMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      const Complex z = r == c ? Complex(g(rng)) : Complex(g(rng), g(rng));
      m(r, c) = z;
      m(c, r) = std::conj(z);
    }
  return m;
}

ManipulativeGame weyl_game(std::size_t object_dim, std::size_t players) {
  std::mt19937_64 rng(5);
  ManipulativeGame g;
  g.name = "weyl";
  g.initial_state = CMatrix(object_dim);
  g.initial_state(0, 0) = 1.0;
  for (std::size_t p = 0; p < players; ++p) {
    g.bases.push_back(weyl_basis(object_dim));
    g.order.push_back(p);
    g.observables.push_back(random_hermitian(object_dim, rng));
  }
  return g;
}

void BM_CompileSerial(benchmark::State& state) {
  const auto g = weyl_game(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::compile(g));
}

void BM_CompileParallel(benchmark::State& state) {
  const auto g = weyl_game(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(compile(g));
}

// object dim, players: joint sizes 64, 81, 256
#define COMPILE_ARGS Args({2, 3})->Args({3, 2})->Args({2, 4})->Unit(benchmark::kMillisecond)
BENCHMARK(BM_CompileSerial)->COMPILE_ARGS;
BENCHMARK(BM_CompileParallel)->COMPILE_ARGS;

const StrategyBasis& restricted_basis() {
  static const StrategyBasis b = StrategyBasis::from_names({"I", "iX", "iY", "iZ"});
  return b;
}

void BM_GridSerial(benchmark::State& state) {
  std::mt19937_64 rng(9);
  const CMatrix h = random_hermitian(4, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::restricted_best_response(h, restricted_basis(), state.range(0)));
}

void BM_GridParallel(benchmark::State& state) {
  std::mt19937_64 rng(9);
  const CMatrix h = random_hermitian(4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(restricted_best_response(h, restricted_basis(), state.range(0)));
}

BENCHMARK(BM_GridSerial)->Arg(16)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(16)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

std::vector<double> betas(std::size_t n) {
  std::vector<double> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back(0.1 + 0.2 * static_cast<double>(k));
  return out;
}

SolverConfig sweep_config() {
  SolverConfig c;
  c.damping = 0.5;
  c.max_sweeps = 200;
  c.tolerance = 1e-9;
  return c;
}

void BM_BetaSweepSerial(benchmark::State& state) {
  const AbstractGame g = compile(std::get<ManipulativeGame>(builtin("srg")));
  const auto b = betas(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::beta_sweep(g, StrategyProfile::uniform(g.dims), sweep_config(), b));
}

void BM_BetaSweepParallel(benchmark::State& state) {
  const AbstractGame g = compile(std::get<ManipulativeGame>(builtin("srg")));
  const auto b = betas(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(beta_sweep(g, StrategyProfile::uniform(g.dims), sweep_config(), b));
}

BENCHMARK(BM_BetaSweepSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BetaSweepParallel)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
