#pragma once

// Shared test helpers: seeded random generators and small independent oracles
// written straight from the definitions (no library kernels inside).

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hamgame/compiler.hpp"
#include "hamgame/game.hpp"
#include "hamgame/matrix.hpp"

namespace testing {

using hamgame::CMatrix;
using hamgame::Complex;
using Rng = std::mt19937_64;

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.dim() != b.dim()) return INFINITY;
  double worst = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
  return worst;
}

inline double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }
inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CMatrix random_complex(std::size_t n, Rng& rng) {
  CMatrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = Complex(normal(rng), normal(rng));
  return m;
}

inline CMatrix naive_mul(const CMatrix& a, const CMatrix& b) {
  const std::size_t n = a.dim();
  CMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += a(r, k) * b(k, c);
      out(r, c) = s;
    }
  return out;
}

inline CMatrix naive_dagger(const CMatrix& a) {
  CMatrix out(a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) out(r, c) = std::conj(a(c, r));
  return out;
}

inline Complex naive_trace(const CMatrix& a) {
  Complex s{};
  for (std::size_t k = 0; k < a.dim(); ++k) s += a(k, k);
  return s;
}

inline CMatrix random_hermitian(std::size_t n, Rng& rng) {
  const CMatrix g = random_complex(n, rng);
  CMatrix h(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) h(r, c) = 0.5 * (g(r, c) + std::conj(g(c, r)));
  return h;
}

inline CMatrix random_density(std::size_t n, Rng& rng) {
  const CMatrix g = random_complex(n, rng);
  CMatrix rho = naive_mul(g, naive_dagger(g));
  const Complex t = naive_trace(rho);
  for (auto& x : rho.data()) x /= t.real();
  return rho;
}

// Real symmetric PSD unit-trace matrix.
inline CMatrix random_real_density(std::size_t n, Rng& rng) {
  CMatrix g(n);
  for (auto& x : g.data()) x = normal(rng);
  CMatrix rho = naive_mul(g, naive_dagger(g));
  const double t = naive_trace(rho).real();
  for (auto& x : rho.data()) x /= t;
  return rho;
}

// Gram-Schmidt on the columns of a random complex matrix.
inline CMatrix random_unitary(std::size_t n, Rng& rng) {
  CMatrix m = random_complex(n, rng);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t k = 0; k < c; ++k) {
      Complex dot{};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(m(r, k)) * m(r, c);
      for (std::size_t r = 0; r < n; ++r) m(r, c) -= dot * m(r, k);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(m(r, c));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) m(r, c) /= norm;
  }
  return m;
}

inline std::vector<Complex> random_unit_vector(std::size_t n, Rng& rng, bool real = false) {
  std::vector<Complex> v(n);
  double norm = 0.0;
  for (auto& x : v) {
    x = real ? Complex(normal(rng), 0.0) : Complex(normal(rng), normal(rng));
    norm += std::norm(x);
  }
  for (auto& x : v) x /= std::sqrt(norm);
  return v;
}

inline std::vector<CMatrix> paulis() {
  return {CMatrix{{1, 0}, {0, 1}}, CMatrix{{0, 1}, {1, 0}}, CMatrix{{0, Complex(0, -1)}, {Complex(0, 1), 0}},
          CMatrix{{1, 0}, {0, -1}}};
}

// `size` operators B_a = sum_b W_ab sigma_b with W a random 4x4 unitary; they
// are orthonormal under Tr(A^dagger B)/2.
inline hamgame::StrategyBasis random_operator_basis(std::size_t size, Rng& rng) {
  const CMatrix w = random_unitary(4, rng);
  const auto s = paulis();
  hamgame::StrategyBasis basis;
  for (std::size_t a = 0; a < size; ++a) {
    CMatrix op(2);
    for (std::size_t b = 0; b < 4; ++b) op += s[b] * w(a, b);
    basis.labels.push_back("b" + std::to_string(a + 1));
    basis.operators.push_back(op);
  }
  return basis;
}

inline hamgame::ManipulativeGame random_manipulative_game(Rng& rng) {
  hamgame::ManipulativeGame g;
  g.name = "random";
  const std::size_t players = 2 + rng() % 2;
  g.initial_state = random_density(2, rng);
  for (std::size_t p = 0; p < players; ++p) {
    g.bases.push_back(random_operator_basis(2 + rng() % 3, rng));
    g.observables.push_back(random_hermitian(2, rng));
    g.order.push_back(p);
  }
  std::shuffle(g.order.begin(), g.order.end(), rng);
  return g;
}

// Entry formula for the joint space written as index sums.
inline CMatrix kron_oracle(const CMatrix& a, const CMatrix& b) {
  const std::size_t m = a.dim(), n = b.dim();
  CMatrix out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) out(n * i + k, n * j + l) = a(i, j) * b(k, l);
  return out;
}

// The 16x16 payoff operator of player 1 of the spin-rotating game
// as published, rows and columns ordered II, IX, IY, IZ, XI, ...
inline CMatrix srg_printed_h1() {
  static const char* kRows[] = {
      "1 0 0 1 0 1 -i 0 0 i 1 0 1 0 0 1",       "0 -1 -i 0 -1 0 0 1 -i 0 0 i 0 -1 -i 0",
      "0 i -1 0 i 0 0 -i -1 0 0 1 0 i -1 0",     "1 0 0 1 0 1 -i 0 0 i 1 0 1 0 0 1",
      "0 -1 -i 0 -1 0 0 1 -i 0 0 i 0 -1 -i 0",   "1 0 0 1 0 1 -i 0 0 i 1 0 1 0 0 1",
      "i 0 0 i 0 i 1 0 0 -1 i 0 i 0 0 i",        "0 1 i 0 1 0 0 -1 i 0 0 -i 0 1 i 0",
      "0 i -1 0 i 0 0 -i -1 0 0 1 0 i -1 0",     "-i 0 0 -i 0 -i -1 0 0 1 -i 0 -i 0 0 -i",
      "1 0 0 1 0 1 -i 0 0 i 1 0 1 0 0 1",        "0 -i 1 0 -i 0 0 i 1 0 0 -1 0 -i 1 0",
      "1 0 0 1 0 1 -i 0 0 i 1 0 1 0 0 1",        "0 -1 -i 0 -1 0 0 1 -i 0 0 i 0 -1 -i 0",
      "0 i -1 0 i 0 0 -i -1 0 0 1 0 i -1 0",     "1 0 0 1 0 1 -i 0 0 i 1 0 1 0 0 1",
  };
  CMatrix h(16);
  for (std::size_t r = 0; r < 16; ++r) {
    std::istringstream in(kRows[r]);
    std::string tok;
    for (std::size_t c = 0; c < 16; ++c) {
      in >> tok;
      if (tok == "i") h(r, c) = Complex(0, 1);
      else if (tok == "-i") h(r, c) = Complex(0, -1);
      else h(r, c) = std::stod(tok);
    }
  }
  return h;
}

// The displayed 18-variable payoff of player 1, transcribed independently of
// the library's version.
struct SrgVars {
  double p11, p22, p33, p44, a, b, g, mu, nu, d;
};

inline double srg_polynomial_oracle(const SrgVars& x, const SrgVars& y) {
  return 1 - 2 * x.p22 - 2 * x.p33 - 2 * y.p22 - 2 * y.p33 + 4 * (x.p22 + x.p33) * (y.p22 + y.p33) -
         4 * x.a * y.a - 4 * x.b * y.b + 4 * x.nu * y.nu + 4 * x.d * y.d + 4 * x.a * y.d - 4 * x.d * y.a +
         4 * x.nu * y.b - 4 * x.b * y.nu;
}

inline SrgVars srg_vars_of(const CMatrix& m) {
  return {m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(), m(0, 1).real(),
          m(0, 2).real(), m(0, 3).real(), m(1, 2).real(), m(1, 3).real(), m(2, 3).real()};
}

}  // namespace testing
