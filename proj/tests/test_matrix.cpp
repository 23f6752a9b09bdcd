#include <doctest.h>

#include <array>
#include <cmath>

#include "hamgame/error.hpp"
#include "hamgame/matrix.hpp"
#include "support.hpp"

using namespace hamgame;
using testing::max_abs_diff;

namespace {

const Complex kI{0.0, 1.0};

// sum over the traced factor's diagonal blocks, by explicit indices
CMatrix partial_trace_oracle_keep_first(const CMatrix& m, std::size_t a, std::size_t b) {
  CMatrix out(a);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j)
      for (std::size_t k = 0; k < b; ++k) out(i, j) += m(i * b + k, j * b + k);
  return out;
}

CMatrix partial_trace_oracle_keep_second(const CMatrix& m, std::size_t a, std::size_t b) {
  CMatrix out(b);
  for (std::size_t k = 0; k < b; ++k)
    for (std::size_t l = 0; l < b; ++l)
      for (std::size_t i = 0; i < a; ++i) out(k, l) += m(i * b + k, i * b + l);
  return out;
}

CMatrix taylor_exp(const CMatrix& h, double scale, int terms) {
  CMatrix sum = CMatrix::identity(h.dim());
  CMatrix term = CMatrix::identity(h.dim());
  for (int k = 1; k < terms; ++k) {
    term = testing::naive_mul(term, h) * Complex(scale / k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("kron layout") {
  CHECK(max_abs_diff(kron(pauli_i(), pauli_i()), CMatrix::identity(4)) == 0.0);
  const CMatrix xx = kron(pauli_x(), pauli_x());
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) CHECK(xx(r, c) == Complex(r + c == 3 ? 1.0 : 0.0));

  testing::Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = testing::random_complex(2, rng);
    const CMatrix b = testing::random_complex(3, rng);
    CHECK(max_abs_diff(kron(a, b), testing::kron_oracle(a, b)) == 0.0);
  }
}

TEST_CASE("kron is associative") {
  testing::Rng rng(12);
  const CMatrix a = testing::random_complex(2, rng);
  const CMatrix b = testing::random_complex(3, rng);
  const CMatrix c = testing::random_complex(2, rng);
  CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
  const std::array<CMatrix, 3> all{a, b, c};
  CHECK(max_abs_diff(kron_all(all), kron(a, kron(b, c))) < 1e-12);
  CHECK(kron_all(std::span<const CMatrix>{}).dim() == 1);
}

TEST_CASE("partial trace") {
  const std::array<std::size_t, 2> dims{2, 2};
  const std::array<std::size_t, 1> keep0{0}, keep1{1};
  testing::Rng rng(13);
  const CMatrix a = testing::random_complex(2, rng);
  const CMatrix b = testing::random_complex(2, rng);
  CHECK(max_abs_diff(partial_trace(kron(a, b), dims, keep0), a * trace(b)) < 1e-12);
  CHECK(max_abs_diff(partial_trace(CMatrix::identity(4), dims, keep1), CMatrix::identity(2) * 2.0) == 0.0);

  for (int t = 0; t < 10; ++t) {
    const CMatrix h = testing::random_hermitian(6, rng);
    const std::array<std::size_t, 2> d{2, 3};
    const CMatrix first = partial_trace(h, d, keep0);
    const CMatrix second = partial_trace(h, d, keep1);
    CHECK(max_abs_diff(first, partial_trace_oracle_keep_first(h, 2, 3)) < 1e-12);
    CHECK(max_abs_diff(second, partial_trace_oracle_keep_second(h, 2, 3)) < 1e-12);
    CHECK(std::abs(trace(first) - trace(h)) < 1e-12);
    // linearity
    const CMatrix g = testing::random_hermitian(6, rng);
    const CMatrix mix = h * 0.3 + g * 0.7;
    CHECK(max_abs_diff(partial_trace(mix, d, keep0),
                       first * 0.3 + partial_trace(g, d, keep0) * 0.7) < 1e-12);
  }

  SUBCASE("three factors keep the middle") {
    const CMatrix x = testing::random_density(2, rng);
    const CMatrix y = testing::random_density(3, rng);
    const CMatrix z = testing::random_density(2, rng);
    const std::array<CMatrix, 3> f{x, y, z};
    const std::array<std::size_t, 3> d3{2, 3, 2};
    const std::array<std::size_t, 1> mid{1};
    const std::array<std::size_t, 2> outer{0, 2};
    CHECK(max_abs_diff(partial_trace(kron_all(f), d3, mid), y) < 1e-12);
    CHECK(max_abs_diff(partial_trace(kron_all(f), d3, outer), kron(x, z)) < 1e-12);
  }

  SUBCASE("errors") {
    const std::array<std::size_t, 2> bad{2, 3};
    CHECK_THROWS_AS(partial_trace(CMatrix::identity(4), bad, keep0), DimensionError);
    const std::array<std::size_t, 1> out_of_range{2};
    CHECK_THROWS_AS(partial_trace(CMatrix::identity(4), dims, out_of_range), DimensionError);
    CHECK_THROWS_AS(partial_trace(CMatrix::identity(4), dims, std::span<const std::size_t>{}), DimensionError);
  }
}

TEST_CASE("herm_eigen") {
  const auto d = herm_eigen(pauli_z());
  CHECK(d.eigenvalues == std::vector<double>{-1.0, 1.0});

  const auto x = herm_eigen(pauli_x());
  CHECK(x.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(x.eigenvalues[1] == doctest::Approx(1.0));
  const double s = 1.0 / std::sqrt(2.0);
  const auto v0 = x.column(0);
  const auto v1 = x.column(1);
  // Largest component made real positive: (|0> - |1>)/sqrt2 and (|0> + |1>)/sqrt2.
  CHECK(std::abs(v0[0] - Complex(s)) < 1e-12);
  CHECK(std::abs(v0[1] - Complex(-s)) < 1e-12);
  CHECK(std::abs(v1[0] - Complex(s)) < 1e-12);
  CHECK(std::abs(v1[1] - Complex(s)) < 1e-12);

  testing::Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const CMatrix h = testing::random_hermitian(4, rng);
    const auto e = herm_eigen(h);
    CHECK(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
    CHECK(max_abs_diff(reassemble(e.eigenvectors, e.eigenvalues), h) < 1e-10);
    const CMatrix vv = testing::naive_mul(testing::naive_dagger(e.eigenvectors), e.eigenvectors);
    CHECK(max_abs_diff(vv, CMatrix::identity(4)) < 1e-10);
    const auto again = herm_eigen(h);
    CHECK(again.eigenvalues == e.eigenvalues);
    CHECK(again.eigenvectors == e.eigenvectors);
  }
  CHECK_THROWS_AS(herm_eigen(CMatrix{{0, 1}, {0, 0}}), NumericalError);
}

TEST_CASE("matrix_exp_hermitian") {
  testing::Rng rng(15);
  const CMatrix h = testing::random_hermitian(3, rng);
  CHECK(max_abs_diff(matrix_exp_hermitian(h, 0.0), CMatrix::identity(3)) < 1e-12);
  const std::array<double, 2> diag{0.0, std::log(2.0)};
  CHECK(max_abs_diff(matrix_exp_hermitian(CMatrix::diagonal(diag), 1.0), CMatrix{{1, 0}, {0, 2}}) < 1e-12);
  for (int t = 0; t < 10; ++t) {
    const CMatrix g = testing::random_hermitian(3, rng) * 0.5;
    CHECK(max_abs_diff(matrix_exp_hermitian(g, 1.0), taylor_exp(g, 1.0, 30)) < 1e-9);
    const CMatrix ab = matmul(matrix_exp_hermitian(g, 0.4), matrix_exp_hermitian(g, 0.7));
    CHECK(max_abs_diff(ab, matrix_exp_hermitian(g, 1.1)) < 1e-9);
  }
  SUBCASE("shifted spectrum for large exponents") {
    const std::array<double, 2> big{1000.0, 999.0};
    const CMatrix e = matrix_exp_hermitian(CMatrix::diagonal(big), 1.0);
    CHECK(std::isfinite(e(0, 0).real()));
    CHECK(e(1, 1).real() / e(0, 0).real() == doctest::Approx(std::exp(-1.0)));
  }
}

TEST_CASE("trace inner product") {
  CHECK(trace_inner(pauli_x(), pauli_x()) == Complex(1.0));
  CHECK(trace_inner(pauli_i(), pauli_x()) == Complex(0.0));
  CHECK(std::abs(trace_inner(pauli_x(), pauli_y())) < 1e-15);
  const std::array<CMatrix, 4> basis{pauli_i(), pauli_x(), pauli_y(), pauli_z()};
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      CHECK(std::abs(trace_inner(basis[a], basis[b]) - Complex(a == b ? 1.0 : 0.0)) < 1e-15);
  testing::Rng rng(16);
  const CMatrix a = testing::random_complex(3, rng);
  const CMatrix b = testing::random_complex(3, rng);
  CHECK(std::abs(trace_inner(a, b) - std::conj(trace_inner(b, a))) < 1e-12);
  CHECK_THROWS_AS(trace_inner(pauli_x(), CMatrix::identity(3)), DimensionError);
}

TEST_CASE("commutator and predicates") {
  CHECK(frobenius_norm(commutator(pauli_x(), pauli_x())) == 0.0);
  CHECK(max_abs_diff(commutator(pauli_x(), pauli_y()), pauli_z() * (2.0 * kI)) < 1e-15);
  const std::array<double, 2> nearly{1.0, -1e-14};
  CHECK(is_psd(CMatrix::diagonal(nearly), 1e-10));
  const std::array<double, 2> negative{1.0, -1e-3};
  CHECK_FALSE(is_psd(CMatrix::diagonal(negative)));
  CHECK(is_hermitian(pauli_y()));
  CHECK_FALSE(is_hermitian(CMatrix{{0, 1}, {0, 0}}));
  CHECK(trace(pauli_z()) == Complex(0.0));
  CHECK(frobenius_norm(CMatrix::identity(4)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(matmul(pauli_x(), CMatrix::identity(3)), DimensionError);
}

TEST_CASE("matrix construction guards") {
  CHECK_THROWS_AS(CMatrix(2, std::vector<Complex>(3)), DimensionError);
  CHECK_THROWS_AS(CMatrix(1, std::vector<Complex>{Complex(NAN, 0)}), NumericalError);
  CHECK_THROWS_AS((CMatrix{{1, 2}, {3}}), DimensionError);
}

TEST_CASE("flatten and unflatten") {
  const std::array<std::size_t, 3> dims{2, 3, 4};
  for (std::size_t k = 0; k < 24; ++k) CHECK(flatten(unflatten(k, dims), dims) == k);
  const std::array<std::size_t, 3> digits{1, 2, 3};
  CHECK(flatten(digits, dims) == 1 * 12 + 2 * 4 + 3);
}
