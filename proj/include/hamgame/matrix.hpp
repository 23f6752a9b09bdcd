#pragma once

// Dense square complex matrices and the small set of operations the game
// machinery needs: products, Kronecker products, partial traces, Hermitian
// eigendecomposition and exponentials, and the normalized trace inner product.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hamgame {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-10;

// Square complex matrix, row-major. All entries are finite.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim);
  CMatrix(std::size_t dim, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t dim);
  static CMatrix diagonal(std::span<const double> values);
  static CMatrix diagonal(std::span<const Complex> values);
  // |v><v|
  static CMatrix outer(std::span<const Complex> v);

  std::size_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  Complex& operator()(std::size_t row, std::size_t col) {
    return entries_[row * dim_ + col];
  }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }

  std::span<const Complex> data() const { return entries_; }
  std::span<Complex> data() { return entries_; }

  std::vector<Complex> diagonal_entries() const;
  std::vector<double> real_diagonal() const;
  // Entry-wise real part, as a complex matrix.
  CMatrix real_part() const;
  // Largest |im| over all entries.
  double max_imag() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex scale);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator-(CMatrix a) { return a *= -1.0; }
  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascending; columns of
// `eigenvectors` are the matching unit eigenvectors with their largest-magnitude
// component made real positive.
struct HermEigen {
  std::vector<double> eigenvalues;
  CMatrix eigenvectors;

  std::vector<Complex> column(std::size_t k) const;
};

// Pauli operators over a single spin.
CMatrix pauli_i();
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix dagger(const CMatrix& m);
Complex trace(const CMatrix& m);
double frobenius_norm(const CMatrix& m);
CMatrix commutator(const CMatrix& a, const CMatrix& b);

// (a, b) = Tr(a^dagger b) / Tr(I)
Complex trace_inner(const CMatrix& a, const CMatrix& b);

// a (x) b with the first factor as the slow index.
CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron_all(std::span<const CMatrix> factors);

// Traces out every factor not listed in `keep` (0-based factor indices).
// The kept factors stay in their original relative order.
CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                      std::span<const std::size_t> keep);

bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);
// Minimum eigenvalue >= -tol. Non-Hermitian input is never PSD.
bool is_psd(const CMatrix& m, double tol = kHermitianTol);

// Throws NumericalError if `h` is not Hermitian within `tol` (Frobenius norm
// of h - h^dagger).
HermEigen herm_eigen(const CMatrix& h, double tol = kHermitianTol);

// V diag(exp(scale * lambda)) V^dagger. When scale * max(lambda) exceeds 700
// the spectrum is shifted by its maximum; the result is then proportional to,
// not equal to, the exponential.
CMatrix matrix_exp_hermitian(const CMatrix& h, double scale,
                             double tol = kHermitianTol);

// Reassembles V diag(values) V^dagger.
CMatrix reassemble(const CMatrix& vectors, std::span<const double> values);

// Row-major multi-index helpers for joint spaces (player 0 slowest).
std::size_t product_of(std::span<const std::size_t> dims);
std::vector<std::size_t> unflatten(std::size_t index,
                                   std::span<const std::size_t> dims);
std::size_t flatten(std::span<const std::size_t> digits,
                    std::span<const std::size_t> dims);

std::string to_string(const CMatrix& m, int precision = 4);

}  // namespace hamgame
