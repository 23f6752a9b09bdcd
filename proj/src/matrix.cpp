#include "hamgame/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "eigen_bridge.hpp"
#include "hamgame/error.hpp"

namespace hamgame {
namespace {

void require_same_dim(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
  }
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(std::span<const Complex> entries, const char* what) {
  for (const Complex& z : entries) {
    if (!finite(z)) throw NumericalError(std::string(what) + ": non-finite entry");
  }
}

// Offsets of every multi-index over the selected factors, in row-major order
// of those factors, measured with the strides of the full space.
std::vector<std::size_t> factor_offsets(std::span<const std::size_t> dims,
                                        std::span<const std::size_t> factors) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];

  std::vector<std::size_t> offsets{0};
  for (std::size_t f : factors) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[f]);
    for (std::size_t base : offsets)
      for (std::size_t d = 0; d < dims[f]; ++d) next.push_back(base + d * strides[f]);
    offsets = std::move(next);
  }
  return offsets;
}

}  // namespace

CMatrix::CMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

CMatrix::CMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) {
    throw DimensionError("CMatrix: expected " + std::to_string(dim_ * dim_) +
                         " entries, got " + std::to_string(entries_.size()));
  }
  require_finite(entries_, "CMatrix");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw DimensionError("CMatrix: rows must form a square");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  require_finite(entries_, "CMatrix");
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t k = 0; k < dim; ++k) m(k, k) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
  CMatrix m(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) m(k, k) = values[k];
  require_finite(m.data(), "CMatrix::diagonal");
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> values) {
  CMatrix m(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) m(k, k) = values[k];
  require_finite(m.data(), "CMatrix::diagonal");
  return m;
}

CMatrix CMatrix::outer(std::span<const Complex> v) {
  CMatrix m(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
  return m;
}

std::vector<Complex> CMatrix::diagonal_entries() const {
  std::vector<Complex> out(dim_);
  for (std::size_t k = 0; k < dim_; ++k) out[k] = (*this)(k, k);
  return out;
}

std::vector<double> CMatrix::real_diagonal() const {
  std::vector<double> out(dim_);
  for (std::size_t k = 0; k < dim_; ++k) out[k] = (*this)(k, k).real();
  return out;
}

CMatrix CMatrix::real_part() const {
  CMatrix out(dim_);
  for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k].real();
  return out;
}

double CMatrix::max_imag() const {
  double worst = 0.0;
  for (const Complex& z : entries_) worst = std::max(worst, std::abs(z.imag()));
  return worst;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex scale) {
  for (Complex& z : entries_) z *= scale;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

std::vector<Complex> HermEigen::column(std::size_t k) const {
  std::vector<Complex> v(eigenvectors.dim());
  for (std::size_t r = 0; r < v.size(); ++r) v[r] = eigenvectors(r, k);
  return v;
}

CMatrix pauli_i() { return CMatrix::identity(2); }
CMatrix pauli_x() { return CMatrix{{0.0, 1.0}, {1.0, 0.0}}; }
CMatrix pauli_y() {
  return CMatrix{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
}
CMatrix pauli_z() { return CMatrix{{1.0, 0.0}, {0.0, -1.0}}; }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "matmul");
  const std::size_t n = a.dim();
  CMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex lhs = a(r, k);
      if (lhs == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += lhs * b(k, c);
    }
  }
  return out;
}

CMatrix dagger(const CMatrix& m) {
  CMatrix out(m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) out(c, r) = std::conj(m(r, c));
  return out;
}

Complex trace(const CMatrix& m) {
  Complex sum{};
  for (std::size_t k = 0; k < m.dim(); ++k) sum += m(k, k);
  return sum;
}

double frobenius_norm(const CMatrix& m) {
  double sum = 0.0;
  for (const Complex& z : m.data()) sum += std::norm(z);
  return std::sqrt(sum);
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "commutator");
  return matmul(a, b) - matmul(b, a);
}

Complex trace_inner(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b, "trace_inner");
  if (a.empty()) throw DimensionError("trace_inner: empty operands");
  // Tr(a^dagger b) = sum_{rc} conj(a_rc) b_rc
  Complex sum{};
  for (std::size_t k = 0; k < a.data().size(); ++k)
    sum += std::conj(a.data()[k]) * b.data()[k];
  return sum / static_cast<double>(a.dim());
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  CMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

CMatrix kron_all(std::span<const CMatrix> factors) {
  if (factors.empty()) return CMatrix::identity(1);
  CMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                      std::span<const std::size_t> keep) {
  if (dims.empty() || product_of(dims) != m.dim()) {
    throw DimensionError("partial_trace: factor dims do not multiply to " +
                         std::to_string(m.dim()));
  }
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end() ||
      kept.back() >= dims.size()) {
    throw DimensionError("partial_trace: keep set must hold distinct factor indices");
  }
  std::vector<std::size_t> traced;
  for (std::size_t f = 0; f < dims.size(); ++f)
    if (!std::binary_search(kept.begin(), kept.end(), f)) traced.push_back(f);

  const auto kept_off = factor_offsets(dims, kept);
  const auto traced_off = factor_offsets(dims, traced);
  const std::size_t n = kept_off.size();
  CMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex sum{};
      for (std::size_t t : traced_off) sum += m(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = sum;
    }
  return out;
}

bool is_hermitian(const CMatrix& m, double tol) {
  double sum = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) sum += std::norm(m(r, c) - std::conj(m(c, r)));
  return std::sqrt(sum) <= tol;
}

bool is_psd(const CMatrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  if (m.empty()) return true;
  return herm_eigen(m, tol).eigenvalues.front() >= -tol;
}

HermEigen herm_eigen(const CMatrix& h, double tol) {
  if (h.empty()) throw DimensionError("herm_eigen: empty matrix");
  if (!is_hermitian(h, tol)) throw NumericalError("herm_eigen: matrix is not Hermitian");
  // Hermitize so the solver sees an exactly self-adjoint operand.
  Eigen::MatrixXcd e = detail::to_eigen(h);
  e = (0.5 * (e + e.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e);
  if (solver.info() != Eigen::Success) throw NumericalError("herm_eigen: solver failed");

  const std::size_t n = h.dim();
  HermEigen out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out.eigenvalues[k] = solver.eigenvalues()(kk);
    // Phase convention: the first largest-magnitude component is real positive.
    double biggest = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      biggest = std::max(biggest, std::abs(solver.eigenvectors()(static_cast<Eigen::Index>(r), kk)));
    Complex phase = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      const Complex z = solver.eigenvectors()(static_cast<Eigen::Index>(r), kk);
      if (std::abs(z) >= biggest - 1e-12) {
        phase = std::conj(z) / std::abs(z);
        break;
      }
    }
    for (std::size_t r = 0; r < n; ++r)
      out.eigenvectors(r, k) = solver.eigenvectors()(static_cast<Eigen::Index>(r), kk) * phase;
  }
  require_finite(out.eigenvectors.data(), "herm_eigen");
  return out;
}

CMatrix reassemble(const CMatrix& vectors, std::span<const double> values) {
  const std::size_t n = vectors.dim();
  if (values.size() != n) throw DimensionError("reassemble: value count mismatch");
  CMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      const Complex vr = vectors(r, k) * values[k];
      for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(vectors(c, k));
    }
  }
  return out;
}

CMatrix matrix_exp_hermitian(const CMatrix& h, double scale, double tol) {
  const HermEigen eig = herm_eigen(h, tol);
  double top = -std::numeric_limits<double>::infinity();
  for (double lambda : eig.eigenvalues) top = std::max(top, scale * lambda);
  const double shift = top > 700.0 ? top : 0.0;
  std::vector<double> weights(eig.eigenvalues.size());
  for (std::size_t k = 0; k < weights.size(); ++k)
    weights[k] = std::exp(scale * eig.eigenvalues[k] - shift);
  return reassemble(eig.eigenvectors, weights);
}

std::size_t product_of(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::vector<std::size_t> unflatten(std::size_t index, std::span<const std::size_t> dims) {
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = index % dims[k];
    index /= dims[k];
  }
  return digits;
}

std::size_t flatten(std::span<const std::size_t> digits, std::span<const std::size_t> dims) {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) index = index * dims[k] + digits[k];
  return index;
}

std::string to_string(const CMatrix& m, int precision) {
  std::ostringstream os;
  os << std::setprecision(precision);
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) os << (c ? " " : "") << m(r, c);
    os << '\n';
  }
  return os.str();
}

}  // namespace hamgame
