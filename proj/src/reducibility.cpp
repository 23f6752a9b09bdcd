#include "hamgame/reducibility.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "eigen_bridge.hpp"
#include "hamgame/error.hpp"

namespace hamgame {
namespace {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

double spectral_scale(const AbstractGame& game) {
  double scale = 1.0;
  for (const auto& h : game.payoff_ops) scale = std::max(scale, frobenius_norm(h));
  return scale;
}

// Rotate v so its first near-largest component is real positive.
void fix_phase(VectorXcd& v) {
  double top = 0.0;
  for (Index k = 0; k < v.size(); ++k) top = std::max(top, std::abs(v(k)));
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) >= top - 1e-12) {
      v *= std::conj(v(k)) / std::abs(v(k));
      return;
    }
  }
}

std::size_t leading_index(const VectorXcd& v) {
  double top = 0.0;
  for (Index k = 0; k < v.size(); ++k) top = std::max(top, std::abs(v(k)));
  for (Index k = 0; k < v.size(); ++k)
    if (std::abs(v(k)) >= top - 1e-12) return static_cast<std::size_t>(k);
  return 0;
}

// Index of the single nonzero component, if v is a computational basis vector.
std::optional<std::size_t> computational_index(const VectorXcd& v, double tol) {
  const std::size_t lead = leading_index(v);
  if (std::abs(std::abs(v(static_cast<Index>(lead))) - 1.0) > tol) return std::nullopt;
  return lead;
}

class Refiner {
 public:
  Refiner(const AbstractGame& game, double gap) : gap_(gap) {
    for (const auto& h : game.payoff_ops) ops_.push_back(detail::to_eigen(h));
  }

  void refine(const MatrixXcd& basis, std::size_t op) {
    if (op == ops_.size() || basis.cols() == 1) {
      finish(basis);
      return;
    }
    const MatrixXcd projected = basis.adjoint() * ops_[op] * basis;
    const Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (projected + projected.adjoint()));
    const auto& values = eig.eigenvalues();
    Index start = 0;
    for (Index k = 1; k <= values.size(); ++k) {
      if (k == values.size() || values(k) - values(k - 1) > gap_) {
        refine(basis * eig.eigenvectors().middleCols(start, k - start), op + 1);
        start = k;
      }
    }
  }

  std::vector<CommonEigenvector> take() { return std::move(out_); }

 private:
  void finish(const MatrixXcd& basis) {
    const auto size = static_cast<std::size_t>(basis.cols());
    const Index n = basis.rows();
    // A block spanned by computational basis vectors is reported in that basis.
    const MatrixXcd projector = basis * basis.adjoint();
    std::vector<Index> hits;
    bool diagonal = true;
    for (Index r = 0; r < n && diagonal; ++r) {
      for (Index c = 0; c < n; ++c) {
        if (r != c && std::abs(projector(r, c)) > 1e-9) {
          diagonal = false;
          break;
        }
      }
      if (std::abs(projector(r, r) - 1.0) < 1e-9) hits.push_back(r);
      else if (std::abs(projector(r, r)) > 1e-9) diagonal = false;
    }
    MatrixXcd vectors = basis;
    if (diagonal && static_cast<Index>(hits.size()) == basis.cols()) {
      vectors = MatrixXcd::Zero(n, basis.cols());
      for (std::size_t k = 0; k < hits.size(); ++k) vectors(hits[k], static_cast<Index>(k)) = 1.0;
    }
    for (Index k = 0; k < vectors.cols(); ++k) {
      VectorXcd v = vectors.col(k);
      fix_phase(v);
      CommonEigenvector entry;
      entry.vector.assign(v.data(), v.data() + v.size());
      for (const auto& h : ops_) entry.eigenvalues.push_back((v.adjoint() * h * v)(0, 0).real());
      entry.block_size = size;
      out_.push_back(std::move(entry));
    }
  }

  double gap_;
  std::vector<MatrixXcd> ops_;
  std::vector<CommonEigenvector> out_;
};

// Per-player factors of a product vector, or nothing.
std::optional<std::vector<VectorXcd>> split_product(const std::vector<Complex>& v,
                                                    const std::vector<std::size_t>& dims,
                                                    double tol, std::vector<double>* schmidt) {
  const VectorXcd ev = Eigen::Map<const VectorXcd>(v.data(), static_cast<Index>(v.size()));
  if (const auto idx = computational_index(ev, tol)) {
    const auto digits = unflatten(*idx, dims);
    std::vector<VectorXcd> factors;
    for (std::size_t p = 0; p < dims.size(); ++p) {
      VectorXcd f = VectorXcd::Zero(static_cast<Index>(dims[p]));
      f(static_cast<Index>(digits[p])) = 1.0;
      factors.push_back(std::move(f));
    }
    if (schmidt && dims.size() == 2) *schmidt = product_form_check(v, dims, tol).values;
    return factors;
  }
  if (dims.size() == 1) {
    VectorXcd f = ev;
    fix_phase(f);
    return std::vector<VectorXcd>{f};
  }
  if (dims.size() != 2) return std::nullopt;
  const SchmidtResult check = product_form_check(v, dims, tol);
  if (schmidt) *schmidt = check.values;
  if (!check.is_product) return std::nullopt;
  const auto rows = static_cast<Index>(dims[0]);
  const auto cols = static_cast<Index>(dims[1]);
  MatrixXcd m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = v[static_cast<std::size_t>(r * cols + c)];
  const Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  VectorXcd a = svd.matrixU().col(0);
  VectorXcd b = svd.matrixV().col(0).conjugate();
  fix_phase(a);
  fix_phase(b);
  return std::vector<VectorXcd>{a, b};
}

// Position of f in the list (equal up to phase), appending it when new.
std::size_t intern(std::vector<VectorXcd>& list, const VectorXcd& f, double tol) {
  for (std::size_t k = 0; k < list.size(); ++k)
    if (std::abs(std::abs(list[k].dot(f)) - 1.0) < tol) return k;
  list.push_back(f);
  return list.size() - 1;
}

void diagonal_fallback(const AbstractGame& game, ClassicalReduction& out) {
  out.kind = ReductionKind::kDiagonalRestriction;
  out.tables.clear();
  out.player_bases.clear();
  for (const auto& h : game.payoff_ops) out.tables.push_back({game.dims, h.real_diagonal()});
  out.labels = game.basis_labels;
  if (out.labels.size() != game.players()) {
    AbstractGame copy = game;
    copy.basis_labels.clear();
    fill_default_labels(copy);
    out.labels = copy.basis_labels;
  }
}

}  // namespace

std::string_view to_string(ReductionKind kind) {
  return kind == ReductionKind::kProductEigenbasis ? "product-eigenbasis" : "diagonal-restriction";
}

CommutationReport pairwise_commute(const AbstractGame& game, double tol) {
  CommutationReport report;
  const auto& ops = game.payoff_ops;
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      report.max_norm = std::max(report.max_norm, frobenius_norm(commutator(ops[i], ops[j])));
  report.commute = report.max_norm <= tol;
  return report;
}

std::vector<CommonEigenvector> common_eigenbasis(const AbstractGame& game, double tol, double gap) {
  game.validate();
  const CommutationReport report = pairwise_commute(game, tol * spectral_scale(game));
  if (!report.commute)
    throw DomainError("payoff operators do not commute (max commutator norm " +
                      std::to_string(report.max_norm) + ")");
  Refiner refiner(game, gap);
  const auto n = static_cast<Index>(game.joint_dim());
  refiner.refine(MatrixXcd::Identity(n, n), 0);
  return refiner.take();
}

SchmidtResult product_form_check(std::span<const Complex> v, std::span<const std::size_t> dims,
                                 double tol) {
  if (dims.size() != 2)
    throw DomainError("product-form test is bipartite only; got " + std::to_string(dims.size()) +
                      " factors");
  if (v.size() != dims[0] * dims[1]) throw DimensionError("vector does not match the factor dims");
  const auto rows = static_cast<Index>(dims[0]);
  const auto cols = static_cast<Index>(dims[1]);
  MatrixXcd m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = v[static_cast<std::size_t>(r * cols + c)];
  const Eigen::JacobiSVD<MatrixXcd> svd(m);
  SchmidtResult out;
  const auto& s = svd.singularValues();
  out.values.assign(s.data(), s.data() + s.size());
  out.is_product = out.values.size() < 2 || out.values[1] < tol;
  return out;
}

ClassicalReduction classical_reduction(const AbstractGame& game, double tol) {
  ClassicalReduction out;
  const double scale = spectral_scale(game);
  out.commutation = pairwise_commute(game, tol * scale);
  if (!out.commutation.commute) {
    out.diagnosis = "non-commuting payoff operators";
    diagonal_fallback(game, out);
    return out;
  }

  const auto eigvecs = common_eigenbasis(game, tol);
  const std::size_t players = game.players();
  std::vector<std::vector<VectorXcd>> factor_lists(players);
  std::vector<std::vector<std::size_t>> digits;
  bool entangled = false, unsupported = false;
  for (const auto& e : eigvecs) {
    std::vector<double> schmidt;
    const auto factors = split_product(e.vector, game.dims, tol, &schmidt);
    if (!schmidt.empty()) out.schmidt_values.push_back(std::move(schmidt));
    if (!factors) {
      (players == 2 ? entangled : unsupported) = true;
      if (e.block_size > 1)
        out.notes.push_back("eigenvector from a degenerate block of size " +
                            std::to_string(e.block_size) +
                            "; another orthonormal choice within it might be product-form");
      continue;
    }
    std::vector<std::size_t> d;
    for (std::size_t p = 0; p < players; ++p) d.push_back(intern(factor_lists[p], (*factors)[p], tol));
    digits.push_back(std::move(d));
  }
  // One note per distinct degenerate block size is enough.
  std::sort(out.notes.begin(), out.notes.end());
  out.notes.erase(std::unique(out.notes.begin(), out.notes.end()), out.notes.end());

  if (entangled || unsupported) {
    out.diagnosis = entangled ? "entangled common eigenstates" : "product-form test unsupported for N >= 3";
    diagonal_fallback(game, out);
    return out;
  }

  // The product vectors must form the full grid of per-player factor bases.
  bool grid = true;
  for (std::size_t p = 0; p < players; ++p) grid = grid && factor_lists[p].size() == game.dims[p];
  std::vector<std::size_t> seen(game.joint_dim(), 0);
  if (grid) {
    for (const auto& d : digits) {
      if (++seen[flatten(d, game.dims)] > 1) grid = false;
    }
  }
  if (!grid) {
    out.diagnosis = "product eigenstates do not form a per-player basis grid";
    diagonal_fallback(game, out);
    return out;
  }

  // Order each player's factors by the index of their leading component.
  std::vector<std::vector<std::size_t>> rank(players);
  for (std::size_t p = 0; p < players; ++p) {
    std::vector<std::size_t> order(factor_lists[p].size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return leading_index(factor_lists[p][a]) < leading_index(factor_lists[p][b]);
    });
    rank[p].assign(order.size(), 0);
    std::vector<std::vector<Complex>> basis;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const VectorXcd& f = factor_lists[p][order[k]];
      rank[p][order[k]] = k;
      basis.emplace_back(f.data(), f.data() + f.size());
      const auto idx = computational_index(f, tol);
      if (idx && p < game.basis_labels.size() && *idx < game.basis_labels[p].size())
        labels.push_back(game.basis_labels[p][*idx]);
      else
        labels.push_back("e" + std::to_string(k + 1));
    }
    out.player_bases.push_back(std::move(basis));
    out.labels.push_back(std::move(labels));
  }

  out.kind = ReductionKind::kProductEigenbasis;
  out.tables.assign(players, PayoffTable{game.dims, std::vector<double>(game.joint_dim(), 0.0)});
  for (std::size_t k = 0; k < eigvecs.size(); ++k) {
    std::vector<std::size_t> d = digits[k];
    for (std::size_t p = 0; p < players; ++p) d[p] = rank[p][d[p]];
    const std::size_t cell = flatten(d, game.dims);
    for (std::size_t p = 0; p < players; ++p) out.tables[p].values[cell] = eigvecs[k].eigenvalues[p];
  }
  out.diagnosis = "commuting payoff operators with a product common eigenbasis";
  return out;
}

std::vector<CMatrix> rebuild_from_reduction(const ClassicalReduction& reduction) {
  if (reduction.kind != ReductionKind::kProductEigenbasis)
    throw DomainError("only a product-eigenbasis reduction can be rebuilt");
  const auto& bases = reduction.player_bases;
  std::vector<std::size_t> dims;
  for (const auto& b : bases) dims.push_back(b.size());
  const std::size_t joint = product_of(dims);
  std::vector<CMatrix> out(reduction.tables.size(), CMatrix(joint));
  for (std::size_t cell = 0; cell < joint; ++cell) {
    const auto digits = unflatten(cell, dims);
    std::vector<CMatrix> projectors;
    for (std::size_t p = 0; p < dims.size(); ++p) projectors.push_back(CMatrix::outer(bases[p][digits[p]]));
    const CMatrix projector = kron_all(projectors);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += projector * Complex(reduction.tables[i].values[cell]);
  }
  return out;
}

}  // namespace hamgame
