#pragma once

// Game domain model: strategy bases, density matrices, the manipulative and
// abstract game definitions, strategy profiles, the built-in games, and the
// SU(2) / restricted-density-matrix helpers.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hamgame/matrix.hpp"

namespace hamgame {

// How a player's strategy state is allowed to vary.
//   kFull:       any density matrix over the strategy basis.
//   kRestricted: real density matrices in the {I,iX,iY,iZ} basis (mixtures of
//                SU(2) unitaries).
//   kClassical:  diagonal density matrices (probability distributions).
enum class StrategyMode { kFull, kRestricted, kClassical };

std::string_view to_string(StrategyMode mode);
StrategyMode parse_strategy_mode(std::string_view text);

// 2x2 operator bound to one of "I","X","Y","Z","iX","iY","iZ".
// Throws DomainError for any other name.
CMatrix named_operator(std::string_view name);
bool is_named_operator(std::string_view name);

// Orthonormal operator basis of one player's strategy space.
struct StrategyBasis {
  std::vector<std::string> labels;
  std::vector<CMatrix> operators;

  static StrategyBasis from_names(std::span<const std::string> names);
  static StrategyBasis from_names(std::initializer_list<std::string_view> names);

  std::size_t size() const { return operators.size(); }
  std::size_t object_dim() const;
  // Throws unless labels and operators match, all operators share a dimension
  // and the set is orthonormal under trace_inner within `tol`.
  void validate(double tol = kHermitianTol) const;
  // Coefficients c_mu = trace_inner(basis_mu, op).
  std::vector<Complex> coefficients(const CMatrix& op) const;
};

// Hermitian, PSD, unit-trace matrix.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m, double tol = kHermitianTol);

  static DensityMatrix uniform(std::size_t dim);
  static DensityMatrix pure(std::size_t dim, std::size_t index);
  static DensityMatrix diagonal(std::span<const double> probabilities);

  const CMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.dim(); }

 private:
  CMatrix matrix_;
};

struct ManipulativeGame {
  std::string name;
  CMatrix initial_state;
  std::vector<StrategyBasis> bases;
  // order[k] is the k-th player to act; order[0] acts first (innermost).
  std::vector<std::size_t> order;
  std::vector<CMatrix> observables;
  // Players mix the basis operators only as classical probabilities, so just
  // the diagonal of each payoff operator is effective (penny flipping).
  bool classical = false;

  std::size_t players() const { return bases.size(); }
  std::size_t object_dim() const { return initial_state.dim(); }
  std::vector<std::size_t> dims() const;
  void validate(double tol = kHermitianTol) const;
};

struct AbstractGame {
  std::string name;
  std::vector<std::size_t> dims;
  std::vector<CMatrix> payoff_ops;
  std::vector<std::vector<std::string>> basis_labels;

  std::size_t players() const { return dims.size(); }
  std::size_t joint_dim() const { return product_of(dims); }
  // Diagonal in every payoff operator.
  bool is_diagonal(double tol = kHermitianTol) const;
  void validate(double tol = kHermitianTol) const;
};

// Labels "s1".."sL" for every player whose label list is missing.
void fill_default_labels(AbstractGame& game);

// Product of per-player states, or one joint state over the full space.
class StrategyProfile {
 public:
  static StrategyProfile product(std::vector<DensityMatrix> states, bool restricted = false);
  static StrategyProfile joint(DensityMatrix state, bool restricted = false);
  static StrategyProfile uniform(std::span<const std::size_t> dims);

  bool is_product() const { return std::holds_alternative<std::vector<DensityMatrix>>(states_); }
  bool restricted() const { return restricted_; }
  const std::vector<DensityMatrix>& factors() const;
  // The joint density matrix (Kronecker product for product profiles).
  CMatrix joint_matrix() const;
  std::size_t joint_dim() const;
  // Throws DimensionError unless the profile fits a game with these dims.
  void check_dims(std::span<const std::size_t> dims) const;

 private:
  StrategyProfile(std::variant<std::vector<DensityMatrix>, DensityMatrix> states,
                  bool restricted);
  std::variant<std::vector<DensityMatrix>, DensityMatrix> states_;
  bool restricted_ = false;
};

using AnyGame = std::variant<ManipulativeGame, AbstractGame>;

// One of "pfg", "srg", "srg_restricted", "prisoners_dilemma".
AnyGame builtin(std::string_view name);
std::vector<std::string> builtin_names();

// e^{i alpha}(cos(g/2)cos((b+d)/2) I + i sin(g/2)sin((b-d)/2) X
//             - i sin(g/2)cos((b-d)/2) Y - i cos(g/2)sin((b+d)/2) Z)
CMatrix su2_strategy(double alpha, double beta, double gamma, double delta);

// |c><c| with c the coefficients of `op` in `basis`. Throws DomainError if op
// leaves the span of the basis or its coefficient vector is not a unit vector.
DensityMatrix pure_strategy_density(const CMatrix& op, const StrategyBasis& basis,
                                    double tol = kHermitianTol);

// True iff every entry has |im| < tol.
bool validate_restricted(const DensityMatrix& rho, double tol = kHermitianTol);

struct UnitaryComponent {
  double probability = 0.0;
  // Real coefficients (a, b, c, d) of a I + b iX + c iY + d iZ.
  std::array<double, 4> coefficients{};
  CMatrix op;
};

// Eigen-decomposes a restricted 4x4 state into a probability mixture of SU(2)
// unitaries. Components with probability below 1e-12 are dropped.
std::vector<UnitaryComponent> decompose_to_unitaries(const DensityMatrix& rho,
                                                     double tol = kHermitianTol);

// Independent real parameters of a unit-trace real symmetric dim x dim matrix.
std::size_t count_free_parameters(std::size_t dim);

}  // namespace hamgame
