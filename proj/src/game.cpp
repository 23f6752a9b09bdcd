#include "hamgame/game.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "hamgame/error.hpp"

namespace hamgame {

std::string_view to_string(StrategyMode mode) {
  switch (mode) {
    case StrategyMode::kFull: return "full";
    case StrategyMode::kRestricted: return "restricted";
    case StrategyMode::kClassical: return "classical";
  }
  return "full";
}

StrategyMode parse_strategy_mode(std::string_view text) {
  if (text == "full") return StrategyMode::kFull;
  if (text == "restricted") return StrategyMode::kRestricted;
  if (text == "classical") return StrategyMode::kClassical;
  throw DomainError("unknown mode '" + std::string(text) +
                    "' (expected full, restricted or classical)");
}

bool is_named_operator(std::string_view name) {
  return name == "I" || name == "X" || name == "Y" || name == "Z" || name == "iX" ||
         name == "iY" || name == "iZ";
}

CMatrix named_operator(std::string_view name) {
  const Complex i(0.0, 1.0);
  if (name == "I") return pauli_i();
  if (name == "X") return pauli_x();
  if (name == "Y") return pauli_y();
  if (name == "Z") return pauli_z();
  if (name == "iX") return i * pauli_x();
  if (name == "iY") return i * pauli_y();
  if (name == "iZ") return i * pauli_z();
  throw DomainError("unknown operator name '" + std::string(name) + "'");
}

StrategyBasis StrategyBasis::from_names(std::span<const std::string> names) {
  StrategyBasis basis;
  for (const auto& name : names) {
    basis.labels.push_back(name);
    basis.operators.push_back(named_operator(name));
  }
  return basis;
}

StrategyBasis StrategyBasis::from_names(std::initializer_list<std::string_view> names) {
  std::vector<std::string> owned(names.begin(), names.end());
  return from_names(std::span<const std::string>(owned));
}

std::size_t StrategyBasis::object_dim() const {
  return operators.empty() ? 0 : operators.front().dim();
}

void StrategyBasis::validate(double tol) const {
  if (operators.empty()) throw DomainError("strategy basis is empty");
  if (labels.size() != operators.size())
    throw DimensionError("strategy basis: label count differs from operator count");
  for (const auto& op : operators)
    if (op.dim() != object_dim())
      throw DimensionError("strategy basis: operators differ in dimension");
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b) {
      const Complex g = trace_inner(operators[a], operators[b]);
      if (std::abs(g - (a == b ? 1.0 : 0.0)) > tol)
        throw NumericalError("strategy basis is not orthonormal at (" + labels[a] + ", " +
                             labels[b] + ")");
    }
}

std::vector<Complex> StrategyBasis::coefficients(const CMatrix& op) const {
  std::vector<Complex> c(size());
  for (std::size_t k = 0; k < size(); ++k) c[k] = trace_inner(operators[k], op);
  return c;
}

DensityMatrix::DensityMatrix(CMatrix m, double tol) : matrix_(std::move(m)) {
  if (matrix_.empty()) throw DimensionError("density matrix is empty");
  if (!is_hermitian(matrix_, tol)) throw NumericalError("density matrix is not Hermitian");
  if (std::abs(trace(matrix_) - 1.0) > tol)
    throw NumericalError("density matrix trace is not 1");
  if (!is_psd(matrix_, tol)) throw NumericalError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::uniform(std::size_t dim) {
  return DensityMatrix(CMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

DensityMatrix DensityMatrix::pure(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("pure state index out of range");
  CMatrix m(dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
  return DensityMatrix(CMatrix::diagonal(probabilities));
}

std::vector<std::size_t> ManipulativeGame::dims() const {
  std::vector<std::size_t> out;
  for (const auto& b : bases) out.push_back(b.size());
  return out;
}

void ManipulativeGame::validate(double tol) const {
  if (bases.empty()) throw DomainError("game has no players");
  (void)DensityMatrix(initial_state, tol);
  if (observables.size() != players())
    throw DimensionError("expected one observable per player");
  if (order.size() != players()) throw DimensionError("order must list every player once");
  std::vector<bool> seen(players(), false);
  for (std::size_t p : order) {
    if (p >= players() || seen[p]) throw DomainError("order is not a permutation of players");
    seen[p] = true;
  }
  for (const auto& basis : bases) {
    basis.validate(tol);
    if (basis.object_dim() != object_dim())
      throw DimensionError("strategy operators do not act on the object space");
  }
  for (const auto& p : observables) {
    if (p.dim() != object_dim())
      throw DimensionError("observable dimension differs from the object space");
    if (!is_hermitian(p, tol)) throw NumericalError("payoff observable is not Hermitian");
  }
}

bool AbstractGame::is_diagonal(double tol) const {
  for (const auto& h : payoff_ops)
    for (std::size_t r = 0; r < h.dim(); ++r)
      for (std::size_t c = 0; c < h.dim(); ++c)
        if (r != c && std::abs(h(r, c)) > tol) return false;
  return true;
}

void AbstractGame::validate(double tol) const {
  if (dims.empty()) throw DomainError("game has no players");
  for (std::size_t d : dims)
    if (d == 0) throw DimensionError("strategy dimension must be positive");
  if (payoff_ops.size() != players())
    throw DimensionError("expected one payoff operator per player");
  for (const auto& h : payoff_ops) {
    if (h.dim() != joint_dim())
      throw DimensionError("payoff operator dimension differs from the joint space");
    if (!is_hermitian(h, tol)) throw NumericalError("payoff operator is not Hermitian");
  }
  if (basis_labels.size() != players())
    throw DimensionError("expected one label list per player");
  for (std::size_t p = 0; p < players(); ++p)
    if (basis_labels[p].size() != dims[p])
      throw DimensionError("label count differs from strategy dimension");
}

void fill_default_labels(AbstractGame& game) {
  game.basis_labels.resize(game.players());
  for (std::size_t p = 0; p < game.players(); ++p) {
    if (!game.basis_labels[p].empty()) continue;
    for (std::size_t k = 0; k < game.dims[p]; ++k)
      game.basis_labels[p].push_back("s" + std::to_string(k + 1));
  }
}

StrategyProfile::StrategyProfile(std::variant<std::vector<DensityMatrix>, DensityMatrix> states,
                                 bool restricted)
    : states_(std::move(states)), restricted_(restricted) {
  if (restricted_) {
    auto check = [](const DensityMatrix& d) {
      if (!validate_restricted(d))
        throw NumericalError("restricted profile has complex entries");
    };
    if (is_product())
      for (const auto& f : factors()) check(f);
    else
      check(std::get<DensityMatrix>(states_));
  }
}

StrategyProfile StrategyProfile::product(std::vector<DensityMatrix> states, bool restricted) {
  if (states.empty()) throw DimensionError("product profile needs at least one player");
  return StrategyProfile(std::move(states), restricted);
}

StrategyProfile StrategyProfile::joint(DensityMatrix state, bool restricted) {
  return StrategyProfile(std::move(state), restricted);
}

StrategyProfile StrategyProfile::uniform(std::span<const std::size_t> dims) {
  std::vector<DensityMatrix> states;
  for (std::size_t d : dims) states.push_back(DensityMatrix::uniform(d));
  return product(std::move(states));
}

const std::vector<DensityMatrix>& StrategyProfile::factors() const {
  if (!is_product()) throw DomainError("joint profile has no per-player factors");
  return std::get<std::vector<DensityMatrix>>(states_);
}

CMatrix StrategyProfile::joint_matrix() const {
  if (!is_product()) return std::get<DensityMatrix>(states_).matrix();
  std::vector<CMatrix> mats;
  for (const auto& f : factors()) mats.push_back(f.matrix());
  return kron_all(mats);
}

std::size_t StrategyProfile::joint_dim() const {
  if (!is_product()) return std::get<DensityMatrix>(states_).dim();
  std::size_t n = 1;
  for (const auto& f : factors()) n *= f.dim();
  return n;
}

void StrategyProfile::check_dims(std::span<const std::size_t> dims) const {
  if (is_product()) {
    const auto& fs = factors();
    if (fs.size() != dims.size())
      throw DimensionError("profile has " + std::to_string(fs.size()) + " players, game has " +
                           std::to_string(dims.size()));
    for (std::size_t p = 0; p < fs.size(); ++p)
      if (fs[p].dim() != dims[p])
        throw DimensionError("player " + std::to_string(p + 1) + " state has dimension " +
                             std::to_string(fs[p].dim()) + ", game expects " +
                             std::to_string(dims[p]));
  } else if (joint_dim() != product_of(dims)) {
    throw DimensionError("joint profile dimension " + std::to_string(joint_dim()) +
                         " differs from joint space " + std::to_string(product_of(dims)));
  }
}

namespace {

ManipulativeGame spin_flip_game(std::string name, std::initializer_list<std::string_view> ops) {
  ManipulativeGame g;
  g.name = std::move(name);
  g.initial_state = CMatrix{{1.0, 0.0}, {0.0, 0.0}};
  g.bases = {StrategyBasis::from_names(ops), StrategyBasis::from_names(ops)};
  g.order = {0, 1};
  g.observables = {pauli_z(), -pauli_z()};
  return g;
}

AbstractGame prisoners_dilemma() {
  AbstractGame g;
  g.name = "prisoners_dilemma";
  g.dims = {2, 2};
  const std::array<double, 4> p1{-2.0, -5.0, 0.0, -4.0};
  const std::array<double, 4> p2{-2.0, 0.0, -5.0, -4.0};
  g.payoff_ops = {CMatrix::diagonal(p1), CMatrix::diagonal(p2)};
  g.basis_labels = {{"C", "D"}, {"C", "D"}};
  return g;
}

}  // namespace

AnyGame builtin(std::string_view name) {
  if (name == "pfg") {
    ManipulativeGame g = spin_flip_game("pfg", {"I", "X"});
    g.classical = true;
    return g;
  }
  if (name == "srg") return spin_flip_game("srg", {"I", "X", "Y", "Z"});
  if (name == "srg_restricted") return spin_flip_game("srg_restricted", {"I", "iX", "iY", "iZ"});
  if (name == "prisoners_dilemma") return prisoners_dilemma();
  throw DomainError("unknown built-in game '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() {
  return {"pfg", "srg", "srg_restricted", "prisoners_dilemma"};
}

CMatrix su2_strategy(double alpha, double beta, double gamma, double delta) {
  const Complex i(0.0, 1.0);
  const double cg = std::cos(gamma / 2), sg = std::sin(gamma / 2);
  const double sum = (beta + delta) / 2, diff = (beta - delta) / 2;
  CMatrix s = std::cos(sum) * cg * pauli_i();
  s += (i * sg * std::sin(diff)) * pauli_x();
  s += (-i * sg * std::cos(diff)) * pauli_y();
  s += (-i * cg * std::sin(sum)) * pauli_z();
  return std::polar(1.0, alpha) * s;
}

DensityMatrix pure_strategy_density(const CMatrix& op, const StrategyBasis& basis, double tol) {
  if (op.dim() != basis.object_dim())
    throw DimensionError("strategy operator does not act on the basis object space");
  std::vector<Complex> c = basis.coefficients(op);
  CMatrix residual = op;
  for (std::size_t k = 0; k < c.size(); ++k) residual -= c[k] * basis.operators[k];
  if (std::sqrt(std::abs(trace_inner(residual, residual))) > tol)
    throw DomainError("strategy operator lies outside the span of the basis");
  double norm2 = 0.0;
  for (const Complex& z : c) norm2 += std::norm(z);
  if (norm2 <= tol * tol) throw DomainError("strategy operator has zero norm");
  const double scale = 1.0 / std::sqrt(norm2);
  for (Complex& z : c) z *= scale;
  return DensityMatrix(CMatrix::outer(c), std::max(tol, 1e-9));
}

bool validate_restricted(const DensityMatrix& rho, double tol) {
  return rho.matrix().max_imag() < tol;
}

std::vector<UnitaryComponent> decompose_to_unitaries(const DensityMatrix& rho, double tol) {
  if (rho.dim() != 4)
    throw DimensionError("unitary decomposition needs a 4x4 state over {I,iX,iY,iZ}");
  if (!validate_restricted(rho, tol))
    throw NumericalError("state is not restricted (complex entries)");

  Eigen::Matrix4d real;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      real(r, c) = 0.5 * (rho.matrix()(r, c).real() + rho.matrix()(c, r).real());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(real);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen solver failed");

  const Complex i(0.0, 1.0);
  std::vector<UnitaryComponent> out;
  for (int k = 0; k < 4; ++k) {
    const double p = solver.eigenvalues()(k);
    if (std::abs(p) < 1e-12) continue;
    UnitaryComponent comp;
    comp.probability = p;
    int lead = 0;
    for (int r = 1; r < 4; ++r)
      if (std::abs(solver.eigenvectors()(r, k)) > std::abs(solver.eigenvectors()(lead, k)) + 1e-12)
        lead = r;
    const double sign = solver.eigenvectors()(lead, k) < 0 ? -1.0 : 1.0;
    for (int r = 0; r < 4; ++r) comp.coefficients[r] = sign * solver.eigenvectors()(r, k);
    const auto& a = comp.coefficients;
    comp.op = a[0] * pauli_i() + (i * a[1]) * pauli_x() + (i * a[2]) * pauli_y() +
              (i * a[3]) * pauli_z();
    out.push_back(std::move(comp));
  }
  return out;
}

std::size_t count_free_parameters(std::size_t dim) {
  if (dim == 0) return 0;
  return (dim - 1) + dim * (dim - 1) / 2;
}

}  // namespace hamgame
