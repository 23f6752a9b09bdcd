#include "hamgame/compiler.hpp"

#include <algorithm>
#include <cmath>

#include "hamgame/error.hpp"
#include "hamgame/parallel.hpp"

namespace hamgame {
namespace {

std::vector<std::vector<std::string>> labels_of(const ManipulativeGame& game) {
  std::vector<std::vector<std::string>> labels;
  for (const auto& b : game.bases) labels.push_back(b.labels);
  return labels;
}

void check_compiled(const AbstractGame& out) {
  for (std::size_t p = 0; p < out.players(); ++p) {
    const CMatrix& h = out.payoff_ops[p];
    const double tol = kHermitianTol * std::max(1.0, frobenius_norm(h));
    if (!is_hermitian(h, tol))
      throw NumericalError("compiled payoff operator of player " + std::to_string(p + 1) +
                           " is not Hermitian");
  }
}

// Frobenius pairing sum_ab a_ab conj(b_ab) = Tr(a b^dagger).
Complex pair_trace(const CMatrix& a, const CMatrix& b) {
  Complex sum{};
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) sum += da[k] * std::conj(db[k]);
  return sum;
}

}  // namespace

CMatrix effective_operator(const ManipulativeGame& game, std::span<const std::size_t> labels) {
  CMatrix op = CMatrix::identity(game.object_dim());
  for (std::size_t player : game.order) op = matmul(game.bases[player].operators[labels[player]], op);
  return op;
}

AbstractGame compile(const ManipulativeGame& game) {
  if (game.classical) return compile_classical(game);
  game.validate();
  const auto dims = game.dims();
  const std::size_t joint = product_of(dims);

  std::vector<CMatrix> effective(joint);
  for (std::size_t mu = 0; mu < joint; ++mu) effective[mu] = effective_operator(game, unflatten(mu, dims));

  AbstractGame out;
  out.name = game.name;
  out.dims = dims;
  out.basis_labels = labels_of(game);
  for (std::size_t p = 0; p < game.players(); ++p) {
    // A_nu = P L(nu) rho0, so H_{mu nu} = Tr(A_nu L(mu)^dagger).
    std::vector<CMatrix> propagated(joint);
    for (std::size_t nu = 0; nu < joint; ++nu)
      propagated[nu] = matmul(game.observables[p], matmul(effective[nu], game.initial_state));

    CMatrix h(joint);
    const auto rows = static_cast<long long>(joint);
    HAMGAME_OMP_STATIC_LOOP
    for (long long row = 0; row < rows; ++row) {
      const auto mu = static_cast<std::size_t>(row);
      for (std::size_t nu = 0; nu < joint; ++nu) h(mu, nu) = pair_trace(propagated[nu], effective[mu]);
    }
    out.payoff_ops.push_back(std::move(h));
  }
  check_compiled(out);
  return out;
}

AbstractGame compile_classical(const ManipulativeGame& game) {
  game.validate();
  const auto dims = game.dims();
  const std::size_t joint = product_of(dims);
  AbstractGame out;
  out.name = game.name;
  out.dims = dims;
  out.basis_labels = labels_of(game);
  for (std::size_t p = 0; p < game.players(); ++p) {
    CMatrix h(joint);
    for (std::size_t mu = 0; mu < joint; ++mu) {
      const CMatrix l = effective_operator(game, unflatten(mu, dims));
      h(mu, mu) = trace(matmul(matmul(game.observables[p], l), matmul(game.initial_state, dagger(l)))).real();
    }
    out.payoff_ops.push_back(std::move(h));
  }
  return out;
}

CMatrix basis_change_matrix(const StrategyBasis& from, const StrategyBasis& to, double tol) {
  if (from.size() != to.size())
    throw DomainError("basis change between spaces of different dimension");
  if (from.object_dim() != to.object_dim())
    throw DimensionError("basis change between operators on different objects");
  const std::size_t n = from.size();
  CMatrix t(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t(a, b) = trace_inner(to.operators[a], from.operators[b]);
  if (frobenius_norm(matmul(t, dagger(t)) - CMatrix::identity(n)) > tol)
    throw DomainError("new basis does not span the same operator space as the old one");
  return t;
}

AbstractGame change_strategy_basis(const AbstractGame& game, std::span<const StrategyBasis> from,
                                   std::span<const StrategyBasis> to, double tol) {
  if (from.size() != game.players() || to.size() != game.players())
    throw DimensionError("basis change needs one old and one new basis per player");
  std::vector<CMatrix> factors;
  for (std::size_t p = 0; p < game.players(); ++p) {
    if (from[p].size() != game.dims[p])
      throw DimensionError("old basis of player " + std::to_string(p + 1) +
                           " does not match the game dimension");
    factors.push_back(basis_change_matrix(from[p], to[p], tol));
  }
  const CMatrix t = kron_all(factors);
  const CMatrix t_dag = dagger(t);
  AbstractGame out = game;
  for (std::size_t p = 0; p < game.players(); ++p) {
    out.payoff_ops[p] = matmul(matmul(t, game.payoff_ops[p]), t_dag);
    out.basis_labels[p] = to[p].labels;
  }
  return out;
}

AbstractGame extract_subgame(const AbstractGame& game,
                             const std::vector<std::vector<std::string>>& keep) {
  if (keep.size() != game.players()) throw DimensionError("need one keep list per player");
  std::vector<std::vector<std::size_t>> kept(game.players());
  for (std::size_t p = 0; p < game.players(); ++p) {
    const auto& labels = game.basis_labels[p];
    for (const auto& name : keep[p]) {
      const auto it = std::find(labels.begin(), labels.end(), name);
      if (it == labels.end())
        throw DomainError("player " + std::to_string(p + 1) + " has no strategy labelled '" + name + "'");
      kept[p].push_back(static_cast<std::size_t>(it - labels.begin()));
    }
    std::sort(kept[p].begin(), kept[p].end());
    kept[p].erase(std::unique(kept[p].begin(), kept[p].end()), kept[p].end());
    if (kept[p].empty()) throw DomainError("keep list of player " + std::to_string(p + 1) + " is empty");
  }

  AbstractGame out;
  out.name = game.name + "_sub";
  for (std::size_t p = 0; p < game.players(); ++p) {
    out.dims.push_back(kept[p].size());
    std::vector<std::string> labels;
    for (std::size_t k : kept[p]) labels.push_back(game.basis_labels[p][k]);
    out.basis_labels.push_back(std::move(labels));
  }
  const std::size_t sub = product_of(out.dims);
  std::vector<std::size_t> index(sub);
  for (std::size_t s = 0; s < sub; ++s) {
    auto digits = unflatten(s, out.dims);
    for (std::size_t p = 0; p < digits.size(); ++p) digits[p] = kept[p][digits[p]];
    index[s] = flatten(digits, game.dims);
  }
  for (const auto& h : game.payoff_ops) {
    CMatrix m(sub);
    for (std::size_t r = 0; r < sub; ++r)
      for (std::size_t c = 0; c < sub; ++c) m(r, c) = h(index[r], index[c]);
    out.payoff_ops.push_back(std::move(m));
  }
  return out;
}

AbstractGame from_classical_table(const std::vector<PayoffTable>& tables, std::string name) {
  if (tables.empty()) throw DimensionError("need at least one payoff table");
  const auto& shape = tables.front().shape;
  if (shape.size() != tables.size())
    throw DimensionError("table rank must equal the number of players");
  AbstractGame out;
  out.name = std::move(name);
  out.dims = shape;
  for (const auto& t : tables) {
    if (t.shape != shape) throw DimensionError("payoff tables have ragged shapes");
    if (t.values.size() != product_of(shape))
      throw DimensionError("payoff table value count does not match its shape");
    out.payoff_ops.push_back(CMatrix::diagonal(std::span<const double>(t.values)));
  }
  fill_default_labels(out);
  return out;
}

}  // namespace hamgame
