#include "hamgame/serial.hpp"

#include <algorithm>
#include <limits>

#include "hamgame/error.hpp"
#include "hamgame/payoff.hpp"

namespace hamgame::serial {

AbstractGame compile(const ManipulativeGame& game) {
  game.validate();
  const auto dims = game.dims();
  const std::size_t joint = product_of(dims);
  AbstractGame out;
  out.name = game.name;
  out.dims = dims;
  for (const auto& b : game.bases) out.basis_labels.push_back(b.labels);
  for (std::size_t p = 0; p < game.players(); ++p) {
    CMatrix h(joint);
    for (std::size_t mu = 0; mu < joint; ++mu) {
      const CMatrix l_mu_dag = dagger(effective_operator(game, unflatten(mu, dims)));
      for (std::size_t nu = 0; nu < joint; ++nu) {
        const CMatrix l_nu = effective_operator(game, unflatten(nu, dims));
        if (game.classical && mu != nu) continue;
        h(mu, nu) = trace(matmul(matmul(matmul(game.observables[p], l_nu), game.initial_state), l_mu_dag));
      }
    }
    out.payoff_ops.push_back(std::move(h));
  }
  return out;
}

double restricted_best_response(const CMatrix& reduced, const StrategyBasis& basis,
                                std::size_t resolution) {
  if (resolution == 0) throw DomainError("grid resolution must be positive");
  double best = -std::numeric_limits<double>::infinity();
  const std::size_t points = resolution * resolution * resolution;
  for (std::size_t k = 0; k < points; ++k) {
    const auto [b, g, d] = restricted_grid_angles(k, resolution);
    const auto c = basis.coefficients(su2_strategy(0.0, b, g, d));
    best = std::max(best, trace(matmul(CMatrix::outer(c), reduced)).real());
  }
  return best;
}

std::vector<BetaPoint> beta_sweep(const AbstractGame& game, const StrategyProfile& initial,
                                  const SolverConfig& config, std::span<const double> betas) {
  std::vector<BetaPoint> out;
  for (double beta : betas) {
    SolverConfig cfg = config;
    cfg.beta = beta;
    BetaPoint point;
    point.beta = beta;
    point.result = hamgame::solve(game, initial, cfg);
    point.payoffs = expected_payoffs(game, point.result.as_profile());
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace hamgame::serial
