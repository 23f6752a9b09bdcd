#include "hamgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hamgame/error.hpp"
#include "hamgame/parallel.hpp"
#include "hamgame/payoff.hpp"

namespace hamgame {
namespace {

double quadratic_form(const CMatrix& m, std::span<const Complex> v) {
  Complex sum{};
  for (std::size_t r = 0; r < v.size(); ++r) {
    Complex row{};
    for (std::size_t c = 0; c < v.size(); ++c) row += m(r, c) * v[c];
    sum += std::conj(v[r]) * row;
  }
  return sum.real();
}

}  // namespace

StrategyBasis basis_from_labels(std::span<const std::string> labels) {
  for (const auto& l : labels)
    if (!is_named_operator(l))
      throw DomainError("label '" + l + "' does not name a built-in operator");
  return StrategyBasis::from_names(labels);
}

std::array<double, 3> restricted_grid_angles(std::size_t index, std::size_t resolution) {
  const std::size_t n = resolution;
  const std::size_t ib = index / (n * n);
  const std::size_t ig = (index / n) % n;
  const std::size_t id = index % n;
  const double two_pi = 2.0 * std::numbers::pi;
  const double gamma = n > 1 ? std::numbers::pi * static_cast<double>(ig) / static_cast<double>(n - 1) : 0.0;
  return {two_pi * static_cast<double>(ib) / static_cast<double>(n), gamma,
          two_pi * static_cast<double>(id) / static_cast<double>(n)};
}

double restricted_best_response(const CMatrix& reduced, const StrategyBasis& basis,
                                std::size_t resolution) {
  if (resolution == 0) throw DomainError("grid resolution must be positive");
  if (reduced.dim() != basis.size()) throw DimensionError("reduced matrix does not match the basis");
  const std::size_t points = resolution * resolution * resolution;
  std::vector<double> values(points);
  const auto count = static_cast<long long>(points);
  HAMGAME_OMP_STATIC_LOOP
  for (long long k = 0; k < count; ++k) {
    const auto [b, g, d] = restricted_grid_angles(static_cast<std::size_t>(k), resolution);
    const auto c = basis.coefficients(su2_strategy(0.0, b, g, d));
    values[static_cast<std::size_t>(k)] = quadratic_form(reduced, c);
  }
  return *std::max_element(values.begin(), values.end());
}

double best_response_value(const AbstractGame& game, const StrategyProfile& profile,
                           std::size_t player, const BestResponseOptions& options) {
  profile.check_dims(game.dims);
  if (player >= game.players()) throw DimensionError("player out of range");
  const CMatrix dev = deviation_operator(game, profile.joint_matrix(), player);
  switch (options.mode) {
    case StrategyMode::kFull:
      return herm_eigen(dev).eigenvalues.back();
    case StrategyMode::kClassical: {
      const auto diag = dev.real_diagonal();
      return *std::max_element(diag.begin(), diag.end());
    }
    case StrategyMode::kRestricted: {
      if (game.dims[player] != 4)
        throw DomainError("restricted mode needs a 4-dimensional strategy space");
      const StrategyBasis basis = basis_from_labels(game.basis_labels[player]);
      return restricted_best_response(dev, basis, options.grid_resolution);
    }
  }
  throw DomainError("unknown mode");
}

double regret(const AbstractGame& game, const StrategyProfile& profile, std::size_t player,
              const BestResponseOptions& options) {
  return best_response_value(game, profile, player, options) - expected_payoff(game, profile, player);
}

NashVerdict is_nash(const AbstractGame& game, const StrategyProfile& profile, double tol,
                    const BestResponseOptions& options) {
  NashVerdict verdict;
  for (std::size_t p = 0; p < game.players(); ++p) {
    verdict.regrets.push_back(regret(game, profile, p, options));
    verdict.max_regret = std::max(verdict.max_regret, verdict.regrets.back());
  }
  verdict.is_nash = verdict.max_regret <= tol;
  return verdict;
}

CMatrix SrgVariables::matrix() const {
  return CMatrix{{p11, alpha, beta, gamma},
                 {alpha, p22, mu, nu},
                 {beta, mu, p33, delta},
                 {gamma, nu, delta, p44}};
}

double srg_payoff_polynomial(const SrgVariables& a, const SrgVariables& b) {
  return 1.0 - 2 * a.p22 - 2 * a.p33 - 2 * b.p22 - 2 * b.p33            //
         + 4 * a.p22 * b.p22 + 4 * a.p22 * b.p33 + 4 * a.p33 * b.p22 + 4 * a.p33 * b.p33  //
         - 4 * a.alpha * b.alpha - 4 * a.beta * b.beta + 4 * a.nu * b.nu + 4 * a.delta * b.delta  //
         + 4 * a.alpha * b.delta - 4 * a.delta * b.alpha + 4 * a.nu * b.beta - 4 * a.beta * b.nu;
}

SrgVariables srg_family_variables(const SrgFamilyParams& params, std::size_t player) {
  if (player > 1) throw DimensionError("the spin-rotating game has two players");
  SrgVariables v;
  v.p11 = params.p_a;
  v.p22 = params.p_b;
  v.p33 = 0.5 - params.p_b;
  v.p44 = 0.5 - params.p_a;
  v.alpha = params.alpha;
  v.beta = params.beta;
  v.gamma = params.gamma;
  v.mu = params.mu;
  const double sign = player == 0 ? 1.0 : -1.0;
  v.nu = sign * params.beta;
  v.delta = -sign * params.alpha;
  return v;
}

StrategyProfile srg_ne_family(const SrgFamilyParams& first, const SrgFamilyParams& second) {
  std::vector<DensityMatrix> states;
  const std::array<const SrgFamilyParams*, 2> params{&first, &second};
  for (std::size_t p = 0; p < 2; ++p) {
    const CMatrix m = srg_family_variables(*params[p], p).matrix();
    if (!is_psd(m))
      throw NumericalError("equilibrium-family state of player " + std::to_string(p + 1) +
                           " is not positive semidefinite");
    states.emplace_back(m);
  }
  return StrategyProfile::product(std::move(states), true);
}

double stationarity_check(const AbstractGame& game, const ParameterizedProfile& profile,
                          std::span<const double> at, double h) {
  if (profile.owner.size() != at.size()) throw DimensionError("parameter owners do not match the point");
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  std::vector<double> x(at.begin(), at.end());
  auto payoffs_at = [&](std::span<const double> point) {
    const auto states = profile.build(point);
    const CMatrix joint = kron_all(states);
    std::vector<double> e;
    for (std::size_t p = 0; p < game.players(); ++p) e.push_back(expected_payoff(game, joint, p));
    return e;
  };
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + h;
    const auto up = payoffs_at(x);
    x[k] = saved - h;
    const auto down = payoffs_at(x);
    x[k] = saved;
    for (std::size_t p = 0; p < game.players(); ++p) {
      if (p == profile.owner[k]) continue;
      worst = std::max(worst, std::abs(up[p] - down[p]) / (2.0 * h));
    }
  }
  return worst;
}

ParameterizedProfile srg_parameterization() {
  ParameterizedProfile out;
  out.owner.assign(18, 0);
  std::fill(out.owner.begin() + 9, out.owner.end(), 1);
  out.build = [](std::span<const double> x) {
    if (x.size() != 18) throw DimensionError("SRG parameterization takes 18 values");
    std::vector<CMatrix> states;
    for (std::size_t p = 0; p < 2; ++p) {
      const double* v = x.data() + 9 * p;
      SrgVariables s;
      s.p22 = v[0];
      s.p33 = v[1];
      s.p44 = v[2];
      s.p11 = 1.0 - v[0] - v[1] - v[2];
      s.alpha = v[3];
      s.beta = v[4];
      s.gamma = v[5];
      s.mu = v[6];
      s.nu = v[7];
      s.delta = v[8];
      states.push_back(s.matrix());
    }
    return states;
  };
  return out;
}

std::vector<double> srg_parameters(const SrgVariables& first, const SrgVariables& second) {
  std::vector<double> out;
  for (const SrgVariables* s : {&first, &second}) {
    out.insert(out.end(), {s->p22, s->p33, s->p44, s->alpha, s->beta, s->gamma, s->mu, s->nu, s->delta});
  }
  return out;
}

}  // namespace hamgame
