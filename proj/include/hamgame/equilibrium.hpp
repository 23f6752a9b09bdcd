#pragma once

// Generalized Nash equilibrium checks: best-response values, regrets, the
// restricted-strategy grid search, and the spin-rotating-game tooling
// (payoff polynomial, equilibrium family, stationarity by finite differences).

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "hamgame/game.hpp"

namespace hamgame {

inline constexpr std::size_t kDefaultGridResolution = 24;

struct BestResponseOptions {
  StrategyMode mode = StrategyMode::kFull;
  // Points per angle axis of the restricted-mode grid (resolution^3 total).
  std::size_t grid_resolution = kDefaultGridResolution;
};

// sup over deviations rho^i of E^i(Tr^i(rho) (x)_i rho^i).
//   full:       top eigenvalue of the deviation operator
//   classical:  largest diagonal entry of the deviation operator
//   restricted: max over a grid of SU(2) pure strategies (alpha = 0); needs a
//               4-dimensional player space whose labels name built-in operators
double best_response_value(const AbstractGame& game, const StrategyProfile& profile,
                           std::size_t player, const BestResponseOptions& options = {});

// best_response_value - expected_payoff
double regret(const AbstractGame& game, const StrategyProfile& profile, std::size_t player,
              const BestResponseOptions& options = {});

struct NashVerdict {
  bool is_nash = false;
  std::vector<double> regrets;
  double max_regret = 0.0;
};

NashVerdict is_nash(const AbstractGame& game, const StrategyProfile& profile, double tol,
                    const BestResponseOptions& options = {});

// Max over the restricted grid of <s|reduced|s>, with |s> the coefficients of
// su2_strategy(0, b, g, d) in `basis`. Parallel max-reduction over the grid.
double restricted_best_response(const CMatrix& reduced, const StrategyBasis& basis,
                                std::size_t resolution = kDefaultGridResolution);

// Grid angles (beta, gamma, delta) of point `index` in [0, resolution^3).
std::array<double, 3> restricted_grid_angles(std::size_t index, std::size_t resolution);

// Basis operators recovered from labels through the built-in name table.
StrategyBasis basis_from_labels(std::span<const std::string> labels);

// One player's entries of a restricted 4x4 spin-rotating-game state:
//   [[p11, alpha, beta, gamma],
//    [alpha, p22, mu, nu],
//    [beta, mu, p33, delta],
//    [gamma, nu, delta, p44]]
struct SrgVariables {
  double p11 = 0.25, p22 = 0.25, p33 = 0.25, p44 = 0.25;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, mu = 0.0, nu = 0.0, delta = 0.0;

  CMatrix matrix() const;
};

// Closed-form payoff of player 1 in the restricted-basis SRG (E^2 = -E^1).
// Assumes unit trace; p11 and p44 do not appear.
double srg_payoff_polynomial(const SrgVariables& first, const SrgVariables& second);

// Free parameters of one player's equilibrium-family state.
struct SrgFamilyParams {
  double p_a = 0.25, p_b = 0.25;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, mu = 0.0;
};

// Player 1: nu = beta, delta = -alpha; player 2: nu = -beta, delta = alpha.
// Diagonals (p_a, p_b, 1/2 - p_b, 1/2 - p_a).
SrgVariables srg_family_variables(const SrgFamilyParams& params, std::size_t player);

// Restricted product profile of the family; throws NumericalError when a
// player's matrix is not PSD.
StrategyProfile srg_ne_family(const SrgFamilyParams& first, const SrgFamilyParams& second);

// Parameter vector -> one raw state per player, with the owning player of each
// parameter.
struct ParameterizedProfile {
  std::function<std::vector<CMatrix>(std::span<const double>)> build;
  std::vector<std::size_t> owner;
};

// Max over players i and parameters x owned by other players of
// |dE^i/dx|, by central differences with step h.
double stationarity_check(const AbstractGame& game, const ParameterizedProfile& profile,
                          std::span<const double> at, double h = 1e-5);

// 18 parameters: per player (p22, p33, p44, alpha, beta, gamma, mu, nu, delta),
// with p11 = 1 - p22 - p33 - p44.
ParameterizedProfile srg_parameterization();
std::vector<double> srg_parameters(const SrgVariables& first, const SrgVariables& second);

}  // namespace hamgame
