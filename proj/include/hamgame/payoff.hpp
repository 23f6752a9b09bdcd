#pragma once

// Payoff evaluation E^i = Tr(rho H^i), reduced payoff matrices and the
// deviation embedding used by the generalized equilibrium condition.

#include <span>

#include "hamgame/game.hpp"

namespace hamgame {

inline constexpr double kPayoffImagTol = 1e-10;

// Tr(rho H^i) for a profile of the game. Throws NumericalError if the
// imaginary residue exceeds kPayoffImagTol.
double expected_payoff(const AbstractGame& game, const StrategyProfile& profile,
                       std::size_t player);

// Same, on a raw joint operator. No density-matrix checks on `joint`; used for
// finite differences that may leave the state space.
double expected_payoff(const AbstractGame& game, const CMatrix& joint, std::size_t player);

std::vector<double> expected_payoffs(const AbstractGame& game, const StrategyProfile& profile);

// H^i_R = Tr_{-i}(rho^1 ... rho^{i-1} rho^{i+1} ... rho^N H^i). Joint profiles
// are rejected; use deviation_operator for those.
CMatrix reduced_payoff_matrix(const AbstractGame& game, const StrategyProfile& profile,
                              std::size_t player);

// Raw-state variant. `states` holds one matrix per player; the entry of
// `player` is ignored.
CMatrix reduced_payoff_matrix(const AbstractGame& game, std::span<const CMatrix> states,
                              std::size_t player);

// Operator D with Tr(dev D) = E^i(Tr^i(rho) (x)_i dev) for every deviation
// `dev`: Tr_{-i}((Tr^i(rho) (x)_i I) H^i). Equals the reduced payoff matrix
// on product profiles.
CMatrix deviation_operator(const AbstractGame& game, const CMatrix& joint, std::size_t player);

// Places `factor` in slot `player` of a joint space whose other factors are
// described by `rest` (an operator over the remaining players in order).
CMatrix embed_factor(const CMatrix& rest, std::size_t player, const CMatrix& factor,
                     std::span<const std::size_t> dims);

// Tr^i(joint) (x)_i dev, with the original factor ordering restored.
DensityMatrix embed_deviation(const DensityMatrix& joint, std::size_t player,
                              const DensityMatrix& dev, std::span<const std::size_t> dims);

}  // namespace hamgame
