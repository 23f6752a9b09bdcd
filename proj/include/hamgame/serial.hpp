#pragma once

// Single-threaded reference implementations of the parallel kernels. They
// follow the defining formulas as literally as possible and exist so tests
// and the benchmark can compare the parallel paths against them.

#include <span>
#include <vector>

#include "hamgame/compiler.hpp"
#include "hamgame/equilibrium.hpp"
#include "hamgame/solver.hpp"

namespace hamgame::serial {

AbstractGame compile(const ManipulativeGame& game);

double restricted_best_response(const CMatrix& reduced, const StrategyBasis& basis,
                                std::size_t resolution);

std::vector<BetaPoint> beta_sweep(const AbstractGame& game, const StrategyProfile& initial,
                                  const SolverConfig& config, std::span<const double> betas);

}  // namespace hamgame::serial
