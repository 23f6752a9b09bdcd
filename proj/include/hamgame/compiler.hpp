#pragma once

// Compilation of manipulative games into payoff operators, basis changes,
// sub-game extraction and import of classical payoff tables.

#include <span>
#include <string>
#include <vector>

#include "hamgame/game.hpp"

namespace hamgame {

// <mu|H^i|nu> = Tr(P^i L(nu) rho0 L(mu)^dagger), where L(s) applies the
// players' operators in `order`, first player innermost. Joint indices put
// player 0 slowest. Rows are computed in parallel. Games flagged classical
// go through compile_classical.
AbstractGame compile(const ManipulativeGame& game);

// Diagonal-only variant: <mu|H^i|mu> = Tr(P^i L(mu) rho0 L(mu)^dagger).
AbstractGame compile_classical(const ManipulativeGame& game);

// Effective operator L(s) for a joint basis multi-index.
CMatrix effective_operator(const ManipulativeGame& game, std::span<const std::size_t> labels);

// Change-of-basis matrix T_{mu nu} = trace_inner(new_mu, old_nu). Throws
// DomainError if T is not unitary within `tol` (the bases span different spaces).
CMatrix basis_change_matrix(const StrategyBasis& from, const StrategyBasis& to,
                            double tol = kHermitianTol);

// H' = (T_1 (x) ... (x) T_N) H (T_1 (x) ... (x) T_N)^dagger.
AbstractGame change_strategy_basis(const AbstractGame& game,
                                   std::span<const StrategyBasis> from,
                                   std::span<const StrategyBasis> to,
                                   double tol = kHermitianTol);

// Restrict every H^i to the joint labels in the product of `keep`.
// Order of kept labels follows the game, not `keep`.
AbstractGame extract_subgame(const AbstractGame& game,
                             const std::vector<std::vector<std::string>>& keep);

// Real payoff table over joint pure strategies, row-major with player 0 slowest.
struct PayoffTable {
  std::vector<std::size_t> shape;
  std::vector<double> values;
};

AbstractGame from_classical_table(const std::vector<PayoffTable>& tables,
                                  std::string name = "classical");

}  // namespace hamgame
