#pragma once

// When does a game with Hermitian payoff operators collapse to a classical
// payoff table? Commutation of the operators, a common eigenbasis, product
// (Schmidt rank 1) tests on its vectors, and the resulting reduction.

#include <span>
#include <string>
#include <vector>

#include "hamgame/compiler.hpp"
#include "hamgame/game.hpp"

namespace hamgame {

struct CommutationReport {
  bool commute = false;
  // Largest Frobenius norm of [H^i, H^j] over pairs i < j.
  double max_norm = 0.0;
};

CommutationReport pairwise_commute(const AbstractGame& game, double tol = 1e-10);

struct CommonEigenvector {
  std::vector<Complex> vector;
  // <v|H^i|v> for each player.
  std::vector<double> eigenvalues;
  // Dimension of the joint degenerate block the vector was chosen from.
  std::size_t block_size = 1;
};

// Simultaneous diagonalization: eigendecompose H^1, then refine each block of
// eigenvalues closer than `gap` by the next operator, and so on. Blocks whose
// projector is diagonal in the joint computational basis are resolved into
// computational basis vectors. Throws DomainError if the operators do not
// commute within `tol`.
std::vector<CommonEigenvector> common_eigenbasis(const AbstractGame& game, double tol = 1e-8,
                                                 double gap = 1e-8);

struct SchmidtResult {
  bool is_product = false;
  // Nonincreasing singular values of the reshaped L1 x L2 coefficient matrix.
  std::vector<double> values;
};

// Bipartite product test; `dims` must hold exactly two entries.
SchmidtResult product_form_check(std::span<const Complex> v, std::span<const std::size_t> dims,
                                 double tol = 1e-8);

enum class ReductionKind { kProductEigenbasis, kDiagonalRestriction };
std::string_view to_string(ReductionKind kind);

struct ClassicalReduction {
  ReductionKind kind = ReductionKind::kDiagonalRestriction;
  std::vector<PayoffTable> tables;
  std::vector<std::vector<std::string>> labels;
  // Product eigenbasis per player (one vector per classical strategy); empty
  // for the diagonal-restriction fallback.
  std::vector<std::vector<std::vector<Complex>>> player_bases;
  CommutationReport commutation;
  // Schmidt values of every common eigenvector, when they were computed.
  std::vector<std::vector<double>> schmidt_values;
  std::string diagnosis;
  std::vector<std::string> notes;
};

// Tries the commuting + product-eigenbasis reduction first and falls back to
// the diagonal parts of the operators. Never throws for a valid game.
ClassicalReduction classical_reduction(const AbstractGame& game, double tol = 1e-8);

// Rebuilds H^i = sum_ab T^i[a][b] |e_a f_b><e_a f_b| from a product reduction.
std::vector<CMatrix> rebuild_from_reduction(const ClassicalReduction& reduction);

}  // namespace hamgame
