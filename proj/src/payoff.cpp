#include "hamgame/payoff.hpp"

#include <cmath>
#include <array>
#include <numeric>

#include "hamgame/error.hpp"

namespace hamgame {
namespace {

void check_player(const AbstractGame& game, std::size_t player) {
  if (player >= game.players())
    throw DimensionError("player " + std::to_string(player + 1) + " out of range");
}

std::vector<std::size_t> others(std::size_t players, std::size_t player) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < players; ++p)
    if (p != player) out.push_back(p);
  return out;
}

CMatrix hermitize(const CMatrix& m) { return (m + dagger(m)) * 0.5; }

}  // namespace

double expected_payoff(const AbstractGame& game, const CMatrix& joint, std::size_t player) {
  check_player(game, player);
  const CMatrix& h = game.payoff_ops[player];
  if (joint.dim() != h.dim())
    throw DimensionError("profile dimension " + std::to_string(joint.dim()) +
                         " differs from joint space " + std::to_string(h.dim()));
  // Tr(rho H) = sum_{rc} rho_rc H_cr
  Complex sum{};
  for (std::size_t r = 0; r < h.dim(); ++r)
    for (std::size_t c = 0; c < h.dim(); ++c) sum += joint(r, c) * h(c, r);
  const double scale = std::max(1.0, frobenius_norm(h));
  if (std::abs(sum.imag()) > kPayoffImagTol * scale)
    throw NumericalError("payoff has an imaginary residue of " + std::to_string(sum.imag()));
  return sum.real();
}

double expected_payoff(const AbstractGame& game, const StrategyProfile& profile, std::size_t player) {
  profile.check_dims(game.dims);
  return expected_payoff(game, profile.joint_matrix(), player);
}

std::vector<double> expected_payoffs(const AbstractGame& game, const StrategyProfile& profile) {
  profile.check_dims(game.dims);
  const CMatrix joint = profile.joint_matrix();
  std::vector<double> out;
  for (std::size_t p = 0; p < game.players(); ++p) out.push_back(expected_payoff(game, joint, p));
  return out;
}

CMatrix embed_factor(const CMatrix& rest, std::size_t player, const CMatrix& factor,
                     std::span<const std::size_t> dims) {
  if (player >= dims.size()) throw DimensionError("slot out of range");
  if (factor.dim() != dims[player]) throw DimensionError("factor dimension does not match its slot");
  const std::size_t joint = product_of(dims);
  if (rest.dim() * factor.dim() != joint)
    throw DimensionError("remaining factors do not fill the joint space");

  const auto rest_dims_idx = others(dims.size(), player);
  std::vector<std::size_t> rest_dims;
  for (std::size_t p : rest_dims_idx) rest_dims.push_back(dims[p]);

  std::vector<std::size_t> rest_index(joint), own_index(joint);
  for (std::size_t j = 0; j < joint; ++j) {
    const auto digits = unflatten(j, dims);
    std::vector<std::size_t> rest_digits;
    for (std::size_t p : rest_dims_idx) rest_digits.push_back(digits[p]);
    rest_index[j] = flatten(rest_digits, rest_dims);
    own_index[j] = digits[player];
  }
  CMatrix out(joint);
  for (std::size_t r = 0; r < joint; ++r)
    for (std::size_t c = 0; c < joint; ++c)
      out(r, c) = rest(rest_index[r], rest_index[c]) * factor(own_index[r], own_index[c]);
  return out;
}

CMatrix deviation_operator(const AbstractGame& game, const CMatrix& joint, std::size_t player) {
  check_player(game, player);
  if (joint.dim() != game.joint_dim()) throw DimensionError("profile does not fit the joint space");
  CMatrix rest = CMatrix::identity(1);
  if (game.players() > 1) {
    const auto keep = others(game.players(), player);
    rest = partial_trace(joint, game.dims, keep);
  }
  const CMatrix lifted = embed_factor(rest, player, CMatrix::identity(game.dims[player]), game.dims);
  const std::array<std::size_t, 1> keep{player};
  return hermitize(partial_trace(matmul(lifted, game.payoff_ops[player]), game.dims, keep));
}

CMatrix reduced_payoff_matrix(const AbstractGame& game, std::span<const CMatrix> states,
                              std::size_t player) {
  check_player(game, player);
  if (states.size() != game.players()) throw DimensionError("need one state per player");
  std::vector<CMatrix> rest_factors;
  for (std::size_t p = 0; p < game.players(); ++p) {
    if (states[p].dim() != game.dims[p])
      throw DimensionError("state of player " + std::to_string(p + 1) + " has the wrong dimension");
    if (p != player) rest_factors.push_back(states[p]);
  }
  const CMatrix rest = kron_all(rest_factors);
  const CMatrix lifted = embed_factor(rest, player, CMatrix::identity(game.dims[player]), game.dims);
  const std::array<std::size_t, 1> keep{player};
  return hermitize(partial_trace(matmul(lifted, game.payoff_ops[player]), game.dims, keep));
}

CMatrix reduced_payoff_matrix(const AbstractGame& game, const StrategyProfile& profile,
                              std::size_t player) {
  if (!profile.is_product())
    throw DomainError("reduced payoff matrix is defined for product profiles only");
  profile.check_dims(game.dims);
  std::vector<CMatrix> states;
  for (const auto& f : profile.factors()) states.push_back(f.matrix());
  return reduced_payoff_matrix(game, states, player);
}

DensityMatrix embed_deviation(const DensityMatrix& joint, std::size_t player,
                              const DensityMatrix& dev, std::span<const std::size_t> dims) {
  if (joint.dim() != product_of(dims)) throw DimensionError("joint state does not match dims");
  if (player >= dims.size()) throw DimensionError("player out of range");
  if (dev.dim() != dims[player]) throw DimensionError("deviation dimension does not match the player");
  CMatrix rest = CMatrix::identity(1);
  if (dims.size() > 1) {
    const auto keep = others(dims.size(), player);
    rest = partial_trace(joint.matrix(), dims, keep);
  }
  return DensityMatrix(embed_factor(rest, player, dev.matrix(), dims), 1e-9);
}

}  // namespace hamgame
