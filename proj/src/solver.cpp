#include "hamgame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hamgame/error.hpp"
#include "hamgame/parallel.hpp"
#include "hamgame/payoff.hpp"

namespace hamgame {

void SolverConfig::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");
  if (max_sweeps == 0) throw DomainError("max_sweeps must be positive");
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw DomainError("damping must lie in (0, 1]");
}

std::string_view to_string(SolverStatus status) {
  return status == SolverStatus::kConverged ? "converged" : "max_sweeps_reached";
}

DensityMatrix boltzmann_state(const CMatrix& reduced, double beta) {
  const HermEigen eig = herm_eigen(reduced);
  double top = -std::numeric_limits<double>::infinity();
  for (double lambda : eig.eigenvalues) top = std::max(top, beta * lambda);
  std::vector<double> weights(eig.eigenvalues.size());
  double z = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    weights[k] = std::exp(beta * eig.eigenvalues[k] - top);
    z += weights[k];
  }
  for (double& w : weights) w /= z;
  CMatrix rho = reassemble(eig.eigenvectors, weights);
  return DensityMatrix((rho + dagger(rho)) * 0.5, 1e-9);
}

DensityMatrix boltzmann_step(const AbstractGame& game, const StrategyProfile& profile,
                             std::size_t player, double beta) {
  return boltzmann_state(reduced_payoff_matrix(game, profile, player), beta);
}

namespace {

CMatrix diagonal_part(const CMatrix& m) {
  CMatrix out(m.dim());
  for (std::size_t k = 0; k < m.dim(); ++k) out(k, k) = m(k, k).real();
  return out;
}

SweepRecord record(const AbstractGame& game, const std::vector<CMatrix>& states,
                   std::vector<double> change) {
  SweepRecord rec;
  const CMatrix joint = kron_all(states);
  for (std::size_t p = 0; p < game.players(); ++p) {
    rec.payoffs.push_back(expected_payoff(game, joint, p));
    rec.diagonals.push_back(states[p].real_diagonal());
  }
  rec.change = change.empty() ? 0.0 : *std::max_element(change.begin(), change.end());
  rec.player_change = std::move(change);
  return rec;
}

}  // namespace

SolveResult solve(const AbstractGame& game, const StrategyProfile& initial,
                  const SolverConfig& config) {
  config.validate();
  game.validate();
  if (!initial.is_product()) throw DomainError("the Boltzmann solver needs a product profile");
  initial.check_dims(game.dims);

  std::vector<CMatrix> states;
  for (const auto& f : initial.factors()) states.push_back(f.matrix());

  SolverTrace trace;
  const std::size_t players = game.players();
  for (std::size_t sweep = 0; sweep < config.max_sweeps; ++sweep) {
    const std::vector<CMatrix> previous = states;
    const std::vector<CMatrix>& source =
        config.update == UpdateOrder::kSequential ? states : previous;
    std::vector<double> change(players);
    for (std::size_t p = 0; p < players; ++p) {
      CMatrix reduced = reduced_payoff_matrix(game, source, p);
      if (config.mode == StrategyMode::kClassical) reduced = diagonal_part(reduced);
      CMatrix target = boltzmann_state(reduced, config.beta).matrix();
      if (config.mode == StrategyMode::kRestricted) {
        trace.max_discarded_imag = std::max(trace.max_discarded_imag, target.max_imag());
        target = target.real_part();
      }
      CMatrix next = previous[p] * (1.0 - config.damping) + target * config.damping;
      change[p] = frobenius_norm(next - previous[p]);
      states[p] = std::move(next);
    }
    trace.sweeps.push_back(record(game, states, std::move(change)));
    if (trace.sweeps.back().change < config.tolerance) {
      trace.status = SolverStatus::kConverged;
      break;
    }
  }

  SolveResult result;
  for (auto& s : states) result.profile.emplace_back(std::move(s), 1e-8);
  result.trace = std::move(trace);
  return result;
}

std::vector<BetaPoint> beta_sweep(const AbstractGame& game, const StrategyProfile& initial,
                                  const SolverConfig& config, std::span<const double> betas) {
  std::vector<BetaPoint> out(betas.size());
  std::vector<std::exception_ptr> errors(betas.size());
  const auto count = static_cast<long long>(betas.size());
  HAMGAME_OMP_DYNAMIC_LOOP
  for (long long k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    try {
      SolverConfig cfg = config;
      cfg.beta = betas[idx];
      out[idx].beta = betas[idx];
      out[idx].result = solve(game, initial, cfg);
      out[idx].payoffs = expected_payoffs(game, out[idx].result.as_profile());
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

JointDistribution metropolis_sample(const AbstractGame& game, const SolverConfig& config,
                                    std::size_t burn_in, std::size_t samples) {
  config.validate();
  game.validate();
  if (!game.is_diagonal()) throw DomainError("Metropolis sampling needs a diagonal (classical) game");

  const std::size_t players = game.players();
  const std::size_t joint = game.joint_dim();
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> state(players);
  for (std::size_t p = 0; p < players; ++p)
    state[p] = std::uniform_int_distribution<std::size_t>(0, game.dims[p] - 1)(rng);

  JointDistribution out;
  out.dims = game.dims;
  out.probabilities.assign(joint, 0.0);
  std::size_t proposals = 0, accepted = 0;

  auto sweep_once = [&] {
    for (std::size_t p = 0; p < players; ++p) {
      const std::size_t options = game.dims[p];
      if (options < 2) continue;
      // Lazy symmetric proposal: uniform over all options, the current one
      // included. Excluding it makes a two-strategy chain periodic at beta 0.
      const std::size_t proposal = std::uniform_int_distribution<std::size_t>(0, options - 1)(rng);
      const std::size_t here = flatten(state, game.dims);
      std::vector<std::size_t> moved = state;
      moved[p] = proposal;
      const std::size_t there = flatten(moved, game.dims);
      const double gain = game.payoff_ops[p](there, there).real() - game.payoff_ops[p](here, here).real();
      ++proposals;
      if (gain >= 0.0 || unit(rng) < std::exp(config.beta * gain)) {
        state[p] = proposal;
        ++accepted;
      }
    }
  };

  for (std::size_t s = 0; s < burn_in; ++s) sweep_once();
  for (std::size_t s = 0; s < samples; ++s) {
    sweep_once();
    out.probabilities[flatten(state, game.dims)] += 1.0;
  }
  if (samples > 0)
    for (double& p : out.probabilities) p /= static_cast<double>(samples);
  out.samples = samples;
  out.acceptance_rate = proposals ? static_cast<double>(accepted) / static_cast<double>(proposals) : 1.0;
  return out;
}

}  // namespace hamgame
