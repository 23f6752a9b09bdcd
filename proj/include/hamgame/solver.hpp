#pragma once

// Boltzmann-exponential fixed-point iteration over per-player density
// matrices, beta sweeps, and a Metropolis sampler for diagonal games.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hamgame/game.hpp"

namespace hamgame {

enum class UpdateOrder {
  kSequential,    // players updated in index order, each seeing the latest states
  kSimultaneous,  // all players updated from the previous sweep's states
};

struct SolverConfig {
  double beta = 1.0;
  std::size_t max_sweeps = 1000;
  double tolerance = 1e-10;
  double damping = 1.0;
  StrategyMode mode = StrategyMode::kFull;
  UpdateOrder update = UpdateOrder::kSequential;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class SolverStatus { kConverged, kMaxSweepsReached };
std::string_view to_string(SolverStatus status);

struct SweepRecord {
  std::vector<double> payoffs;
  std::vector<std::vector<double>> diagonals;
  // Frobenius norm of each player's state change in this sweep.
  std::vector<double> player_change;
  // max over players of player_change
  double change = 0.0;
};

struct SolverTrace {
  std::vector<SweepRecord> sweeps;
  SolverStatus status = SolverStatus::kMaxSweepsReached;
  // Largest imaginary entry dropped by the restricted-mode real projection.
  double max_discarded_imag = 0.0;
};

struct SolveResult {
  std::vector<DensityMatrix> profile;
  SolverTrace trace;

  StrategyProfile as_profile() const { return StrategyProfile::product(profile); }
};

// exp(beta H^i_R) / Tr(exp(beta H^i_R)), evaluated with a shifted spectrum so
// large beta neither overflows nor underflows to 0/0.
DensityMatrix boltzmann_step(const AbstractGame& game, const StrategyProfile& profile,
                             std::size_t player, double beta);

// Normalized Boltzmann state of a Hermitian operator.
DensityMatrix boltzmann_state(const CMatrix& reduced, double beta);

SolveResult solve(const AbstractGame& game, const StrategyProfile& initial,
                  const SolverConfig& config);

struct BetaPoint {
  double beta = 0.0;
  SolveResult result;
  std::vector<double> payoffs;
};

// Independent solves, one per beta, run in parallel; results in input order.
std::vector<BetaPoint> beta_sweep(const AbstractGame& game, const StrategyProfile& initial,
                                  const SolverConfig& config, std::span<const double> betas);

struct JointDistribution {
  std::vector<std::size_t> dims;
  // Row-major over joint pure strategies, player 0 slowest.
  std::vector<double> probabilities;
  std::size_t samples = 0;
  double acceptance_rate = 0.0;
};

// Single-player flip Metropolis chain on a diagonal game. Each sweep visits
// players in index order; a player proposes a pure strategy uniformly from all
// of its options (possibly the current one) and accepts with min(1, exp(beta (payoff' - payoff))). One sample
// is recorded per sweep after `burn_in` sweeps. Seeded by config.seed.
JointDistribution metropolis_sample(const AbstractGame& game, const SolverConfig& config,
                                    std::size_t burn_in, std::size_t samples);

}  // namespace hamgame
