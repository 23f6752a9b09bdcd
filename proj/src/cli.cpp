#include "hamgame/cli.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hamgame/compiler.hpp"
#include "hamgame/equilibrium.hpp"
#include "hamgame/error.hpp"
#include "hamgame/gamefile.hpp"
#include "hamgame/parallel.hpp"
#include "hamgame/payoff.hpp"
#include "hamgame/reducibility.hpp"
#include "hamgame/solver.hpp"

namespace hamgame::cli {
namespace {

using io::Json;

constexpr const char* kTraceHelp =
    "Trace CSV (--trace): header row, then one row per (beta, sweep, player):\n"
    "  beta,sweep,player,payoff,p_<label>...,delta_norm\n"
    "sweep and player are 1-based. p_<label> columns hold the diagonal of the\n"
    "player's state after the sweep, named by the strategy labels when every\n"
    "player shares them and p_1..p_L otherwise. delta_norm is the Frobenius norm\n"
    "of that player's state change in the sweep.";

struct CompileOptions {
  std::string game;
  bool classical = false;
  std::string basis;
  std::string out;
};

struct PayoffOptions {
  std::string game;
  std::string profile;
};

struct SolveOptions {
  std::string game;
  std::optional<double> beta;
  std::vector<double> betas;
  std::size_t max_sweeps = 1000;
  double tol = 1e-10;
  double damping = 1.0;
  std::string mode = "full";
  std::uint64_t seed = 0;
  std::string init = "uniform";
  std::string out;
  std::string trace;
  bool simultaneous = false;
  bool metropolis = false;
  std::size_t samples = 10000;
  std::size_t burn_in = 1000;
  std::size_t grid = kDefaultGridResolution;
};

struct VerifyOptions {
  std::string game;
  std::string profile;
  std::string mode = "full";
  double tol = 1e-6;
  std::size_t grid = kDefaultGridResolution;
};

struct ReduceOptions {
  std::string game;
  double tol = 1e-8;
};

AbstractGame as_abstract(const AnyGame& game) {
  if (const auto* a = std::get_if<AbstractGame>(&game)) return *a;
  return compile(std::get<ManipulativeGame>(game));
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json nested_table(const PayoffTable& table) {
  // Row-major values -> nested arrays of the table's shape.
  std::function<Json(std::size_t, std::size_t)> build = [&](std::size_t level, std::size_t offset) {
    if (level == table.shape.size()) return Json(table.values[offset]);
    std::size_t stride = 1;
    for (std::size_t k = level + 1; k < table.shape.size(); ++k) stride *= table.shape[k];
    Json arr = Json::array();
    for (std::size_t i = 0; i < table.shape[level]; ++i) arr.push_back(build(level + 1, offset + i * stride));
    return arr;
  };
  return build(0, 0);
}

void emit(std::ostream& out, const Json& report) { out << report.dump(2) << '\n'; }

Json base_report(const std::string& command, const std::string& game, const AbstractGame& g) {
  Json report;
  report["command"] = command;
  report["game"] = {{"source", game}, {"name", g.name}, {"dims", g.dims}};
  return report;
}

int cmd_compile(const CompileOptions& o, std::ostream& out) {
  const AnyGame any = io::load_game(o.game);
  const auto* mg = std::get_if<ManipulativeGame>(&any);
  if (!mg) throw DomainError(o.game + ": compile needs a manipulative game definition");
  ManipulativeGame game = *mg;

  std::optional<StrategyBasis> basis;
  if (!o.basis.empty()) basis = StrategyBasis::from_names(split_names(o.basis));

  AbstractGame result;
  if (o.classical || game.classical) {
    if (basis) game.bases.assign(game.players(), *basis);
    result = compile_classical(game);
  } else {
    result = compile(game);
    if (basis) {
      const std::vector<StrategyBasis> to(game.players(), *basis);
      result = change_strategy_basis(result, game.bases, to);
    }
  }

  const Json game_json = io::game_to_json(result);
  if (!o.out.empty()) io::write_text_file(o.out, game_json.dump(2) + "\n");

  Json report = base_report("compile", o.game, result);
  report["config"] = {{"classical", o.classical},
                      {"basis", o.basis.empty() ? Json(nullptr) : Json(split_names(o.basis))},
                      {"out", o.out.empty() ? Json(nullptr) : Json(o.out)}};
  Json hermitian = Json::array();
  for (const auto& h : result.payoff_ops) hermitian.push_back(is_hermitian(h));
  report["results"] = {{"hermitian", hermitian}, {"compiled", game_json}};
  report["trace"] = nullptr;
  emit(out, report);
  return kExitOk;
}

StrategyProfile profile_or_uniform(const std::string& path, const AbstractGame& game) {
  if (path.empty() || path == "uniform") return StrategyProfile::uniform(game.dims);
  return io::load_profile(path);
}

int cmd_payoff(const PayoffOptions& o, std::ostream& out) {
  const AbstractGame game = as_abstract(io::load_game(o.game));
  const StrategyProfile profile = profile_or_uniform(o.profile, game);
  profile.check_dims(game.dims);
  Json report = base_report("payoff", o.game, game);
  report["config"] = {{"profile", o.profile.empty() ? "uniform" : o.profile}};
  report["results"] = {{"payoffs", expected_payoffs(game, profile)}};
  report["trace"] = nullptr;
  emit(out, report);
  return kExitOk;
}

// Regrets per player, or null when the mode's best response is unavailable.
Json regrets_json(const AbstractGame& game, const StrategyProfile& profile, StrategyMode mode,
                  std::size_t grid) {
  BestResponseOptions options{mode, grid};
  try {
    const NashVerdict v = is_nash(game, profile, 0.0, options);
    return {{"regrets", v.regrets}, {"max_regret", v.max_regret}};
  } catch (const DomainError& e) {
    return {{"regrets", nullptr}, {"max_regret", nullptr}, {"note", e.what()}};
  }
}

std::vector<std::string> trace_columns(const AbstractGame& game) {
  std::size_t width = *std::max_element(game.dims.begin(), game.dims.end());
  bool shared = game.basis_labels.size() == game.players();
  for (const auto& l : game.basis_labels) shared = shared && l == game.basis_labels.front();
  std::vector<std::string> cols;
  for (std::size_t k = 0; k < width; ++k)
    cols.push_back("p_" + (shared ? game.basis_labels.front()[k] : std::to_string(k + 1)));
  return cols;
}

void write_trace(const std::string& path, const AbstractGame& game, const std::vector<BetaPoint>& points) {
  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "beta,sweep,player,payoff";
  const auto cols = trace_columns(game);
  for (const auto& c : cols) csv << ',' << c;
  csv << ",delta_norm\n";
  for (const auto& point : points) {
    const auto& sweeps = point.result.trace.sweeps;
    for (std::size_t s = 0; s < sweeps.size(); ++s) {
      for (std::size_t p = 0; p < game.players(); ++p) {
        csv << point.beta << ',' << s + 1 << ',' << p + 1 << ',' << sweeps[s].payoffs[p];
        for (std::size_t k = 0; k < cols.size(); ++k) {
          csv << ',';
          if (k < sweeps[s].diagonals[p].size()) csv << sweeps[s].diagonals[p][k];
        }
        csv << ',' << sweeps[s].player_change[p] << '\n';
      }
    }
  }
  io::write_text_file(path, csv.str());
}

Json solve_point_json(const AbstractGame& game, const BetaPoint& point, StrategyMode mode, std::size_t grid) {
  const auto& trace = point.result.trace;
  Json diagonals = Json::array();
  for (const auto& rho : point.result.profile) diagonals.push_back(rho.matrix().real_diagonal());
  Json j;
  j["beta"] = point.beta;
  j["status"] = std::string(to_string(trace.status));
  j["sweeps"] = trace.sweeps.size();
  j["final_delta"] = trace.sweeps.empty() ? 0.0 : trace.sweeps.back().change;
  j["payoffs"] = point.payoffs;
  j["diagonals"] = std::move(diagonals);
  const Json regret = regrets_json(game, point.result.as_profile(), mode, grid);
  for (const auto& [k, v] : regret.items()) j[k] = v;
  if (mode == StrategyMode::kRestricted) j["max_discarded_imag"] = trace.max_discarded_imag;
  return j;
}

int cmd_solve(const SolveOptions& o, std::ostream& out) {
  const AbstractGame game = as_abstract(io::load_game(o.game));
  SolverConfig config;
  config.beta = o.beta.value_or(1.0);
  config.max_sweeps = o.max_sweeps;
  config.tolerance = o.tol;
  config.damping = o.damping;
  config.mode = parse_strategy_mode(o.mode);
  config.update = o.simultaneous ? UpdateOrder::kSimultaneous : UpdateOrder::kSequential;
  config.seed = o.seed;
  config.validate();

  Json report = base_report("solve", o.game, game);
  report["config"] = {{"beta", o.betas.empty() ? Json(config.beta) : Json(nullptr)},
                      {"betas", o.betas.empty() ? Json(nullptr) : Json(o.betas)},
                      {"max_sweeps", o.max_sweeps},
                      {"tol", o.tol},
                      {"damping", o.damping},
                      {"mode", o.mode},
                      {"update", o.simultaneous ? "simultaneous" : "sequential"},
                      {"seed", o.seed},
                      {"init", o.init},
                      {"metropolis", o.metropolis}};

  if (o.metropolis) {
    if (!o.betas.empty()) throw DomainError("--metropolis takes a single --beta");
    const JointDistribution dist = metropolis_sample(game, config, o.burn_in, o.samples);
    report["config"]["samples"] = o.samples;
    report["config"]["burn_in"] = o.burn_in;
    Json cells = Json::array();
    for (std::size_t k = 0; k < dist.probabilities.size(); ++k) {
      const auto digits = unflatten(k, dist.dims);
      Json strategy = Json::array();
      for (std::size_t p = 0; p < digits.size(); ++p) strategy.push_back(game.basis_labels[p][digits[p]]);
      cells.push_back({{"strategies", strategy}, {"probability", dist.probabilities[k]}});
    }
    report["results"] = {{"distribution", cells}, {"acceptance_rate", dist.acceptance_rate}};
    report["trace"] = nullptr;
    emit(out, report);
    return kExitOk;
  }

  const StrategyProfile initial = profile_or_uniform(o.init, game);
  std::vector<BetaPoint> points;
  if (o.betas.empty()) {
    BetaPoint point;
    point.beta = config.beta;
    point.result = solve(game, initial, config);
    point.payoffs = expected_payoffs(game, point.result.as_profile());
    points.push_back(std::move(point));
  } else {
    points = beta_sweep(game, initial, config, o.betas);
  }

  if (!o.trace.empty()) write_trace(o.trace, game, points);
  if (!o.out.empty()) io::write_text_file(o.out, io::profile_to_json(points.back().result.as_profile()).dump(2) + "\n");

  const StrategyMode mode = config.mode;
  if (o.betas.empty()) {
    report["results"] = solve_point_json(game, points.front(), mode, o.grid);
  } else {
    Json arr = Json::array();
    for (const auto& p : points) arr.push_back(solve_point_json(game, p, mode, o.grid));
    report["results"] = {{"points", arr}};
  }
  report["trace"] = o.trace.empty() ? Json(nullptr) : Json(o.trace);
  emit(out, report);
  return kExitOk;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const AbstractGame game = as_abstract(io::load_game(o.game));
  const StrategyProfile profile = io::load_profile(o.profile);
  profile.check_dims(game.dims);
  const BestResponseOptions options{parse_strategy_mode(o.mode), o.grid};
  const NashVerdict verdict = is_nash(game, profile, o.tol, options);

  Json report = base_report("verify", o.game, game);
  report["config"] = {{"profile", o.profile}, {"mode", o.mode}, {"tol", o.tol}, {"grid", o.grid}};
  report["results"] = {{"is_nash", verdict.is_nash},
                       {"payoffs", expected_payoffs(game, profile)},
                       {"regrets", verdict.regrets},
                       {"max_regret", verdict.max_regret}};
  report["trace"] = nullptr;
  emit(out, report);
  return verdict.is_nash ? kExitOk : kExitNotNash;
}

int cmd_reduce(const ReduceOptions& o, std::ostream& out) {
  const AbstractGame game = as_abstract(io::load_game(o.game));
  const ClassicalReduction red = classical_reduction(game, o.tol);

  Json report = base_report("reduce", o.game, game);
  report["config"] = {{"tol", o.tol}};
  Json results;
  results["commuting"] = red.commutation.commute;
  results["max_commutator_norm"] = red.commutation.max_norm;
  results["reduction"] = std::string(to_string(red.kind));
  results["success"] = red.kind == ReductionKind::kProductEigenbasis;
  results["diagnosis"] = red.diagnosis;
  results["notes"] = red.notes;
  double max_second = 0.0;
  for (const auto& s : red.schmidt_values)
    if (s.size() > 1) max_second = std::max(max_second, s[1]);
  results["schmidt_values"] = red.schmidt_values;
  results["max_second_schmidt_value"] = max_second;
  Json tables = Json::array();
  for (const auto& t : red.tables) tables.push_back(nested_table(t));
  results["labels"] = red.labels;
  results["tables"] = std::move(tables);
  report["results"] = std::move(results);
  report["trace"] = nullptr;
  emit(out, report);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hamiltonian-form game toolkit: compile, evaluate, solve, verify and reduce games.", "hamgame"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads for the parallel kernels (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);
  const auto game_help = "game file, or builtin:NAME (pfg, srg, srg_restricted, prisoners_dilemma)";
  const auto modes = CLI::IsMember({"full", "restricted", "classical"});

  CompileOptions co;
  auto* compile_cmd = app.add_subcommand("compile", "compile a manipulative game into payoff operators");
  compile_cmd->add_option("game", co.game, game_help)->required();
  compile_cmd->add_flag("--classical", co.classical, "keep only the diagonal (classical) payoff terms");
  compile_cmd->add_option("--basis", co.basis, "comma-separated operator names for every player, e.g. I,iX,iY,iZ");
  compile_cmd->add_option("--out", co.out, "write the compiled game file here");

  PayoffOptions po;
  auto* payoff_cmd = app.add_subcommand("payoff", "expected payoff of every player");
  payoff_cmd->add_option("game", po.game, game_help)->required();
  payoff_cmd->add_option("--profile", po.profile, "profile file (default: uniform)");

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "Boltzmann fixed-point iteration or Metropolis sampling");
  solve_cmd->add_option("game", so.game, game_help)->required();
  auto* beta_opt = solve_cmd->add_option("--beta", so.beta, "rationality parameter (default 1)");
  auto* betas_opt = solve_cmd->add_option("--betas", so.betas, "comma-separated list of betas to sweep")
                        ->delimiter(',');
  beta_opt->excludes(betas_opt);
  solve_cmd->add_option("--max-sweeps", so.max_sweeps, "sweep limit")->capture_default_str();
  solve_cmd->add_option("--tol", so.tol, "convergence threshold on the max state change")->capture_default_str();
  solve_cmd->add_option("--damping", so.damping, "update weight in (0, 1]")->capture_default_str();
  solve_cmd->add_option("--mode", so.mode, "full | restricted | classical")->check(modes)->capture_default_str();
  solve_cmd->add_option("--seed", so.seed, "random seed (Metropolis)")->capture_default_str();
  solve_cmd->add_option("--init", so.init, "uniform, or a profile file")->capture_default_str();
  solve_cmd->add_option("--out", so.out, "write the final profile file here");
  solve_cmd->add_option("--trace", so.trace, "write the per-sweep CSV trace here");
  solve_cmd->add_option("--grid", so.grid, "restricted-mode regret grid points per angle")->capture_default_str();
  solve_cmd->add_flag("--simultaneous", so.simultaneous, "update all players from the previous sweep");
  solve_cmd->add_flag("--metropolis", so.metropolis, "sample a diagonal game with a Metropolis chain instead");
  solve_cmd->add_option("--samples", so.samples, "Metropolis samples")->capture_default_str();
  solve_cmd->add_option("--burn-in", so.burn_in, "Metropolis burn-in sweeps")->capture_default_str();
  solve_cmd->footer(kTraceHelp);

  VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "check a profile for Nash equilibrium (exit 3 if not)");
  verify_cmd->add_option("game", vo.game, game_help)->required();
  verify_cmd->add_option("--profile", vo.profile, "profile file")->required();
  verify_cmd->add_option("--mode", vo.mode, "full | restricted | classical")->check(modes)->capture_default_str();
  verify_cmd->add_option("--tol", vo.tol, "largest regret still accepted")->capture_default_str();
  verify_cmd->add_option("--grid", vo.grid, "restricted-mode grid points per angle")->capture_default_str();

  ReduceOptions ro;
  auto* reduce_cmd = app.add_subcommand("reduce", "test whether the game reduces to a classical table");
  reduce_cmd->add_option("game", ro.game, game_help)->required();
  reduce_cmd->add_option("--tol", ro.tol, "commutation and product-form tolerance")->capture_default_str();

  app.footer("Exit codes: 0 ok, 2 usage or parse error, 3 verify found no equilibrium, 4 numerical failure.");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    set_threads(threads);
    if (*compile_cmd) return cmd_compile(co, out);
    if (*payoff_cmd) return cmd_payoff(po, out);
    if (*solve_cmd) return cmd_solve(so, out);
    if (*verify_cmd) return cmd_verify(vo, out);
    if (*reduce_cmd) return cmd_reduce(ro, out);
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace hamgame::cli
