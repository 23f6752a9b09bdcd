#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hamgame/compiler.hpp"
#include "hamgame/error.hpp"
#include "hamgame/payoff.hpp"
#include "support.hpp"

using namespace hamgame;
using testing::max_abs_diff;

namespace {

const Complex kI{0.0, 1.0};

ManipulativeGame manip(const char* name) { return std::get<ManipulativeGame>(builtin(name)); }

// Tr(P L(mu) rho0 L(mu)^dagger) evaluated directly on the object.
double direct_payoff(const ManipulativeGame& g, std::size_t player, std::span<const std::size_t> labels) {
  CMatrix l = CMatrix::identity(g.object_dim());
  for (std::size_t p : g.order) l = testing::naive_mul(g.bases[p].operators[labels[p]], l);
  const CMatrix m = testing::naive_mul(testing::naive_mul(g.observables[player], l),
                                       testing::naive_mul(g.initial_state, testing::naive_dagger(l)));
  return testing::naive_trace(m).real();
}

std::vector<double> sorted_eigenvalues(const CMatrix& h) {
  auto v = herm_eigen(h).eigenvalues;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("compile pfg") {
  const AbstractGame g = compile(manip("pfg"));
  const std::array<double, 4> d{1, -1, -1, 1};
  CHECK(max_abs_diff(g.payoff_ops[0], CMatrix::diagonal(d)) < 1e-12);
  CHECK(max_abs_diff(g.payoff_ops[1], -CMatrix::diagonal(d)) < 1e-12);
  CHECK(g.basis_labels[0] == std::vector<std::string>{"I", "X"});
  CHECK(max_abs_diff(compile_classical(manip("pfg")).payoff_ops[0], CMatrix::diagonal(d)) < 1e-12);

  // Without the classical flag the same definition keeps its coherences and
  // matches the {I,X} block of the spin-rotating game.
  ManipulativeGame quantum = manip("pfg");
  quantum.classical = false;
  const AbstractGame q = compile(quantum);
  const CMatrix sub{{1, 0, 0, 1}, {0, -1, -1, 0}, {0, -1, -1, 0}, {1, 0, 0, 1}};
  CHECK(max_abs_diff(q.payoff_ops[0], sub) < 1e-12);
  CHECK(q.payoff_ops[0].real_diagonal() == g.payoff_ops[0].real_diagonal());
}

TEST_CASE("compile srg reproduces the printed operator") {
  const AbstractGame g = compile(manip("srg"));
  const CMatrix printed = testing::srg_printed_h1();
  CHECK(max_abs_diff(g.payoff_ops[0], printed) < 1e-12);
  CHECK(max_abs_diff(g.payoff_ops[1], -printed) < 1e-12);
  // row II, column XY
  CHECK(std::abs(g.payoff_ops[0](0, 6) - (-kI)) < 1e-12);
}

TEST_CASE("compile_classical keeps the diagonal") {
  for (const char* name : {"pfg", "srg", "srg_restricted"}) {
    const AbstractGame full = compile(manip(name));
    const AbstractGame classical = compile_classical(manip(name));
    CHECK(classical.is_diagonal());
    for (std::size_t p = 0; p < full.players(); ++p) {
      const auto a = full.payoff_ops[p].real_diagonal();
      const auto b = classical.payoff_ops[p].real_diagonal();
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
    }
  }
  // The diagonal of the penny-flip game is the traditional table G flattened.
  const AbstractGame c = compile_classical(manip("pfg"));
  CHECK(c.payoff_ops[0].real_diagonal() == std::vector<double>{1, -1, -1, 1});
  CHECK(c.payoff_ops[1].real_diagonal() == std::vector<double>{-1, 1, 1, -1});
}

TEST_CASE("pure-strategy payoffs agree with the manipulative evaluation") {
  for (const char* name : {"pfg", "srg", "srg_restricted"}) {
    const ManipulativeGame m = manip(name);
    const AbstractGame g = compile(m);
    for (std::size_t mu = 0; mu < g.joint_dim(); ++mu) {
      const auto labels = unflatten(mu, g.dims);
      CMatrix rho(g.joint_dim());
      rho(mu, mu) = 1.0;
      for (std::size_t p = 0; p < g.players(); ++p)
        CHECK(expected_payoff(g, rho, p) == doctest::Approx(direct_payoff(m, p, labels)).epsilon(1e-12));
    }
  }
}

TEST_CASE("compiled operators are Hermitian for random games") {
  testing::Rng rng(31);
  for (int t = 0; t < 50; ++t) {
    const ManipulativeGame m = testing::random_manipulative_game(rng);
    const AbstractGame g = compile(m);
    for (const auto& h : g.payoff_ops) CHECK(frobenius_norm(h - dagger(h)) < 1e-10);
  }
}

TEST_CASE("application order") {
  // Player 2 acting first must match the explicit product with the order swapped.
  testing::Rng rng(32);
  ManipulativeGame m = testing::random_manipulative_game(rng);
  m.order = {};
  for (std::size_t p = m.players(); p-- > 0;) m.order.push_back(p);
  const AbstractGame g = compile(m);
  for (std::size_t mu = 0; mu < g.joint_dim(); ++mu) {
    CMatrix rho(g.joint_dim());
    rho(mu, mu) = 1.0;
    CHECK(expected_payoff(g, rho, 0) ==
          doctest::Approx(direct_payoff(m, 0, unflatten(mu, g.dims))).epsilon(1e-12));
  }
}

TEST_CASE("compile rejects inconsistent games") {
  ManipulativeGame m = manip("pfg");
  m.observables[0] = CMatrix::identity(3);
  CHECK_THROWS_AS(compile(m), DimensionError);
  m = manip("pfg");
  m.observables[1] = CMatrix{{0, 1}, {0, 0}};
  CHECK_THROWS_AS(compile(m), NumericalError);
  m = manip("pfg");
  m.order = {0, 0};
  CHECK_THROWS_AS(compile(m), DomainError);
}

TEST_CASE("change of strategy basis") {
  const auto pauli = StrategyBasis::from_names({"I", "X", "Y", "Z"});
  const auto restricted = StrategyBasis::from_names({"I", "iX", "iY", "iZ"});
  const AbstractGame srg = compile(manip("srg"));

  SUBCASE("identity relabelling") {
    const std::vector<StrategyBasis> same{pauli, pauli};
    CHECK(max_abs_diff(change_strategy_basis(srg, same, same).payoff_ops[0], srg.payoff_ops[0]) < 1e-12);
  }

  SUBCASE("to the restricted basis equals compiling in it") {
    const std::vector<StrategyBasis> from{pauli, pauli}, to{restricted, restricted};
    const AbstractGame rotated = change_strategy_basis(srg, from, to);
    const AbstractGame direct = compile(manip("srg_restricted"));
    CHECK(max_abs_diff(rotated.payoff_ops[0], direct.payoff_ops[0]) < 1e-12);
    CHECK(rotated.basis_labels[0] == restricted.labels);
    for (std::size_t p = 0; p < 2; ++p) {
      const auto a = sorted_eigenvalues(srg.payoff_ops[p]);
      const auto b = sorted_eigenvalues(rotated.payoff_ops[p]);
      for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10);
    }

    // The same profile expressed in either basis has the same payoff.
    const CMatrix t = basis_change_matrix(pauli, restricted);
    const CMatrix t2 = kron(t, t);
    testing::Rng rng(33);
    for (int k = 0; k < 100; ++k) {
      const CMatrix rho = kron(testing::random_density(4, rng), testing::random_density(4, rng));
      const CMatrix moved = matmul(matmul(t2, rho), dagger(t2));
      for (std::size_t p = 0; p < 2; ++p)
        CHECK(std::abs(expected_payoff(srg, rho, p) - expected_payoff(rotated, moved, p)) < 1e-10);
    }
  }

  SUBCASE("single-player rotation by hand") {
    AbstractGame toy;
    toy.name = "toy";
    toy.dims = {2};
    toy.payoff_ops = {CMatrix{{1, 0}, {0, -1}}};
    toy.basis_labels = {{"I", "X"}};
    const double s = 1.0 / std::sqrt(2.0);
    StrategyBasis rotated;
    rotated.labels = {"plus", "minus"};
    rotated.operators = {(named_operator("I") + named_operator("X")) * s,
                         (named_operator("I") - named_operator("X")) * s};
    const std::vector<StrategyBasis> from{StrategyBasis::from_names({"I", "X"})}, to{rotated};
    // T = [[s, s], [s, -s]]; T diag(1,-1) T^dagger = X
    const AbstractGame out = change_strategy_basis(toy, from, to);
    CHECK(max_abs_diff(out.payoff_ops[0], CMatrix{{0, 1}, {1, 0}}) < 1e-12);
  }

  SUBCASE("span mismatch") {
    const auto other = StrategyBasis::from_names({"I", "Y"});
    CHECK_THROWS_AS(basis_change_matrix(StrategyBasis::from_names({"I", "X"}), other), DomainError);
  }
}

TEST_CASE("sub-game extraction") {
  const AbstractGame srg = compile(manip("srg"));
  const AbstractGame sub = extract_subgame(srg, {{"I", "X"}, {"I", "X"}});
  const CMatrix expected{{1, 0, 0, 1}, {0, -1, -1, 0}, {0, -1, -1, 0}, {1, 0, 0, 1}};
  CHECK(max_abs_diff(sub.payoff_ops[0], expected) < 1e-12);
  CHECK(max_abs_diff(sub.payoff_ops[1], -expected) < 1e-12);
  CHECK(sub.basis_labels[1] == std::vector<std::string>{"I", "X"});

  const AbstractGame all = extract_subgame(srg, {{"I", "X", "Y", "Z"}, {"I", "X", "Y", "Z"}});
  CHECK(max_abs_diff(all.payoff_ops[0], srg.payoff_ops[0]) == 0.0);

  const AbstractGame single = extract_subgame(srg, {{"Y"}, {"Z"}});
  CHECK(single.joint_dim() == 1);
  CHECK(single.payoff_ops[0](0, 0) == srg.payoff_ops[0](2 * 4 + 3, 2 * 4 + 3));

  CHECK_THROWS_AS(extract_subgame(srg, {{"I", "W"}, {"I"}}), DomainError);
  CHECK_THROWS_AS(extract_subgame(srg, {{"I"}}), DimensionError);
}

TEST_CASE("classical tables") {
  const AbstractGame pd = from_classical_table({{{2, 2}, {-2, -5, 0, -4}}, {{2, 2}, {-2, 0, -5, -4}}}, "pd");
  const std::array<double, 4> d{-2, -5, 0, -4};
  CHECK(pd.payoff_ops[0] == CMatrix::diagonal(d));

  const AbstractGame zero = from_classical_table({{{2, 2}, {0, 0, 0, 0}}, {{2, 2}, {0, 0, 0, 0}}});
  CHECK(frobenius_norm(zero.payoff_ops[1]) == 0.0);

  const AbstractGame wide = from_classical_table({{{2, 3}, {1, 2, 3, 4, 5, 6}}, {{2, 3}, {6, 5, 4, 3, 2, 1}}});
  CHECK(wide.joint_dim() == 6);
  CHECK(wide.payoff_ops[0].real_diagonal() == std::vector<double>{1, 2, 3, 4, 5, 6});
  CHECK(wide.payoff_ops[0](1 * 3 + 2, 1 * 3 + 2) == Complex(6.0));

  CHECK_THROWS_AS(from_classical_table({{{2, 2}, {0, 0, 0, 0}}, {{2, 3}, {0, 0, 0, 0, 0, 0}}}), DimensionError);
  CHECK_THROWS_AS(from_classical_table({{{2, 2}, {0, 0, 0}}, {{2, 2}, {0, 0, 0, 0}}}), DimensionError);
}
