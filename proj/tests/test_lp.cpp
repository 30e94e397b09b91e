#include <doctest.h>

#include <cmath>
#include <random>

#include "esbid/branch_bound.hpp"
#include "esbid/simplex.hpp"
#include "oracle_helpers.hpp"

using namespace esbid;

TEST_CASE("max x subject to x <= 3") {
  LinearModel m;
  const int x = m.add_continuous("x", 0.0, kInf);
  m.set_objective_sense(ObjSense::Maximize);
  m.set_objective_coef(x, 1.0);
  m.add_row("cap", {{x, 1.0}}, RowSense::LE, 3.0);
  const LpSolution s = solve_lp(m);
  REQUIRE(s.optimal());
  CHECK(s.x[x] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.row_dual[0] == doctest::Approx(1.0));
}

TEST_CASE("min x+y subject to x+y >= 2") {
  LinearModel m;
  const int x = m.add_continuous("x", 0.0, kInf);
  const int y = m.add_continuous("y", 0.0, kInf);
  m.set_objective_coef(x, 1.0);
  m.set_objective_coef(y, 1.0);
  m.add_row("floor", {{x, 1.0}, {y, 1.0}}, RowSense::GE, 2.0);
  const LpSolution s = solve_lp(m);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(2.0));
  CHECK(s.row_dual[0] == doctest::Approx(1.0));
}

TEST_CASE("degenerate LP with two identical constraints keeps duals consistent") {
  LinearModel m;
  const int x = m.add_continuous("x", 0.0, kInf);
  const int y = m.add_continuous("y", 0.0, kInf);
  m.set_objective_sense(ObjSense::Maximize);
  m.set_objective_coef(x, 1.0);
  m.set_objective_coef(y, 1.0);
  m.add_row("c1", {{x, 1.0}, {y, 1.0}}, RowSense::LE, 1.0);
  m.add_row("c2", {{x, 1.0}, {y, 1.0}}, RowSense::LE, 1.0);
  const LpSolution s = solve_lp(m);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(1.0));
  // dual objective equals primal despite the duplicated row
  CHECK(duality_gap(m, s) <= 1e-6 * (1.0 + std::fabs(s.objective)));
  CHECK(s.row_dual[0] + s.row_dual[1] == doctest::Approx(1.0));
}

TEST_CASE("infeasible system is reported with its violated row") {
  LinearModel m;
  const int x = m.add_continuous("x", 0.0, 1.0);
  m.set_objective_coef(x, 1.0);
  m.add_row("need2", {{x, 1.0}}, RowSense::GE, 2.0);
  const LpSolution s = solve_lp(m);
  CHECK(s.status == LpStatus::Infeasible);
  REQUIRE(s.infeasible_rows.size() == 1);
  CHECK(s.infeasible_rows[0] == 0);
}

TEST_CASE("unbounded direction is detected") {
  LinearModel m;
  const int x = m.add_continuous("x", 0.0, kInf);
  m.set_objective_sense(ObjSense::Maximize);
  m.set_objective_coef(x, 1.0);
  m.add_row("weak", {{x, -1.0}}, RowSense::LE, 5.0);
  const LpSolution s = solve_lp(m);
  CHECK(s.status == LpStatus::Unbounded);
}

TEST_CASE("equalities and free variables") {
  LinearModel m;
  const int x = m.add_continuous("x", -kInf, kInf);
  const int y = m.add_continuous("y", 0.0, 10.0);
  m.set_objective_coef(x, 2.0);
  m.set_objective_coef(y, 1.0);
  m.add_row("link", {{x, 1.0}, {y, -1.0}}, RowSense::EQ, -2.0);
  const LpSolution s = solve_lp(m);
  REQUIRE(s.optimal());
  // x = y - 2, objective 2(y-2)+y = 3y-4 minimized at y=0 -> x=-2
  CHECK(s.objective == doctest::Approx(-4.0));
  CHECK(s.x[x] == doctest::Approx(-2.0));
}

TEST_CASE("objective offset and maximize sense carried through") {
  LinearModel m;
  const int x = m.add_continuous("x", 0.0, 4.0);
  m.set_objective_sense(ObjSense::Maximize);
  m.set_objective_coef(x, 2.0);
  m.set_objective_offset(10.0);
  const LpSolution s = solve_lp(m);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(18.0));
}

namespace {

LinearModel random_lp(std::mt19937& rng) {
  std::uniform_int_distribution<int> nv(2, 4), nr(1, 4), coef(-4, 4);
  std::uniform_real_distribution<double> ubd(0.5, 8.0);
  std::uniform_int_distribution<int> sense(0, 2);
  LinearModel m;
  const int n = nv(rng);
  for (int j = 0; j < n; ++j)
    m.add_continuous("x" + std::to_string(j), 0.0, ubd(rng));
  m.set_objective_sense(rng() % 2 ? ObjSense::Maximize : ObjSense::Minimize);
  for (int j = 0; j < n; ++j) m.set_objective_coef(j, coef(rng));
  const int rows = nr(rng);
  for (int r = 0; r < rows; ++r) {
    std::vector<Term> terms;
    for (int j = 0; j < n; ++j) {
      const int c = coef(rng);
      if (c != 0) terms.push_back({j, static_cast<double>(c)});
    }
    if (terms.empty()) terms.push_back({0, 1.0});
    // keep the all-lower-bounds point feasible for LE rows so most models
    // are feasible; GE/EQ rows may still make them infeasible, which the
    // oracle detects as well
    const int sn = sense(rng);
    double rhs = std::uniform_real_distribution<double>(-2.0, 10.0)(rng);
    m.add_row("r" + std::to_string(r), terms,
              sn == 0 ? RowSense::LE : (sn == 1 ? RowSense::GE : RowSense::EQ),
              rhs);
  }
  return m;
}

}  // namespace

TEST_CASE("randomized LPs agree with the vertex-enumeration oracle") {
  std::mt19937 rng(991);
  int checked = 0;
  for (int it = 0; it < 200; ++it) {
    LinearModel m = random_lp(rng);
    const auto oracle = testing::vertex_enumeration_optimum(m);
    const LpSolution s = solve_lp(m);
    if (!oracle.has_value()) {
      CHECK(s.status == LpStatus::Infeasible);
      continue;
    }
    REQUIRE_MESSAGE(s.optimal(), "iteration ", it);
    ++checked;
    CHECK_MESSAGE(
        s.objective ==
            doctest::Approx(*oracle).epsilon(1e-6).scale(1.0 + std::fabs(*oracle)),
        "iteration ", it);
    // strong duality
    CHECK(duality_gap(m, s) <= 1e-6 * (1.0 + std::fabs(s.objective)));
    // complementary slackness: dual_k * slack_k ~ 0
    double comp = 0.0;
    for (int r = 0; r < m.num_rows(); ++r) {
      const double act = m.eval_row(r, s.x);
      comp += std::fabs(s.row_dual[r] * (m.row(r).rhs - act));
    }
    CHECK(comp <= 1e-5 * (1.0 + std::fabs(s.objective)));
    // primal feasibility within tolerance
    for (int r = 0; r < m.num_rows(); ++r) {
      const double act = m.eval_row(r, s.x);
      const Constraint& row = m.row(r);
      const double tol = 1e-7 * (1.0 + std::fabs(row.rhs));
      if (row.sense == RowSense::LE) CHECK(act <= row.rhs + tol);
      if (row.sense == RowSense::GE) CHECK(act >= row.rhs - tol);
      if (row.sense == RowSense::EQ) CHECK(std::fabs(act - row.rhs) <= tol);
    }
  }
  CHECK(checked > 50);  // the generator must produce many feasible cases
}

TEST_CASE("solver output is deterministic") {
  std::mt19937 rng(123);
  LinearModel m = random_lp(rng);
  const LpSolution a = solve_lp(m);
  const LpSolution b = solve_lp(m);
  CHECK(format_solution(m, a) == format_solution(m, b));
}
