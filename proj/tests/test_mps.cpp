#include <doctest.h>

#include <cmath>
#include <random>

#include "esbid/mps.hpp"

using namespace esbid;

namespace {

void check_models_equal(const LinearModel& a, const LinearModel& b) {
  REQUIRE(a.num_vars() == b.num_vars());
  REQUIRE(a.num_rows() == b.num_rows());
  CHECK(a.objective_sense() == b.objective_sense());
  CHECK(a.objective_offset() == doctest::Approx(b.objective_offset()));
  auto bound_eq = [](double x, double y) {
    return (std::isinf(x) || std::isinf(y)) ? x == y
                                            : std::fabs(x - y) <= 1e-12;
  };
  for (int j = 0; j < a.num_vars(); ++j) {
    const Variable &va = a.var(j), &vb = b.var(j);
    CHECK(va.name == vb.name);
    CHECK(va.kind == vb.kind);
    CHECK(bound_eq(va.lb, vb.lb));
    CHECK(bound_eq(va.ub, vb.ub));
    CHECK(a.objective_coef(j) == doctest::Approx(b.objective_coef(j)));
  }
  for (int r = 0; r < a.num_rows(); ++r) {
    const Constraint &ca = a.row(r), &cb = b.row(r);
    CHECK(ca.name == cb.name);
    CHECK(ca.sense == cb.sense);
    CHECK(ca.rhs == doctest::Approx(cb.rhs));
    std::vector<double> dense_a(a.num_vars(), 0.0), dense_b(b.num_vars(), 0.0);
    for (const Term& t : ca.terms) dense_a[t.var] += t.coef;
    for (const Term& t : cb.terms) dense_b[t.var] += t.coef;
    for (int j = 0; j < a.num_vars(); ++j)
      CHECK(dense_a[j] == doctest::Approx(dense_b[j]));
  }
}

}  // namespace

TEST_CASE("one-variable model round-trips exactly") {
  LinearModel m;
  const int x = m.add_continuous("x", 0.25, 7.5);
  m.set_objective_coef(x, -3.0);
  m.set_objective_offset(2.5);
  m.add_row("lim", {{x, 2.0}}, RowSense::LE, 4.0);
  const std::string text = export_mps(m, "TINY");
  LinearModel back = import_mps(text);
  check_models_equal(m, back);
  // export is byte-stable
  CHECK(export_mps(back, "TINY") == text);
}

TEST_CASE("binary variables sit between INTORG and INTEND markers") {
  LinearModel m;
  m.add_continuous("c0", 0.0, 1.0);
  m.add_binary("b0");
  m.add_continuous("c1", 0.0, 2.0);
  m.set_objective_coef(1, 1.0);
  m.add_row("r", {{0, 1.0}, {1, 1.0}, {2, 1.0}}, RowSense::LE, 2.0);
  const std::string text = export_mps(m);
  const auto org = text.find("'INTORG'");
  const auto end = text.find("'INTEND'");
  REQUIRE(org != std::string::npos);
  REQUIRE(end != std::string::npos);
  const auto b0 = text.find("b0", org);
  CHECK(b0 < end);
  LinearModel back = import_mps(text);
  CHECK(back.var(1).kind == VarKind::Binary);
  check_models_equal(m, back);
}

TEST_CASE("missing RHS entries default to zero") {
  const std::string text =
      "NAME      T\n"
      "ROWS\n"
      " N  OBJ\n"
      " L  r1\n"
      "COLUMNS\n"
      "    x         OBJ       1.0\n"
      "    x         r1        1.0\n"
      "ENDATA\n";
  LinearModel m = import_mps(text);
  REQUIRE(m.num_rows() == 1);
  CHECK(m.row(0).rhs == 0.0);
}

TEST_CASE("truncated COLUMNS line raises a parse error naming the line") {
  const std::string text =
      "NAME      T\n"
      "ROWS\n"
      " N  OBJ\n"
      " L  r1\n"
      "COLUMNS\n"
      "    x         r1\n"
      "ENDATA\n";
  CHECK_THROWS_WITH_AS(import_mps(text),
                       doctest::Contains("line 6"), ParseError);
}

TEST_CASE("missing ENDATA is rejected") {
  CHECK_THROWS_AS(import_mps("NAME  X\nROWS\n N OBJ\n"), ParseError);
}

TEST_CASE("maximize sense and offset survive the round trip") {
  LinearModel m;
  const int x = m.add_continuous("x", -kInf, kInf);
  const int y = m.add_continuous("y", 0.0, kInf);
  m.set_objective_sense(ObjSense::Maximize);
  m.set_objective_coef(x, 1.0);
  m.set_objective_coef(y, 2.0);
  m.set_objective_offset(-4.0);
  m.add_row("e", {{x, 1.0}, {y, 1.0}}, RowSense::EQ, 1.0);
  LinearModel back = import_mps(export_mps(m));
  check_models_equal(m, back);
}

TEST_CASE("RANGES entries split into two one-sided rows") {
  const std::string text =
      "NAME      T\n"
      "ROWS\n"
      " N  OBJ\n"
      " L  r1\n"
      "COLUMNS\n"
      "    x         r1        1.0\n"
      "RHS\n"
      "    RHS1      r1        5.0\n"
      "RANGES\n"
      "    RNG       r1        2.0\n"
      "BOUNDS\n"
      " UP BND1      x         9.0\n"
      "ENDATA\n";
  LinearModel m = import_mps(text);
  REQUIRE(m.num_rows() == 2);
  CHECK(m.row(0).sense == RowSense::LE);
  CHECK(m.row(0).rhs == 5.0);
  CHECK(m.row(1).name == "r1__rng");
  CHECK(m.row(1).sense == RowSense::GE);
  CHECK(m.row(1).rhs == 3.0);
}

TEST_CASE("random nice-number models round-trip to identical models") {
  std::mt19937 rng(555);
  std::uniform_int_distribution<int> coef(-6, 6), nv(1, 6), nr(0, 5);
  for (int it = 0; it < 40; ++it) {
    LinearModel m;
    const int n = nv(rng);
    for (int j = 0; j < n; ++j) {
      if (rng() % 3 == 0)
        m.add_binary("b" + std::to_string(j));
      else
        m.add_continuous("x" + std::to_string(j),
                         -std::abs(coef(rng)) * 0.5,
                         6.0 + std::abs(coef(rng)));
    }
    m.set_objective_sense(rng() % 2 ? ObjSense::Maximize : ObjSense::Minimize);
    for (int j = 0; j < n; ++j) m.set_objective_coef(j, coef(rng));
    const int rows = nr(rng);
    for (int r = 0; r < rows; ++r) {
      std::vector<Term> terms;
      for (int j = 0; j < n; ++j)
        if (int c = coef(rng); c != 0) terms.push_back({j, double(c)});
      if (terms.empty()) terms.push_back({0, 1.0});
      m.add_row("r" + std::to_string(r), terms,
                rng() % 3 == 0   ? RowSense::EQ
                : rng() % 2 == 0 ? RowSense::LE
                                 : RowSense::GE,
                coef(rng));
    }
    LinearModel back = import_mps(export_mps(m));
    check_models_equal(m, back);
  }
}
