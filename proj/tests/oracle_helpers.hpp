// Test-only oracles, independent of the simplex implementation path.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "esbid/linear_model.hpp"

namespace esbid::testing {

// Solves a small dense linear system in place; returns false when singular.
inline bool dense_solve(std::vector<std::vector<double>>& a,
                        std::vector<double>& b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(a[i][k]) > std::fabs(a[piv][k])) piv = i;
    if (std::fabs(a[piv][k]) < 1e-11) return false;
    std::swap(a[piv], a[k]);
    std::swap(b[piv], b[k]);
    for (int i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    double s = b[k];
    for (int j = k + 1; j < n; ++j) s -= a[k][j] * b[j];
    b[k] = s / a[k][k];
  }
  return true;
}

// Brute-force optimum of a small LP (finite variable bounds required) by
// enumerating candidate vertices: every choice of n active constraints among
// {rows-as-equalities, var-at-lb, var-at-ub}. Returns nullopt if infeasible.
inline std::optional<double> vertex_enumeration_optimum(
    const LinearModel& m) {
  const int n = m.num_vars();
  struct Active {
    int kind;  // 0 row, 1 lb, 2 ub
    int ref;
  };
  std::vector<Active> cands;
  for (int r = 0; r < m.num_rows(); ++r) cands.push_back({0, r});
  for (int j = 0; j < n; ++j) {
    cands.push_back({1, j});
    cands.push_back({2, j});
  }
  const int k = static_cast<int>(cands.size());
  std::vector<int> pick(n);
  std::optional<double> best;
  const bool maximize = m.objective_sense() == ObjSense::Maximize;

  std::vector<int> idx(n, 0);
  // iterate combinations of size n out of k
  std::vector<int> c(n);
  for (int i = 0; i < n; ++i) c[i] = i;
  if (k < n) return std::nullopt;
  while (true) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const Active& ac = cands[c[i]];
      if (ac.kind == 0) {
        for (const Term& t : m.row(ac.ref).terms) a[i][t.var] += t.coef;
        rhs[i] = m.row(ac.ref).rhs;
      } else {
        a[i][ac.ref] = 1.0;
        rhs[i] = ac.kind == 1 ? m.var(ac.ref).lb : m.var(ac.ref).ub;
      }
    }
    if (dense_solve(a, rhs)) {
      bool feas = true;
      for (int j = 0; j < n && feas; ++j) {
        if (rhs[j] < m.var(j).lb - 1e-7 || rhs[j] > m.var(j).ub + 1e-7)
          feas = false;
      }
      for (int r = 0; r < m.num_rows() && feas; ++r) {
        const double v = m.eval_row(r, rhs);
        const Constraint& row = m.row(r);
        if (row.sense == RowSense::LE && v > row.rhs + 1e-7) feas = false;
        if (row.sense == RowSense::GE && v < row.rhs - 1e-7) feas = false;
        if (row.sense == RowSense::EQ && std::fabs(v - row.rhs) > 1e-7)
          feas = false;
      }
      if (feas) {
        const double obj = m.eval_objective(rhs);
        if (!best || (maximize ? obj > *best : obj < *best)) best = obj;
      }
    }
    // next combination
    int i = n - 1;
    while (i >= 0 && c[i] == k - n + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < n; ++j) c[j] = c[j - 1] + 1;
  }
  (void)pick;
  (void)idx;
  return best;
}

}  // namespace esbid::testing
