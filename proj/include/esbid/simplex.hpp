#pragma once

#include <string>
#include <vector>

#include "esbid/linear_model.hpp"

namespace esbid {

struct SimplexOptions {
  double feas_tol = 1e-7;   // primal feasibility, relative to 1+|rhs|
  double opt_tol = 1e-7;    // reduced-cost (dual) tolerance
  double pivot_tol = 1e-8;  // smallest acceptable pivot magnitude
  long max_iter = -1;       // -1: derived from model size
  int refresh_interval = 200;
  int residual_check_interval = 64;
  int bland_trigger = -1;  // consecutive degenerate pivots; -1: max(200, m)
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

const char* to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::IterLimit;
  std::vector<double> x;             // structural variable values
  std::vector<double> row_dual;      // d(objective)/d(rhs), model sense
  std::vector<double> reduced_cost;  // per structural variable, model sense
  double objective = 0.0;            // model sense, includes offset
  long iterations = 0;
  int refactorizations = 0;
  std::vector<int> infeasible_rows;  // rows still violated when Infeasible
  std::string note;

  bool optimal() const { return status == LpStatus::Optimal; }
};

// Solves the continuous relaxation of `model` (binaries are treated as
// bounded continuous variables). Throws SolverError on numerical breakdown.
LpSolution solve_lp(const LinearModel& model, const SimplexOptions& opt = {});

// Same, with per-variable bound overrides (used by branch & bound to fix
// binaries without copying the model). Vectors must have size num_vars().
LpSolution solve_lp_bounded(const LinearModel& model,
                            const std::vector<double>& lb,
                            const std::vector<double>& ub,
                            const SimplexOptions& opt = {});

// |primal objective - dual objective| computed from a returned solution;
// used by the self-checks and the KKT audits.
double duality_gap(const LinearModel& model, const LpSolution& sol);

}  // namespace esbid
