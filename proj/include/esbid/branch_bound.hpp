#pragma once

#include <string>
#include <vector>

#include "esbid/linear_model.hpp"
#include "esbid/simplex.hpp"

namespace esbid {

struct MilpOptions {
  double rel_gap = 1e-6;  // stop when (bound-incumbent)/max(1,|inc|) <= this
  double int_tol = 1e-6;
  long node_limit = -1;        // -1: unlimited
  double time_limit_sec = -1;  // -1: unlimited; hitting it breaks determinism
  bool root_heuristic = true;  // deterministic rounding pass at the root
  SimplexOptions lp;
};

enum class MilpStatus { Optimal, Infeasible, Unbounded, GapLimit, NodeLimit };

const char* to_string(MilpStatus s);

struct MilpSolution {
  MilpStatus status = MilpStatus::NodeLimit;
  std::vector<double> x;
  double objective = 0.0;
  double best_bound = 0.0;  // proven bound in the model's sense
  double root_bound = 0.0;  // LP relaxation value at the root
  double rel_gap = kInf;
  long nodes = 0;
  long lp_iterations = 0;
  bool has_incumbent = false;
  std::string note;

  bool optimal() const { return status == MilpStatus::Optimal; }
};

// Best-bound branch & bound over the binary variables of `model`.
// Branching: most fractional, lowest index on ties. Deterministic for
// fixed options as long as no time limit fires.
MilpSolution solve_milp(const LinearModel& model, const MilpOptions& opt = {});

// One-line deterministic report used by the determinism tests.
std::string format_solution(const LinearModel& model, const MilpSolution& sol);
std::string format_solution(const LinearModel& model, const LpSolution& sol);

}  // namespace esbid
