#include "esbid/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <queue>

namespace esbid {

const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::Unbounded: return "unbounded";
    case MilpStatus::GapLimit: return "gap-limit";
    case MilpStatus::NodeLimit: return "node-limit";
  }
  return "?";
}

namespace {

struct NodeRec {
  int parent = -1;
  int var = -1;       // branching variable fixed when entering this node
  int value = 0;      // 0 or 1
  double bound = 0.0; // parent relaxation objective (internal min sense)
};

struct QEntry {
  double bound;
  long seq;
  int node;
};

struct QCmp {
  bool operator()(const QEntry& a, const QEntry& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;
  }
};

}  // namespace

MilpSolution solve_milp(const LinearModel& model, const MilpOptions& opt) {
  model.validate();
  const bool maximize = model.objective_sense() == ObjSense::Maximize;
  const double flip = maximize ? -1.0 : 1.0;  // internal bookkeeping is min

  std::vector<int> binaries;
  for (int j = 0; j < model.num_vars(); ++j)
    if (model.var(j).kind == VarKind::Binary) binaries.push_back(j);

  std::vector<double> base_lb(model.num_vars()), base_ub(model.num_vars());
  for (int j = 0; j < model.num_vars(); ++j) {
    base_lb[j] = model.var(j).lb;
    base_ub[j] = model.var(j).ub;
  }

  MilpSolution out;
  const auto t0 = std::chrono::steady_clock::now();
  auto timed_out = [&]() {
    if (opt.time_limit_sec <= 0) return false;
    const double el = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    return el > opt.time_limit_sec;
  };

  std::deque<NodeRec> arena;
  std::priority_queue<QEntry, std::vector<QEntry>, QCmp> open;
  long seq = 0;

  std::vector<double> lb = base_lb, ub = base_ub;
  auto load_bounds = [&](int node) {
    lb = base_lb;
    ub = base_ub;
    for (int cur = node; cur >= 0; cur = arena[cur].parent) {
      const NodeRec& n = arena[cur];
      if (n.var >= 0) lb[n.var] = ub[n.var] = static_cast<double>(n.value);
    }
  };

  double incumbent = kInf;  // internal min sense
  std::vector<double> inc_x;
  bool have_inc = false;

  auto try_incumbent = [&](const std::vector<double>& relaxed_x) -> bool {
    // fix every binary to its rounded value and polish with one LP
    std::vector<double> flb = base_lb, fub = base_ub;
    for (int j : binaries) {
      const double r = relaxed_x[j] >= 0.5 ? 1.0 : 0.0;
      flb[j] = fub[j] = r;
    }
    LpSolution fixed = solve_lp_bounded(model, flb, fub, opt.lp);
    out.lp_iterations += fixed.iterations;
    if (!fixed.optimal()) return false;
    const double val = flip * fixed.objective;
    if (val < incumbent - 1e-12 * (1.0 + std::fabs(incumbent)) || !have_inc) {
      incumbent = val;
      inc_x = fixed.x;
      have_inc = true;
      return true;
    }
    return false;
  };

  auto most_fractional = [&](const std::vector<double>& x) {
    int pick = -1;
    double best = -1.0;
    for (int j : binaries) {
      if (lb[j] == ub[j]) continue;
      const double f = std::fabs(x[j] - std::round(x[j]));
      if (f > best + 1e-15) {
        best = f;
        pick = j;
      }
    }
    return std::pair<int, double>(pick, best);
  };

  // root
  LpSolution root = solve_lp_bounded(model, lb, ub, opt.lp);
  out.lp_iterations += root.iterations;
  ++out.nodes;
  if (root.status == LpStatus::Infeasible) {
    out.status = MilpStatus::Infeasible;
    out.note = "root relaxation infeasible";
    return out;
  }
  if (root.status == LpStatus::Unbounded) {
    out.status = MilpStatus::Unbounded;
    out.note = "root relaxation unbounded";
    return out;
  }
  if (root.status == LpStatus::IterLimit)
    throw SolverError("root relaxation hit the iteration limit: " + root.note);
  out.root_bound = root.objective;
  double root_min = flip * root.objective;

  {
    auto [bvar, bfrac] = most_fractional(root.x);
    if (bvar < 0 || bfrac <= opt.int_tol) {
      if (try_incumbent(root.x)) {
        // integral root: done
        out.status = MilpStatus::Optimal;
        out.x = inc_x;
        for (int j : binaries) out.x[j] = std::round(out.x[j]);
        out.objective = flip * incumbent;
        out.best_bound = out.objective;
        out.rel_gap = 0.0;
        out.has_incumbent = true;
        return out;
      }
    }
    if (opt.root_heuristic) try_incumbent(root.x);
    arena.push_back(NodeRec{-1, -1, 0, root_min});
    open.push(QEntry{root_min, seq++, 0});
  }

  auto gap_of = [&](double bound) {
    if (!have_inc) return kInf;
    return (incumbent - bound) / std::max(1.0, std::fabs(incumbent));
  };

  enum class Stop { Exhausted, GapTarget, NodeLimit, TimeLimit };
  Stop stop = Stop::Exhausted;
  double frontier = kInf;  // min over unprocessed node bounds
  while (!open.empty()) {
    if (opt.node_limit > 0 && out.nodes >= opt.node_limit) {
      stop = Stop::NodeLimit;
      frontier = open.top().bound;
      break;
    }
    if (timed_out()) {
      stop = Stop::TimeLimit;
      frontier = open.top().bound;
      break;
    }
    const QEntry top = open.top();
    open.pop();
    if (have_inc && gap_of(top.bound) <= opt.rel_gap) {
      stop = Stop::GapTarget;
      frontier = top.bound;
      break;  // nothing left can improve beyond the target gap
    }
    load_bounds(top.node);
    LpSolution rel = solve_lp_bounded(model, lb, ub, opt.lp);
    out.lp_iterations += rel.iterations;
    ++out.nodes;
    if (rel.status == LpStatus::Infeasible) continue;
    if (rel.status == LpStatus::IterLimit)
      throw SolverError("node relaxation hit the iteration limit: " + rel.note);
    if (rel.status == LpStatus::Unbounded)
      throw SolverError("node relaxation unbounded below an optimal root");
    const double node_min = flip * rel.objective;
    if (have_inc && node_min >= incumbent - 1e-12 * (1.0 + std::fabs(incumbent)))
      continue;  // cannot improve
    auto [bvar, bfrac] = most_fractional(rel.x);
    if (bvar < 0 || bfrac <= opt.int_tol) {
      try_incumbent(rel.x);
      continue;
    }
    for (int v = 0; v <= 1; ++v) {
      arena.push_back(NodeRec{top.node, bvar, v, node_min});
      open.push(QEntry{node_min, seq++, static_cast<int>(arena.size()) - 1});
    }
  }

  // proven lower bound (min sense): frontier of unprocessed nodes, or the
  // incumbent itself when the search ran to exhaustion
  double lower;
  if (stop == Stop::Exhausted) {
    lower = have_inc ? incumbent : kInf;
  } else {
    lower = frontier;
  }

  out.has_incumbent = have_inc;
  if (have_inc) {
    out.x = inc_x;
    out.objective = flip * incumbent;
    out.rel_gap = std::max(0.0, gap_of(lower));
  } else {
    out.rel_gap = kInf;
  }
  out.best_bound = flip * lower;

  switch (stop) {
    case Stop::NodeLimit:
      out.status = MilpStatus::NodeLimit;
      out.note = "node limit reached";
      break;
    case Stop::TimeLimit:
      out.status = MilpStatus::NodeLimit;
      out.note = "time limit reached";
      break;
    case Stop::Exhausted:
    case Stop::GapTarget:
      if (!have_inc) {
        out.status = MilpStatus::Infeasible;
      } else if (out.rel_gap <= 1e-6) {
        out.status = MilpStatus::Optimal;
      } else {
        out.status = MilpStatus::GapLimit;
        out.note = "stopped at configured gap";
      }
      break;
  }

  // pin binaries exactly onto {0,1} in the report
  if (have_inc)
    for (int j : binaries) out.x[j] = std::round(out.x[j]);
  return out;
}

namespace {
std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

std::string format_solution(const LinearModel& model, const MilpSolution& sol) {
  std::string s = "status=";
  s += to_string(sol.status);
  s += " obj=" + fmt_g17(sol.objective);
  s += " bound=" + fmt_g17(sol.best_bound);
  s += " nodes=" + std::to_string(sol.nodes);
  for (int j = 0; j < model.num_vars(); ++j) {
    if (j < static_cast<int>(sol.x.size())) {
      s += " ";
      s += model.var(j).name;
      s += "=" + fmt_g17(sol.x[j]);
    }
  }
  return s;
}

std::string format_solution(const LinearModel& model, const LpSolution& sol) {
  std::string s = "status=";
  s += to_string(sol.status);
  s += " obj=" + fmt_g17(sol.objective);
  s += " iters=" + std::to_string(sol.iterations);
  for (int j = 0; j < model.num_vars(); ++j) {
    if (j < static_cast<int>(sol.x.size())) {
      s += " ";
      s += model.var(j).name;
      s += "=" + fmt_g17(sol.x[j]);
    }
  }
  return s;
}

}  // namespace esbid
