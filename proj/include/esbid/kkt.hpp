#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esbid/linear_model.hpp"
#include "esbid/simplex.hpp"

namespace esbid {

// Marks a primal variable whose objective coefficient is an upper-level
// decision (a strategic price) rather than a constant: coefficient =
// obj_coef * symbol, e.g. +1 for an offer price and -1 for a bid price
// entering a welfare minimization. The coefficient stored in the source
// model is ignored for that variable.
struct StrategicMark {
  int var = -1;
  std::string symbol;
  double obj_coef = 1.0;
};

// First-order optimality system of a minimization LP, in the multiplier
// convention L = c'x + y'(Ex-b) + w'(Gx-h) + pi_u'(x-u) - pi_l'(x-l):
// equality duals free, inequality and bound duals nonnegative,
// stationarity c + E'y + G'w - pi_l + pi_u = 0 per primal variable.
// Variables with lb == ub contribute one free "fixed" dual instead of a
// complementarity pair.
struct KktSystem {
  struct DualVar {
    enum class Kind { RowEq, RowLe, RowGe, VarLower, VarUpper, VarFixed };
    Kind kind;
    int ref;  // source row or variable
    std::string name;
    bool sign_constrained() const {
      return kind != Kind::RowEq && kind != Kind::VarFixed;
    }
  };
  struct StatRow {
    double constant = 0.0;          // unmarked objective coefficient
    std::vector<Term> dual_terms;   // var field indexes `duals`
    std::vector<Term> symbol_terms; // var field indexes `symbols`
  };
  struct CompPair {
    enum class Kind { VarLower, VarUpper, RowSlack };
    Kind kind;
    int ref;   // source var (bounds) or row (slack)
    int dual;  // index into `duals`
    std::string name;
  };

  LinearModel source;  // copy of the lower-level LP
  std::vector<DualVar> duals;
  std::vector<int> row_dual_id;              // per source row
  std::vector<int> lb_dual_id, ub_dual_id;   // per source var, -1 if absent
  std::vector<int> fx_dual_id;               // per source var, -1 if absent
  std::vector<StatRow> stationarity;         // one per source variable
  std::vector<CompPair> pairs;

  // strong duality at the optimum:
  //   sum_s coef_s * sym_s * x_{j(s)} + sum_rival c_j x_j
  //     = dual side (linear in the duals)
  struct BilinearTerm {
    int symbol;
    int var;
    double coef;
  };
  std::vector<BilinearTerm> sd_bilinear;
  std::vector<Term> sd_rival_cost;  // over source vars
  std::vector<Term> sd_dual_side;                // over dual ids
  std::vector<std::string> symbols;
  std::vector<double> symbol_obj_coef;  // per symbol, the mark's obj_coef
  std::vector<int> symbol_of_var;       // per source var, -1 when unmarked
};

// Derives stationarity rows, dual-sign constraints, complementarity pairs
// and the strong-duality identity from a minimization LP. Throws ModelError
// on an invalid mark (unknown, duplicate, or non-continuous variable) or a
// maximization model.
KktSystem derive_kkt(const LinearModel& lp,
                     const std::vector<StrategicMark>& marks);

// Numeric multipliers recovered from a solved LP, in the system's
// convention (independent of the solver's internal signs).
struct KktPoint {
  std::vector<double> primal;
  std::vector<double> dual_value;  // per KktSystem dual id
};
KktPoint extract_kkt_point(const KktSystem& kkt, const LpSolution& sol);

struct KktResiduals {
  double max_stationarity = 0.0;
  double max_complementarity = 0.0;  // min(a+, b+) per pair, worst case
  double max_dual_sign = 0.0;
  double strong_duality = 0.0;
};
// symbol_values must carry one price per symbol (empty when no marks).
KktResiduals kkt_residuals(const KktSystem& kkt, const KktPoint& pt,
                           const std::vector<double>& symbol_values);

// --- big-M linearization --------------------------------------------------

struct BigMPolicy {
  double price_cap = 0.0;        // basis for the dual-side M
  double dual_multiplier = 10.0; // dual M = multiplier * price_cap
  std::optional<double> global_override;  // forces every M (test hook)
  std::map<std::string, double> row_slack_m;  // per-row primal M overrides
  bool post_check = true;

  void validate() const;
};

struct PairBigM {
  std::string pair_name;
  double primal_m = 0.0;
  double dual_m = 0.0;
};

// Index maps from KKT entities into an emitted fragment model.
struct FragmentMaps {
  std::vector<int> primal_var;   // source var -> fragment var
  std::vector<int> dual_var;     // dual id -> fragment var
  std::vector<int> symbol_var;   // symbol id -> fragment var
  std::vector<int> pair_binary;  // pair id -> fragment binary
};

// Fortuny-Amat step: for every pair 0 <= a \perp b >= 0 emits
//   a <= M_a u,  b <= M_b (1-u),  u binary.
// Primal Ms come from variable/constraint bounds (or the per-row override);
// a pair whose bound cannot be sized throws PolicyError naming it.
std::vector<PairBigM> linearize(const KktSystem& kkt, const BigMPolicy& policy,
                                LinearModel& target, FragmentMaps& maps);

// Pay-as-bid revenue substitution from strong duality: returns the linear
// expression (over fragment variables) equal to sum_s sym_s * x_{j(s)} at
// any point satisfying the KKT system. `doc` records the substitution.
struct RevenueExpr {
  std::vector<Term> terms;
  double constant = 0.0;
  std::string doc;
};
RevenueExpr linearize_revenue(const KktSystem& kkt, const FragmentMaps& maps);

// Emits the whole single-market KKT block into a fresh model: primal copies,
// dual variables, strategic price variables bounded by [0, symbol_ub],
// stationarity rows, and the linearized complementarities.
struct KktFragment {
  LinearModel model;
  FragmentMaps maps;
  std::vector<PairBigM> big_m;
  RevenueExpr revenue;
};
KktFragment build_kkt_fragment(const KktSystem& kkt, const BigMPolicy& policy,
                               double symbol_ub);

// a-side value of a pair at a fragment solution (for the big-M audit).
double pair_primal_value(const KktSystem& kkt, const KktSystem::CompPair& pair,
                         const FragmentMaps& maps,
                         const std::vector<double>& fragment_x);

}  // namespace esbid
