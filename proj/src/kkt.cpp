#include "esbid/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace esbid {

KktSystem derive_kkt(const LinearModel& lp,
                     const std::vector<StrategicMark>& marks) {
  lp.validate();
  if (lp.objective_sense() != ObjSense::Minimize)
    throw ModelError("kkt: expected a minimization model");
  if (lp.has_binaries())
    throw ModelError("kkt: lower-level model must be continuous");

  KktSystem k;
  k.source = lp;
  const int n = lp.num_vars();
  const int m = lp.num_rows();

  k.symbol_of_var.assign(n, -1);
  std::set<std::string> sym_names;
  for (const StrategicMark& mark : marks) {
    if (mark.var < 0 || mark.var >= n)
      throw ModelError("kkt: strategic mark references unknown variable " +
                       std::to_string(mark.var));
    if (k.symbol_of_var[mark.var] >= 0)
      throw ModelError("kkt: variable " + lp.var(mark.var).name +
                       " marked strategic twice");
    if (!sym_names.insert(mark.symbol).second)
      throw ModelError("kkt: duplicate strategic symbol " + mark.symbol);
    if (mark.obj_coef == 0.0)
      throw ModelError("kkt: strategic mark needs a nonzero coefficient");
    k.symbol_of_var[mark.var] = static_cast<int>(k.symbols.size());
    k.symbols.push_back(mark.symbol);
    k.symbol_obj_coef.push_back(mark.obj_coef);
  }

  using DK = KktSystem::DualVar::Kind;
  k.row_dual_id.resize(m);
  for (int r = 0; r < m; ++r) {
    const Constraint& c = lp.row(r);
    DK kind = c.sense == RowSense::EQ   ? DK::RowEq
              : c.sense == RowSense::LE ? DK::RowLe
                                        : DK::RowGe;
    const char* p = c.sense == RowSense::EQ ? "y_"
                    : c.sense == RowSense::LE ? "w_"
                                              : "v_";
    k.row_dual_id[r] = static_cast<int>(k.duals.size());
    k.duals.push_back({kind, r, p + c.name});
  }
  k.lb_dual_id.assign(n, -1);
  k.ub_dual_id.assign(n, -1);
  k.fx_dual_id.assign(n, -1);
  for (int j = 0; j < n; ++j) {
    const Variable& v = lp.var(j);
    if (v.lb == v.ub) {
      k.fx_dual_id[j] = static_cast<int>(k.duals.size());
      k.duals.push_back({DK::VarFixed, j, "pf_" + v.name});
      continue;
    }
    if (std::isfinite(v.lb)) {
      k.lb_dual_id[j] = static_cast<int>(k.duals.size());
      k.duals.push_back({DK::VarLower, j, "pl_" + v.name});
    }
    if (std::isfinite(v.ub)) {
      k.ub_dual_id[j] = static_cast<int>(k.duals.size());
      k.duals.push_back({DK::VarUpper, j, "pu_" + v.name});
    }
  }

  // stationarity: c_j (or symbol) + E'y + G'w - G'v - pi_l + pi_u + pi_f = 0
  k.stationarity.resize(n);
  for (int j = 0; j < n; ++j) {
    KktSystem::StatRow& row = k.stationarity[j];
    if (k.symbol_of_var[j] >= 0)
      row.symbol_terms.push_back(
          {k.symbol_of_var[j], k.symbol_obj_coef[k.symbol_of_var[j]]});
    else
      row.constant = lp.objective_coef(j);
    if (k.lb_dual_id[j] >= 0) row.dual_terms.push_back({k.lb_dual_id[j], -1.0});
    if (k.ub_dual_id[j] >= 0) row.dual_terms.push_back({k.ub_dual_id[j], 1.0});
    if (k.fx_dual_id[j] >= 0) row.dual_terms.push_back({k.fx_dual_id[j], 1.0});
  }
  for (int r = 0; r < m; ++r) {
    const Constraint& c = lp.row(r);
    const double sgn = c.sense == RowSense::GE ? -1.0 : 1.0;
    for (const Term& t : c.terms)
      k.stationarity[t.var].dual_terms.push_back(
          {k.row_dual_id[r], sgn * t.coef});
  }

  using PK = KktSystem::CompPair::Kind;
  for (int j = 0; j < n; ++j) {
    const Variable& v = lp.var(j);
    if (k.lb_dual_id[j] >= 0)
      k.pairs.push_back({PK::VarLower, j, k.lb_dual_id[j], "lo_" + v.name});
    if (k.ub_dual_id[j] >= 0)
      k.pairs.push_back({PK::VarUpper, j, k.ub_dual_id[j], "up_" + v.name});
  }
  for (int r = 0; r < m; ++r) {
    if (lp.row(r).sense == RowSense::EQ) continue;
    k.pairs.push_back(
        {PK::RowSlack, r, k.row_dual_id[r], "slk_" + lp.row(r).name});
  }

  // strong duality: ESF terms + rival cost terms = dual side
  for (int j = 0; j < n; ++j) {
    if (k.symbol_of_var[j] >= 0) {
      k.sd_bilinear.push_back(
          {k.symbol_of_var[j], j, k.symbol_obj_coef[k.symbol_of_var[j]]});
    } else if (lp.objective_coef(j) != 0.0) {
      k.sd_rival_cost.push_back({j, lp.objective_coef(j)});
    }
  }
  for (int r = 0; r < m; ++r) {
    const Constraint& c = lp.row(r);
    if (c.rhs == 0.0) continue;
    const double coef = c.sense == RowSense::GE ? c.rhs : -c.rhs;
    k.sd_dual_side.push_back({k.row_dual_id[r], coef});
  }
  for (int j = 0; j < n; ++j) {
    const Variable& v = lp.var(j);
    if (k.fx_dual_id[j] >= 0) {
      // fixed variable: multiplier enters as -l * pi_f
      if (v.lb != 0.0)
        k.sd_dual_side.push_back({k.fx_dual_id[j], -v.lb});
      continue;
    }
    if (k.lb_dual_id[j] >= 0 && v.lb != 0.0)
      k.sd_dual_side.push_back({k.lb_dual_id[j], v.lb});
    if (k.ub_dual_id[j] >= 0 && v.ub != 0.0)
      k.sd_dual_side.push_back({k.ub_dual_id[j], -v.ub});
  }
  return k;
}

KktPoint extract_kkt_point(const KktSystem& k, const LpSolution& sol) {
  if (!sol.optimal()) throw ModelError("kkt: need an optimal LP solution");
  KktPoint pt;
  pt.primal = sol.x;
  pt.dual_value.assign(k.duals.size(), 0.0);
  using DK = KktSystem::DualVar::Kind;
  for (size_t d = 0; d < k.duals.size(); ++d) {
    const auto& dv = k.duals[d];
    switch (dv.kind) {
      case DK::RowEq: pt.dual_value[d] = -sol.row_dual[dv.ref]; break;
      case DK::RowLe: pt.dual_value[d] = -sol.row_dual[dv.ref]; break;
      case DK::RowGe: pt.dual_value[d] = sol.row_dual[dv.ref]; break;
      case DK::VarLower:
        pt.dual_value[d] = std::max(sol.reduced_cost[dv.ref], 0.0);
        break;
      case DK::VarUpper:
        pt.dual_value[d] = std::max(-sol.reduced_cost[dv.ref], 0.0);
        break;
      case DK::VarFixed: pt.dual_value[d] = -sol.reduced_cost[dv.ref]; break;
    }
  }
  return pt;
}

namespace {

double pair_primal_of_source(const KktSystem& k,
                             const KktSystem::CompPair& p,
                             const std::vector<double>& x) {
  using PK = KktSystem::CompPair::Kind;
  switch (p.kind) {
    case PK::VarLower: return x[p.ref] - k.source.var(p.ref).lb;
    case PK::VarUpper: return k.source.var(p.ref).ub - x[p.ref];
    case PK::RowSlack: {
      const Constraint& c = k.source.row(p.ref);
      const double act = k.source.eval_row(p.ref, x);
      return c.sense == RowSense::LE ? c.rhs - act : act - c.rhs;
    }
  }
  return 0.0;
}

}  // namespace

KktResiduals kkt_residuals(const KktSystem& k, const KktPoint& pt,
                           const std::vector<double>& symbol_values) {
  if (symbol_values.size() != k.symbols.size())
    throw ModelError("kkt: symbol value count mismatch");
  KktResiduals res;
  for (size_t j = 0; j < k.stationarity.size(); ++j) {
    const auto& row = k.stationarity[j];
    double s = row.constant;
    for (const Term& t : row.dual_terms) s += t.coef * pt.dual_value[t.var];
    for (const Term& t : row.symbol_terms) s += t.coef * symbol_values[t.var];
    res.max_stationarity = std::max(res.max_stationarity, std::fabs(s));
  }
  for (const auto& p : k.pairs) {
    const double a = std::max(pair_primal_of_source(k, p, pt.primal), 0.0);
    const double b = std::max(pt.dual_value[p.dual], 0.0);
    res.max_complementarity = std::max(res.max_complementarity, std::min(a, b));
  }
  for (size_t d = 0; d < k.duals.size(); ++d)
    if (k.duals[d].sign_constrained())
      res.max_dual_sign = std::max(res.max_dual_sign, -pt.dual_value[d]);
  // strong duality
  double lhs = 0.0;
  for (const auto& bt : k.sd_bilinear)
    lhs += bt.coef * symbol_values[bt.symbol] * pt.primal[bt.var];
  for (const Term& t : k.sd_rival_cost) lhs += t.coef * pt.primal[t.var];
  double rhs = 0.0;
  for (const Term& t : k.sd_dual_side) rhs += t.coef * pt.dual_value[t.var];
  res.strong_duality = std::fabs(lhs - rhs);
  return res;
}

void BigMPolicy::validate() const {
  if (!(price_cap > 0.0)) throw PolicyError("big-M policy: price_cap must be positive");
  if (!(dual_multiplier > 0.0))
    throw PolicyError("big-M policy: dual multiplier must be positive");
  if (global_override && !(*global_override > 0.0 && std::isfinite(*global_override)))
    throw PolicyError("big-M policy: override must be positive and finite");
  for (const auto& [name, v] : row_slack_m)
    if (!(v > 0.0 && std::isfinite(v)))
      throw PolicyError("big-M policy: row override " + name + " must be positive");
}

namespace {

double primal_m_for_pair(const KktSystem& k, const KktSystem::CompPair& p,
                         const BigMPolicy& policy) {
  using PK = KktSystem::CompPair::Kind;
  if (policy.global_override) return *policy.global_override;
  switch (p.kind) {
    case PK::VarLower:
    case PK::VarUpper: {
      const Variable& v = k.source.var(p.ref);
      const double span = v.ub - v.lb;
      if (!std::isfinite(span))
        throw PolicyError("big-M policy: cannot size pair " + p.name +
                          " (variable " + v.name + " has an infinite range)");
      return span;
    }
    case PK::RowSlack: {
      const Constraint& c = k.source.row(p.ref);
      auto it = policy.row_slack_m.find(c.name);
      if (it != policy.row_slack_m.end()) return it->second;
      // interval arithmetic over the variable bounds
      double lo = 0.0, hi = 0.0;
      for (const Term& t : c.terms) {
        const Variable& v = k.source.var(t.var);
        const double a = t.coef * v.lb, b = t.coef * v.ub;
        lo += std::min(a, b);
        hi += std::max(a, b);
      }
      const double span = c.sense == RowSense::LE ? c.rhs - lo : hi - c.rhs;
      if (!std::isfinite(span))
        throw PolicyError("big-M policy: cannot size pair " + p.name +
                          " (row " + c.name +
                          " has an unbounded slack; provide row_slack_m)");
      return std::max(span, 0.0);
    }
  }
  return 0.0;
}

}  // namespace

std::vector<PairBigM> linearize(const KktSystem& k, const BigMPolicy& policy,
                                LinearModel& target, FragmentMaps& maps) {
  policy.validate();
  const double dual_m = policy.global_override
                            ? *policy.global_override
                            : policy.dual_multiplier * policy.price_cap;
  std::vector<PairBigM> out;
  maps.pair_binary.assign(k.pairs.size(), -1);
  using PK = KktSystem::CompPair::Kind;
  for (size_t p = 0; p < k.pairs.size(); ++p) {
    const auto& pair = k.pairs[p];
    const double ma = primal_m_for_pair(k, pair, policy);
    const int u = target.add_binary("u_" + pair.name);
    maps.pair_binary[p] = u;
    // a <= M_a * u
    std::vector<Term> arow;
    double rhs = 0.0;
    switch (pair.kind) {
      case PK::VarLower:
        arow = {{maps.primal_var[pair.ref], 1.0}, {u, -ma}};
        rhs = k.source.var(pair.ref).lb;
        break;
      case PK::VarUpper:
        arow = {{maps.primal_var[pair.ref], -1.0}, {u, -ma}};
        rhs = -k.source.var(pair.ref).ub;
        break;
      case PK::RowSlack: {
        const Constraint& c = k.source.row(pair.ref);
        const double sgn = c.sense == RowSense::LE ? -1.0 : 1.0;
        for (const Term& t : c.terms)
          arow.push_back({maps.primal_var[t.var], sgn * t.coef});
        arow.push_back({u, -ma});
        rhs = sgn * c.rhs;
        break;
      }
    }
    target.add_row("cpa_" + pair.name, arow, RowSense::LE, rhs);
    // b <= M_b * (1 - u)
    target.add_row("cpb_" + pair.name,
                   {{maps.dual_var[pair.dual], 1.0}, {u, dual_m}}, RowSense::LE,
                   dual_m);
    out.push_back({pair.name, ma, dual_m});
  }
  return out;
}

RevenueExpr linearize_revenue(const KktSystem& k, const FragmentMaps& maps) {
  RevenueExpr e;
  for (const Term& t : k.sd_dual_side)
    e.terms.push_back({maps.dual_var[t.var], t.coef});
  for (const Term& t : k.sd_rival_cost)
    e.terms.push_back({maps.primal_var[t.var], -t.coef});
  e.doc =
      "pay-as-bid terms replaced by the strong-duality identity: "
      "sum(sym*x) = dual-side(b'y and bound duals) - rival cost terms; " +
      std::to_string(k.sd_bilinear.size()) + " bilinear terms eliminated, " +
      std::to_string(e.terms.size()) + " linear terms emitted";
  return e;
}

KktFragment build_kkt_fragment(const KktSystem& k, const BigMPolicy& policy,
                               double symbol_ub) {
  KktFragment f;
  LinearModel& m = f.model;
  FragmentMaps& maps = f.maps;
  const int n = k.source.num_vars();

  maps.primal_var.resize(n);
  for (int j = 0; j < n; ++j) {
    const Variable& v = k.source.var(j);
    maps.primal_var[j] = m.add_continuous(v.name, v.lb, v.ub);
  }
  // primal feasibility rows
  for (int r = 0; r < k.source.num_rows(); ++r) {
    const Constraint& c = k.source.row(r);
    std::vector<Term> terms = c.terms;
    for (Term& t : terms) t.var = maps.primal_var[t.var];
    m.add_row(c.name, std::move(terms), c.sense, c.rhs);
  }
  // dual variables (sign-constrained ones nonnegative)
  maps.dual_var.resize(k.duals.size());
  for (size_t d = 0; d < k.duals.size(); ++d) {
    const auto& dv = k.duals[d];
    maps.dual_var[d] = m.add_continuous(
        dv.name, dv.sign_constrained() ? 0.0 : -kInf, kInf);
  }
  // strategic price variables
  maps.symbol_var.resize(k.symbols.size());
  for (size_t s = 0; s < k.symbols.size(); ++s)
    maps.symbol_var[s] = m.add_continuous(k.symbols[s], 0.0, symbol_ub);
  // stationarity rows
  for (size_t j = 0; j < k.stationarity.size(); ++j) {
    const auto& row = k.stationarity[j];
    std::vector<Term> terms;
    for (const Term& t : row.dual_terms)
      terms.push_back({maps.dual_var[t.var], t.coef});
    for (const Term& t : row.symbol_terms)
      terms.push_back({maps.symbol_var[t.var], t.coef});
    m.add_row("st_" + k.source.var(static_cast<int>(j)).name, std::move(terms),
              RowSense::EQ, -row.constant);
  }
  f.big_m = linearize(k, policy, m, maps);
  f.revenue = linearize_revenue(k, maps);
  return f;
}

double pair_primal_value(const KktSystem& k, const KktSystem::CompPair& pair,
                         const FragmentMaps& maps,
                         const std::vector<double>& fragment_x) {
  using PK = KktSystem::CompPair::Kind;
  switch (pair.kind) {
    case PK::VarLower:
      return fragment_x[maps.primal_var[pair.ref]] - k.source.var(pair.ref).lb;
    case PK::VarUpper:
      return k.source.var(pair.ref).ub - fragment_x[maps.primal_var[pair.ref]];
    case PK::RowSlack: {
      const Constraint& c = k.source.row(pair.ref);
      double act = 0.0;
      for (const Term& t : c.terms)
        act += t.coef * fragment_x[maps.primal_var[t.var]];
      return c.sense == RowSense::LE ? c.rhs - act : act - c.rhs;
    }
  }
  return 0.0;
}

}  // namespace esbid
