#include "esbid/clearing.hpp"

#include <algorithm>
#include <cmath>

#include "esbid/branch_bound.hpp"
#include "esbid/kkt.hpp"

namespace esbid {

EsfMarketOrder EsfMarketOrder::inactive(const MarketCase& c, Market m) {
  EsfMarketOrder o;
  o.market = m;
  o.offer_price.assign(c.horizon, 0.0);
  o.bid_price.assign(c.horizon, 0.0);
  o.offer_cap.assign(c.horizon, 0.0);
  o.bid_cap.assign(c.horizon, 0.0);
  return o;
}

EsfMarketOrder EsfMarketOrder::with_prices(const MarketCase& c, Market m,
                                           std::vector<double> offer,
                                           std::vector<double> bid) {
  EsfMarketOrder o;
  o.market = m;
  o.offer_price = std::move(offer);
  o.bid_price = std::move(bid);
  o.offer_cap = c.esf.sell_cap(m);
  o.bid_cap = c.esf.buy_cap(m);
  return o;
}

void EsfMarketOrder::validate(const MarketCase& c) const {
  const size_t T = static_cast<size_t>(c.horizon);
  if (offer_price.size() != T || bid_price.size() != T ||
      offer_cap.size() != T || bid_cap.size() != T)
    throw ModelError("order: hourly arrays disagree with the case horizon");
  const auto& scap = c.esf.sell_cap(market);
  const auto& bcap = c.esf.buy_cap(market);
  for (size_t t = 0; t < T; ++t) {
    if (offer_price[t] < 0.0 || offer_price[t] > c.price_cap ||
        bid_price[t] < 0.0 || bid_price[t] > c.price_cap)
      throw ModelError("order: price outside [0, price_cap] at hour " +
                       std::to_string(t));
    if (offer_cap[t] < 0.0 || offer_cap[t] > scap[t] + 1e-9 ||
        bid_cap[t] < 0.0 || bid_cap[t] > bcap[t] + 1e-9)
      throw ModelError("order: quantity cap outside the case limits at hour " +
                       std::to_string(t));
  }
}

namespace {

std::string tn(const char* base, int t) {
  return std::string(base) + "_t" + std::to_string(t);
}

}  // namespace

BuiltClearing build_clearing_lp(const MarketCase& c, const EsfMarketOrder& order,
                                Market market) {
  c.validate();
  order.validate(c);
  if (order.market != market)
    throw ConfigError("order market tag disagrees with the requested market");
  const bool net = c.mode == ClearingMode::Network;
  if (net && !c.network.has_value())
    throw ConfigError("network mode requested without a network");

  BuiltClearing out;
  LinearModel& m = out.lp;
  ClearingIndex& ix = out.index;
  const int T = c.horizon;
  const int J = static_cast<int>(c.gencos.size());
  const int I = static_cast<int>(c.retailers.size());

  m.set_objective_sense(ObjSense::Minimize);
  for (int t = 0; t < T; ++t) {
    ix.esf_sell.push_back(
        m.add_continuous(tn("P_es", t), 0.0, order.offer_cap[t]));
    m.set_objective_coef(ix.esf_sell[t], order.offer_price[t]);
    ix.esf_buy.push_back(m.add_continuous(tn("D_es", t), 0.0, order.bid_cap[t]));
    m.set_objective_coef(ix.esf_buy[t], -order.bid_price[t]);
  }
  ix.gen.resize(J);
  for (int j = 0; j < J; ++j) {
    const Genco& g = c.gencos[j];
    for (int t = 0; t < T; ++t) {
      const int v = m.add_continuous(tn(("P_g" + std::to_string(j)).c_str(), t),
                                     0.0, g.p_max[t]);
      m.set_objective_coef(v, c.genco_offer(g, market, t));
      ix.gen[j].push_back(v);
    }
  }
  ix.ret.resize(I);
  for (int i = 0; i < I; ++i) {
    const Retailer& r = c.retailers[i];
    for (int t = 0; t < T; ++t) {
      const int v = m.add_continuous(tn(("D_r" + std::to_string(i)).c_str(), t),
                                     0.0, r.d_max[t]);
      m.set_objective_coef(v, -c.retailer_bid(r, market, t));
      ix.ret[i].push_back(v);
    }
  }

  if (!net) {
    ix.bus_ids = {0};
    ix.balance.resize(1);
    for (int t = 0; t < T; ++t) {
      std::vector<Term> terms;
      terms.push_back({ix.esf_buy[t], 1.0});
      for (int i = 0; i < I; ++i) terms.push_back({ix.ret[i][t], 1.0});
      terms.push_back({ix.esf_sell[t], -1.0});
      for (int j = 0; j < J; ++j) terms.push_back({ix.gen[j][t], -1.0});
      ix.balance[0].push_back(m.add_row(tn("bal", t), terms, RowSense::EQ, 0.0));
    }
    return out;
  }

  const NetworkSpec& nw = *c.network;
  const int B = static_cast<int>(nw.buses.size());
  const int L = static_cast<int>(nw.lines.size());
  ix.bus_ids = nw.buses;
  std::vector<int> bus_pos_of(B);
  auto bus_pos = [&](int id) {
    for (int b = 0; b < B; ++b)
      if (nw.buses[b] == id) return b;
    throw ModelError("unknown bus id " + std::to_string(id));
  };
  (void)bus_pos_of;

  ix.theta.resize(B);
  for (int b = 0; b < B; ++b)
    for (int t = 0; t < T; ++t)
      ix.theta[b].push_back(m.add_continuous(
          tn(("th_b" + std::to_string(nw.buses[b])).c_str(), t), -kInf, kInf));

  // per-bus balance: demand - supply + outgoing DC flow = 0
  ix.balance.assign(B, {});
  std::vector<std::vector<Term>> bterm(static_cast<size_t>(B) * T);
  auto at = [&](int b, int t) -> std::vector<Term>& {
    return bterm[static_cast<size_t>(b) * T + t];
  };
  for (int t = 0; t < T; ++t) {
    const int eb = bus_pos(c.esf.bus);
    at(eb, t).push_back({ix.esf_buy[t], 1.0});
    at(eb, t).push_back({ix.esf_sell[t], -1.0});
  }
  for (int j = 0; j < J; ++j) {
    const int gb = bus_pos(c.gencos[j].bus);
    for (int t = 0; t < T; ++t) at(gb, t).push_back({ix.gen[j][t], -1.0});
  }
  for (int i = 0; i < I; ++i) {
    const int rb = bus_pos(c.retailers[i].bus);
    for (int t = 0; t < T; ++t) at(rb, t).push_back({ix.ret[i][t], 1.0});
  }
  for (int l = 0; l < L; ++l) {
    const Line& ln = nw.lines[l];
    const int s = bus_pos(ln.from), r = bus_pos(ln.to);
    const double w = 1.0 / ln.reactance;
    for (int t = 0; t < T; ++t) {
      // flow s->r = (th_s - th_r)/x leaves s and enters r
      at(s, t).push_back({ix.theta[s][t], w});
      at(s, t).push_back({ix.theta[r][t], -w});
      at(r, t).push_back({ix.theta[s][t], -w});
      at(r, t).push_back({ix.theta[r][t], w});
    }
  }
  for (int b = 0; b < B; ++b)
    for (int t = 0; t < T; ++t)
      ix.balance[b].push_back(
          m.add_row(tn(("bal_b" + std::to_string(nw.buses[b])).c_str(), t),
                    at(b, t), RowSense::EQ, 0.0));

  ix.flow_hi.assign(L, {});
  ix.flow_lo.assign(L, {});
  for (int l = 0; l < L; ++l) {
    const Line& ln = nw.lines[l];
    const int s = bus_pos(ln.from), r = bus_pos(ln.to);
    const double w = 1.0 / ln.reactance;
    for (int t = 0; t < T; ++t) {
      ix.flow_hi[l].push_back(
          m.add_row(tn(("fhi_l" + std::to_string(l)).c_str(), t),
                    {{ix.theta[s][t], w}, {ix.theta[r][t], -w}}, RowSense::LE,
                    ln.f_max));
      ix.flow_lo[l].push_back(
          m.add_row(tn(("flo_l" + std::to_string(l)).c_str(), t),
                    {{ix.theta[s][t], -w}, {ix.theta[r][t], w}}, RowSense::LE,
                    ln.f_max));
    }
  }
  const int rb = bus_pos(nw.reference_bus);
  for (int t = 0; t < T; ++t)
    ix.ref_row.push_back(
        m.add_row(tn("ref", t), {{ix.theta[rb][t], 1.0}}, RowSense::EQ, 0.0));
  return out;
}

ClearingResult clear_market(const MarketCase& c, const EsfMarketOrder& order,
                            Market market, const SimplexOptions& opt) {
  BuiltClearing built = build_clearing_lp(c, order, market);
  const LinearModel& m = built.lp;
  const ClearingIndex& ix = built.index;
  const int T = c.horizon;

  ClearingResult res;
  res.market = market;
  LpSolution sol = solve_lp(m, opt);
  res.status = sol.status;
  if (sol.status == LpStatus::Infeasible) {
    for (int r : sol.infeasible_rows) res.binding_rows.push_back(m.row(r).name);
    return res;
  }
  if (!sol.optimal())
    throw SolverError("clearing LP did not reach optimality: " + sol.note);

  res.objective = sol.objective;
  res.welfare = -sol.objective;
  res.row_dual = sol.row_dual;
  res.reduced_cost = sol.reduced_cost;
  res.bus_ids = ix.bus_ids;
  res.esf_sell.resize(T);
  res.esf_buy.resize(T);
  for (int t = 0; t < T; ++t) {
    res.esf_sell[t] = sol.x[ix.esf_sell[t]];
    res.esf_buy[t] = sol.x[ix.esf_buy[t]];
  }
  res.gen_dispatch.resize(ix.gen.size());
  for (size_t j = 0; j < ix.gen.size(); ++j) {
    res.gen_dispatch[j].resize(T);
    for (int t = 0; t < T; ++t) res.gen_dispatch[j][t] = sol.x[ix.gen[j][t]];
  }
  res.ret_dispatch.resize(ix.ret.size());
  for (size_t i = 0; i < ix.ret.size(); ++i) {
    res.ret_dispatch[i].resize(T);
    for (int t = 0; t < T; ++t) res.ret_dispatch[i][t] = sol.x[ix.ret[i][t]];
  }
  // marginal price = -d(objective)/d(rhs) of the balance row in the
  // demand-minus-supply convention used here
  res.lmp.resize(ix.balance.size());
  for (size_t b = 0; b < ix.balance.size(); ++b) {
    res.lmp[b].resize(T);
    for (int t = 0; t < T; ++t)
      res.lmp[b][t] = -sol.row_dual[ix.balance[b][t]];
  }
  if (c.mode == ClearingMode::Network) {
    const NetworkSpec& nw = *c.network;
    res.flow.resize(nw.lines.size());
    for (size_t l = 0; l < nw.lines.size(); ++l) {
      res.flow[l].resize(T);
      const double act = m.row(ix.flow_hi[l][0]).rhs;  // f_max
      (void)act;
      for (int t = 0; t < T; ++t)
        res.flow[l][t] = m.eval_row(ix.flow_hi[l][t], sol.x);
    }
  }

  // audits: balance residuals, flow limits, duality, KKT residuals
  ClearingAudit& a = res.audit;
  for (const auto& rows : ix.balance)
    for (int r : rows)
      a.max_balance_residual = std::max(
          a.max_balance_residual, std::fabs(m.eval_row(r, sol.x) - m.row(r).rhs));
  for (size_t l = 0; l < ix.flow_hi.size(); ++l)
    for (int t = 0; t < T; ++t) {
      const double f = res.flow[l][t];
      const double cap = m.row(ix.flow_hi[l][t]).rhs;
      a.max_flow_violation =
          std::max(a.max_flow_violation, std::fabs(f) - cap);
    }
  a.duality_gap = duality_gap(m, sol);
  const KktSystem kkt = derive_kkt(m, {});
  const KktPoint pt = extract_kkt_point(kkt, sol);
  const KktResiduals kres = kkt_residuals(kkt, pt, {});
  a.max_stationarity_residual = kres.max_stationarity;
  a.max_complementarity = kres.max_complementarity;
  const double scale = 1.0 + std::fabs(sol.objective);
  a.passed = a.max_balance_residual <= 1e-7 * (1.0 + 0.0) + 1e-7 &&
             a.max_flow_violation <= 1e-7 &&
             a.duality_gap <= 1e-6 * scale &&
             a.max_stationarity_residual <= 1e-6 * scale &&
             a.max_complementarity <= 1e-6 * scale;
  return res;
}

void PriceQuotaCurve::validate() const {
  if (hours.empty()) throw ModelError("price-quota curve: no hours");
  if (!(price_cap > 0.0)) throw ModelError("price-quota curve: price_cap");
  for (size_t t = 0; t < hours.size(); ++t) {
    const HourlyQuotaCurve& h = hours[t];
    double prev_q = 0.0;
    double prev_p = kInf;
    for (const QuotaStep& s : h.sell) {
      if (!(s.quota > prev_q))
        throw ModelError("sell curve: quotas must increase (hour " +
                         std::to_string(t) + ")");
      if (s.price > prev_p + 1e-12)
        throw ModelError("sell curve: price must be non-increasing in quota "
                         "(hour " + std::to_string(t) + ")");
      if (s.price < 0.0 || s.price > price_cap)
        throw ModelError("sell curve: price outside [0, cap]");
      prev_q = s.quota;
      prev_p = s.price;
    }
    prev_q = 0.0;
    for (const QuotaStep& s : h.buy) {
      if (!(s.quota > prev_q))
        throw ModelError("buy curve: quotas must increase (hour " +
                         std::to_string(t) + ")");
      if (s.price < 0.0 || s.price > price_cap)
        throw ModelError("buy curve: price outside [0, cap]");
      prev_q = s.quota;
    }
  }
}

QuotaScheduleResult schedule_against_quota(const PriceQuotaCurve& curves,
                                           const StorageSpec& spec) {
  curves.validate();
  const int T = static_cast<int>(curves.hours.size());

  LinearModel m;
  m.set_objective_sense(ObjSense::Maximize);
  StorageBlockIndex sb = append_storage_block(m, spec, T, "es_");
  add_operation_cost_terms(m, sb, spec, -1.0);

  struct SideVars {
    std::vector<int> qty;  // per step
  };
  std::vector<SideVars> sellv(T), buyv(T);
  for (int t = 0; t < T; ++t) {
    const HourlyQuotaCurve& h = curves.hours[t];
    auto emit_side = [&](const std::vector<QuotaStep>& steps, const char* tag,
                         SideVars& sv, int link_var, double obj_sign) {
      std::vector<Term> pick;
      std::vector<Term> link{{link_var, -1.0}};
      double prev = 0.0;
      for (size_t s = 0; s < steps.size(); ++s) {
        const std::string base =
            std::string(tag) + std::to_string(s) + "_t" + std::to_string(t);
        const int z = m.add_binary("pick_" + base);
        const int q = m.add_continuous("q_" + base, 0.0, steps[s].quota);
        sv.qty.push_back(q);
        m.add_row("qhi_" + base, {{q, 1.0}, {z, -steps[s].quota}}, RowSense::LE,
                  0.0);
        if (prev > 0.0)
          m.add_row("qlo_" + base, {{z, prev}, {q, -1.0}}, RowSense::LE, 0.0);
        m.add_objective_term(q, obj_sign * steps[s].price);
        pick.push_back({z, 1.0});
        link.push_back({q, 1.0});
        prev = steps[s].quota;
      }
      if (!steps.empty()) {
        m.add_row(std::string("one_") + tag + "_t" + std::to_string(t), pick,
                  RowSense::LE, 1.0);
      }
      m.add_row(std::string("lnk_") + tag + "_t" + std::to_string(t), link,
                RowSense::EQ, 0.0);
    };
    emit_side(h.sell, "sell", sellv[t], sb.p_dis[t], +1.0);
    emit_side(h.buy, "buy", buyv[t], sb.p_ch[t], -1.0);
  }

  MilpOptions mopt;
  const MilpSolution sol = solve_milp(m, mopt);
  if (!sol.optimal() && sol.status != MilpStatus::GapLimit)
    throw SolverError("quota schedule MILP failed: " +
                      std::string(to_string(sol.status)) + " " + sol.note);

  QuotaScheduleResult out;
  out.profit = sol.objective;
  out.schedule = schedule_from_block(sol.x, sb, spec);
  out.sell_quota.assign(T, 0.0);
  out.buy_quota.assign(T, 0.0);
  for (int t = 0; t < T; ++t) {
    for (int q : sellv[t].qty) out.sell_quota[t] += sol.x[q];
    for (int q : buyv[t].qty) out.buy_quota[t] += sol.x[q];
  }
  return out;
}

}  // namespace esbid
