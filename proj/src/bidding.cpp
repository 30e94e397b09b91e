#include "esbid/bidding.hpp"

#include <algorithm>
#include <cmath>

namespace esbid {

double ReplayReport::residual() const { return std::fabs(profit_deviation); }

namespace {

std::vector<StrategicMark> strategic_marks(const ClearingIndex& ix, int T,
                                           Market m) {
  const char* tag = m == Market::DA ? "da" : "rt";
  std::vector<StrategicMark> marks;
  for (int t = 0; t < T; ++t) {
    marks.push_back({ix.esf_sell[t],
                     std::string("O_") + tag + "_t" + std::to_string(t), 1.0});
    // bid prices enter the welfare minimization negated
    marks.push_back({ix.esf_buy[t],
                     std::string("B_") + tag + "_t" + std::to_string(t), -1.0});
  }
  return marks;
}

}  // namespace

AssembledBidding assemble_bidding_milp(const MarketCase& c,
                                       const BiddingOptions& opt) {
  c.validate();
  const int T = c.horizon;

  AssembledBidding out;
  LinearModel& milp = out.milp;
  milp.set_objective_sense(ObjSense::Maximize);

  for (Market m : {Market::DA, Market::RT}) {
    MarketBlock blk;
    blk.market = m;
    EsfMarketOrder placeholder = EsfMarketOrder::with_prices(
        c, m, std::vector<double>(T, 0.0), std::vector<double>(T, 0.0));
    BuiltClearing built = build_clearing_lp(c, placeholder, m);
    blk.clearing_index = built.index;
    blk.kkt = derive_kkt(built.lp, strategic_marks(built.index, T, m));

    BigMPolicy policy;
    policy.price_cap = c.price_cap;
    policy.dual_multiplier = opt.dual_m_multiplier;
    policy.global_override = opt.big_m_override;
    if (c.mode == ClearingMode::Network) {
      const NetworkSpec& nw = *c.network;
      for (size_t l = 0; l < nw.lines.size(); ++l)
        for (int t = 0; t < T; ++t) {
          policy.row_slack_m[built.lp.row(built.index.flow_hi[l][t]).name] =
              2.0 * nw.lines[l].f_max;
          policy.row_slack_m[built.lp.row(built.index.flow_lo[l][t]).name] =
              2.0 * nw.lines[l].f_max;
        }
    }
    KktFragment frag = build_kkt_fragment(blk.kkt, policy, c.price_cap);
    blk.maps = frag.maps;
    blk.big_m = frag.big_m;
    blk.revenue = frag.revenue;
    blk.offset = append_model(milp, frag.model,
                              m == Market::DA ? "da_" : "rt_");
    // strong-duality revenue substitution enters the objective directly
    for (const Term& t : blk.revenue.terms)
      milp.add_objective_term(blk.offset + t.var, t.coef);
    if (m == Market::DA)
      out.da = std::move(blk);
    else
      out.rt = std::move(blk);
  }
  out.revenue_doc = "DA: " + out.da.revenue.doc + "; RT: " + out.rt.revenue.doc;

  out.storage = append_storage_block(milp, c.esf.storage, T, "es_");
  add_operation_cost_terms(milp, out.storage, c.esf.storage, -1.0);

  // physical coupling: discharge feeds the sells, charge absorbs the buys
  for (int t = 0; t < T; ++t) {
    const int da_sell =
        out.da.milp_var(out.da.maps.primal_var[out.da.clearing_index.esf_sell[t]]);
    const int rt_sell =
        out.rt.milp_var(out.rt.maps.primal_var[out.rt.clearing_index.esf_sell[t]]);
    const int da_buy =
        out.da.milp_var(out.da.maps.primal_var[out.da.clearing_index.esf_buy[t]]);
    const int rt_buy =
        out.rt.milp_var(out.rt.maps.primal_var[out.rt.clearing_index.esf_buy[t]]);
    milp.add_row("lnk_dis_t" + std::to_string(t),
                 {{out.storage.p_dis[t], 1.0}, {da_sell, -1.0}, {rt_sell, -1.0}},
                 RowSense::EQ, 0.0);
    milp.add_row("lnk_ch_t" + std::to_string(t),
                 {{out.storage.p_ch[t], 1.0}, {da_buy, -1.0}, {rt_buy, -1.0}},
                 RowSense::EQ, 0.0);
  }
  return out;
}

namespace {

struct Extracted {
  std::vector<double> offer, bid, sell, buy, lambda;
};

Extracted extract_market(const MarketCase& c, const AssembledBidding& asm_,
                         Market m, const std::vector<double>& x) {
  const MarketBlock& blk = asm_.block(m);
  const int T = c.horizon;
  Extracted e;
  auto snap = [](double v) { return std::fabs(v) < 1e-9 ? 0.0 : v; };
  for (int t = 0; t < T; ++t) {
    const int so = blk.maps.symbol_var[blk.kkt.symbol_of_var
                                           [blk.clearing_index.esf_sell[t]]];
    const int bo = blk.maps.symbol_var[blk.kkt.symbol_of_var
                                           [blk.clearing_index.esf_buy[t]]];
    e.offer.push_back(snap(x[blk.milp_var(so)]));
    e.bid.push_back(snap(x[blk.milp_var(bo)]));
    e.sell.push_back(
        snap(x[blk.milp_var(blk.maps.primal_var[blk.clearing_index.esf_sell[t]])]));
    e.buy.push_back(
        snap(x[blk.milp_var(blk.maps.primal_var[blk.clearing_index.esf_buy[t]])]));
    // balance dual at the facility's bus
    int bus_pos = 0;
    if (c.mode == ClearingMode::Network) {
      for (size_t b = 0; b < blk.clearing_index.bus_ids.size(); ++b)
        if (blk.clearing_index.bus_ids[b] == c.esf.bus)
          bus_pos = static_cast<int>(b);
    }
    const int bal_row = blk.clearing_index.balance[bus_pos][t];
    const int lam =
        blk.maps.dual_var[blk.kkt.row_dual_id[bal_row]];
    e.lambda.push_back(x[blk.milp_var(lam)]);
  }
  return e;
}

BigMAudit audit_big_m(const AssembledBidding& asm_,
                      const std::vector<double>& x, double scale) {
  BigMAudit audit;
  for (const MarketBlock* blk : {&asm_.da, &asm_.rt}) {
    for (size_t p = 0; p < blk->kkt.pairs.size(); ++p) {
      const auto& pair = blk->kkt.pairs[p];
      // a-side in source coordinates
      double a = 0.0;
      using PK = KktSystem::CompPair::Kind;
      switch (pair.kind) {
        case PK::VarLower:
          a = x[blk->milp_var(blk->maps.primal_var[pair.ref])] -
              blk->kkt.source.var(pair.ref).lb;
          break;
        case PK::VarUpper:
          a = blk->kkt.source.var(pair.ref).ub -
              x[blk->milp_var(blk->maps.primal_var[pair.ref])];
          break;
        case PK::RowSlack: {
          const Constraint& row = blk->kkt.source.row(pair.ref);
          double act = 0.0;
          for (const Term& t : row.terms)
            act += t.coef * x[blk->milp_var(blk->maps.primal_var[t.var])];
          a = row.sense == RowSense::LE ? row.rhs - act : act - row.rhs;
          break;
        }
      }
      const double b = x[blk->milp_var(blk->maps.dual_var[pair.dual])];
      audit.worst_pair_overlap = std::max(
          audit.worst_pair_overlap, std::min(std::max(a, 0.0), std::max(b, 0.0)));
      const double cap = blk->big_m[p].dual_m;
      if (b >= cap - 1e-6 * (1.0 + cap)) ++audit.duals_near_cap;
    }
  }
  audit.clean = audit.duals_near_cap == 0 &&
                audit.worst_pair_overlap <= 1e-6 * scale;
  return audit;
}

}  // namespace

BiddingSolution solve_bidding(const MarketCase& c, const BiddingOptions& opt) {
  BiddingOptions cur = opt;
  BiddingSolution sol;
  sol.horizon = c.horizon;

  for (int attempt = 0; attempt <= opt.max_escalations; ++attempt) {
    AssembledBidding asm_ = assemble_bidding_milp(c, cur);
    const MilpSolution ms = solve_milp(asm_.milp, cur.milp);
    sol.status = ms.status;
    sol.nodes += ms.nodes;
    sol.rel_gap = ms.rel_gap;
    sol.root_bound = ms.root_bound;
    if (ms.status == MilpStatus::Infeasible ||
        ms.status == MilpStatus::Unbounded) {
      sol.warnings.push_back("bidding MILP " +
                             std::string(to_string(ms.status)));
      return sol;
    }
    if (!ms.has_incumbent) {
      sol.warnings.push_back("no incumbent found within limits");
      return sol;
    }
    if (ms.status != MilpStatus::Optimal)
      sol.warnings.push_back("partial solution: " +
                             std::string(to_string(ms.status)) +
                             " (gap " + std::to_string(ms.rel_gap) + ")");

    sol.milp_objective = ms.objective;
    const double scale = 1.0 + std::fabs(ms.objective);
    sol.bigm = audit_big_m(asm_, ms.x, scale);
    sol.bigm.escalations = attempt;

    const Extracted da = extract_market(c, asm_, Market::DA, ms.x);
    const Extracted rt = extract_market(c, asm_, Market::RT, ms.x);
    sol.offer_da = da.offer;
    sol.bid_da = da.bid;
    sol.sell_da = da.sell;
    sol.buy_da = da.buy;
    sol.lambda_da = da.lambda;
    sol.offer_rt = rt.offer;
    sol.bid_rt = rt.bid;
    sol.sell_rt = rt.sell;
    sol.buy_rt = rt.buy;
    sol.lambda_rt = rt.lambda;
    sol.schedule = schedule_from_block(ms.x, asm_.storage, c.esf.storage);

    ProfitBreakdown pb;
    for (int t = 0; t < c.horizon; ++t) {
      pb.revenue_da += da.offer[t] * da.sell[t];
      pb.revenue_rt += rt.offer[t] * rt.sell[t];
      pb.cost_da += da.bid[t] * da.buy[t];
      pb.cost_rt += rt.bid[t] * rt.buy[t];
    }
    pb.operation_cost = operation_cost(sol.schedule, c.esf.storage);
    sol.profit = pb;
    sol.objective_identity_gap = std::fabs(pb.total() - ms.objective);

    // lower-level welfare implied by the incumbent, per market
    for (Market m : {Market::DA, Market::RT}) {
      const MarketBlock& blk = asm_.block(m);
      const Extracted& e = m == Market::DA ? da : rt;
      double w = 0.0;
      for (int t = 0; t < c.horizon; ++t)
        w += e.bid[t] * e.buy[t] - e.offer[t] * e.sell[t];
      for (size_t j = 0; j < c.gencos.size(); ++j)
        for (int t = 0; t < c.horizon; ++t)
          w -= c.genco_offer(c.gencos[j], m, t) *
               ms.x[blk.milp_var(
                   blk.maps.primal_var[blk.clearing_index.gen[j][t]])];
      for (size_t i = 0; i < c.retailers.size(); ++i)
        for (int t = 0; t < c.horizon; ++t)
          w += c.retailer_bid(c.retailers[i], m, t) *
               ms.x[blk.milp_var(
                   blk.maps.primal_var[blk.clearing_index.ret[i][t]])];
      (m == Market::DA ? sol.model_welfare_da : sol.model_welfare_rt) = w;
    }

    if (!sol.bigm.clean && attempt < opt.max_escalations &&
        !opt.big_m_override) {
      sol.warnings.push_back(
          "big-M audit flagged " + std::to_string(sol.bigm.duals_near_cap) +
          " capped duals (overlap " +
          std::to_string(sol.bigm.worst_pair_overlap) + "); escalating x10");
      cur.dual_m_multiplier *= 10.0;
      continue;
    }
    break;
  }

  if (opt.run_replay) sol.replay = replay_check(sol, c);
  return sol;
}

ReplayReport replay_check(const BiddingSolution& sol, const MarketCase& c) {
  ReplayReport rep;
  const int T = c.horizon;
  const double model_profit = sol.profit.total();
  const double scale = 1.0 + std::fabs(model_profit);
  bool price_coincidence = false;

  double replay_revenue = 0.0;
  std::vector<double> replay_ch(T, 0.0), replay_dis(T, 0.0);

  for (Market m : {Market::DA, Market::RT}) {
    const auto& offer = m == Market::DA ? sol.offer_da : sol.offer_rt;
    const auto& bid = m == Market::DA ? sol.bid_da : sol.bid_rt;
    const auto& sell = m == Market::DA ? sol.sell_da : sol.sell_rt;
    const auto& buy = m == Market::DA ? sol.buy_da : sol.buy_rt;
    const auto& lambda = m == Market::DA ? sol.lambda_da : sol.lambda_rt;
    const double model_welfare =
        m == Market::DA ? sol.model_welfare_da : sol.model_welfare_rt;

    const EsfMarketOrder order = EsfMarketOrder::with_prices(c, m, offer, bid);
    const ClearingResult res = clear_market(c, order, m);
    if (!res.optimal()) {
      rep.notes.push_back(std::string(to_string(m)) +
                          ": replay clearing failed");
      rep.residual_flag = true;
      continue;
    }
    int bus_pos = 0;
    for (size_t b = 0; b < res.bus_ids.size(); ++b)
      if (res.bus_ids[b] == (c.mode == ClearingMode::Network ? c.esf.bus : 0))
        bus_pos = static_cast<int>(b);

    for (int t = 0; t < T; ++t) {
      rep.max_quantity_deviation =
          std::max({rep.max_quantity_deviation,
                    std::fabs(res.esf_sell[t] - sell[t]),
                    std::fabs(res.esf_buy[t] - buy[t])});
      rep.max_price_deviation =
          std::max(rep.max_price_deviation,
                   std::fabs(res.lmp_at(bus_pos, t) - lambda[t]));
      replay_revenue += offer[t] * res.esf_sell[t] - bid[t] * res.esf_buy[t];
      replay_dis[t] += res.esf_sell[t];
      replay_ch[t] += res.esf_buy[t];
      // the facility's price exactly meeting a rival's marks a potential tie
      for (const Genco& g : c.gencos)
        if (std::fabs(c.genco_offer(g, m, t) - offer[t]) < 1e-9 &&
            (sell[t] > 1e-9 || res.esf_sell[t] > 1e-9))
          price_coincidence = true;
      for (const Retailer& r : c.retailers)
        if (std::fabs(c.retailer_bid(r, m, t) - bid[t]) < 1e-9 &&
            (buy[t] > 1e-9 || res.esf_buy[t] > 1e-9))
          price_coincidence = true;
    }
    rep.welfare_deviation = std::max(
        rep.welfare_deviation, std::fabs(res.welfare - model_welfare));
  }

  double replay_opcost = 0.0;
  for (int t = 0; t < T; ++t)
    replay_opcost += (replay_ch[t] + replay_dis[t]) *
                     c.esf.storage.cost_coeff * c.esf.storage.delta_t;
  rep.profit_deviation = (replay_revenue - replay_opcost) - model_profit;

  const double wtol =
      1e-6 * (1.0 + std::fabs(sol.model_welfare_da) +
              std::fabs(sol.model_welfare_rt));
  const bool welfare_agrees = rep.welfare_deviation <= wtol;
  const bool deviates = rep.residual() > 1e-6 * scale ||
                        rep.max_quantity_deviation > 1e-6 * scale;
  if (deviates && welfare_agrees) {
    rep.tie = true;
    std::string note = "tie realization: replayed dispatch differs at equal "
                       "welfare; realized (dis,ch) per hour:";
    for (int t = 0; t < T; ++t)
      note += " (" + std::to_string(replay_dis[t]) + "," +
              std::to_string(replay_ch[t]) + ")";
    rep.notes.push_back(note);
  } else if (deviates) {
    rep.residual_flag = true;
    rep.notes.push_back("unexplained replay deviation (welfare gap " +
                        std::to_string(rep.welfare_deviation) + ")");
  }
  if (price_coincidence && !rep.tie)
    rep.notes.push_back("price tie with a rival order detected");
  return rep;
}

FixedPriceOutcome evaluate_fixed_prices(const MarketCase& c,
                                        const EsfMarketOrder& order_da,
                                        const EsfMarketOrder& order_rt,
                                        const MilpOptions& opt) {
  FixedPriceOutcome out;
  const int T = c.horizon;

  const ClearingResult res_da = clear_market(c, order_da, Market::DA);
  const ClearingResult res_rt = clear_market(c, order_rt, Market::RT);
  if (!res_da.optimal() || !res_rt.optimal()) return out;
  out.welfare_da = res_da.welfare;
  out.welfare_rt = res_rt.welfare;

  LinearModel stage2;
  stage2.set_objective_sense(ObjSense::Maximize);
  struct Blk {
    int offset;
    ClearingIndex ix;
    const EsfMarketOrder* order;
    double wstar;
  };
  std::vector<Blk> blks;
  for (Market m : {Market::DA, Market::RT}) {
    const EsfMarketOrder& order = m == Market::DA ? order_da : order_rt;
    BuiltClearing built = build_clearing_lp(c, order, m);
    const int offset = append_model(stage2, built.lp,
                                    m == Market::DA ? "da_" : "rt_");
    // welfare lock: the stage-1 optimum bounds the welfare objective below,
    // so one near-equality side suffices
    std::vector<Term> wrow;
    for (int j = 0; j < built.lp.num_vars(); ++j) {
      const double cj = built.lp.objective_coef(j);
      if (cj != 0.0) wrow.push_back({offset + j, cj});
    }
    const double wstar = m == Market::DA ? -res_da.welfare : -res_rt.welfare;
    stage2.add_row(std::string("wlock_") + to_string(m), wrow, RowSense::LE,
                   wstar + 1e-7 * (1.0 + std::fabs(wstar)));
    for (int t = 0; t < T; ++t) {
      stage2.add_objective_term(offset + built.index.esf_sell[t],
                                order.offer_price[t]);
      stage2.add_objective_term(offset + built.index.esf_buy[t],
                                -order.bid_price[t]);
    }
    blks.push_back({offset, built.index, &order, wstar});
  }

  StorageBlockIndex sb = append_storage_block(stage2, c.esf.storage, T, "es_");
  add_operation_cost_terms(stage2, sb, c.esf.storage, -1.0);
  for (int t = 0; t < T; ++t) {
    stage2.add_row("lnk_dis_t" + std::to_string(t),
                   {{sb.p_dis[t], 1.0},
                    {blks[0].offset + blks[0].ix.esf_sell[t], -1.0},
                    {blks[1].offset + blks[1].ix.esf_sell[t], -1.0}},
                   RowSense::EQ, 0.0);
    stage2.add_row("lnk_ch_t" + std::to_string(t),
                   {{sb.p_ch[t], 1.0},
                    {blks[0].offset + blks[0].ix.esf_buy[t], -1.0},
                    {blks[1].offset + blks[1].ix.esf_buy[t], -1.0}},
                   RowSense::EQ, 0.0);
  }

  const MilpSolution ms = solve_milp(stage2, opt);
  if (!ms.optimal() && ms.status != MilpStatus::GapLimit) return out;
  out.feasible = true;
  out.profit = ms.objective;
  out.schedule = schedule_from_block(ms.x, sb, c.esf.storage);
  auto pull = [&](const Blk& b, const std::vector<int>& ids) {
    std::vector<double> v(T);
    for (int t = 0; t < T; ++t) v[t] = ms.x[b.offset + ids[t]];
    return v;
  };
  out.sell_da = pull(blks[0], blks[0].ix.esf_sell);
  out.buy_da = pull(blks[0], blks[0].ix.esf_buy);
  out.sell_rt = pull(blks[1], blks[1].ix.esf_sell);
  out.buy_rt = pull(blks[1], blks[1].ix.esf_buy);
  return out;
}

PriceTakerResult price_taker_profit(const MarketCase& c,
                                    const std::vector<double>& forecast_da,
                                    const std::vector<double>& forecast_rt,
                                    const MilpOptions& opt) {
  c.validate();
  const int T = c.horizon;
  if (static_cast<int>(forecast_da.size()) != T ||
      static_cast<int>(forecast_rt.size()) != T)
    throw ModelError("price-taker: forecast length mismatch");

  PriceTakerResult out;

  // plan: self-schedule against the forecast
  LinearModel plan;
  plan.set_objective_sense(ObjSense::Maximize);
  StorageBlockIndex sb = append_storage_block(plan, c.esf.storage, T, "es_");
  add_operation_cost_terms(plan, sb, c.esf.storage, -1.0);
  std::vector<int> sell_da(T), buy_da(T), sell_rt(T), buy_rt(T);
  for (int t = 0; t < T; ++t) {
    sell_da[t] = plan.add_continuous("sell_da_t" + std::to_string(t), 0.0,
                                     c.esf.sell_cap_da[t]);
    buy_da[t] = plan.add_continuous("buy_da_t" + std::to_string(t), 0.0,
                                    c.esf.buy_cap_da[t]);
    sell_rt[t] = plan.add_continuous("sell_rt_t" + std::to_string(t), 0.0,
                                     c.esf.sell_cap_rt[t]);
    buy_rt[t] = plan.add_continuous("buy_rt_t" + std::to_string(t), 0.0,
                                    c.esf.buy_cap_rt[t]);
    plan.set_objective_coef(sell_da[t], forecast_da[t]);
    plan.set_objective_coef(buy_da[t], -forecast_da[t]);
    plan.set_objective_coef(sell_rt[t], forecast_rt[t]);
    plan.set_objective_coef(buy_rt[t], -forecast_rt[t]);
    plan.add_row("lnk_dis_t" + std::to_string(t),
                 {{sb.p_dis[t], 1.0}, {sell_da[t], -1.0}, {sell_rt[t], -1.0}},
                 RowSense::EQ, 0.0);
    plan.add_row("lnk_ch_t" + std::to_string(t),
                 {{sb.p_ch[t], 1.0}, {buy_da[t], -1.0}, {buy_rt[t], -1.0}},
                 RowSense::EQ, 0.0);
  }
  const MilpSolution ms = solve_milp(plan, opt);
  if (!ms.optimal() && ms.status != MilpStatus::GapLimit)
    throw SolverError("price-taker plan MILP failed: " +
                      std::string(to_string(ms.status)));
  out.planned_profit = ms.objective;
  out.planned_schedule = schedule_from_block(ms.x, sb, c.esf.storage);

  // realization: quantity-only orders priced at the forecast
  auto clampv = [&](double v) { return std::min(std::max(v, 0.0), c.price_cap); };
  EsfMarketOrder oda, ort;
  oda.market = Market::DA;
  ort.market = Market::RT;
  for (int t = 0; t < T; ++t) {
    auto q = [&](int var) {
      const double v = ms.x[var];
      return std::fabs(v) < 1e-9 ? 0.0 : v;
    };
    oda.offer_price.push_back(clampv(forecast_da[t]));
    oda.bid_price.push_back(clampv(forecast_da[t]));
    oda.offer_cap.push_back(q(sell_da[t]));
    oda.bid_cap.push_back(q(buy_da[t]));
    ort.offer_price.push_back(clampv(forecast_rt[t]));
    ort.bid_price.push_back(clampv(forecast_rt[t]));
    ort.offer_cap.push_back(q(sell_rt[t]));
    ort.bid_cap.push_back(q(buy_rt[t]));
  }
  out.realization = evaluate_fixed_prices(c, oda, ort, opt);
  out.realization_feasible = out.realization.feasible;
  if (out.realization.feasible) {
    out.realized_profit = out.realization.profit;
    ProfitBreakdown pb;
    for (int t = 0; t < T; ++t) {
      pb.revenue_da += oda.offer_price[t] * out.realization.sell_da[t];
      pb.cost_da += oda.bid_price[t] * out.realization.buy_da[t];
      pb.revenue_rt += ort.offer_price[t] * out.realization.sell_rt[t];
      pb.cost_rt += ort.bid_price[t] * out.realization.buy_rt[t];
    }
    pb.operation_cost =
        operation_cost(out.realization.schedule, c.esf.storage);
    out.realized = pb;
  }
  return out;
}

std::vector<double> no_esf_price_forecast(const MarketCase& c, Market m) {
  const ClearingResult res =
      clear_market(c, EsfMarketOrder::inactive(c, m), m);
  if (!res.optimal())
    throw SolverError("forecast clearing failed for market " +
                      std::string(to_string(m)));
  int bus_pos = 0;
  if (c.mode == ClearingMode::Network) {
    for (size_t b = 0; b < res.bus_ids.size(); ++b)
      if (res.bus_ids[b] == c.esf.bus) bus_pos = static_cast<int>(b);
  }
  return res.lmp[bus_pos];
}

long count_bidding_binaries(const MarketCase& c) {
  long n = 2L * c.horizon;  // charge/discharge flags
  for (Market m : {Market::DA, Market::RT}) {
    EsfMarketOrder placeholder = EsfMarketOrder::with_prices(
        c, m, std::vector<double>(c.horizon, 0.0),
        std::vector<double>(c.horizon, 0.0));
    BuiltClearing built = build_clearing_lp(c, placeholder, m);
    const KktSystem k = derive_kkt(built.lp, {});
    n += static_cast<long>(k.pairs.size());
  }
  return n;
}

MarketCase truncate_horizon(const MarketCase& c, int horizon) {
  if (horizon <= 0 || horizon > c.horizon)
    throw ModelError("truncate_horizon: invalid target horizon");
  MarketCase out = c;
  out.horizon = horizon;
  auto cut = [&](std::vector<double>& v) {
    if (!v.empty()) v.resize(horizon);
  };
  for (Genco& g : out.gencos) {
    cut(g.offer_da);
    cut(g.offer_rt);
    cut(g.p_max);
  }
  for (Retailer& r : out.retailers) {
    cut(r.bid_da);
    cut(r.bid_rt);
    cut(r.d_max);
  }
  cut(out.esf.sell_cap_da);
  cut(out.esf.sell_cap_rt);
  cut(out.esf.buy_cap_da);
  cut(out.esf.buy_cap_rt);
  cut(out.net_load);
  return out;
}

}  // namespace esbid
