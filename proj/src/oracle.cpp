#include "esbid/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace esbid {

namespace {

struct HourCache {
  // welfare minimum and the optimistic per-hour profit bound, per grid pair
  std::vector<double> welfare;  // [io * nb + ib]
  std::vector<double> ub;
  int no = 1, nb = 1;
};

// tiny single-hour clearing: balance row plus participant bounds
HourCache build_hour_cache(const MarketCase& c, Market m, int t,
                           const std::vector<double>& ogrid,
                           const std::vector<double>& bgrid) {
  HourCache hc;
  hc.no = static_cast<int>(ogrid.size());
  hc.nb = static_cast<int>(bgrid.size());
  hc.welfare.assign(static_cast<size_t>(hc.no) * hc.nb, 0.0);
  hc.ub.assign(static_cast<size_t>(hc.no) * hc.nb, 0.0);

  for (int io = 0; io < hc.no; ++io)
    for (int ib = 0; ib < hc.nb; ++ib) {
      LinearModel lp;
      const int ps = lp.add_continuous("P_es", 0.0, c.esf.sell_cap(m)[t]);
      const int db = lp.add_continuous("D_es", 0.0, c.esf.buy_cap(m)[t]);
      lp.set_objective_coef(ps, ogrid[io]);
      lp.set_objective_coef(db, -bgrid[ib]);
      std::vector<Term> bal{{db, 1.0}, {ps, -1.0}};
      for (const Genco& g : c.gencos) {
        const int v = lp.add_continuous("g_" + g.name, 0.0, g.p_max[t]);
        lp.set_objective_coef(v, c.genco_offer(g, m, t));
        bal.push_back({v, -1.0});
      }
      for (const Retailer& r : c.retailers) {
        const int v = lp.add_continuous("r_" + r.name, 0.0, r.d_max[t]);
        lp.set_objective_coef(v, -c.retailer_bid(r, m, t));
        bal.push_back({v, 1.0});
      }
      lp.add_row("bal", bal, RowSense::EQ, 0.0);
      const LpSolution s1 = solve_lp(lp);
      if (!s1.optimal())
        throw SolverError("oracle hour clearing failed");
      const double wstar = s1.objective;
      hc.welfare[static_cast<size_t>(io) * hc.nb + ib] = wstar;

      // optimistic bound: best facility profit on the optimal face
      LinearModel ub = lp;
      std::vector<Term> wrow;
      for (int j = 0; j < lp.num_vars(); ++j)
        if (lp.objective_coef(j) != 0.0)
          wrow.push_back({j, lp.objective_coef(j)});
      ub.add_row("wlock", wrow, RowSense::LE,
                 wstar + 1e-7 * (1.0 + std::fabs(wstar)));
      for (int j = 0; j < ub.num_vars(); ++j) ub.set_objective_coef(j, 0.0);
      ub.set_objective_sense(ObjSense::Maximize);
      ub.set_objective_coef(ps, ogrid[io]);
      ub.set_objective_coef(db, -bgrid[ib]);
      const LpSolution s2 = solve_lp(ub);
      hc.ub[static_cast<size_t>(io) * hc.nb + ib] =
          s2.optimal() ? s2.objective : 0.0;
    }
  return hc;
}

}  // namespace

OracleResult oracle_grid_search(const MarketCase& c, const OracleOptions& opt) {
  c.validate();
  const int T = c.horizon;
  if (T > opt.max_hours && !opt.force)
    throw ConfigError("oracle: horizon " + std::to_string(T) +
                      " exceeds the guard (" + std::to_string(opt.max_hours) +
                      " hours); pass force to override");

  std::vector<double> grid;
  for (double v = 0.0; v < c.price_cap + 1e-9; v += opt.grid)
    grid.push_back(std::min(v, c.price_cap));
  if (grid.back() < c.price_cap) grid.push_back(c.price_cap);

  // active scalar dimensions per (market, hour, side)
  struct Slot {
    Market m;
    int t;
    bool sell;
    std::vector<double> values;
  };
  std::vector<Slot> slots;
  bool has_gen = false, has_ret = false;
  for (const Genco& g : c.gencos)
    for (double v : g.p_max) has_gen |= v > 0.0;
  for (const Retailer& r : c.retailers)
    for (double v : r.d_max) has_ret |= v > 0.0;
  OracleResult out;
  for (Market m : {Market::DA, Market::RT})
    for (int t = 0; t < T; ++t) {
      const bool sell_active = c.esf.sell_cap(m)[t] > 0.0 && has_ret;
      const bool buy_active = c.esf.buy_cap(m)[t] > 0.0 && has_gen;
      slots.push_back({m, t, true,
                       sell_active ? grid : std::vector<double>{0.0}});
      if (sell_active) ++out.dims;
      slots.push_back({m, t, false,
                       buy_active ? grid : std::vector<double>{0.0}});
      if (buy_active) ++out.dims;
    }

  long combos = 1;
  for (const Slot& s : slots) {
    combos *= static_cast<long>(s.values.size());
    if (combos > opt.max_evaluations && !opt.force)
      throw ConfigError("oracle: grid has more than " +
                        std::to_string(opt.max_evaluations) +
                        " combinations; coarsen it or pass force");
  }
  out.combinations = combos;

  // per-hour caches, indexed like the slot pairs
  std::vector<HourCache> cache(static_cast<size_t>(2) * T);
  for (Market m : {Market::DA, Market::RT})
    for (int t = 0; t < T; ++t) {
      const Slot& so = slots[(m == Market::DA ? 0 : 2L * T) + 2L * t];
      const Slot& sb = slots[(m == Market::DA ? 0 : 2L * T) + 2L * t + 1];
      cache[(m == Market::DA ? 0 : T) + t] =
          build_hour_cache(c, m, t, so.values, sb.values);
    }

  std::vector<int> counter(slots.size(), 0);
  std::vector<double> offer_da(T, 0.0), bid_da(T, 0.0), offer_rt(T, 0.0),
      bid_rt(T, 0.0);
  bool have_best = false;
  while (true) {
    // upper bound from the per-hour caches
    double ub = 0.0;
    for (int mi = 0; mi < 2; ++mi)
      for (int t = 0; t < T; ++t) {
        const size_t base = static_cast<size_t>(mi) * 2 * T + 2 * t;
        const HourCache& hc = cache[static_cast<size_t>(mi) * T + t];
        ub += hc.ub[static_cast<size_t>(counter[base]) * hc.nb +
                    counter[base + 1]];
      }
    if (!have_best || ub > out.best_profit + 1e-12) {
      for (size_t si = 0; si < slots.size(); ++si) {
        const Slot& s = slots[si];
        const double v = s.values[counter[si]];
        auto& vec = s.m == Market::DA ? (s.sell ? offer_da : bid_da)
                                      : (s.sell ? offer_rt : bid_rt);
        vec[s.t] = v;
      }
      EsfMarketOrder oda =
          EsfMarketOrder::with_prices(c, Market::DA, offer_da, bid_da);
      EsfMarketOrder ort =
          EsfMarketOrder::with_prices(c, Market::RT, offer_rt, bid_rt);
      const FixedPriceOutcome fp = evaluate_fixed_prices(c, oda, ort, opt.milp);
      ++out.evaluations;
      if (fp.feasible && (!have_best || fp.profit > out.best_profit)) {
        have_best = true;
        out.best_profit = fp.profit;
        out.offer_da = offer_da;
        out.bid_da = bid_da;
        out.offer_rt = offer_rt;
        out.bid_rt = bid_rt;
        out.outcome = fp;
      }
    } else {
      ++out.pruned;
    }
    size_t si = 0;
    while (si < slots.size() &&
           ++counter[si] >= static_cast<int>(slots[si].values.size()))
      counter[si++] = 0;
    if (si == slots.size()) break;
  }
  if (!have_best)
    throw SolverError("oracle: no feasible grid point (unexpected)");
  return out;
}

}  // namespace esbid
