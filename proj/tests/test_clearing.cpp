#include <doctest.h>

#include <cmath>
#include <random>

#include "esbid/clearing.hpp"
#include "case_helpers.hpp"

using namespace esbid;
using namespace esbid::testing;

TEST_CASE("one-hour clearing structure and marginal price") {
  MarketCase c = base_case(1, 60.0);
  add_genco(c, "g0", 1, {30.0}, {100.0});
  add_retailer(c, "r0", 1, {50.0}, {80.0});
  const EsfMarketOrder order = EsfMarketOrder::inactive(c, Market::DA);

  BuiltClearing built = build_clearing_lp(c, order, Market::DA);
  int balance_rows = 0;
  for (const auto& rows : built.index.balance) balance_rows += rows.size();
  CHECK(balance_rows == 1);
  int active_vars = 0;
  for (int j = 0; j < built.lp.num_vars(); ++j)
    if (built.lp.var(j).ub > 0.0) ++active_vars;
  CHECK(active_vars == 2);

  const ClearingResult res = clear_market(c, order, Market::DA);
  REQUIRE(res.optimal());
  CHECK(res.gen_dispatch[0][0] == doctest::Approx(80.0));
  CHECK(res.ret_dispatch[0][0] == doctest::Approx(80.0));
  // marginal seller sets the price
  CHECK(res.lmp_at(0, 0) == doctest::Approx(30.0));
  CHECK(res.welfare == doctest::Approx((50.0 - 30.0) * 80.0));
  CHECK(res.audit.passed);
}

TEST_CASE("zero demand clears to zero welfare") {
  MarketCase c = base_case(2, 60.0);
  add_genco(c, "g0", 1, hourly(2, 10.0), hourly(2, 50.0));
  const ClearingResult res =
      clear_market(c, EsfMarketOrder::inactive(c, Market::DA), Market::DA);
  REQUIRE(res.optimal());
  CHECK(res.welfare == doctest::Approx(0.0));
  CHECK(res.gen_dispatch[0][0] == doctest::Approx(0.0));
  CHECK(res.gen_dispatch[0][1] == doctest::Approx(0.0));
}

TEST_CASE("congested triangle splits the locational prices") {
  MarketCase c = base_case(1, 100.0);
  c.mode = ClearingMode::Network;
  c.network = triangle(100.0, 30.0, 100.0);
  c.esf.bus = 2;
  add_genco(c, "cheap", 1, {10.0}, {100.0});
  add_genco(c, "local", 3, {50.0}, {100.0});
  add_retailer(c, "load", 3, {100.0}, {60.0});
  const ClearingResult res =
      clear_market(c, EsfMarketOrder::inactive(c, Market::DA), Market::DA);
  REQUIRE(res.optimal());
  // hand-computed DC flow: cheap imports capped by line 1-3
  CHECK(res.gen_dispatch[0][0] == doctest::Approx(45.0));
  CHECK(res.gen_dispatch[1][0] == doctest::Approx(15.0));
  CHECK(res.flow[0][0] == doctest::Approx(15.0));  // 1->2
  CHECK(res.flow[1][0] == doctest::Approx(30.0));  // 1->3 at its limit
  CHECK(res.flow[2][0] == doctest::Approx(15.0));  // 2->3
  CHECK(res.lmp_at(0, 0) == doctest::Approx(10.0));
  CHECK(res.lmp_at(1, 0) == doctest::Approx(30.0));
  CHECK(res.lmp_at(2, 0) == doctest::Approx(50.0));
  // importing side strictly higher
  CHECK(res.lmp_at(2, 0) > res.lmp_at(0, 0) + 1e-6);
  CHECK(res.audit.passed);

  // relaxing the limit equalizes all prices
  MarketCase c2 = c;
  c2.network = triangle(1000.0, 1000.0, 1000.0);
  const ClearingResult res2 =
      clear_market(c2, EsfMarketOrder::inactive(c2, Market::DA), Market::DA);
  REQUIRE(res2.optimal());
  for (int b = 0; b < 3; ++b)
    CHECK(res2.lmp_at(b, 0) == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(res2.gen_dispatch[0][0] == doctest::Approx(60.0));
}

TEST_CASE("network mode with slack limits matches single-bus quantities") {
  MarketCase c = base_case(3, 80.0);
  add_genco(c, "g0", 1, {20.0, 25.0, 22.0}, hourly(3, 40.0));
  add_genco(c, "g1", 2, {35.0, 30.0, 28.0}, hourly(3, 25.0));
  add_retailer(c, "r0", 3, {50.0, 45.0, 26.0}, {30.0, 50.0, 20.0});
  set_esf(c, storage(40.0, 20.0, 10.0, 10.0, 0.95), 8.0, 8.0);
  EsfMarketOrder order = EsfMarketOrder::with_prices(
      c, Market::DA, hourly(3, 24.0), hourly(3, 21.0));

  const ClearingResult single = clear_market(c, order, Market::DA);
  REQUIRE(single.optimal());

  MarketCase cn = c;
  cn.mode = ClearingMode::Network;
  cn.network = triangle(1e5, 1e5, 1e5);
  const ClearingResult net = clear_market(cn, order, Market::DA);
  REQUIRE(net.optimal());

  for (int t = 0; t < 3; ++t) {
    CHECK(net.esf_sell[t] == doctest::Approx(single.esf_sell[t]).epsilon(1e-6));
    CHECK(net.esf_buy[t] == doctest::Approx(single.esf_buy[t]).epsilon(1e-6));
    for (size_t j = 0; j < c.gencos.size(); ++j)
      CHECK(net.gen_dispatch[j][t] ==
            doctest::Approx(single.gen_dispatch[j][t]).epsilon(1e-6));
    for (size_t i = 0; i < c.retailers.size(); ++i)
      CHECK(net.ret_dispatch[i][t] ==
            doctest::Approx(single.ret_dispatch[i][t]).epsilon(1e-6));
    // no congestion: one system price
    for (int b = 0; b < 3; ++b)
      CHECK(net.lmp_at(b, t) ==
            doctest::Approx(net.lmp_at(0, t)).epsilon(1e-6));
  }
}

TEST_CASE("raising a bid price weakly improves the welfare objective") {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> price(5.0, 50.0), qty(5.0, 60.0);
  for (int it = 0; it < 20; ++it) {
    MarketCase c = base_case(2, 100.0);
    add_genco(c, "g0", 1, {price(rng), price(rng)}, {qty(rng), qty(rng)});
    add_genco(c, "g1", 1, {price(rng), price(rng)}, {qty(rng), qty(rng)});
    add_retailer(c, "r0", 1, {price(rng), price(rng)}, {qty(rng), qty(rng)});
    const auto order = EsfMarketOrder::inactive(c, Market::DA);
    const ClearingResult base = clear_market(c, order, Market::DA);
    REQUIRE(base.optimal());
    MarketCase c2 = c;
    c2.retailers[0].bid_da[0] =
        std::min(c.price_cap, c.retailers[0].bid_da[0] + 10.0);
    const ClearingResult bumped = clear_market(c2, order, Market::DA);
    REQUIRE(bumped.optimal());
    CHECK(bumped.objective <= base.objective + 1e-9 * (1.0 + std::fabs(base.objective)));
  }
}

TEST_CASE("clearing infeasibility reports the binding rows") {
  MarketCase c = base_case(1, 60.0);
  add_genco(c, "g0", 1, {30.0}, {10.0});
  add_retailer(c, "r0", 1, {50.0}, {80.0});
  BuiltClearing built =
      build_clearing_lp(c, EsfMarketOrder::inactive(c, Market::DA), Market::DA);
  // force a demand floor above the available supply
  built.lp.var(built.index.ret[0][0]).lb = 20.0;
  const LpSolution s = solve_lp(built.lp);
  CHECK(s.status == LpStatus::Infeasible);
  REQUIRE(!s.infeasible_rows.empty());
  CHECK(built.lp.row(s.infeasible_rows[0]).name == "bal_t0");
}

TEST_CASE("network mode without a network is a configuration error") {
  MarketCase c = base_case(1, 60.0);
  c.mode = ClearingMode::Network;
  CHECK_THROWS_AS(
      build_clearing_lp(c, EsfMarketOrder::inactive(c, Market::DA), Market::DA),
      ConfigError);
}

// --- price-quota fast mode -------------------------------------------------

namespace {

PriceQuotaCurve flat_curve(int T, double price, double qmax, double cap) {
  PriceQuotaCurve pq;
  pq.price_cap = cap;
  pq.hours.resize(T);
  for (auto& h : pq.hours) {
    h.sell = {{qmax, price}};
    h.buy = {{qmax, price}};
  }
  return pq;
}

}  // namespace

TEST_CASE("flat prices with lossy storage leave the schedule idle") {
  PriceQuotaCurve pq = flat_curve(4, 25.0, 10.0, 60.0);
  StorageSpec spec = storage(30.0, 15.0, 10.0, 10.0, 0.85);
  const QuotaScheduleResult r = schedule_against_quota(pq, spec);
  CHECK(r.profit == doctest::Approx(0.0));
  for (int t = 0; t < 4; ++t) {
    CHECK(r.schedule.p_ch[t] == doctest::Approx(0.0));
    CHECK(r.schedule.p_dis[t] == doctest::Approx(0.0));
  }
}

TEST_CASE("dominant two-hour spread fills the power caps") {
  PriceQuotaCurve pq;
  pq.price_cap = 120.0;
  pq.hours.resize(2);
  pq.hours[0].buy = {{10.0, 10.0}};
  pq.hours[0].sell = {{10.0, 1.0}};
  pq.hours[1].sell = {{10.0, 100.0}};
  pq.hours[1].buy = {{10.0, 100.0}};
  StorageSpec spec = storage(10.0, 0.0, 10.0, 10.0, 1.0);
  const QuotaScheduleResult r = schedule_against_quota(pq, spec);
  CHECK(r.schedule.p_ch[0] == doctest::Approx(10.0));
  CHECK(r.schedule.p_dis[1] == doctest::Approx(10.0));
  CHECK(r.profit == doctest::Approx(10.0 * 100.0 - 10.0 * 10.0));
  CHECK(validate_schedule(r.schedule, spec).feasible());
}

namespace {

// exhaustive oracle: enumerate step selections, solve each restriction as an
// LP with all binaries pinned
double quota_oracle(const PriceQuotaCurve& pq, const StorageSpec& spec) {
  const int T = static_cast<int>(pq.hours.size());
  LinearModel m;
  m.set_objective_sense(ObjSense::Maximize);
  StorageBlockIndex sb = append_storage_block(m, spec, T, "es_");
  add_operation_cost_terms(m, sb, spec, -1.0);
  struct Step {
    int z, q;
    double lo, hi, price;
  };
  std::vector<std::vector<Step>> sell(T), buy(T);
  for (int t = 0; t < T; ++t) {
    auto emit = [&](const std::vector<QuotaStep>& steps, const char* tag,
                    std::vector<Step>& sv, int link, double sign) {
      std::vector<Term> lnk{{link, -1.0}};
      double prev = 0.0;
      for (size_t s = 0; s < steps.size(); ++s) {
        const std::string base = std::string(tag) + std::to_string(s) + "_" +
                                 std::to_string(t);
        const int z = m.add_binary("z" + base);
        const int q = m.add_continuous("q" + base, 0.0, steps[s].quota);
        m.add_row("hi" + base, {{q, 1.0}, {z, -steps[s].quota}}, RowSense::LE,
                  0.0);
        if (prev > 0.0)
          m.add_row("lo" + base, {{z, prev}, {q, -1.0}}, RowSense::LE, 0.0);
        m.add_objective_term(q, sign * steps[s].price);
        lnk.push_back({q, 1.0});
        sv.push_back({z, q, prev, steps[s].quota, steps[s].price});
        prev = steps[s].quota;
      }
      m.add_row(std::string("lk") + tag + std::to_string(t), lnk, RowSense::EQ,
                0.0);
    };
    emit(pq.hours[t].sell, "s", sell[t], sb.p_dis[t], 1.0);
    emit(pq.hours[t].buy, "b", buy[t], sb.p_ch[t], -1.0);
  }
  std::vector<double> lb(m.num_vars()), ub(m.num_vars());
  double best = 0.0;
  bool any = false;
  // choice per hour: -1 idle, 0..S-1 sell step, S.. buy step
  std::vector<int> choice(T, -1);
  const auto options = [&](int t) {
    return 1 + static_cast<int>(sell[t].size() + buy[t].size());
  };
  std::vector<int> counter(T, 0);
  while (true) {
    for (int j = 0; j < m.num_vars(); ++j) {
      lb[j] = m.var(j).lb;
      ub[j] = m.var(j).ub;
    }
    for (int t = 0; t < T; ++t) {
      const int ch = counter[t] - 1;
      const int S = static_cast<int>(sell[t].size());
      for (size_t s = 0; s < sell[t].size(); ++s)
        lb[sell[t][s].z] = ub[sell[t][s].z] =
            (ch == static_cast<int>(s)) ? 1.0 : 0.0;
      for (size_t s = 0; s < buy[t].size(); ++s)
        lb[buy[t][s].z] = ub[buy[t][s].z] =
            (ch == S + static_cast<int>(s)) ? 1.0 : 0.0;
      const bool selling = ch >= 0 && ch < S;
      const bool buying = ch >= S;
      lb[sb.y[t]] = ub[sb.y[t]] = selling ? 1.0 : 0.0;
      lb[sb.x[t]] = ub[sb.x[t]] = buying ? 1.0 : 0.0;
    }
    const LpSolution s = solve_lp_bounded(m, lb, ub);
    if (s.optimal()) {
      any = true;
      best = std::max(best, s.objective);
    }
    int t = 0;
    while (t < T && ++counter[t] >= options(t)) counter[t++] = 0;
    if (t == T) break;
  }
  (void)choice;
  REQUIRE(any);
  return best;
}

}  // namespace

TEST_CASE("stepped three-hour curves match the exhaustive oracle") {
  PriceQuotaCurve pq;
  pq.price_cap = 90.0;
  pq.hours.resize(3);
  pq.hours[0].buy = {{4.0, 12.0}, {8.0, 18.0}};
  pq.hours[0].sell = {{5.0, 20.0}, {9.0, 14.0}};
  pq.hours[1].buy = {{6.0, 25.0}, {10.0, 30.0}};
  pq.hours[1].sell = {{6.0, 45.0}, {12.0, 38.0}};
  pq.hours[2].buy = {{5.0, 8.0}};
  pq.hours[2].sell = {{7.0, 60.0}, {11.0, 52.0}};
  StorageSpec spec = storage(16.0, 4.0, 8.0, 8.0, 0.9, 1.0);

  const QuotaScheduleResult r = schedule_against_quota(pq, spec);
  const double oracle = quota_oracle(pq, spec);
  CHECK(r.profit == doctest::Approx(oracle).epsilon(1e-6).scale(1.0 + oracle));
  CHECK(validate_schedule(r.schedule, spec).feasible());
}
