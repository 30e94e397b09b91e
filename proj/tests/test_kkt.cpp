#include <doctest.h>

#include <cmath>

#include "esbid/branch_bound.hpp"
#include "esbid/clearing.hpp"
#include "esbid/kkt.hpp"
#include "case_helpers.hpp"

using namespace esbid;
using namespace esbid::testing;

TEST_CASE("textbook one-variable system") {
  // min -x, 0 <= x <= u: stationarity -1 - pl + pu = 0, pairs (x,pl),(u-x,pu)
  LinearModel m;
  const int x = m.add_continuous("x", 0.0, 4.0);
  m.set_objective_coef(x, -1.0);
  const KktSystem k = derive_kkt(m, {});
  REQUIRE(k.stationarity.size() == 1);
  CHECK(k.stationarity[0].constant == -1.0);
  REQUIRE(k.pairs.size() == 2);
  CHECK(k.pairs[0].kind == KktSystem::CompPair::Kind::VarLower);
  CHECK(k.pairs[1].kind == KktSystem::CompPair::Kind::VarUpper);
  REQUIRE(k.duals.size() == 2);
  CHECK(k.duals[k.pairs[0].dual].name == "pl_x");
  CHECK(k.duals[k.pairs[1].dual].name == "pu_x");

  const LpSolution s = solve_lp(m);
  REQUIRE(s.optimal());
  const KktPoint pt = extract_kkt_point(k, s);
  const KktResiduals r = kkt_residuals(k, pt, {});
  CHECK(r.max_stationarity <= 1e-9);
  CHECK(r.max_complementarity <= 1e-9);
  CHECK(r.max_dual_sign <= 0.0);
  CHECK(r.strong_duality <= 1e-9);
}

TEST_CASE("clearing LP duals satisfy the derived system") {
  MarketCase c = base_case(2, 60.0);
  add_genco(c, "g0", 1, {30.0, 20.0}, {100.0, 90.0});
  add_retailer(c, "r0", 1, {50.0, 45.0}, {80.0, 70.0});
  set_esf(c, storage(50.0, 25.0, 20.0, 20.0, 0.9), 15.0, 15.0);
  const EsfMarketOrder order = EsfMarketOrder::with_prices(
      c, Market::DA, {25.0, 19.0}, {22.0, 18.0});
  BuiltClearing built = build_clearing_lp(c, order, Market::DA);
  const LpSolution s = solve_lp(built.lp);
  REQUIRE(s.optimal());
  const KktSystem k = derive_kkt(built.lp, {});
  // one stationarity row per primal variable
  CHECK(k.stationarity.size() == static_cast<size_t>(built.lp.num_vars()));
  const KktPoint pt = extract_kkt_point(k, s);
  const KktResiduals r = kkt_residuals(k, pt, {});
  CHECK(r.max_stationarity <= 1e-9);
  CHECK(r.max_complementarity <= 1e-9);
  CHECK(r.max_dual_sign <= 1e-12);
  CHECK(r.strong_duality <= 1e-9 * (1.0 + std::fabs(s.objective)));
}

TEST_CASE("strategic marks move prices into symbol terms") {
  MarketCase c = base_case(1, 60.0);
  add_genco(c, "g0", 1, {30.0}, {100.0});
  add_retailer(c, "r0", 1, {50.0}, {80.0});
  set_esf(c, storage(50.0, 25.0, 20.0, 20.0), 15.0, 15.0);
  const EsfMarketOrder order =
      EsfMarketOrder::with_prices(c, Market::DA, {0.0}, {0.0});
  BuiltClearing built = build_clearing_lp(c, order, Market::DA);
  std::vector<StrategicMark> marks{
      {built.index.esf_sell[0], "O_es_t0"},
      {built.index.esf_buy[0], "B_es_t0"},
  };
  const KktSystem k = derive_kkt(built.lp, marks);
  REQUIRE(k.symbols.size() == 2);
  const auto& st = k.stationarity[built.index.esf_sell[0]];
  CHECK(st.constant == 0.0);
  REQUIRE(st.symbol_terms.size() == 1);
  CHECK(st.symbol_terms[0].coef == 1.0);
  CHECK(k.sd_bilinear.size() == 2);

  // duplicate marks are derivation errors
  marks.push_back({built.index.esf_sell[0], "other"});
  CHECK_THROWS_AS(derive_kkt(built.lp, marks), ModelError);
}

TEST_CASE("linearize emits the Fortuny-Amat rows with exact bound Ms") {
  // pair (x, pl) with x <= 5 and dual M 100
  LinearModel src;
  src.add_continuous("x", 0.0, 5.0);
  src.set_objective_coef(0, 1.0);
  const KktSystem k = derive_kkt(src, {});
  BigMPolicy policy;
  policy.price_cap = 10.0;
  policy.dual_multiplier = 10.0;  // dual M 100

  KktFragment f = build_kkt_fragment(k, policy, 10.0);
  REQUIRE(f.big_m.size() == 2);
  CHECK(f.big_m[0].pair_name == "lo_x");
  CHECK(f.big_m[0].primal_m == 5.0);
  CHECK(f.big_m[0].dual_m == 100.0);

  const int ra = f.model.row_index("cpa_lo_x");
  const int rb = f.model.row_index("cpb_lo_x");
  REQUIRE(ra >= 0);
  REQUIRE(rb >= 0);
  // x - 5u <= 0 and pl + 100u <= 100
  const Constraint& a = f.model.row(ra);
  CHECK(a.sense == RowSense::LE);
  CHECK(a.rhs == 0.0);
  const Constraint& b = f.model.row(rb);
  CHECK(b.rhs == 100.0);

  // u = 1 branch: dual forced to zero, primal free up to its cap.
  // Probe the emitted complementarity rows alone.
  {
    LinearModel probe;
    FragmentMaps maps;
    maps.primal_var = {probe.add_continuous("x", 0.0, 5.0)};
    maps.dual_var = {probe.add_continuous("pl_x", 0.0, kInf),
                     probe.add_continuous("pu_x", 0.0, kInf)};
    linearize(k, policy, probe, maps);
    const int u = probe.var_index("u_lo_x");
    probe.var(u).lb = probe.var(u).ub = 1.0;
    probe.set_objective_sense(ObjSense::Maximize);
    probe.set_objective_coef(maps.dual_var[0], 1.0);
    const MilpSolution best_dual = solve_milp(probe);
    REQUIRE(best_dual.optimal());
    CHECK(best_dual.objective == doctest::Approx(0.0));  // pl pinned at 0
    probe.set_objective_coef(maps.dual_var[0], 0.0);
    probe.set_objective_coef(maps.primal_var[0], 1.0);
    const MilpSolution best_x = solve_milp(probe);
    REQUIRE(best_x.optimal());
    CHECK(best_x.objective == doctest::Approx(5.0));  // x free up to its cap
  }
}

TEST_CASE("unbounded pair cannot be sized and names itself") {
  LinearModel src;
  src.add_continuous("x", 0.0, kInf);
  src.set_objective_coef(0, 1.0);
  const KktSystem k = derive_kkt(src, {});
  BigMPolicy policy;
  policy.price_cap = 10.0;
  LinearModel target;
  FragmentMaps maps;
  maps.primal_var = {target.add_continuous("x", 0.0, kInf)};
  maps.dual_var = {target.add_continuous("pl_x", 0.0, kInf)};
  CHECK_THROWS_WITH_AS(linearize(k, policy, target, maps),
                       doctest::Contains("lo_x"), PolicyError);
}

TEST_CASE("row-slack override sizes flow-style pairs") {
  LinearModel src;
  const int th = src.add_continuous("th", -kInf, kInf);
  src.set_objective_coef(th, 0.0);
  src.add_row("fhi", {{th, 2.0}}, RowSense::LE, 10.0);
  src.add_row("flo", {{th, -2.0}}, RowSense::LE, 10.0);
  src.add_row("pin", {{th, 1.0}}, RowSense::EQ, 0.0);
  const KktSystem k = derive_kkt(src, {});
  BigMPolicy policy;
  policy.price_cap = 10.0;
  // without overrides the free variable makes the slack unbounded
  CHECK_THROWS_AS(build_kkt_fragment(k, policy, 10.0), PolicyError);
  policy.row_slack_m["fhi"] = 20.0;
  policy.row_slack_m["flo"] = 20.0;
  const KktFragment f = build_kkt_fragment(k, policy, 10.0);
  bool found = false;
  for (const auto& pm : f.big_m)
    if (pm.pair_name == "slk_fhi") {
      found = true;
      CHECK(pm.primal_m == 20.0);
    }
  CHECK(found);
}

TEST_CASE("revenue substitution covers rival terms and bound duals") {
  MarketCase c = base_case(1, 60.0);
  add_genco(c, "g0", 1, {30.0}, {100.0});
  add_retailer(c, "r0", 1, {50.0}, {80.0});
  set_esf(c, storage(50.0, 25.0, 20.0, 20.0), 15.0, 15.0);
  const EsfMarketOrder order =
      EsfMarketOrder::with_prices(c, Market::DA, {0.0}, {0.0});
  BuiltClearing built = build_clearing_lp(c, order, Market::DA);
  std::vector<StrategicMark> marks{
      {built.index.esf_sell[0], "O_es_t0"},
      {built.index.esf_buy[0], "B_es_t0"},
  };
  const KktSystem k = derive_kkt(built.lp, marks);
  BigMPolicy policy;
  policy.price_cap = 60.0;
  const KktFragment f = build_kkt_fragment(k, policy, 60.0);
  CHECK(!f.revenue.terms.empty());
  CHECK(f.revenue.doc.find("2 bilinear terms eliminated") != std::string::npos);

  // rival-term block scales linearly with the rival prices
  MarketCase c2 = c;
  c2.gencos[0].offer_da[0] *= 2.0;
  c2.retailers[0].bid_da[0] = 100.0;  // 2x
  c2.price_cap = 120.0;
  BuiltClearing built2 = build_clearing_lp(
      c2, EsfMarketOrder::with_prices(c2, Market::DA, {0.0}, {0.0}), Market::DA);
  std::vector<StrategicMark> marks2{
      {built2.index.esf_sell[0], "O_es_t0"},
      {built2.index.esf_buy[0], "B_es_t0"},
  };
  const KktSystem k2 = derive_kkt(built2.lp, marks2);
  REQUIRE(k.sd_rival_cost.size() == k2.sd_rival_cost.size());
  for (size_t i = 0; i < k.sd_rival_cost.size(); ++i) {
    CHECK(k2.sd_rival_cost[i].var == k.sd_rival_cost[i].var);
    CHECK(k2.sd_rival_cost[i].coef ==
          doctest::Approx(2.0 * k.sd_rival_cost[i].coef));
  }

  // degenerate case with no rivals: only bound-dual terms survive
  MarketCase lonely = base_case(1, 60.0);
  set_esf(lonely, storage(50.0, 25.0, 20.0, 20.0), 15.0, 15.0);
  BuiltClearing lb = build_clearing_lp(
      lonely, EsfMarketOrder::with_prices(lonely, Market::DA, {0.0}, {0.0}),
      Market::DA);
  std::vector<StrategicMark> lm{
      {lb.index.esf_sell[0], "O_es_t0"},
      {lb.index.esf_buy[0], "B_es_t0"},
  };
  const KktSystem lk = derive_kkt(lb.lp, lm);
  CHECK(lk.sd_rival_cost.empty());
  CHECK(!lk.sd_dual_side.empty());
}

TEST_CASE("fixed variables contribute a free dual and no pair") {
  LinearModel src;
  src.add_continuous("x", 3.0, 3.0);
  src.add_continuous("y", 0.0, 5.0);
  src.set_objective_coef(1, 1.0);
  src.add_row("link", {{0, 1.0}, {1, 1.0}}, RowSense::GE, 4.0);
  const KktSystem k = derive_kkt(src, {});
  // pairs: y lower, y upper, row slack; none for the fixed x
  CHECK(k.pairs.size() == 3);
  const LpSolution s = solve_lp(src);
  REQUIRE(s.optimal());
  const KktPoint pt = extract_kkt_point(k, s);
  const KktResiduals r = kkt_residuals(k, pt, {});
  CHECK(r.max_stationarity <= 1e-9);
  CHECK(r.strong_duality <= 1e-9 * (1.0 + std::fabs(s.objective)));
}
