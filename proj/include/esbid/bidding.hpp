#pragma once

#include <string>
#include <vector>

#include "esbid/branch_bound.hpp"
#include "esbid/clearing.hpp"
#include "esbid/kkt.hpp"
#include "esbid/market.hpp"
#include "esbid/storage_model.hpp"

namespace esbid {

struct BiddingOptions {
  double dual_m_multiplier = 10.0;  // dual big-M = multiplier * price_cap
  std::optional<double> big_m_override;  // forces every M (test hook)
  int max_escalations = 3;
  bool run_replay = true;
  MilpOptions milp;
};

struct ProfitBreakdown {
  double revenue_da = 0.0, revenue_rt = 0.0;
  double cost_da = 0.0, cost_rt = 0.0;
  double operation_cost = 0.0;
  double total() const {
    return revenue_da + revenue_rt - cost_da - cost_rt - operation_cost;
  }
};

struct ReplayReport {
  double max_quantity_deviation = 0.0;
  double max_price_deviation = 0.0;
  double profit_deviation = 0.0;  // replayed minus model profit
  double welfare_deviation = 0.0;
  bool tie = false;            // deviation explained by a lower-level tie
  bool residual_flag = false;  // unexplained deviation (big-M artifact)
  std::vector<std::string> notes;

  double residual() const;
};

struct BigMAudit {
  double worst_pair_overlap = 0.0;  // max over pairs of min(a+, b+)
  int duals_near_cap = 0;
  int escalations = 0;
  bool clean = false;
};

struct BiddingSolution {
  MilpStatus status = MilpStatus::NodeLimit;
  int horizon = 0;
  // prices (decision) and cleared quantities per hour
  std::vector<double> offer_da, bid_da, offer_rt, bid_rt;
  std::vector<double> sell_da, buy_da, sell_rt, buy_rt;
  std::vector<double> lambda_da, lambda_rt;  // balance duals at the esf bus
  StorageSchedule schedule;
  ProfitBreakdown profit;
  double model_welfare_da = 0.0;  // lower-level welfare implied by the MILP
  double model_welfare_rt = 0.0;
  double milp_objective = 0.0;
  double objective_identity_gap = 0.0;
  double rel_gap = 0.0;
  long nodes = 0;
  double root_bound = 0.0;
  BigMAudit bigm;
  ReplayReport replay;
  std::vector<std::string> warnings;

  bool usable() const {
    return status == MilpStatus::Optimal || status == MilpStatus::GapLimit ||
           status == MilpStatus::NodeLimit;
  }
};

// One market's KKT block inside the assembled MILP.
struct MarketBlock {
  Market market = Market::DA;
  KktSystem kkt;
  FragmentMaps maps;  // indices into the fragment model
  std::vector<PairBigM> big_m;
  RevenueExpr revenue;  // fragment ids
  ClearingIndex clearing_index;  // indices into the kkt source LP
  int offset = 0;  // fragment var j lives at offset + j in the MILP

  int milp_var(int fragment_var) const { return offset + fragment_var; }
};

struct AssembledBidding {
  LinearModel milp;
  MarketBlock da, rt;
  StorageBlockIndex storage;
  std::string revenue_doc;

  const MarketBlock& block(Market m) const {
    return m == Market::DA ? da : rt;
  }
};

// Builds the single-level bidding MILP: per-market KKT fragments (primal
// feasibility, stationarity, dual signs, big-M complementarities), storage
// physics coupling the cleared quantities, and the strong-duality revenue
// substitution as the objective.
AssembledBidding assemble_bidding_milp(const MarketCase& c,
                                       const BiddingOptions& opt = {});

// Solves the bidding MILP, audits the big-M linearization (escalating the
// dual Ms and re-solving when a dual presses its cap), extracts the
// schedule and profit decomposition, and replays the solution through the
// standalone clearing module.
BiddingSolution solve_bidding(const MarketCase& c, const BiddingOptions& opt = {});

// Fixes the solution's offers/bids, re-clears both markets independently,
// and compares quantities, prices, and profit against the model's claims.
ReplayReport replay_check(const BiddingSolution& sol, const MarketCase& c);

// --- fixed-price evaluation (optimistic lower level) -----------------------

struct FixedPriceOutcome {
  bool feasible = false;  // some welfare-optimal dispatch fits the storage
  double profit = 0.0;
  std::vector<double> sell_da, buy_da, sell_rt, buy_rt;
  StorageSchedule schedule;
  double welfare_da = 0.0, welfare_rt = 0.0;
};

// Clears both markets at the given orders, then picks the storage-feasible
// dispatch among (near-)welfare-optimal ones that maximizes the facility's
// pay-as-bid profit. This is the optimistic tie convention made explicit.
FixedPriceOutcome evaluate_fixed_prices(const MarketCase& c,
                                        const EsfMarketOrder& order_da,
                                        const EsfMarketOrder& order_rt,
                                        const MilpOptions& opt = {});

// --- price-taker benchmark --------------------------------------------------

struct PriceTakerResult {
  double planned_profit = 0.0;
  double realized_profit = 0.0;
  ProfitBreakdown realized;
  StorageSchedule planned_schedule;
  FixedPriceOutcome realization;
  bool realization_feasible = false;
};

// Self-schedules against the forecast prices, then submits the plan as
// quantity orders priced at the forecast and evaluates the realized
// pay-as-bid profit.
PriceTakerResult price_taker_profit(const MarketCase& c,
                                    const std::vector<double>& forecast_da,
                                    const std::vector<double>& forecast_rt,
                                    const MilpOptions& opt = {});

// Forecast helper: system price (at the esf bus) from clearing each market
// without any storage participation.
std::vector<double> no_esf_price_forecast(const MarketCase& c, Market m);

// Number of binaries the assembled MILP would contain (used by the CLI's
// horizon-reduction rule).
long count_bidding_binaries(const MarketCase& c);

// Truncates every hourly profile to the first `horizon` hours.
MarketCase truncate_horizon(const MarketCase& c, int horizon);

}  // namespace esbid
