#pragma once

#include <string>
#include <vector>

#include "esbid/linear_model.hpp"
#include "esbid/market.hpp"
#include "esbid/simplex.hpp"
#include "esbid/storage_model.hpp"

namespace esbid {

// The storage facility's submitted order book for one market.
struct EsfMarketOrder {
  Market market = Market::DA;
  std::vector<double> offer_price;  // per hour
  std::vector<double> offer_cap;
  std::vector<double> bid_price;
  std::vector<double> bid_cap;

  // zero quantity caps: the facility stays out of this market
  static EsfMarketOrder inactive(const MarketCase& c, Market m);
  // caps straight from the case, prices as given
  static EsfMarketOrder with_prices(const MarketCase& c, Market m,
                                    std::vector<double> offer,
                                    std::vector<double> bid);
  void validate(const MarketCase& c) const;
};

// Variable/row ids of one built clearing LP.
struct ClearingIndex {
  std::vector<int> esf_sell, esf_buy;       // per hour
  std::vector<std::vector<int>> gen;        // [genco][hour]
  std::vector<std::vector<int>> ret;        // [retailer][hour]
  std::vector<std::vector<int>> theta;      // [bus][hour], network mode
  std::vector<std::vector<int>> balance;    // [bus][hour]; single-bus: [0][t]
  std::vector<std::vector<int>> flow_hi;    // [line][hour]
  std::vector<std::vector<int>> flow_lo;
  std::vector<int> ref_row;                 // per hour, network mode
  std::vector<int> bus_ids;                 // row-order of `balance`
};

struct BuiltClearing {
  LinearModel lp;  // minimization of offer costs minus bid value
  ClearingIndex index;
};

// Builds the market-clearing LP for fixed storage orders: hourly balance
// (system-wide or per bus with DC flows), participant quantity bounds, and
// two one-sided flow-limit rows per line.
BuiltClearing build_clearing_lp(const MarketCase& c, const EsfMarketOrder& order,
                                Market market);

struct ClearingAudit {
  double max_balance_residual = 0.0;
  double max_flow_violation = 0.0;
  double duality_gap = 0.0;
  double max_stationarity_residual = 0.0;
  double max_complementarity = 0.0;
  bool passed = false;
};

struct ClearingResult {
  Market market = Market::DA;
  LpStatus status = LpStatus::IterLimit;
  std::vector<double> esf_sell, esf_buy;          // per hour
  std::vector<std::vector<double>> gen_dispatch;  // [genco][hour]
  std::vector<std::vector<double>> ret_dispatch;  // [retailer][hour]
  std::vector<int> bus_ids;                       // {0} in single-bus mode
  std::vector<std::vector<double>> lmp;           // [bus][hour]
  std::vector<std::vector<double>> flow;          // [line][hour]
  std::vector<double> row_dual;                   // full dual vector
  std::vector<double> reduced_cost;
  double objective = 0.0;  // LP objective (negative welfare)
  double welfare = 0.0;
  ClearingAudit audit;
  std::vector<std::string> binding_rows;  // infeasibility report

  bool optimal() const { return status == LpStatus::Optimal; }
  double lmp_at(int bus_pos, int t) const { return lmp[bus_pos][t]; }
};

// Solves the clearing LP and extracts dispatch, prices (balance-row duals),
// flows, the full dual vector, and a KKT/duality audit.
ClearingResult clear_market(const MarketCase& c, const EsfMarketOrder& order,
                            Market market, const SimplexOptions& opt = {});

// --- price-quota fast mode ---------------------------------------------

// Cumulative step curve: selling a total quota q with
// quota[k-1] < q <= quota[k] realizes price[k] on the whole quantity.
struct QuotaStep {
  double quota = 0.0;
  double price = 0.0;
};

struct HourlyQuotaCurve {
  std::vector<QuotaStep> sell;  // price non-increasing in quota
  std::vector<QuotaStep> buy;   // shape unconstrained
};

struct PriceQuotaCurve {
  std::vector<HourlyQuotaCurve> hours;
  double price_cap = 0.0;
  void validate() const;
};

struct QuotaScheduleResult {
  StorageSchedule schedule;
  double profit = 0.0;
  std::vector<double> sell_quota, buy_quota;  // per hour
};

// Self-contained MILP: pick one step per hour and side, dispatch within it,
// respect the storage physics, maximize realized revenue minus cost.
QuotaScheduleResult schedule_against_quota(const PriceQuotaCurve& curves,
                                           const StorageSpec& spec);

}  // namespace esbid
