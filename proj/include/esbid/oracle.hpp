#pragma once

#include <vector>

#include "esbid/bidding.hpp"

namespace esbid {

struct OracleOptions {
  double grid = 1.0;             // price step, currency/MWh
  int max_hours = 3;             // guard: refuse longer horizons
  long max_evaluations = 2000000;  // guard: refuse larger grids
  bool force = false;            // lift both guards
  MilpOptions milp;
};

struct OracleResult {
  double best_profit = 0.0;
  std::vector<double> offer_da, bid_da, offer_rt, bid_rt;
  FixedPriceOutcome outcome;  // at the best grid point
  long evaluations = 0;       // stage-2 evaluations run
  long combinations = 0;      // total grid points
  long pruned = 0;
  int dims = 0;               // active scalar price dimensions
};

// Brute-force reference: enumerates every active strategic price over the
// grid {0, g, 2g, ..., price_cap}, evaluates each combination with the
// optimistic fixed-price evaluator, and keeps the best feasible profit.
// A price dimension is active when its quantity cap is positive and a
// counterparty exists; inactive dimensions are pinned at zero. Guarded by
// max_hours/max_evaluations unless `force` is set (throws ConfigError).
OracleResult oracle_grid_search(const MarketCase& c,
                                const OracleOptions& opt = {});

}  // namespace esbid
