#pragma once

#include <string>
#include <vector>

#include "esbid/bidding.hpp"
#include "esbid/market.hpp"

namespace esbid {

enum class IgdtTarget { RivalOrderPrices, ExogenousForecastPrices };
enum class IgdtMode { Robustness, Opportunity };
enum class Direction { Adverse, Favorable };

// Envelope-bound uncertainty around the nominal prices:
// |price - nominal| / nominal <= alpha * gamma(t).
struct EnvelopeModel {
  IgdtTarget target = IgdtTarget::RivalOrderPrices;
  std::vector<double> gamma;  // per hour; empty means 1 everywhere
  // nominal trajectories, used only in the exogenous-forecast mode
  std::vector<double> forecast_da;
  std::vector<double> forecast_rt;
  bool allow_floor = true;  // clamp adverse prices at zero

  double gamma_at(int t) const {
    return gamma.empty() ? 1.0 : gamma[static_cast<size_t>(t)];
  }
};

// Moves every targeted rival price to its envelope vertex: adverse scales
// by (1 - alpha*gamma), favorable by (1 + alpha*gamma); results are clamped
// to [0, price_cap]. Throws Error when alpha*gamma >= 1 with flooring
// disabled.
MarketCase realize_envelope(const MarketCase& c, const EnvelopeModel& env,
                            double alpha, Direction dir);

struct IgdtOptions {
  double tolerance = 1e-3;
  double alpha_max = 1.0;
  BiddingOptions bidding;
};

struct TraceEntry {
  int iteration = 0;
  double alpha = 0.0;
  double profit = 0.0;
};

enum class IgdtStatus {
  Converged,
  CappedAtAlphaMax,
  Unattainable,  // opportunity target unreachable within alpha_max
  IllPosed,      // opportunity with a nonpositive base profit
};

struct InfoGapResult {
  IgdtMode mode = IgdtMode::Robustness;
  IgdtStatus status = IgdtStatus::Converged;
  double beta = 0.0;           // deviation factor beta_R or beta_O
  double base_profit = 0.0;    // Z_BC
  double target_profit = 0.0;  // f_R or f_O
  double radius = 0.0;         // alpha-hat or beta-hat
  double profit_at_radius = 0.0;
  std::vector<TraceEntry> trace;
  bool certificate_at_radius = false;
  bool certificate_beyond_fails = false;  // target missed at radius±2*tol
  bool monotone_trace = true;
};

// Z_BC: the bidding profit at nominal parameters.
double base_case(const MarketCase& c, const BiddingOptions& opt = {});

// Largest alpha whose adverse realization still earns
// f_R = (1-beta_r) * Z_BC; deterministic bisection on [0, alpha_max].
InfoGapResult robustness(const MarketCase& c, const EnvelopeModel& env,
                         double beta_r, const IgdtOptions& opt = {});

// Smallest alpha whose favorable realization reaches
// f_O = (1+beta_o) * Z_BC.
InfoGapResult opportunity(const MarketCase& c, const EnvelopeModel& env,
                          double beta_o, const IgdtOptions& opt = {});

}  // namespace esbid
