#include "esbid/igdt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace esbid {

namespace {

double scaled(double nominal, double alpha, double gamma, Direction dir,
              double cap, bool allow_floor) {
  const double f = alpha * gamma;
  if (dir == Direction::Adverse && f >= 1.0 && !allow_floor)
    throw Error("envelope: alpha*gamma >= 1 reaches the zero floor "
                "(flooring disabled)");
  const double v =
      nominal * (dir == Direction::Adverse ? (1.0 - f) : (1.0 + f));
  return std::min(std::max(v, 0.0), cap);
}

}  // namespace

MarketCase realize_envelope(const MarketCase& c, const EnvelopeModel& env,
                            double alpha, Direction dir) {
  if (alpha < 0.0) throw Error("envelope: alpha must be nonnegative");
  if (!env.gamma.empty() &&
      static_cast<int>(env.gamma.size()) != c.horizon)
    throw ModelError("envelope: gamma profile length mismatch");
  if (env.target != IgdtTarget::RivalOrderPrices)
    throw ConfigError("realize_envelope applies to the rival-order-prices "
                      "target; exogenous forecasts are perturbed in place");
  MarketCase out = c;
  if (alpha == 0.0) return out;
  for (Genco& g : out.gencos)
    for (int t = 0; t < c.horizon; ++t) {
      g.offer_da[t] = scaled(g.offer_da[t], alpha, env.gamma_at(t), dir,
                             c.price_cap, env.allow_floor);
      g.offer_rt[t] = scaled(g.offer_rt[t], alpha, env.gamma_at(t), dir,
                             c.price_cap, env.allow_floor);
    }
  for (Retailer& r : out.retailers)
    for (int t = 0; t < c.horizon; ++t) {
      r.bid_da[t] = scaled(r.bid_da[t], alpha, env.gamma_at(t), dir,
                           c.price_cap, env.allow_floor);
      r.bid_rt[t] = scaled(r.bid_rt[t], alpha, env.gamma_at(t), dir,
                           c.price_cap, env.allow_floor);
    }
  return out;
}

double base_case(const MarketCase& c, const BiddingOptions& opt) {
  const BiddingSolution sol = solve_bidding(c, opt);
  if (!sol.usable())
    throw SolverError("base case: bidding solve failed with status " +
                      std::string(to_string(sol.status)));
  return sol.profit.total();
}

namespace {

using Evaluator = std::function<double(double, Direction)>;

Evaluator make_evaluator(const MarketCase& c, const EnvelopeModel& env,
                         const IgdtOptions& opt) {
  if (env.target == IgdtTarget::RivalOrderPrices) {
    return [&c, &env, &opt](double alpha, Direction dir) {
      const MarketCase realized = realize_envelope(c, env, alpha, dir);
      const BiddingSolution sol = solve_bidding(realized, opt.bidding);
      if (!sol.usable())
        throw SolverError("igdt evaluation failed at alpha " +
                          std::to_string(alpha));
      return sol.profit.total();
    };
  }
  if (static_cast<int>(env.forecast_da.size()) != c.horizon ||
      static_cast<int>(env.forecast_rt.size()) != c.horizon)
    throw ModelError("envelope: exogenous mode needs forecast trajectories");
  return [&c, &env, &opt](double alpha, Direction dir) {
    std::vector<double> fda = env.forecast_da, frt = env.forecast_rt;
    for (int t = 0; t < c.horizon; ++t) {
      fda[t] = scaled(fda[t], alpha, env.gamma_at(t), dir, c.price_cap,
                      env.allow_floor);
      frt[t] = scaled(frt[t], alpha, env.gamma_at(t), dir, c.price_cap,
                      env.allow_floor);
    }
    const PriceTakerResult pt =
        price_taker_profit(c, fda, frt, opt.bidding.milp);
    if (!pt.realization_feasible)
      throw SolverError("igdt evaluation: price-taker realization infeasible "
                        "at alpha " + std::to_string(alpha));
    return pt.realized_profit;
  };
}

void audit_monotone(InfoGapResult& r, Direction dir) {
  std::vector<TraceEntry> sorted = r.trace;
  std::sort(sorted.begin(), sorted.end(),
            [](const TraceEntry& a, const TraceEntry& b) {
              return a.alpha < b.alpha;
            });
  const double tol = 1e-6 * (1.0 + std::fabs(r.base_profit));
  for (size_t i = 1; i < sorted.size(); ++i) {
    const double d = sorted[i].profit - sorted[i - 1].profit;
    if ((dir == Direction::Adverse && d > tol) ||
        (dir == Direction::Favorable && d < -tol))
      r.monotone_trace = false;
  }
}

}  // namespace

InfoGapResult robustness(const MarketCase& c, const EnvelopeModel& env,
                         double beta_r, const IgdtOptions& opt) {
  if (beta_r < 0.0 || beta_r >= 1.0)
    throw ModelError("robustness: beta_r must lie in [0, 1)");
  Evaluator eval = make_evaluator(c, env, opt);

  InfoGapResult r;
  r.mode = IgdtMode::Robustness;
  r.beta = beta_r;
  int iter = 0;
  auto probe = [&](double alpha) {
    const double p = eval(alpha, Direction::Adverse);
    r.trace.push_back({iter++, alpha, p});
    return p;
  };

  const double p0 = probe(0.0);
  r.base_profit = p0;
  r.target_profit = (1.0 - beta_r) * p0;
  const double scale = 1.0 + std::fabs(p0);
  if (p0 < r.target_profit - 1e-9 * scale)
    throw SolverError("robustness: nominal profit misses its own target "
                      "(numerical drift)");
  if (beta_r == 0.0) {
    r.radius = 0.0;
    r.profit_at_radius = p0;
    r.status = IgdtStatus::Converged;
    r.certificate_at_radius = true;
    audit_monotone(r, Direction::Adverse);
    return r;
  }

  double lo = 0.0, plo = p0;
  const double ptop = probe(opt.alpha_max);
  if (ptop >= r.target_profit - 1e-9 * scale) {
    r.radius = opt.alpha_max;
    r.profit_at_radius = ptop;
    r.status = IgdtStatus::CappedAtAlphaMax;
    r.certificate_at_radius = true;
    audit_monotone(r, Direction::Adverse);
    return r;
  }
  double hi = opt.alpha_max;
  while (hi - lo > opt.tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double pm = probe(mid);
    if (pm >= r.target_profit) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
    }
  }
  r.radius = lo;
  r.profit_at_radius = plo;
  r.status = IgdtStatus::Converged;

  // certificate: independent re-solves at and just beyond the radius
  const double pat = eval(r.radius, Direction::Adverse);
  r.certificate_at_radius = pat >= r.target_profit - 1e-6 * scale;
  const double pbeyond = eval(r.radius + 2.0 * opt.tolerance, Direction::Adverse);
  r.certificate_beyond_fails = pbeyond < r.target_profit;
  audit_monotone(r, Direction::Adverse);
  return r;
}

InfoGapResult opportunity(const MarketCase& c, const EnvelopeModel& env,
                          double beta_o, const IgdtOptions& opt) {
  if (beta_o < 0.0) throw ModelError("opportunity: beta_o must be >= 0");
  Evaluator eval = make_evaluator(c, env, opt);

  InfoGapResult r;
  r.mode = IgdtMode::Opportunity;
  r.beta = beta_o;
  int iter = 0;
  auto probe = [&](double alpha) {
    const double p = eval(alpha, Direction::Favorable);
    r.trace.push_back({iter++, alpha, p});
    return p;
  };

  const double p0 = probe(0.0);
  r.base_profit = p0;
  r.target_profit = (1.0 + beta_o) * p0;
  const double scale = 1.0 + std::fabs(p0);
  if (p0 <= 0.0) {
    r.status = IgdtStatus::IllPosed;
    return r;
  }
  if (beta_o == 0.0) {
    r.radius = 0.0;
    r.profit_at_radius = p0;
    r.status = IgdtStatus::Converged;
    r.certificate_at_radius = true;
    audit_monotone(r, Direction::Favorable);
    return r;
  }
  const double ptop = probe(opt.alpha_max);
  if (ptop < r.target_profit - 1e-9 * scale) {
    r.radius = opt.alpha_max;
    r.profit_at_radius = ptop;
    r.status = IgdtStatus::Unattainable;
    audit_monotone(r, Direction::Favorable);
    return r;
  }
  double lo = 0.0, hi = opt.alpha_max, phi = ptop;
  while (hi - lo > opt.tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double pm = probe(mid);
    if (pm >= r.target_profit) {
      hi = mid;
      phi = pm;
    } else {
      lo = mid;
    }
  }
  r.radius = hi;
  r.profit_at_radius = phi;
  r.status = IgdtStatus::Converged;

  const double pat = eval(r.radius, Direction::Favorable);
  r.certificate_at_radius = pat >= r.target_profit - 1e-6 * scale;
  if (r.radius - 2.0 * opt.tolerance >= 0.0) {
    const double pshy = eval(r.radius - 2.0 * opt.tolerance, Direction::Favorable);
    r.certificate_beyond_fails = pshy < r.target_profit;
  }
  audit_monotone(r, Direction::Favorable);
  return r;
}

}  // namespace esbid
