#include "esbid/storage.hpp"

#include <cmath>

namespace esbid {

void StorageSpec::validate() const {
  auto fail = [](const std::string& msg) { throw ModelError("storage: " + msg); };
  if (!(soc_min >= 0.0)) fail("soc_min must be >= 0");
  if (!(soc_min <= soc_initial && soc_initial <= soc_max))
    fail("needs soc_min <= soc_initial <= soc_max");
  if (!(eta_ch > 0.0 && eta_ch <= 1.0)) fail("eta_ch must lie in (0,1]");
  if (!(eta_dis > 0.0 && eta_dis <= 1.0)) fail("eta_dis must lie in (0,1]");
  if (!(p_ch_min >= 0.0 && p_ch_min <= p_ch_max))
    fail("needs 0 <= p_ch_min <= p_ch_max");
  if (!(p_dis_min >= 0.0 && p_dis_min <= p_dis_max))
    fail("needs 0 <= p_dis_min <= p_dis_max");
  if (!(delta_t > 0.0)) fail("delta_t must be positive");
  if (!(cost_coeff >= 0.0)) fail("cost_coeff must be >= 0");
}

StorageSchedule StorageSchedule::zeros(int horizon, const StorageSpec& spec) {
  StorageSchedule s;
  s.p_ch.assign(horizon, 0.0);
  s.p_dis.assign(horizon, 0.0);
  s.charging.assign(horizon, 0);
  s.discharging.assign(horizon, 0);
  s.soc.assign(horizon, spec.soc_initial);
  return s;
}

double soc_step(double soc_prev, double p_ch, double p_dis,
                const StorageSpec& spec) {
  return soc_prev + spec.delta_t * (p_ch * spec.eta_ch - p_dis / spec.eta_dis);
}

FeasibilityReport validate_schedule(const StorageSchedule& s,
                                    const StorageSpec& spec) {
  const int T = s.horizon();
  if (static_cast<int>(s.p_dis.size()) != T ||
      static_cast<int>(s.charging.size()) != T ||
      static_cast<int>(s.discharging.size()) != T ||
      static_cast<int>(s.soc.size()) != T)
    throw ModelError("schedule arrays disagree on the horizon length");

  FeasibilityReport rep;
  rep.recursion_residual.resize(T);
  constexpr double kSocTol = 1e-9;
  const double ptol = 1e-9;

  double prev = spec.soc_initial;
  for (int t = 0; t < T; ++t) {
    const bool x = s.charging[t] != 0;
    const bool y = s.discharging[t] != 0;
    if (x && y)
      rep.violations.push_back(
          {7, t, 1.0, "charging and discharging flags both set"});

    const double ch_lo = x ? spec.p_ch_min : 0.0;
    const double ch_hi = x ? spec.p_ch_max : 0.0;
    if (s.p_ch[t] < ch_lo - ptol || s.p_ch[t] > ch_hi + ptol)
      rep.violations.push_back({3, t,
                                std::max(ch_lo - s.p_ch[t], s.p_ch[t] - ch_hi),
                                "charge power outside its gated bounds"});
    const double dis_lo = y ? spec.p_dis_min : 0.0;
    const double dis_hi = y ? spec.p_dis_max : 0.0;
    if (s.p_dis[t] < dis_lo - ptol || s.p_dis[t] > dis_hi + ptol)
      rep.violations.push_back({4, t,
                                std::max(dis_lo - s.p_dis[t], s.p_dis[t] - dis_hi),
                                "discharge power outside its gated bounds"});

    if (s.soc[t] < spec.soc_min - kSocTol || s.soc[t] > spec.soc_max + kSocTol)
      rep.violations.push_back(
          {2, t, std::max(spec.soc_min - s.soc[t], s.soc[t] - spec.soc_max),
           "state of charge outside its bounds"});

    const double expect = soc_step(prev, s.p_ch[t], s.p_dis[t], spec);
    const double resid = std::fabs(s.soc[t] - expect);
    rep.recursion_residual[t] = resid;
    if (resid > kSocTol)
      rep.violations.push_back({1, t, resid, "state-of-charge recursion residual"});
    prev = s.soc[t];
  }
  if (T > 0) {
    const double cyc = std::fabs(s.soc[T - 1] - spec.soc_initial);
    if (cyc > kSocTol)
      rep.violations.push_back(
          {5, -1, cyc, "final state of charge differs from the initial one"});
  }
  return rep;
}

double operation_cost(const StorageSchedule& s, const StorageSpec& spec) {
  double acc = 0.0;
  for (int t = 0; t < s.horizon(); ++t) {
    acc += (s.charging[t] ? s.p_ch[t] : 0.0) +
           (s.discharging[t] ? s.p_dis[t] : 0.0);
  }
  return spec.cost_coeff * acc * spec.delta_t;
}

}  // namespace esbid
