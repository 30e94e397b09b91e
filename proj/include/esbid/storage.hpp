#pragma once

#include <string>
#include <vector>

#include "esbid/errors.hpp"

namespace esbid {

// Physical and economic parameters of the storage facility. Immutable value
// object; validate() enforces the construction invariants.
struct StorageSpec {
  double soc_min = 0.0;      // MWh
  double soc_max = 0.0;      // MWh
  double soc_initial = 0.0;  // MWh
  double p_ch_min = 0.0;     // MW
  double p_ch_max = 0.0;     // MW
  double p_dis_min = 0.0;    // MW
  double p_dis_max = 0.0;    // MW
  double eta_ch = 1.0;       // (0,1]
  double eta_dis = 1.0;      // (0,1]
  double cost_coeff = 0.0;   // currency per MWh of throughput
  double delta_t = 1.0;      // hours

  void validate() const;
};

// One dispatch trajectory. soc[t] is the state of charge at the end of hour
// t, so the cyclic condition reads soc[T-1] == soc_initial.
struct StorageSchedule {
  std::vector<double> p_ch;   // MW
  std::vector<double> p_dis;  // MW
  std::vector<char> charging;     // x flag
  std::vector<char> discharging;  // y flag
  std::vector<double> soc;    // MWh

  int horizon() const { return static_cast<int>(p_ch.size()); }
  static StorageSchedule zeros(int horizon, const StorageSpec& spec);
};

struct ScheduleViolation {
  int equation = 0;  // 1 recursion, 2 soc bounds, 3 charge bounds,
                     // 4 discharge bounds, 5 cyclic, 7 exclusivity
  int hour = -1;     // -1 for horizon-level violations
  double magnitude = 0.0;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<ScheduleViolation> violations;
  std::vector<double> recursion_residual;  // per hour, MWh
  bool feasible() const { return violations.empty(); }
};

// One step of the state-of-charge recursion. Pure; no bound clamping.
double soc_step(double soc_prev, double p_ch, double p_dis,
                const StorageSpec& spec);

// Checks the schedule against the storage constraints; every violation is
// tagged with the constraint family and hour. Recursion residuals beyond
// 1e-9 MWh are reported as equation-1 violations.
FeasibilityReport validate_schedule(const StorageSchedule& s,
                                    const StorageSpec& spec);

// Throughput cost: cost_coeff * sum_t (x*p_ch + y*p_dis) * delta_t.
double operation_cost(const StorageSchedule& s, const StorageSpec& spec);

}  // namespace esbid
