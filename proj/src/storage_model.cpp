#include "esbid/storage_model.hpp"

#include <cmath>

namespace esbid {

StorageBlockIndex append_storage_block(LinearModel& m, const StorageSpec& spec,
                                       int horizon, const std::string& prefix) {
  spec.validate();
  StorageBlockIndex ix;
  ix.horizon = horizon;
  auto nm = [&](const char* base, int t) {
    return prefix + base + "_t" + std::to_string(t);
  };
  for (int t = 0; t < horizon; ++t) {
    ix.p_ch.push_back(m.add_continuous(nm("pch", t), 0.0, spec.p_ch_max));
    ix.p_dis.push_back(m.add_continuous(nm("pdis", t), 0.0, spec.p_dis_max));
    const bool last = (t == horizon - 1);
    // cyclic condition pinned through the final SOC bounds
    ix.soc.push_back(m.add_continuous(nm("soc", t),
                                      last ? spec.soc_initial : spec.soc_min,
                                      last ? spec.soc_initial : spec.soc_max));
    ix.x.push_back(m.add_binary(nm("xch", t)));
    ix.y.push_back(m.add_binary(nm("ydis", t)));
    ix.z_ch.push_back(m.add_continuous(nm("zch", t), 0.0, spec.p_ch_max));
    ix.z_dis.push_back(m.add_continuous(nm("zdis", t), 0.0, spec.p_dis_max));
  }
  const double a_ch = spec.delta_t * spec.eta_ch;
  const double a_dis = spec.delta_t / spec.eta_dis;
  for (int t = 0; t < horizon; ++t) {
    if (t == 0) {
      m.add_row(nm("socrec", t),
                {{ix.soc[t], 1.0}, {ix.p_ch[t], -a_ch}, {ix.p_dis[t], a_dis}},
                RowSense::EQ, spec.soc_initial);
    } else {
      m.add_row(nm("socrec", t),
                {{ix.soc[t], 1.0},
                 {ix.soc[t - 1], -1.0},
                 {ix.p_ch[t], -a_ch},
                 {ix.p_dis[t], a_dis}},
                RowSense::EQ, 0.0);
    }
    m.add_row(nm("chcap", t), {{ix.p_ch[t], 1.0}, {ix.x[t], -spec.p_ch_max}},
              RowSense::LE, 0.0);
    if (spec.p_ch_min > 0.0)
      m.add_row(nm("chmin", t), {{ix.x[t], spec.p_ch_min}, {ix.p_ch[t], -1.0}},
                RowSense::LE, 0.0);
    m.add_row(nm("discap", t), {{ix.p_dis[t], 1.0}, {ix.y[t], -spec.p_dis_max}},
              RowSense::LE, 0.0);
    if (spec.p_dis_min > 0.0)
      m.add_row(nm("dismin", t), {{ix.y[t], spec.p_dis_min}, {ix.p_dis[t], -1.0}},
                RowSense::LE, 0.0);
    m.add_row(nm("excl", t), {{ix.x[t], 1.0}, {ix.y[t], 1.0}}, RowSense::LE, 1.0);
    // z = x * p_ch, exact because x is binary and p_ch is bounded
    m.add_row(nm("zchp", t), {{ix.z_ch[t], 1.0}, {ix.p_ch[t], -1.0}},
              RowSense::LE, 0.0);
    m.add_row(nm("zchx", t), {{ix.z_ch[t], 1.0}, {ix.x[t], -spec.p_ch_max}},
              RowSense::LE, 0.0);
    m.add_row(nm("zchf", t),
              {{ix.p_ch[t], 1.0}, {ix.z_ch[t], -1.0}, {ix.x[t], spec.p_ch_max}},
              RowSense::LE, spec.p_ch_max);
    m.add_row(nm("zdsp", t), {{ix.z_dis[t], 1.0}, {ix.p_dis[t], -1.0}},
              RowSense::LE, 0.0);
    m.add_row(nm("zdsy", t), {{ix.z_dis[t], 1.0}, {ix.y[t], -spec.p_dis_max}},
              RowSense::LE, 0.0);
    m.add_row(nm("zdsf", t),
              {{ix.p_dis[t], 1.0}, {ix.z_dis[t], -1.0}, {ix.y[t], spec.p_dis_max}},
              RowSense::LE, spec.p_dis_max);
  }
  return ix;
}

StorageSchedule schedule_from_block(const std::vector<double>& x,
                                    const StorageBlockIndex& idx,
                                    const StorageSpec& spec) {
  StorageSchedule s = StorageSchedule::zeros(idx.horizon, spec);
  auto snap = [](double v) { return std::fabs(v) < 1e-9 ? 0.0 : v; };
  for (int t = 0; t < idx.horizon; ++t) {
    s.p_ch[t] = snap(x[idx.p_ch[t]]);
    s.p_dis[t] = snap(x[idx.p_dis[t]]);
    s.charging[t] = x[idx.x[t]] > 0.5 ? 1 : 0;
    s.discharging[t] = x[idx.y[t]] > 0.5 ? 1 : 0;
    s.soc[t] = x[idx.soc[t]];
  }
  // flags may be set with zero power (harmless MILP slack); drop them
  for (int t = 0; t < idx.horizon; ++t) {
    if (s.p_ch[t] == 0.0 && spec.p_ch_min == 0.0) s.charging[t] = 0;
    if (s.p_dis[t] == 0.0 && spec.p_dis_min == 0.0) s.discharging[t] = 0;
  }
  return s;
}

void add_operation_cost_terms(LinearModel& m, const StorageBlockIndex& idx,
                              const StorageSpec& spec, double sign) {
  const double c = sign * spec.cost_coeff * spec.delta_t;
  if (c == 0.0) return;
  for (int t = 0; t < idx.horizon; ++t) {
    m.add_objective_term(idx.z_ch[t], c);
    m.add_objective_term(idx.z_dis[t], c);
  }
}

}  // namespace esbid
