#pragma once

#include <string>
#include <vector>

#include "esbid/linear_model.hpp"
#include "esbid/storage.hpp"

namespace esbid {

// Variable ids of one storage block inside a larger model.
struct StorageBlockIndex {
  std::vector<int> p_ch, p_dis, soc, x, y, z_ch, z_dis;
  int horizon = 0;
};

// Emits the storage constraint block: state-of-charge recursion with the
// cyclic end condition, gated semicontinuous power bounds, charge/discharge
// exclusivity, and exact envelopes z = flag * power used by the throughput
// cost. Adds no objective terms.
StorageBlockIndex append_storage_block(LinearModel& m, const StorageSpec& spec,
                                       int horizon, const std::string& prefix);

// Reads a solved schedule back out of a block.
StorageSchedule schedule_from_block(const std::vector<double>& x,
                                    const StorageBlockIndex& idx,
                                    const StorageSpec& spec);

// Objective helper: cost_coeff * delta_t * sum(z_ch + z_dis).
void add_operation_cost_terms(LinearModel& m, const StorageBlockIndex& idx,
                              const StorageSpec& spec, double sign);

}  // namespace esbid
