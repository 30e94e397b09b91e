#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "esbid/bidding.hpp"
#include "esbid/clearing.hpp"
#include "esbid/igdt.hpp"
#include "esbid/oracle.hpp"

namespace esbid {

// Rounding policy: every number in a report is rounded to 9 significant
// digits at the value level; CSV and JSON then serialize the identical
// double and so print the identical text.
double round9(double v);
std::string num9(double v);

struct RunReport {
  std::string command;
  std::string input_digest;
  nlohmann::ordered_json options;
  std::optional<double> wall_ms;  // omitted under --no-timestamp
  nlohmann::ordered_json payload;
  std::vector<std::string> warnings;
};

nlohmann::ordered_json report_json(const RunReport& r);

nlohmann::ordered_json payload_clearing(const ClearingResult& res,
                                        const MarketCase& c);
// `lmp_da`: per-bus prices of a day-ahead replay clearing (may be empty).
nlohmann::ordered_json payload_bidding(const BiddingSolution& sol,
                                       const MarketCase& c,
                                       const ClearingResult* lmp_da);
nlohmann::ordered_json payload_igdt(const std::vector<InfoGapResult>& results);
nlohmann::ordered_json payload_oracle(const OracleResult& res);

// Writes report.json plus the CSVs matching the payload kind
// (schedule.csv / lmp.csv / igdt.csv), atomically, into `outdir`.
// Returns the list of files written.
std::vector<std::string> emit_outputs(const RunReport& r,
                                      const std::string& outdir);

}  // namespace esbid
