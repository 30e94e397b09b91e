#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esbid/igdt.hpp"
#include "esbid/market.hpp"

namespace esbid {

// Optional analysis block carried by a case file.
struct IgdtBlock {
  EnvelopeModel envelope;
  std::vector<double> beta_robust;
  std::vector<double> beta_opportunity;
};

// Optional fixed storage order book (used by the `clear` command).
struct EsfOrderPrices {
  std::vector<double> offer_da, bid_da, offer_rt, bid_rt;
};

struct CaseFile {
  int schema_version = 1;
  MarketCase market;
  std::optional<IgdtBlock> igdt;
  std::optional<EsfOrderPrices> esf_order;
  std::vector<std::string> warnings;  // lenient-mode unknown fields
};

// Parses and validates a case file. Strict mode rejects unknown fields;
// lenient mode records them as warnings. Every model invariant is enforced
// before the case is returned. Throws ParseError (malformed JSON or wrong
// types, message names the field) or ModelError/ConfigError (violated
// invariants).
CaseFile load_case(const std::string& path, bool lenient = false);
CaseFile parse_case(const std::string& text, bool lenient = false);

std::string case_to_json(const CaseFile& c);
void save_case(const CaseFile& c, const std::string& path);

// FNV-1a 64-bit digest of the raw file bytes, as fixed-width hex.
std::string file_digest(const std::string& path);
std::string text_digest(const std::string& text);

}  // namespace esbid
