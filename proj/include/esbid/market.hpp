#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esbid/storage.hpp"

namespace esbid {

enum class Market { DA, RT };
inline const char* to_string(Market m) { return m == Market::DA ? "da" : "rt"; }

enum class ClearingMode { SingleBus, Network };

struct Genco {
  std::string name;
  int bus = 0;
  std::vector<double> offer_da;  // currency/MWh, per hour
  std::vector<double> offer_rt;
  std::vector<double> p_max;  // MW, per hour
};

struct Retailer {
  std::string name;
  int bus = 0;
  std::vector<double> bid_da;
  std::vector<double> bid_rt;
  std::vector<double> d_max;
};

struct Line {
  int from = 0;
  int to = 0;
  double reactance = 0.0;  // p.u., > 0
  double f_max = 0.0;      // MW, > 0
};

struct NetworkSpec {
  std::vector<int> buses;
  std::vector<Line> lines;
  int reference_bus = 0;

  bool has_bus(int id) const;
  // Throws ModelError unless the graph is connected with positive data.
  void validate() const;
};

struct EsfAsset {
  int bus = 0;
  StorageSpec storage;
  // per-market quantity caps, per hour
  std::vector<double> sell_cap_da;
  std::vector<double> sell_cap_rt;
  std::vector<double> buy_cap_da;
  std::vector<double> buy_cap_rt;

  const std::vector<double>& sell_cap(Market m) const {
    return m == Market::DA ? sell_cap_da : sell_cap_rt;
  }
  const std::vector<double>& buy_cap(Market m) const {
    return m == Market::DA ? buy_cap_da : buy_cap_rt;
  }
};

struct MarketCase {
  std::string name;
  int horizon = 0;
  double price_cap = 0.0;
  ClearingMode mode = ClearingMode::SingleBus;
  std::vector<Genco> gencos;
  std::vector<Retailer> retailers;
  EsfAsset esf;
  std::optional<NetworkSpec> network;
  std::vector<double> net_load;  // optional pass-through profile, no coupling

  double genco_offer(const Genco& g, Market m, int t) const {
    return (m == Market::DA ? g.offer_da : g.offer_rt)[t];
  }
  double retailer_bid(const Retailer& r, Market m, int t) const {
    return (m == Market::DA ? r.bid_da : r.bid_rt)[t];
  }

  // Enforces every type invariant (horizon consistency, price ranges,
  // capacity signs, bus references, network connectivity).
  void validate() const;
};

}  // namespace esbid
