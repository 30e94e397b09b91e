#include "esbid/market.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace esbid {

bool NetworkSpec::has_bus(int id) const {
  return std::find(buses.begin(), buses.end(), id) != buses.end();
}

void NetworkSpec::validate() const {
  if (buses.empty()) throw ModelError("network: bus list is empty");
  std::set<int> seen(buses.begin(), buses.end());
  if (seen.size() != buses.size())
    throw ModelError("network: duplicate bus ids");
  if (!has_bus(reference_bus))
    throw ModelError("network: reference bus " +
                     std::to_string(reference_bus) + " not in bus list");
  std::map<int, std::vector<int>> adj;
  for (size_t l = 0; l < lines.size(); ++l) {
    const Line& ln = lines[l];
    if (!has_bus(ln.from) || !has_bus(ln.to))
      throw ModelError("network: line " + std::to_string(l) +
                       " references an unknown bus");
    if (!(ln.reactance > 0.0))
      throw ModelError("network: line " + std::to_string(l) +
                       " needs reactance > 0");
    if (!(ln.f_max > 0.0))
      throw ModelError("network: line " + std::to_string(l) +
                       " needs flow limit > 0");
    adj[ln.from].push_back(ln.to);
    adj[ln.to].push_back(ln.from);
  }
  // connectivity
  std::set<int> reach;
  std::vector<int> stack{buses.front()};
  while (!stack.empty()) {
    const int b = stack.back();
    stack.pop_back();
    if (!reach.insert(b).second) continue;
    for (int nb : adj[b]) stack.push_back(nb);
  }
  if (reach.size() != buses.size())
    throw ModelError("network: graph is not connected");
}

namespace {

void check_hourly(const std::vector<double>& v, int T, const std::string& what) {
  if (static_cast<int>(v.size()) != T)
    throw ModelError(what + ": expected " + std::to_string(T) +
                     " hourly values, got " + std::to_string(v.size()));
  for (double x : v)
    if (!std::isfinite(x)) throw ModelError(what + ": non-finite value");
}

void check_prices(const std::vector<double>& v, double cap,
                  const std::string& what) {
  for (double x : v)
    if (x < 0.0 || x > cap)
      throw ModelError(what + ": price " + std::to_string(x) +
                       " outside [0, price_cap=" + std::to_string(cap) + "]");
}

void check_caps(const std::vector<double>& v, const std::string& what) {
  for (double x : v)
    if (x < 0.0) throw ModelError(what + ": negative quantity cap");
}

}  // namespace

void MarketCase::validate() const {
  if (horizon <= 0) throw ModelError("case: horizon must be positive");
  if (!(price_cap > 0.0)) throw ModelError("case: price_cap must be positive");
  esf.storage.validate();

  for (const Genco& g : gencos) {
    check_hourly(g.offer_da, horizon, "genco " + g.name + " offer_da");
    check_hourly(g.offer_rt, horizon, "genco " + g.name + " offer_rt");
    check_hourly(g.p_max, horizon, "genco " + g.name + " p_max");
    check_prices(g.offer_da, price_cap, "genco " + g.name + " offer_da");
    check_prices(g.offer_rt, price_cap, "genco " + g.name + " offer_rt");
    check_caps(g.p_max, "genco " + g.name + " p_max");
  }
  for (const Retailer& r : retailers) {
    check_hourly(r.bid_da, horizon, "retailer " + r.name + " bid_da");
    check_hourly(r.bid_rt, horizon, "retailer " + r.name + " bid_rt");
    check_hourly(r.d_max, horizon, "retailer " + r.name + " d_max");
    check_prices(r.bid_da, price_cap, "retailer " + r.name + " bid_da");
    check_prices(r.bid_rt, price_cap, "retailer " + r.name + " bid_rt");
    check_caps(r.d_max, "retailer " + r.name + " d_max");
  }
  check_hourly(esf.sell_cap_da, horizon, "esf sell_cap_da");
  check_hourly(esf.sell_cap_rt, horizon, "esf sell_cap_rt");
  check_hourly(esf.buy_cap_da, horizon, "esf buy_cap_da");
  check_hourly(esf.buy_cap_rt, horizon, "esf buy_cap_rt");
  check_caps(esf.sell_cap_da, "esf sell_cap_da");
  check_caps(esf.sell_cap_rt, "esf sell_cap_rt");
  check_caps(esf.buy_cap_da, "esf buy_cap_da");
  check_caps(esf.buy_cap_rt, "esf buy_cap_rt");
  if (!net_load.empty()) check_hourly(net_load, horizon, "net_load");

  if (mode == ClearingMode::Network) {
    if (!network.has_value())
      throw ConfigError("case: network mode requires a network block");
    network->validate();
    for (const Genco& g : gencos)
      if (!network->has_bus(g.bus))
        throw ModelError("genco " + g.name + " sits on unknown bus " +
                         std::to_string(g.bus));
    for (const Retailer& r : retailers)
      if (!network->has_bus(r.bus))
        throw ModelError("retailer " + r.name + " sits on unknown bus " +
                         std::to_string(r.bus));
    if (!network->has_bus(esf.bus))
      throw ModelError("esf sits on unknown bus " + std::to_string(esf.bus));
  } else if (network.has_value()) {
    network->validate();
  }
}

}  // namespace esbid
