#include "esbid/case_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace esbid {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError("case file: " + where + ": " + what);
}

class Checker {
 public:
  Checker(bool lenient, std::vector<std::string>& warnings)
      : lenient_(lenient), warnings_(warnings) {}

  void known(const json& obj, const std::string& where,
             std::initializer_list<const char*> keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (const char* k : keys)
        if (it.key() == k) ok = true;
      if (ok) continue;
      if (lenient_)
        warnings_.push_back("unknown field '" + where + "." + it.key() + "'");
      else
        fail(where, "unknown field '" + it.key() + "'");
    }
  }

 private:
  bool lenient_;
  std::vector<std::string>& warnings_;
};

double get_num(const json& o, const std::string& where, const char* key,
               std::optional<double> def = std::nullopt) {
  if (!o.contains(key)) {
    if (def) return *def;
    fail(where, std::string("missing field '") + key + "'");
  }
  if (!o[key].is_number()) fail(where, std::string(key) + " must be a number");
  return o[key].get<double>();
}

int get_int(const json& o, const std::string& where, const char* key,
            std::optional<int> def = std::nullopt) {
  if (!o.contains(key)) {
    if (def) return *def;
    fail(where, std::string("missing field '") + key + "'");
  }
  if (!o[key].is_number_integer())
    fail(where, std::string(key) + " must be an integer");
  return o[key].get<int>();
}

std::string get_str(const json& o, const std::string& where, const char* key,
                    std::optional<std::string> def = std::nullopt) {
  if (!o.contains(key)) {
    if (def) return *def;
    fail(where, std::string("missing field '") + key + "'");
  }
  if (!o[key].is_string()) fail(where, std::string(key) + " must be a string");
  return o[key].get<std::string>();
}

// scalar-or-array hourly profile
std::vector<double> get_hourly(const json& o, const std::string& where,
                               const char* key, int T,
                               std::optional<double> def = std::nullopt) {
  if (!o.contains(key)) {
    if (def) return std::vector<double>(T, *def);
    fail(where, std::string("missing field '") + key + "'");
  }
  const json& v = o[key];
  if (v.is_number()) return std::vector<double>(T, v.get<double>());
  if (!v.is_array()) fail(where, std::string(key) + " must be a number or array");
  if (static_cast<int>(v.size()) != T)
    fail(where, std::string(key) + " must carry " + std::to_string(T) +
                    " hourly values");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) fail(where, std::string(key) + " has a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

CaseFile parse_case(const std::string& text, bool lenient) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("case file: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("case file: root must be an object");

  CaseFile cf;
  Checker chk(lenient, cf.warnings);
  chk.known(root, "$",
            {"schema_version", "name", "horizon", "delta_t", "price_cap",
             "mode", "network", "gencos", "retailers", "esf", "esf_order",
             "igdt", "net_load"});

  cf.schema_version = get_int(root, "$", "schema_version", 1);
  if (cf.schema_version != 1)
    fail("$", "unsupported schema_version " + std::to_string(cf.schema_version));

  MarketCase& c = cf.market;
  c.name = get_str(root, "$", "name", std::string("unnamed"));
  c.horizon = get_int(root, "$", "horizon");
  if (c.horizon <= 0) fail("$", "horizon must be positive");
  const int T = c.horizon;
  c.price_cap = get_num(root, "$", "price_cap");
  const std::string mode = get_str(root, "$", "mode", std::string("single-bus"));
  if (mode == "single-bus") c.mode = ClearingMode::SingleBus;
  else if (mode == "network") c.mode = ClearingMode::Network;
  else fail("$", "mode must be 'single-bus' or 'network'");

  if (root.contains("network")) {
    const json& nw = root["network"];
    if (!nw.is_object()) fail("network", "must be an object");
    chk.known(nw, "network", {"buses", "lines", "reference_bus"});
    NetworkSpec spec;
    if (!nw.contains("buses") || !nw["buses"].is_array())
      fail("network", "buses must be an array");
    for (const auto& b : nw["buses"]) {
      if (!b.is_number_integer()) fail("network.buses", "bus ids are integers");
      spec.buses.push_back(b.get<int>());
    }
    if (!nw.contains("lines") || !nw["lines"].is_array())
      fail("network", "lines must be an array");
    int li = 0;
    for (const auto& l : nw["lines"]) {
      const std::string where = "network.lines[" + std::to_string(li++) + "]";
      if (!l.is_object()) fail(where, "must be an object");
      chk.known(l, where, {"from", "to", "reactance", "f_max"});
      Line line;
      line.from = get_int(l, where, "from");
      line.to = get_int(l, where, "to");
      line.reactance = get_num(l, where, "reactance");
      line.f_max = get_num(l, where, "f_max");
      spec.lines.push_back(line);
    }
    spec.reference_bus = get_int(nw, "network", "reference_bus");
    c.network = std::move(spec);
  }

  if (root.contains("gencos")) {
    if (!root["gencos"].is_array()) fail("gencos", "must be an array");
    int gi = 0;
    for (const auto& g : root["gencos"]) {
      const std::string where = "gencos[" + std::to_string(gi++) + "]";
      if (!g.is_object()) fail(where, "must be an object");
      chk.known(g, where, {"name", "bus", "offer_da", "offer_rt", "p_max"});
      Genco out;
      out.name = get_str(g, where, "name", "g" + std::to_string(gi - 1));
      out.bus = get_int(g, where, "bus", 1);
      out.offer_da = get_hourly(g, where, "offer_da", T);
      out.offer_rt = g.contains("offer_rt") ? get_hourly(g, where, "offer_rt", T)
                                            : out.offer_da;
      out.p_max = get_hourly(g, where, "p_max", T);
      c.gencos.push_back(std::move(out));
    }
  }
  if (root.contains("retailers")) {
    if (!root["retailers"].is_array()) fail("retailers", "must be an array");
    int ri = 0;
    for (const auto& r : root["retailers"]) {
      const std::string where = "retailers[" + std::to_string(ri++) + "]";
      if (!r.is_object()) fail(where, "must be an object");
      chk.known(r, where, {"name", "bus", "bid_da", "bid_rt", "d_max"});
      Retailer out;
      out.name = get_str(r, where, "name", "r" + std::to_string(ri - 1));
      out.bus = get_int(r, where, "bus", 1);
      out.bid_da = get_hourly(r, where, "bid_da", T);
      out.bid_rt =
          r.contains("bid_rt") ? get_hourly(r, where, "bid_rt", T) : out.bid_da;
      out.d_max = get_hourly(r, where, "d_max", T);
      c.retailers.push_back(std::move(out));
    }
  }

  if (!root.contains("esf") || !root["esf"].is_object())
    fail("$", "missing esf block");
  {
    const json& e = root["esf"];
    chk.known(e, "esf",
              {"bus", "storage", "sell_cap_da", "buy_cap_da", "sell_cap_rt",
               "buy_cap_rt"});
    c.esf.bus = get_int(e, "esf", "bus", 1);
    c.esf.sell_cap_da = get_hourly(e, "esf", "sell_cap_da", T, 0.0);
    c.esf.buy_cap_da = get_hourly(e, "esf", "buy_cap_da", T, 0.0);
    c.esf.sell_cap_rt = get_hourly(e, "esf", "sell_cap_rt", T, 0.0);
    c.esf.buy_cap_rt = get_hourly(e, "esf", "buy_cap_rt", T, 0.0);
    if (!e.contains("storage") || !e["storage"].is_object())
      fail("esf", "missing storage block");
    const json& s = e["storage"];
    chk.known(s, "esf.storage",
              {"soc_min", "soc_max", "soc_initial", "p_ch_min", "p_ch_max",
               "p_dis_min", "p_dis_max", "eta_ch", "eta_dis", "cost_coeff"});
    StorageSpec& sp = c.esf.storage;
    sp.soc_min = get_num(s, "esf.storage", "soc_min", 0.0);
    sp.soc_max = get_num(s, "esf.storage", "soc_max");
    sp.soc_initial = get_num(s, "esf.storage", "soc_initial");
    sp.p_ch_min = get_num(s, "esf.storage", "p_ch_min", 0.0);
    sp.p_ch_max = get_num(s, "esf.storage", "p_ch_max");
    sp.p_dis_min = get_num(s, "esf.storage", "p_dis_min", 0.0);
    sp.p_dis_max = get_num(s, "esf.storage", "p_dis_max");
    sp.eta_ch = get_num(s, "esf.storage", "eta_ch", 1.0);
    sp.eta_dis = get_num(s, "esf.storage", "eta_dis", 1.0);
    sp.cost_coeff = get_num(s, "esf.storage", "cost_coeff", 0.0);
    sp.delta_t = get_num(root, "$", "delta_t", 1.0);
  }

  if (root.contains("esf_order")) {
    const json& o = root["esf_order"];
    if (!o.is_object()) fail("esf_order", "must be an object");
    chk.known(o, "esf_order", {"offer_da", "bid_da", "offer_rt", "bid_rt"});
    EsfOrderPrices op;
    op.offer_da = get_hourly(o, "esf_order", "offer_da", T, c.price_cap);
    op.bid_da = get_hourly(o, "esf_order", "bid_da", T, 0.0);
    op.offer_rt = get_hourly(o, "esf_order", "offer_rt", T, c.price_cap);
    op.bid_rt = get_hourly(o, "esf_order", "bid_rt", T, 0.0);
    cf.esf_order = std::move(op);
  }

  if (root.contains("net_load"))
    c.net_load = get_hourly(root, "$", "net_load", T);

  if (root.contains("igdt")) {
    const json& g = root["igdt"];
    if (!g.is_object()) fail("igdt", "must be an object");
    chk.known(g, "igdt",
              {"gamma", "target_set", "beta_robust", "beta_opportunity",
               "forecast_da", "forecast_rt"});
    IgdtBlock blk;
    if (g.contains("gamma")) blk.envelope.gamma = get_hourly(g, "igdt", "gamma", T);
    const std::string target =
        get_str(g, "igdt", "target_set", std::string("rival-order-prices"));
    if (target == "rival-order-prices")
      blk.envelope.target = IgdtTarget::RivalOrderPrices;
    else if (target == "exogenous-forecast-prices")
      blk.envelope.target = IgdtTarget::ExogenousForecastPrices;
    else
      fail("igdt", "unknown target_set '" + target + "'");
    if (g.contains("forecast_da"))
      blk.envelope.forecast_da = get_hourly(g, "igdt", "forecast_da", T);
    if (g.contains("forecast_rt"))
      blk.envelope.forecast_rt = get_hourly(g, "igdt", "forecast_rt", T);
    auto betas = [&](const char* key) {
      std::vector<double> out;
      if (!g.contains(key)) return out;
      if (!g[key].is_array()) fail("igdt", std::string(key) + " must be an array");
      for (const auto& b : g[key]) out.push_back(b.get<double>());
      return out;
    };
    blk.beta_robust = betas("beta_robust");
    blk.beta_opportunity = betas("beta_opportunity");
    cf.igdt = std::move(blk);
  }

  // every model_core invariant is enforced before the case escapes the loader
  cf.market.validate();
  for (double g : (cf.igdt ? cf.igdt->envelope.gamma : std::vector<double>{}))
    if (g < 0.0) fail("igdt.gamma", "weights must be nonnegative");
  return cf;
}

CaseFile load_case(const std::string& path, bool lenient) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open case file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_case(ss.str(), lenient);
}

namespace {

json hourly_json(const std::vector<double>& v) {
  if (!v.empty()) {
    bool uniform = true;
    for (double x : v) uniform &= x == v.front();
    if (uniform) return json(v.front());
  }
  return json(v);
}

}  // namespace

std::string case_to_json(const CaseFile& cf) {
  const MarketCase& c = cf.market;
  ordered_json root;
  root["schema_version"] = cf.schema_version;
  root["name"] = c.name;
  root["horizon"] = c.horizon;
  root["delta_t"] = c.esf.storage.delta_t;
  root["price_cap"] = c.price_cap;
  root["mode"] = c.mode == ClearingMode::Network ? "network" : "single-bus";
  if (c.network) {
    ordered_json nw;
    nw["buses"] = c.network->buses;
    nw["lines"] = json::array();
    for (const Line& l : c.network->lines)
      nw["lines"].push_back({{"from", l.from},
                             {"to", l.to},
                             {"reactance", l.reactance},
                             {"f_max", l.f_max}});
    nw["reference_bus"] = c.network->reference_bus;
    root["network"] = std::move(nw);
  }
  root["gencos"] = json::array();
  for (const Genco& g : c.gencos)
    root["gencos"].push_back({{"name", g.name},
                              {"bus", g.bus},
                              {"offer_da", hourly_json(g.offer_da)},
                              {"offer_rt", hourly_json(g.offer_rt)},
                              {"p_max", hourly_json(g.p_max)}});
  root["retailers"] = json::array();
  for (const Retailer& r : c.retailers)
    root["retailers"].push_back({{"name", r.name},
                                 {"bus", r.bus},
                                 {"bid_da", hourly_json(r.bid_da)},
                                 {"bid_rt", hourly_json(r.bid_rt)},
                                 {"d_max", hourly_json(r.d_max)}});
  {
    const StorageSpec& s = c.esf.storage;
    root["esf"] = {{"bus", c.esf.bus},
                   {"sell_cap_da", hourly_json(c.esf.sell_cap_da)},
                   {"buy_cap_da", hourly_json(c.esf.buy_cap_da)},
                   {"sell_cap_rt", hourly_json(c.esf.sell_cap_rt)},
                   {"buy_cap_rt", hourly_json(c.esf.buy_cap_rt)},
                   {"storage",
                    {{"soc_min", s.soc_min},
                     {"soc_max", s.soc_max},
                     {"soc_initial", s.soc_initial},
                     {"p_ch_min", s.p_ch_min},
                     {"p_ch_max", s.p_ch_max},
                     {"p_dis_min", s.p_dis_min},
                     {"p_dis_max", s.p_dis_max},
                     {"eta_ch", s.eta_ch},
                     {"eta_dis", s.eta_dis},
                     {"cost_coeff", s.cost_coeff}}}};
  }
  if (cf.esf_order) {
    root["esf_order"] = {{"offer_da", hourly_json(cf.esf_order->offer_da)},
                         {"bid_da", hourly_json(cf.esf_order->bid_da)},
                         {"offer_rt", hourly_json(cf.esf_order->offer_rt)},
                         {"bid_rt", hourly_json(cf.esf_order->bid_rt)}};
  }
  if (!c.net_load.empty()) root["net_load"] = json(c.net_load);
  if (cf.igdt) {
    ordered_json g;
    if (!cf.igdt->envelope.gamma.empty())
      g["gamma"] = hourly_json(cf.igdt->envelope.gamma);
    g["target_set"] = cf.igdt->envelope.target == IgdtTarget::RivalOrderPrices
                          ? "rival-order-prices"
                          : "exogenous-forecast-prices";
    if (!cf.igdt->beta_robust.empty()) g["beta_robust"] = cf.igdt->beta_robust;
    if (!cf.igdt->beta_opportunity.empty())
      g["beta_opportunity"] = cf.igdt->beta_opportunity;
    if (!cf.igdt->envelope.forecast_da.empty())
      g["forecast_da"] = json(cf.igdt->envelope.forecast_da);
    if (!cf.igdt->envelope.forecast_rt.empty())
      g["forecast_rt"] = json(cf.igdt->envelope.forecast_rt);
    root["igdt"] = std::move(g);
  }
  return root.dump(2) + "\n";
}

void save_case(const CaseFile& c, const std::string& path) {
  const std::string text = case_to_json(c);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp);
    out << text;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot rename " + tmp + " to " + path);
}

std::string text_digest(const std::string& text) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file for digest: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return text_digest(ss.str());
}

}  // namespace esbid
