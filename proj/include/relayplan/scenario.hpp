#pragma once

// Scenario document: household/base-station layout, radio parameters and the
// demand model, with strict JSON (de)serialisation and a synthetic-community
// generator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "relayplan/demand.hpp"
#include "relayplan/rng.hpp"

namespace relayplan {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One row of the WiFi rate table: the per-stream PHY rate usable at or above
// a received signal strength.
struct McsEntry {
  double min_rss_dbm;
  double per_stream_rate_mbps;
};

inline std::vector<McsEntry> default_mcs_table() {
  return {{-82.0, 6.5},  {-79.0, 13.0}, {-77.0, 19.5}, {-74.0, 26.0},
          {-70.0, 39.0}, {-66.0, 52.0}, {-65.0, 58.5}, {-64.0, 65.0}};
}

struct RadioConfig {
  double wifi_carrier_hz = 5.0e9;
  double lte_carrier_hz = 2.0e9;
  double channel_bandwidth_hz = 20.0e6;
  double wifi_tx_power_dbm = 20.0;
  double wifi_sensitivity_dbm = -82.0;  // minimum RSS for a usable link
  double breakpoint_distance_m = 5.0;   // dual-slope pathloss knee
  double shadow_fading_db = 0.0;        // fixed margin beyond the breakpoint
  int streams = 1;                      // spatial streams (1..4)
  double beta = 0.65;                   // spectral-efficiency derating
  double gamma = 0.55;                  // SNR derating
  double lte_noise_figure_db = 7.0;
  std::vector<McsEntry> mcs_table = default_mcs_table();
};

struct Household {
  std::string id;
  double x_m = 0.0;
  double y_m = 0.0;
  bool lte_capable = true;
};

struct LteBaseStation {
  std::string id;
  double x_m = 0.0;
  double y_m = 0.0;
  double tau = 0.5;  // fraction of airtime available for TV distribution
  double tx_power_dbm = 46.0;
};

struct Scenario {
  std::vector<Household> households;
  std::vector<LteBaseStation> lte_bs;
  RadioConfig radio;
  DemandModel demand = DemandModel::default_diurnal();
  int rho = 5;  // max out-degree of a sending node
  double channel_rate_mbps = 5.0;
  int hop_limit = 2;
};

inline void validate_scenario(const Scenario& s) {
  if (s.households.empty()) throw ValidationError("scenario has no households");
  std::set<std::string> ids;
  auto add_id = [&ids](const std::string& id, const char* kind) {
    if (id.empty()) throw ValidationError(std::string("empty ") + kind + " id");
    if (!ids.insert(id).second) throw ValidationError("duplicate node id: " + id);
  };
  for (const auto& h : s.households) {
    add_id(h.id, "household");
    if (!std::isfinite(h.x_m) || !std::isfinite(h.y_m))
      throw ValidationError("non-finite position for household " + h.id);
  }
  for (const auto& b : s.lte_bs) {
    add_id(b.id, "base-station");
    if (!std::isfinite(b.x_m) || !std::isfinite(b.y_m))
      throw ValidationError("non-finite position for base station " + b.id);
    if (!(b.tau >= 0.0 && b.tau <= 1.0))
      throw ValidationError("tau out of [0,1] for base station " + b.id);
    if (!std::isfinite(b.tx_power_dbm))
      throw ValidationError("non-finite tx power for base station " + b.id);
  }
  const RadioConfig& r = s.radio;
  if (!(r.wifi_carrier_hz > 0) || !(r.lte_carrier_hz > 0))
    throw ValidationError("carrier frequencies must be positive");
  if (!(r.channel_bandwidth_hz > 0)) throw ValidationError("bandwidth must be positive");
  if (!(r.breakpoint_distance_m > 0)) throw ValidationError("breakpoint distance must be positive");
  if (r.streams < 1 || r.streams > 4) throw ValidationError("streams must be in 1..4");
  if (!(r.beta >= 0.5 && r.beta <= 0.8)) throw ValidationError("beta out of [0.5, 0.8]");
  if (!(r.gamma >= 0.5 && r.gamma <= 0.6)) throw ValidationError("gamma out of [0.5, 0.6]");
  if (r.mcs_table.empty()) throw ValidationError("empty rate table");
  for (std::size_t k = 0; k < r.mcs_table.size(); ++k) {
    if (!(r.mcs_table[k].per_stream_rate_mbps > 0))
      throw ValidationError("rate-table rates must be positive");
    if (k > 0 && !(r.mcs_table[k].min_rss_dbm > r.mcs_table[k - 1].min_rss_dbm))
      throw ValidationError("rate table must be sorted by ascending min RSS");
    if (k > 0 &&
        !(r.mcs_table[k].per_stream_rate_mbps > r.mcs_table[k - 1].per_stream_rate_mbps))
      throw ValidationError("rate table rates must be ascending");
  }
  if (s.rho < 1) throw ValidationError("rho must be >= 1");
  if (!(s.channel_rate_mbps > 0)) throw ValidationError("channel rate must be positive");
  if (s.hop_limit < 1) throw ValidationError("hop limit must be >= 1");
  try {
    validate_demand_model(s.demand, static_cast<int>(s.households.size()));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

// --- JSON I/O -------------------------------------------------------------

namespace detail {

using json = nlohmann::ordered_json;

inline void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) throw ParseError("unknown key \"" + item.key() + "\" in " + where);
  }
}

inline double get_num(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError("missing key \"" + std::string(key) + "\" in " + where);
  if (!obj[key].is_number()) throw ParseError("key \"" + std::string(key) + "\" in " + where + " must be a number");
  return obj[key].get<double>();
}

inline std::vector<double> get_pmf(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) throw ParseError("expected distribution array in " + where);
  std::vector<double> pmf;
  for (const auto& v : arr) {
    if (!v.is_number()) throw ParseError("distribution entries must be numbers in " + where);
    pmf.push_back(v.get<double>());
  }
  return pmf;
}

}  // namespace detail

inline Scenario scenario_from_json(const detail::json& j) {
  using detail::get_num;
  using detail::get_pmf;
  using detail::require_keys;
  if (!j.is_object()) throw ParseError("scenario document must be a JSON object");
  require_keys(j, {"households", "lte_bs", "radio", "demand", "rho", "channel_rate_mbps",
                   "hop_limit"},
               "scenario");
  Scenario s;

  if (!j.contains("households") || !j["households"].is_array())
    throw ParseError("scenario requires a households array");
  for (const auto& hj : j["households"]) {
    require_keys(hj, {"id", "x_m", "y_m", "lte_capable"}, "household");
    Household h;
    if (!hj.contains("id") || !hj["id"].is_string())
      throw ParseError("household id must be a string");
    h.id = hj["id"].get<std::string>();
    h.x_m = get_num(hj, "x_m", "household " + h.id);
    h.y_m = get_num(hj, "y_m", "household " + h.id);
    if (hj.contains("lte_capable")) {
      if (!hj["lte_capable"].is_boolean()) throw ParseError("lte_capable must be a boolean");
      h.lte_capable = hj["lte_capable"].get<bool>();
    }
    s.households.push_back(std::move(h));
  }

  if (j.contains("lte_bs")) {
    if (!j["lte_bs"].is_array()) throw ParseError("lte_bs must be an array");
    for (const auto& bj : j["lte_bs"]) {
      require_keys(bj, {"id", "x_m", "y_m", "tau", "tx_power_dbm"}, "base station");
      LteBaseStation b;
      if (!bj.contains("id") || !bj["id"].is_string())
        throw ParseError("base-station id must be a string");
      b.id = bj["id"].get<std::string>();
      b.x_m = get_num(bj, "x_m", "base station " + b.id);
      b.y_m = get_num(bj, "y_m", "base station " + b.id);
      b.tau = get_num(bj, "tau", "base station " + b.id);
      b.tx_power_dbm = get_num(bj, "tx_power_dbm", "base station " + b.id);
      s.lte_bs.push_back(std::move(b));
    }
  }

  if (j.contains("radio")) {
    const auto& rj = j["radio"];
    require_keys(rj,
                 {"wifi_carrier_hz", "lte_carrier_hz", "channel_bandwidth_hz",
                  "wifi_tx_power_dbm", "wifi_sensitivity_dbm", "breakpoint_distance_m",
                  "shadow_fading_db", "streams", "beta", "gamma", "lte_noise_figure_db",
                  "mcs_table"},
                 "radio");
    RadioConfig& r = s.radio;
    auto opt = [&rj](const char* key, double& out) {
      if (rj.contains(key)) out = detail::get_num(rj, key, "radio");
    };
    opt("wifi_carrier_hz", r.wifi_carrier_hz);
    opt("lte_carrier_hz", r.lte_carrier_hz);
    opt("channel_bandwidth_hz", r.channel_bandwidth_hz);
    opt("wifi_tx_power_dbm", r.wifi_tx_power_dbm);
    opt("wifi_sensitivity_dbm", r.wifi_sensitivity_dbm);
    opt("breakpoint_distance_m", r.breakpoint_distance_m);
    opt("shadow_fading_db", r.shadow_fading_db);
    opt("beta", r.beta);
    opt("gamma", r.gamma);
    opt("lte_noise_figure_db", r.lte_noise_figure_db);
    if (rj.contains("streams")) {
      if (!rj["streams"].is_number_integer()) throw ParseError("streams must be an integer");
      r.streams = rj["streams"].get<int>();
    }
    if (rj.contains("mcs_table")) {
      if (!rj["mcs_table"].is_array()) throw ParseError("mcs_table must be an array of pairs");
      r.mcs_table.clear();
      for (const auto& row : rj["mcs_table"]) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
          throw ParseError("mcs_table rows must be [min_rss_dbm, rate_mbps] pairs");
        r.mcs_table.push_back({row[0].get<double>(), row[1].get<double>()});
      }
    }
  }

  if (j.contains("demand")) {
    const auto& dj = j["demand"];
    require_keys(dj, {"T", "b_mbps", "uniform", "per_hour", "per_home"}, "demand");
    DemandModel& m = s.demand;
    m.per_hour_pmf.clear();
    if (dj.contains("T")) {
      if (!dj["T"].is_number_integer()) throw ParseError("demand.T must be an integer");
      m.horizon = dj["T"].get<int>();
    }
    m.channel_rate_mbps =
        dj.contains("b_mbps") ? get_num(dj, "b_mbps", "demand") : s.channel_rate_mbps;
    const int forms = int(dj.contains("uniform")) + int(dj.contains("per_hour")) +
                      int(dj.contains("per_home"));
    if (forms > 1)
      throw ParseError("demand accepts only one of uniform / per_hour / per_home");
    if (dj.contains("uniform")) {
      m.shape = DemandShape::Uniform;
      m.uniform_pmf = get_pmf(dj["uniform"], "demand.uniform");
    } else if (dj.contains("per_hour")) {
      m.shape = DemandShape::PerHour;
      if (!dj["per_hour"].is_array()) throw ParseError("demand.per_hour must be an array");
      for (const auto& row : dj["per_hour"])
        m.per_hour_pmf.push_back(get_pmf(row, "demand.per_hour"));
    } else if (dj.contains("per_home")) {
      m.shape = DemandShape::PerHome;
      if (!dj["per_home"].is_array()) throw ParseError("demand.per_home must be an array");
      for (const auto& hj : dj["per_home"]) {
        require_keys(hj, {"id", "per_hour"}, "demand.per_home entry");
        if (!hj.contains("id") || !hj["id"].is_string())
          throw ParseError("demand.per_home entries need a household id");
        const std::string id = hj["id"].get<std::string>();
        std::size_t idx = s.households.size();
        for (std::size_t k = 0; k < s.households.size(); ++k)
          if (s.households[k].id == id) {
            idx = k;
            break;
          }
        if (idx == s.households.size())
          throw ParseError("demand.per_home references unknown household " + id);
        if (m.per_home_pmf.empty())
          m.per_home_pmf.resize(s.households.size());
        if (!hj.contains("per_hour") || !hj["per_hour"].is_array())
          throw ParseError("demand.per_home entries need a per_hour array");
        for (const auto& row : hj["per_hour"])
          m.per_home_pmf[idx].push_back(get_pmf(row, "demand.per_home"));
      }
      for (std::size_t k = 0; k < m.per_home_pmf.size(); ++k)
        if (m.per_home_pmf[k].empty())
          throw ParseError("demand.per_home is missing household " + s.households[k].id);
    } else {
      // keep the default diurnal model but at the requested horizon/rate
      m = DemandModel::default_diurnal(m.horizon, m.channel_rate_mbps);
    }
  }

  if (j.contains("rho")) {
    if (!j["rho"].is_number_integer()) throw ParseError("rho must be an integer");
    s.rho = j["rho"].get<int>();
  }
  if (j.contains("channel_rate_mbps"))
    s.channel_rate_mbps = detail::get_num(j, "channel_rate_mbps", "scenario");
  if (j.contains("hop_limit")) {
    if (!j["hop_limit"].is_number_integer()) throw ParseError("hop_limit must be an integer");
    s.hop_limit = j["hop_limit"].get<int>();
  }

  validate_scenario(s);
  return s;
}

inline Scenario load_scenario(std::string_view text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

inline detail::json scenario_to_json(const Scenario& s) {
  detail::json j;
  j["households"] = detail::json::array();
  for (const auto& h : s.households) {
    detail::json hj{{"id", h.id}, {"x_m", h.x_m}, {"y_m", h.y_m}};
    if (!h.lte_capable) hj["lte_capable"] = false;
    j["households"].push_back(std::move(hj));
  }
  j["lte_bs"] = detail::json::array();
  for (const auto& b : s.lte_bs)
    j["lte_bs"].push_back({{"id", b.id},
                           {"x_m", b.x_m},
                           {"y_m", b.y_m},
                           {"tau", b.tau},
                           {"tx_power_dbm", b.tx_power_dbm}});
  const RadioConfig& r = s.radio;
  detail::json mcs = detail::json::array();
  for (const auto& e : r.mcs_table)
    mcs.push_back(detail::json::array({e.min_rss_dbm, e.per_stream_rate_mbps}));
  j["radio"] = {{"wifi_carrier_hz", r.wifi_carrier_hz},
                {"lte_carrier_hz", r.lte_carrier_hz},
                {"channel_bandwidth_hz", r.channel_bandwidth_hz},
                {"wifi_tx_power_dbm", r.wifi_tx_power_dbm},
                {"wifi_sensitivity_dbm", r.wifi_sensitivity_dbm},
                {"breakpoint_distance_m", r.breakpoint_distance_m},
                {"shadow_fading_db", r.shadow_fading_db},
                {"streams", r.streams},
                {"beta", r.beta},
                {"gamma", r.gamma},
                {"lte_noise_figure_db", r.lte_noise_figure_db},
                {"mcs_table", std::move(mcs)}};
  detail::json dj{{"T", s.demand.horizon}, {"b_mbps", s.demand.channel_rate_mbps}};
  switch (s.demand.shape) {
    case DemandShape::Uniform:
      dj["uniform"] = s.demand.uniform_pmf;
      break;
    case DemandShape::PerHour:
      dj["per_hour"] = s.demand.per_hour_pmf;
      break;
    case DemandShape::PerHome: {
      detail::json arr = detail::json::array();
      for (std::size_t h = 0; h < s.households.size(); ++h)
        arr.push_back({{"id", s.households[h].id}, {"per_hour", s.demand.per_home_pmf[h]}});
      dj["per_home"] = std::move(arr);
      break;
    }
  }
  j["demand"] = std::move(dj);
  j["rho"] = s.rho;
  j["channel_rate_mbps"] = s.channel_rate_mbps;
  j["hop_limit"] = s.hop_limit;
  return j;
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

inline Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

inline void save_scenario_file(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write scenario file: " + path);
  out << serialize_scenario(s);
}

// --- synthetic communities -------------------------------------------------

// Households are placed uniformly at random in a square whose side is chosen
// so that the expected mean nearest-neighbour distance of n uniform points,
// 0.5 * side / sqrt(n), equals the target spacing. Base stations go on the
// horizontal midline. Output is a pure function of the arguments.
inline Scenario generate_community(int households, double target_spacing_m, int lte_bs_count,
                                   std::uint64_t seed) {
  if (households < 1) throw std::invalid_argument("community needs at least one household");
  if (!(target_spacing_m > 0)) throw std::invalid_argument("target spacing must be positive");
  if (lte_bs_count < 0) throw std::invalid_argument("base-station count must be >= 0");
  Scenario s;
  const double side = 2.0 * target_spacing_m * std::sqrt(static_cast<double>(households));
  std::mt19937_64 gen(seed);
  for (int i = 0; i < households; ++i) {
    Household h;
    h.id = "h" + std::to_string(i);
    if (households == 1) {
      h.x_m = side / 2.0;
      h.y_m = side / 2.0;
    } else {
      h.x_m = uniform01(gen) * side;
      h.y_m = uniform01(gen) * side;
    }
    s.households.push_back(std::move(h));
  }
  for (int k = 0; k < lte_bs_count; ++k) {
    LteBaseStation b;
    b.id = "bs" + std::to_string(k);
    b.x_m = side * (k + 1) / (lte_bs_count + 1);
    b.y_m = side / 2.0;
    s.lte_bs.push_back(std::move(b));
  }
  s.demand = DemandModel::default_diurnal();
  validate_scenario(s);
  return s;
}

// Mean over households of the distance to the nearest other household.
inline double mean_nearest_neighbor_m(const Scenario& s) {
  const auto& hs = s.households;
  if (hs.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < hs.size(); ++j) {
      if (i == j) continue;
      best = std::min(best, std::hypot(hs[i].x_m - hs[j].x_m, hs[i].y_m - hs[j].y_m));
    }
    sum += best;
  }
  return sum / static_cast<double>(hs.size());
}

}  // namespace relayplan
