#pragma once

// Deployment plan: which nodes get a satellite antenna, node roles and the
// selected links/flows, per period. Serialises to a standalone JSON document.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "relayplan/netgraph.hpp"
#include "relayplan/variant.hpp"

namespace relayplan {

enum class Role { Source, Relay, Terminal, Idle };

inline const char* role_name(Role r) {
  switch (r) {
    case Role::Source: return "source";
    case Role::Relay: return "relay";
    case Role::Terminal: return "terminal";
    case Role::Idle: default: return "idle";
  }
}

inline Role parse_role(const std::string& s) {
  if (s == "source") return Role::Source;
  if (s == "relay") return Role::Relay;
  if (s == "terminal") return Role::Terminal;
  if (s == "idle") return Role::Idle;
  throw std::invalid_argument("unknown role: " + s);
}

// One selected link. flow_mbps is meaningful for splittable plans; lambda is
// the airtime share on LTE links (0 on WiFi links).
struct PlanLink {
  int from = 0;  // graph node indices (real nodes; -1 encodes the virtual source)
  int to = 0;
  double flow_mbps = 0.0;
  double lambda = 0.0;
};

struct PeriodPlan {
  std::vector<Role> roles;      // per real graph node
  std::vector<PlanLink> links;  // selected links / positive flows
};

struct Plan {
  Variant variant;
  int streams = 1;
  std::string solver;       // "exact" or "greedy"
  std::string demand_mode;  // "peak" or "profile"
  std::uint64_t demand_seed = 0;
  std::vector<std::uint8_t> antenna;  // per real graph node
  std::vector<PeriodPlan> periods;
  int period_offset = 0;  // first period this plan covers (dynamic designs)

  int antenna_count() const {
    int n = 0;
    for (auto a : antenna) n += (a != 0);
    return n;
  }
};

inline nlohmann::ordered_json plan_to_json(const Plan& p, const DistributionGraph& g) {
  using json = nlohmann::ordered_json;
  json j;
  j["variant"] = {{"hops", hop_mode_name(p.variant.hops)},
                  {"lte", p.variant.lte},
                  {"temporal", temporal_mode_name(p.variant.temporal)}};
  j["streams"] = p.streams;
  j["solver"] = p.solver;
  j["demand_mode"] = p.demand_mode;
  j["demand_seed"] = p.demand_seed;
  j["period_offset"] = p.period_offset;
  json antennas = json::array();
  for (int i = 0; i < static_cast<int>(p.antenna.size()); ++i)
    if (p.antenna[i]) antennas.push_back(g.node_ids[i]);
  j["antennas"] = std::move(antennas);
  json periods = json::array();
  for (const auto& period : p.periods) {
    json pj;
    json roles = json::object();
    for (int i = 0; i < static_cast<int>(period.roles.size()); ++i)
      roles[g.node_ids[i]] = role_name(period.roles[i]);
    pj["roles"] = std::move(roles);
    json links = json::array();
    for (const auto& l : period.links) {
      json lj;
      lj["from"] = l.from < 0 ? "@src" : g.node_ids[l.from];
      lj["to"] = g.node_ids[l.to];
      lj["flow_mbps"] = l.flow_mbps;
      lj["lambda"] = l.lambda;
      links.push_back(std::move(lj));
    }
    pj["links"] = std::move(links);
    periods.push_back(std::move(pj));
  }
  j["periods"] = std::move(periods);
  return j;
}

inline std::string serialize_plan(const Plan& p, const DistributionGraph& g) {
  return plan_to_json(p, g).dump(2) + "\n";
}

inline Plan plan_from_json(const nlohmann::ordered_json& j, const DistributionGraph& g) {
  Plan p;
  try {
    p.variant.hops = parse_hop_mode(j.at("variant").at("hops").get<std::string>());
    p.variant.lte = j.at("variant").at("lte").get<bool>();
    p.variant.temporal = parse_temporal_mode(j.at("variant").at("temporal").get<std::string>());
    p.streams = j.at("streams").get<int>();
    p.solver = j.at("solver").get<std::string>();
    p.demand_mode = j.at("demand_mode").get<std::string>();
    p.demand_seed = j.at("demand_seed").get<std::uint64_t>();
    p.period_offset = j.at("period_offset").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed plan document: ") + e.what());
  }

  std::map<std::string, int> index_of;
  for (int i = 0; i < g.real_node_count(); ++i) index_of[g.node_ids[i]] = i;
  auto node_index = [&](const std::string& id) {
    if (id == "@src") return -1;
    auto it = index_of.find(id);
    if (it == index_of.end()) throw ValidationError("plan references unknown node " + id);
    return it->second;
  };

  p.antenna.assign(g.real_node_count(), 0);
  for (const auto& id : j.at("antennas")) {
    const int idx = node_index(id.get<std::string>());
    if (idx < 0) throw ValidationError("virtual source cannot hold an antenna");
    p.antenna[idx] = 1;
  }
  for (const auto& pj : j.at("periods")) {
    PeriodPlan period;
    period.roles.assign(g.real_node_count(), Role::Idle);
    for (const auto& item : pj.at("roles").items()) {
      const int idx = node_index(item.key());
      if (idx < 0) throw ValidationError("virtual source cannot have a role");
      period.roles[idx] = parse_role(item.value().get<std::string>());
    }
    for (const auto& lj : pj.at("links")) {
      PlanLink l;
      l.from = node_index(lj.at("from").get<std::string>());
      l.to = node_index(lj.at("to").get<std::string>());
      if (l.to < 0) throw ValidationError("links into the virtual source are not allowed");
      l.flow_mbps = lj.at("flow_mbps").get<double>();
      l.lambda = lj.at("lambda").get<double>();
      period.links.push_back(l);
    }
    p.periods.push_back(std::move(period));
  }
  return p;
}

inline Plan load_plan_file(const std::string& path, const DistributionGraph& g) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open plan file: " + path);
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid plan JSON: ") + e.what());
  }
  return plan_from_json(j, g);
}

inline void save_plan_file(const Plan& p, const DistributionGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write plan file: " + path);
  out << serialize_plan(p, g);
}

}  // namespace relayplan
