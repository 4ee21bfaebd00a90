#pragma once

// Capacitated distribution graph over households, LTE base stations and an
// optional virtual content source, plus the coverage ("bin") matrix used by
// the combinatorial solvers.

#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "relayplan/radio.hpp"
#include "relayplan/scenario.hpp"

namespace relayplan {

enum class NodeKind { Household, LteBs, VirtualSource };
enum class LinkKind { Wifi, Lte, Virtual };

struct NodeRef {
  NodeKind kind = NodeKind::Household;
  int index = 0;  // position within its kind's list in the scenario
  bool operator==(const NodeRef&) const = default;
};

struct Link {
  NodeRef from;
  NodeRef to;
  double capacity_mbps = 0.0;
  LinkKind kind = LinkKind::Wifi;
};

// Node order is fixed: households first, then base stations, then the
// virtual source (when present). All algorithms index nodes by that order.
struct DistributionGraph {
  std::vector<NodeRef> nodes;
  std::vector<std::string> node_ids;
  std::vector<Link> links;
  std::vector<std::vector<int>> out_links;  // node -> link indices
  std::vector<std::vector<int>> in_links;
  int household_count = 0;
  int bs_count = 0;
  bool has_virtual = false;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int real_node_count() const { return household_count + bs_count; }
  int virtual_index() const {
    if (!has_virtual) throw std::logic_error("graph has no virtual source");
    return real_node_count();
  }
  int node_index(NodeRef ref) const {
    switch (ref.kind) {
      case NodeKind::Household: return ref.index;
      case NodeKind::LteBs: return household_count + ref.index;
      case NodeKind::VirtualSource: default: return virtual_index();
    }
  }
  bool is_household(int node) const { return node < household_count; }
  bool is_bs(int node) const {
    return node >= household_count && node < household_count + bs_count;
  }

  int add_link(NodeRef from, NodeRef to, double capacity, LinkKind kind) {
    const int id = static_cast<int>(links.size());
    links.push_back({from, to, capacity, kind});
    out_links[node_index(from)].push_back(id);
    in_links[node_index(to)].push_back(id);
    return id;
  }
};

// Symmetric WiFi connectivity: a bidirectional link pair exists between two
// households whenever the received signal clears the sensitivity threshold.
// Coincident households are clamped to a centimetre of separation to keep the
// pathloss defined.
inline DistributionGraph build_wifi_graph(const Scenario& s) {
  DistributionGraph g;
  g.household_count = static_cast<int>(s.households.size());
  for (int i = 0; i < g.household_count; ++i) {
    g.nodes.push_back({NodeKind::Household, i});
    g.node_ids.push_back(s.households[i].id);
  }
  g.out_links.resize(g.household_count);
  g.in_links.resize(g.household_count);
  for (int i = 0; i < g.household_count; ++i)
    for (int j = i + 1; j < g.household_count; ++j) {
      const auto& a = s.households[i];
      const auto& b = s.households[j];
      const double d = std::max(std::hypot(a.x_m - b.x_m, a.y_m - b.y_m), 0.01);
      const double cap = wifi_link_capacity_mbps(d, s.radio);
      if (cap > 0.0) {
        g.add_link({NodeKind::Household, i}, {NodeKind::Household, j}, cap, LinkKind::Wifi);
        g.add_link({NodeKind::Household, j}, {NodeKind::Household, i}, cap, LinkKind::Wifi);
      }
    }
  return g;
}

// Adds the base stations and one directed BS->household link wherever the LTE
// capacity exceeds one channel's rate and the household has an LTE receiver.
inline DistributionGraph augment_with_lte(DistributionGraph g, const Scenario& s) {
  if (g.has_virtual) throw std::logic_error("add LTE links before the virtual source");
  if (g.bs_count != 0) return g;
  g.bs_count = static_cast<int>(s.lte_bs.size());
  for (int k = 0; k < g.bs_count; ++k) {
    g.nodes.push_back({NodeKind::LteBs, k});
    g.node_ids.push_back(s.lte_bs[k].id);
    g.out_links.emplace_back();
    g.in_links.emplace_back();
  }
  for (int k = 0; k < g.bs_count; ++k) {
    const auto& bs = s.lte_bs[k];
    for (int i = 0; i < g.household_count; ++i) {
      if (!s.households[i].lte_capable) continue;
      const auto& h = s.households[i];
      const double d = std::max(std::hypot(bs.x_m - h.x_m, bs.y_m - h.y_m), 0.01);
      const double cap = lte_link_capacity_mbps(d, bs, s.radio);
      if (cap > s.channel_rate_mbps)
        g.add_link({NodeKind::LteBs, k}, {NodeKind::Household, i}, cap, LinkKind::Lte);
    }
  }
  return g;
}

// Adds the virtual content source with one high-capacity link to every real
// node; selecting such a link models installing a satellite antenna there.
inline DistributionGraph augment_virtual_source(DistributionGraph g,
                                                double virtual_capacity_mbps) {
  if (g.has_virtual) throw std::logic_error("graph already has a virtual source");
  if (!(virtual_capacity_mbps > 0.0))
    throw std::invalid_argument("virtual link capacity must be positive");
  g.has_virtual = true;
  g.nodes.push_back({NodeKind::VirtualSource, 0});
  g.node_ids.push_back("@src");
  g.out_links.emplace_back();
  g.in_links.emplace_back();
  const int n_real = g.real_node_count();
  for (int i = 0; i < n_real; ++i)
    g.add_link({NodeKind::VirtualSource, 0}, g.nodes[i], virtual_capacity_mbps,
               LinkKind::Virtual);
  return g;
}

// Coverage matrix: at(i, j) is true when i can serve j's whole demand over a
// direct link. LTE links count with their airtime-scaled capacity tau * C.
// Bins list, per node, the households it can cover.
struct RelayMatrix {
  int n = 0;
  std::vector<std::uint8_t> cell;
  std::vector<std::vector<int>> bins;

  bool at(int i, int j) const { return cell[static_cast<std::size_t>(i) * n + j] != 0; }
};

inline RelayMatrix relay_matrix(const DistributionGraph& g, const Scenario& s,
                                const std::vector<double>& demands) {
  if (g.has_virtual) throw std::logic_error("coverage matrix is defined on real nodes only");
  if (static_cast<int>(demands.size()) != g.household_count)
    throw std::invalid_argument("demand vector does not match household count");
  RelayMatrix m;
  m.n = g.node_count();
  m.cell.assign(static_cast<std::size_t>(m.n) * m.n, 0);
  m.bins.resize(m.n);
  for (int li = 0; li < static_cast<int>(g.links.size()); ++li) {
    const Link& e = g.links[li];
    const int i = g.node_index(e.from);
    const int j = g.node_index(e.to);
    if (!g.is_household(j)) continue;
    double effective = e.capacity_mbps;
    if (e.kind == LinkKind::Lte) effective *= s.lte_bs[e.from.index].tau;
    if (effective >= demands[j]) {
      m.cell[static_cast<std::size_t>(i) * m.n + j] = 1;
      m.bins[i].push_back(j);
    }
  }
  return m;
}

inline const char* link_kind_name(LinkKind k) {
  switch (k) {
    case LinkKind::Wifi: return "wifi";
    case LinkKind::Lte: return "lte";
    case LinkKind::Virtual: default: return "virtual";
  }
}

// Plain-text edge list: "from_id to_id capacity_mbps kind" per line.
inline std::string edge_list_text(const DistributionGraph& g) {
  std::ostringstream out;
  char buf[64];
  for (const Link& e : g.links) {
    std::snprintf(buf, sizeof(buf), "%.6g", e.capacity_mbps);
    out << g.node_ids[g.node_index(e.from)] << ' ' << g.node_ids[g.node_index(e.to)] << ' '
        << buf << ' ' << link_kind_name(e.kind) << '\n';
  }
  return out.str();
}

}  // namespace relayplan
