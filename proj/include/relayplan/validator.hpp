#pragma once

// Independent plan checker. It rebuilds the radio graph from the scenario and
// re-states every design rule directly on the plan structures — node roles,
// feed multiplicities, link capacities, LTE airtime, flow balances and the
// hop budget — rather than reusing the optimisation model, so a bug in the
// model builder cannot hide a bad plan. All numeric checks use an absolute
// tolerance of 1e-6.

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "relayplan/demand.hpp"
#include "relayplan/netgraph.hpp"
#include "relayplan/plan.hpp"
#include "relayplan/scenario.hpp"
#include "relayplan/variant.hpp"

namespace relayplan {

struct Violation {
  std::string family;  // rule family: shape, role, link, degree, pull, ...
  std::string where;   // node id, link label or period tag
  double measured = 0.0;
  double allowed = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  std::string to_text() const {
    std::ostringstream out;
    for (const auto& v : violations) {
      char nums[96];
      std::snprintf(nums, sizeof(nums), " (measured %.9g, allowed %.9g)", v.measured,
                    v.allowed);
      out << v.family << " at " << v.where << ": " << v.detail << nums << '\n';
    }
    return out.str();
  }
};

namespace detail {

constexpr double kValTol = 1e-6;

struct PlanChecker {
  const Scenario& s;
  const Plan& plan;
  const DemandProfile& profile;
  ValidationReport rep;
  DistributionGraph g;
  std::map<std::pair<int, int>, const Link*> edge;

  PlanChecker(const Scenario& sc, const Plan& p, const DemandProfile& pr)
      : s(sc), plan(p), profile(pr) {
    g = build_wifi_graph(s);
    if (p.variant.lte) g = augment_with_lte(std::move(g), s);
    for (const Link& e : g.links)
      edge[{g.node_index(e.from), g.node_index(e.to)}] = &e;
  }

  void flag(std::string family, std::string where, double measured, double allowed,
            std::string detail) {
    rep.violations.push_back(
        {std::move(family), std::move(where), measured, allowed, std::move(detail)});
  }

  std::string node_name(int i) const {
    if (i < 0) return "@src";
    if (i < g.real_node_count()) return g.node_ids[i];
    return "#" + std::to_string(i);
  }
  std::string link_name(int a, int b) const { return node_name(a) + "->" + node_name(b); }

  std::vector<double> column(int t) const {
    std::vector<double> d(profile.homes());
    for (int h = 0; h < profile.homes(); ++h) d[h] = profile.delta[h][t];
    return d;
  }

  bool shape_ok() {
    if (static_cast<int>(plan.antenna.size()) != g.real_node_count()) {
      flag("shape", "antennas", static_cast<double>(plan.antenna.size()),
           g.real_node_count(), "antenna vector does not match the graph's real nodes");
      return false;
    }
    std::size_t expect = 1;
    switch (plan.variant.temporal) {
      case TemporalMode::Fixed:
      case TemporalMode::Static: expect = 1; break;
      case TemporalMode::Dynamic:
      case TemporalMode::SemiDynamic:
        expect = static_cast<std::size_t>(profile.periods() - plan.period_offset);
        break;
    }
    if (plan.periods.size() != expect) {
      flag("shape", "periods", static_cast<double>(plan.periods.size()),
           static_cast<double>(expect), "period count does not match the design mode");
      return false;
    }
    for (std::size_t p = 0; p < plan.periods.size(); ++p)
      if (plan.periods[p].roles.size() != static_cast<std::size_t>(g.real_node_count())) {
        flag("shape", "t" + std::to_string(p), static_cast<double>(plan.periods[p].roles.size()),
             g.real_node_count(), "role vector does not match the graph's real nodes");
        return false;
      }
    return true;
  }

  // ----- whole-channel (non-splittable) designs -----

  // Routing rules on one period: who may send, who must be fed, chain depth.
  void check_structure(const PeriodPlan& pp, const std::vector<std::uint8_t>& active,
                       const std::string& tag) {
    const Variant v = plan.variant;
    const int nh = g.household_count;
    const bool antenna_is_source = v.temporal != TemporalMode::Dynamic;

    std::vector<int> indeg(nh, 0), in_from(nh, -1);
    std::vector<int> outdeg(g.real_node_count(), 0);
    std::set<std::pair<int, int>> seen;

    for (const PlanLink& l : pp.links) {
      const std::string name = link_name(l.from, l.to);
      if (l.from < 0) {
        flag("link", name, 0, 0, "whole-channel designs have no virtual links");
        continue;
      }
      const auto it = edge.find({l.from, l.to});
      if (it == edge.end()) {
        flag("link", name, 0, 0, "link is not in the radio graph");
        continue;
      }
      if (!seen.insert({l.from, l.to}).second) {
        flag("link", name, 0, 0, "duplicate link in one period");
        continue;
      }
      if (it->second->kind == LinkKind::Wifi && std::fabs(l.lambda) > kValTol)
        flag("lte-share", name, l.lambda, 0.0, "airtime share on a WiFi link");
      if (it->second->kind == LinkKind::Lte && (l.lambda < -kValTol || l.lambda > 1.0 + kValTol))
        flag("lte-share", name, l.lambda, 1.0, "airtime share outside [0, 1]");
      outdeg[l.from] += 1;
      indeg[l.to] += 1;
      in_from[l.to] = l.from;
    }

    for (int i = 0; i < g.real_node_count(); ++i) {
      const Role r = pp.roles[i];
      const std::string id = g.node_ids[i] + tag;
      if (g.is_bs(i)) {
        if (r != Role::Source && r != Role::Idle)
          flag("role", id, 0, 0, "a base station can only source or sit idle");
        if (outdeg[i] > 0 && r != Role::Source)
          flag("role", id, outdeg[i], 0, "an idle base station is sending");
        if (r == Role::Source && !plan.antenna[i])
          flag("role", id, 1, 0, "source role without an antenna");
        continue;
      }
      const bool act = active[i] != 0;
      switch (r) {
        case Role::Source:
          if (!plan.antenna[i]) flag("role", id, 1, 0, "source role without an antenna");
          if (indeg[i] != 0) flag("pull", id, indeg[i], 0, "a source also receives a feed");
          break;
        case Role::Relay:
          if (v.hops != HopMode::TwoHop)
            flag("role", id, 0, 0, "relay role outside a two-hop design");
          if (indeg[i] != 1)
            flag("pull", id, indeg[i], 1, "a relay needs exactly one feed");
          else if (in_from[i] >= 0 && pp.roles[in_from[i]] != Role::Source)
            flag("relay-chain", id, 0, 0, "a relay must be fed by a source");
          break;
        case Role::Terminal:
          if (!act) flag("pull", id, indeg[i], 0, "an inactive household receives a feed");
          if (indeg[i] != 1)
            flag("pull", id, indeg[i], 1, "a terminal needs exactly one feed");
          if (outdeg[i] > 0) flag("degree", id, outdeg[i], 0, "a terminal is sending");
          break;
        case Role::Idle:
          if (act) flag("pull", id, 0, 1, "an active household has no feed and no antenna");
          if (indeg[i] != 0) flag("pull", id, indeg[i], 0, "an idle household receives a feed");
          if (outdeg[i] > 0) flag("degree", id, outdeg[i], 0, "an idle household is sending");
          break;
      }
      if (antenna_is_source && plan.antenna[i] && r != Role::Source)
        flag("role", id, 0, 1, "antenna node not marked as a source");
      if ((r == Role::Source || r == Role::Relay) && outdeg[i] > s.rho)
        flag("degree", id, outdeg[i], s.rho, "more receivers than the sender budget");
    }
  }

  // Capacity rules on one period's links under one demand column.
  void check_capacity(const PeriodPlan& pp, const std::vector<double>& d,
                      const std::string& tag) {
    const int nh = g.household_count;
    std::vector<double> forwarded(nh, 0.0);
    for (const PlanLink& l : pp.links)
      if (l.from >= 0 && l.from < nh && l.to < nh) forwarded[l.from] += d[l.to];

    std::vector<double> share(g.bs_count, 0.0);
    for (const PlanLink& l : pp.links) {
      if (l.from < 0) continue;
      const auto it = edge.find({l.from, l.to});
      if (it == edge.end() || l.to >= nh) continue;
      const Link& e = *it->second;
      const double carried = d[l.to] + forwarded[l.to];
      const std::string name = link_name(l.from, l.to) + tag;
      if (e.kind == LinkKind::Wifi) {
        if (carried > e.capacity_mbps + kValTol)
          flag("link-capacity", name, carried, e.capacity_mbps,
               "the feed plus relayed demand exceeds the link rate");
      } else {
        if (carried > e.capacity_mbps * l.lambda + kValTol)
          flag("lte-capacity", name, carried, e.capacity_mbps * l.lambda,
               "the feed exceeds the reserved LTE share");
        share[l.from - nh] += l.lambda;
      }
    }
    for (int b = 0; b < g.bs_count; ++b)
      if (share[b] > s.lte_bs[b].tau + kValTol)
        flag("lte-share", g.node_ids[nh + b] + tag, share[b], s.lte_bs[b].tau,
             "airtime shares exceed the base station budget");
  }

  // ----- splittable (flow) designs -----

  void check_flows(const PeriodPlan& pp, const std::vector<double>& d,
                   const std::string& tag) {
    const int nh = g.household_count;
    const int nr = g.real_node_count();
    std::vector<double> balance(nr, 0.0);  // inflow - outflow
    std::vector<double> share(g.bs_count, 0.0);
    double on_real_links = 0.0;

    for (const PlanLink& l : pp.links) {
      const std::string name = link_name(l.from, l.to) + tag;
      if (l.flow_mbps < -kValTol)
        flag("flow", name, l.flow_mbps, 0.0, "negative flow");
      if (l.from < 0) {  // virtual feed = demand entering at an antenna
        if (l.to < 0 || l.to >= nr) {
          flag("link", name, l.to, nr - 1, "virtual flow into an unknown node");
          continue;
        }
        balance[l.to] += l.flow_mbps;
        if (l.flow_mbps > kValTol && !plan.antenna[l.to])
          flag("virtual-capacity", name, l.flow_mbps, 0.0,
               "demand injected at a node without an antenna");
        continue;
      }
      const auto it = edge.find({l.from, l.to});
      if (it == edge.end()) {
        flag("link", name, 0, 0, "link is not in the radio graph");
        continue;
      }
      const Link& e = *it->second;
      balance[l.to] += l.flow_mbps;
      balance[l.from] -= l.flow_mbps;
      on_real_links += l.flow_mbps;
      if (e.kind == LinkKind::Wifi) {
        if (l.flow_mbps > e.capacity_mbps + kValTol)
          flag("link-capacity", name, l.flow_mbps, e.capacity_mbps,
               "flow exceeds the link rate");
        if (std::fabs(l.lambda) > kValTol)
          flag("lte-share", name, l.lambda, 0.0, "airtime share on a WiFi link");
      } else {
        if (l.lambda < -kValTol || l.lambda > 1.0 + kValTol)
          flag("lte-share", name, l.lambda, 1.0, "airtime share outside [0, 1]");
        if (l.flow_mbps > e.capacity_mbps * l.lambda + kValTol)
          flag("lte-capacity", name, l.flow_mbps, e.capacity_mbps * l.lambda,
               "flow exceeds the reserved LTE share");
        share[l.from - nh] += l.lambda;
      }
    }

    double total = 0.0;
    for (int j = 0; j < nh; ++j) total += d[j];
    for (int i = 0; i < nr; ++i) {
      const double want = i < nh ? d[i] : 0.0;
      if (std::fabs(balance[i] - want) > kValTol)
        flag("conservation", g.node_ids[i] + tag, balance[i], want,
             "node balance does not match its demand");
    }
    for (int b = 0; b < g.bs_count; ++b) {
      const double cap = plan.antenna[nh + b] ? s.lte_bs[b].tau : 0.0;
      if (share[b] > cap + kValTol)
        flag("lte-share", g.node_ids[nh + b] + tag, share[b], cap,
             "airtime shares exceed the base station budget");
    }
    if (on_real_links > s.hop_limit * total + kValTol)
      flag("hop-budget", "all" + tag, on_real_links, s.hop_limit * total,
           "relayed traffic exceeds the hop budget");
    for (int i = 0; i < nr; ++i)
      if (plan.antenna[i] == 0 && pp.roles[i] == Role::Source)
        flag("role", g.node_ids[i] + tag, 1, 0, "source role without an antenna");
  }

  ValidationReport run() {
    if (!shape_ok()) return std::move(rep);
    const Variant v = plan.variant;
    const int T = profile.periods();

    if (v.hops == HopMode::Splittable) {
      if (v.temporal == TemporalMode::Fixed || v.temporal == TemporalMode::Static) {
        check_flows(plan.periods[0], peak_demands(profile), "");
      } else {
        for (std::size_t p = 0; p < plan.periods.size(); ++p)
          check_flows(plan.periods[p], column(plan.period_offset + static_cast<int>(p)),
                      "@t" + std::to_string(plan.period_offset + p));
      }
      return std::move(rep);
    }

    const auto indicator = [&](const std::vector<double>& d) {
      std::vector<std::uint8_t> a(g.household_count, 0);
      for (int j = 0; j < g.household_count; ++j) a[j] = d[j] > 0.0 ? 1 : 0;
      return a;
    };

    switch (v.temporal) {
      case TemporalMode::Fixed: {
        const auto d = peak_demands(profile);
        check_structure(plan.periods[0], std::vector<std::uint8_t>(g.household_count, 1), "");
        check_capacity(plan.periods[0], d, "");
        break;
      }
      case TemporalMode::Dynamic:
      case TemporalMode::SemiDynamic: {
        for (std::size_t p = 0; p < plan.periods.size(); ++p) {
          const int t = plan.period_offset + static_cast<int>(p);
          const auto d = column(t);
          const std::string tag = "@t" + std::to_string(t);
          check_structure(plan.periods[p], indicator(d), tag);
          check_capacity(plan.periods[p], d, tag);
        }
        break;
      }
      case TemporalMode::Static: {
        check_structure(plan.periods[0], std::vector<std::uint8_t>(g.household_count, 1), "");
        for (int t = 0; t < T; ++t)
          check_capacity(plan.periods[0], column(t), "@t" + std::to_string(t));
        break;
      }
    }
    return std::move(rep);
  }
};

}  // namespace detail

inline ValidationReport validate_plan(const Scenario& s, const Plan& plan,
                                      const DemandProfile& profile) {
  detail::PlanChecker checker(s, plan, profile);
  return checker.run();
}

// ---------------------------------------------------------------------------
// Headline numbers for reports and sweeps.

struct PlanMetrics {
  int antenna_count = 0;  // peak per-period count for dynamic designs, else the set size
  int household_count = 0;
  int real_node_count = 0;
  double antenna_fraction = 0.0;  // antenna_count / real graph nodes
  double savings_pct = 0.0;       // 100 * (1 - antenna_count / households)
  int max_relay_depth = 0;        // longest feed chain in hops
  std::vector<int> per_period_antennas;
};

inline PlanMetrics plan_metrics(const Scenario& s, const Plan& p) {
  PlanMetrics m;
  m.household_count = static_cast<int>(s.households.size());
  m.real_node_count = static_cast<int>(p.antenna.size());

  for (const PeriodPlan& pp : p.periods) {
    int n = 0;
    for (Role r : pp.roles) n += r == Role::Source ? 1 : 0;
    m.per_period_antennas.push_back(n);
  }
  if (p.variant.temporal == TemporalMode::Dynamic) {
    for (int n : m.per_period_antennas) m.antenna_count = std::max(m.antenna_count, n);
  } else {
    m.antenna_count = p.antenna_count();
  }
  if (m.real_node_count > 0)
    m.antenna_fraction = static_cast<double>(m.antenna_count) / m.real_node_count;
  if (m.household_count > 0)
    m.savings_pct = 100.0 * (1.0 - static_cast<double>(m.antenna_count) / m.household_count);

  const int nh = m.household_count;
  for (const PeriodPlan& pp : p.periods) {
    if (p.variant.hops == HopMode::Splittable) {
      std::vector<std::uint8_t> real_in(nh, 0), real_out(nh, 0);
      bool any = false;
      for (const PlanLink& l : pp.links) {
        if (l.from < 0 || l.flow_mbps <= detail::kValTol) continue;
        any = true;
        if (l.to < nh) real_in[l.to] = 1;
        if (l.from < nh) real_out[l.from] = 1;
      }
      if (any) m.max_relay_depth = std::max(m.max_relay_depth, 1);
      for (int j = 0; j < nh; ++j)
        if (real_in[j] && real_out[j]) m.max_relay_depth = std::max(m.max_relay_depth, 2);
    } else {
      for (const PlanLink& l : pp.links) {
        if (l.from < 0) continue;
        m.max_relay_depth = std::max(m.max_relay_depth, 1);
        if (l.from < nh && l.from < static_cast<int>(pp.roles.size()) &&
            pp.roles[l.from] == Role::Relay)
          m.max_relay_depth = std::max(m.max_relay_depth, 2);
      }
    }
  }
  return m;
}

}  // namespace relayplan
