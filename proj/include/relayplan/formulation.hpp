#pragma once

// Lowers a scenario + variant into mixed-integer linear models, and lifts
// solver assignments back into deployment plans.
//
// Variable families (registry names):
//   ant[id]          antenna indicator at a node (non-splittable designs)
//   inj[id]          antenna indicator at a node (splittable designs)
//   rel[id]          relay indicator (two-hop)
//   use[a->b]        link-selection indicator
//   share[a->b]      LTE airtime share, continuous in [0,1]
//   flow[a->b]       carried traffic in Mbps (splittable), @src for virtual
// Per-period copies carry an "@t<k>" suffix (semi-dynamic routing).

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relayplan/demand.hpp"
#include "relayplan/netgraph.hpp"
#include "relayplan/plan.hpp"
#include "relayplan/scenario.hpp"
#include "relayplan/variant.hpp"

namespace relayplan {

enum class VarKind { Binary, Continuous };
enum class RowRel { Le, Ge, Eq };

struct MipVar {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0.0;
  double ub = 1.0;
};

struct MipRow {
  std::string family;
  std::string where;
  std::vector<std::pair<int, double>> terms;  // (column, coefficient)
  RowRel rel = RowRel::Le;
  double rhs = 0.0;
};

struct SolverConfig {
  double big_m = 0.0;       // 0: derive from total peak demand + max capacity
  double tolerance = 1e-6;  // integrality / feasibility tolerance
  long long node_limit = 0;  // 0: unlimited
  double time_limit_s = 0.0;  // 0: unlimited
  bool log = false;           // per-node bound progression on stderr
  int threads = 1;            // used for independent solves only
};

struct MipModel {
  std::vector<MipVar> vars;
  std::vector<MipRow> rows;
  std::vector<double> objective;  // minimise
  std::unordered_map<std::string, int> by_name;

  // plan-extraction metadata
  int period_count = 1;
  int period_offset = 0;
  bool routing_per_period = false;
  std::vector<int> antenna_col;             // per real graph node, -1 if absent
  std::vector<std::vector<int>> relay_col;  // [routing period][household]
  std::vector<std::vector<int>> use_col;    // [routing period][link]
  std::vector<std::vector<int>> flow_col;   // [routing period][link]
  std::vector<std::vector<int>> share_col;  // [routing period][link]

  int add_var(std::string name, VarKind kind, double lb, double ub, double obj_coef) {
    const int col = static_cast<int>(vars.size());
    by_name.emplace(name, col);
    vars.push_back({std::move(name), kind, lb, ub});
    objective.push_back(obj_coef);
    return col;
  }

  int var(const std::string& name) const {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw std::out_of_range("no such variable: " + name);
    return it->second;
  }

  MipRow& add_row(std::string family, std::string where, RowRel rel, double rhs) {
    rows.push_back({std::move(family), std::move(where), {}, rel, rhs});
    return rows.back();
  }

  int binary_count() const {
    int n = 0;
    for (const auto& v : vars) n += (v.kind == VarKind::Binary);
    return n;
  }

  double row_activity(const MipRow& row, const std::vector<double>& x) const {
    double act = 0.0;
    for (const auto& [col, coef] : row.terms) act += coef * x[col];
    return act;
  }

  bool row_satisfied(const MipRow& row, const std::vector<double>& x, double eps) const {
    const double act = row_activity(row, x);
    switch (row.rel) {
      case RowRel::Le: return act <= row.rhs + eps;
      case RowRel::Ge: return act >= row.rhs - eps;
      case RowRel::Eq: default: return std::fabs(act - row.rhs) <= eps;
    }
  }

  // Full feasibility check of an assignment: bounds, integrality of binaries
  // and every row, within eps.
  bool satisfied(const std::vector<double>& x, double eps) const {
    if (x.size() != vars.size()) return false;
    for (std::size_t j = 0; j < vars.size(); ++j) {
      if (x[j] < vars[j].lb - eps || x[j] > vars[j].ub + eps) return false;
      if (vars[j].kind == VarKind::Binary && std::fabs(x[j] - std::round(x[j])) > eps)
        return false;
    }
    for (const auto& row : rows)
      if (!row_satisfied(row, x, eps)) return false;
    return true;
  }

  double objective_value(const std::vector<double>& x) const {
    double v = 0.0;
    for (std::size_t j = 0; j < vars.size(); ++j) v += objective[j] * x[j];
    return v;
  }

  // LP-format text dump (debug aid).
  std::string lp_text() const {
    std::ostringstream out;
    out << "Minimize\n obj:";
    for (std::size_t j = 0; j < vars.size(); ++j)
      if (objective[j] != 0.0)
        out << (objective[j] > 0 ? " +" : " ") << objective[j] << ' ' << vars[j].name;
    out << "\nSubject To\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto& row = rows[r];
      out << ' ' << row.family << '_' << r << " (" << row.where << "):";
      for (const auto& [col, coef] : row.terms)
        out << (coef > 0 ? " +" : " ") << coef << ' ' << vars[col].name;
      switch (row.rel) {
        case RowRel::Le: out << " <= "; break;
        case RowRel::Ge: out << " >= "; break;
        case RowRel::Eq: out << " = "; break;
      }
      out << row.rhs << '\n';
    }
    out << "Bounds\n";
    for (const auto& v : vars) {
      out << ' ' << v.lb << " <= " << v.name << " <= ";
      if (std::isinf(v.ub))
        out << "inf\n";
      else
        out << v.ub << '\n';
    }
    out << "Binaries\n";
    for (const auto& v : vars)
      if (v.kind == VarKind::Binary) out << ' ' << v.name;
    out << "\nEnd\n";
    return out.str();
  }
};

// Big-M wide enough to deactivate any capacity row: total peak demand plus
// the largest real-link capacity.
inline double derive_big_m(const DistributionGraph& g, const DemandProfile& profile) {
  double total_peak = 0.0;
  for (double d : peak_demands(profile)) total_peak += d;
  double max_cap = 0.0;
  for (const auto& e : g.links)
    if (e.kind != LinkKind::Virtual) max_cap = std::max(max_cap, e.capacity_mbps);
  return total_peak + max_cap;
}

namespace detail {

struct BuildContext {
  const DistributionGraph& g;
  const Scenario& s;
  Variant v;
  double big_m;
  // demand columns used by this model: [period][household]
  std::vector<std::vector<double>> d;
  bool use_delta = false;           // demand-activity factor in pull rows
  bool routing_per_period = false;  // routing variables per period
  int period_offset = 0;
};

inline std::string tsuf(const BuildContext& ctx, int t) {
  return ctx.routing_per_period ? "@t" + std::to_string(t) : std::string();
}

inline std::string link_label(const DistributionGraph& g, const Link& e) {
  return g.node_ids[g.node_index(e.from)] + "->" + g.node_ids[g.node_index(e.to)];
}

inline MipModel build_single(const BuildContext& ctx) {
  const DistributionGraph& g = ctx.g;
  const Scenario& s = ctx.s;
  const int n_home = g.household_count;
  const int n_real = g.real_node_count();
  const int periods = static_cast<int>(ctx.d.size());
  const int routing_copies = ctx.routing_per_period ? periods : 1;
  const bool splittable = ctx.v.hops == HopMode::Splittable;
  const bool two_hop = ctx.v.hops == HopMode::TwoHop;

  MipModel m;
  m.period_count = periods;
  m.period_offset = ctx.period_offset;
  m.routing_per_period = ctx.routing_per_period;
  m.antenna_col.assign(n_real, -1);
  m.relay_col.assign(routing_copies, std::vector<int>(n_home, -1));
  m.use_col.assign(routing_copies, std::vector<int>(g.links.size(), -1));
  m.flow_col.assign(routing_copies, std::vector<int>(g.links.size(), -1));
  m.share_col.assign(routing_copies, std::vector<int>(g.links.size(), -1));

  // antenna indicators, shared across periods
  for (int i = 0; i < n_real; ++i) {
    const std::string prefix = splittable ? "inj[" : "ant[";
    m.antenna_col[i] = m.add_var(prefix + g.node_ids[i] + "]", VarKind::Binary, 0, 1, 1.0);
  }

  // routing variables, one block per routing copy
  for (int rc = 0; rc < routing_copies; ++rc) {
    const std::string suf = tsuf(ctx, rc);
    if (two_hop)
      for (int i = 0; i < n_home; ++i)
        m.relay_col[rc][i] =
            m.add_var("rel[" + g.node_ids[i] + "]" + suf, VarKind::Binary, 0, 1, 0.0);
    for (std::size_t li = 0; li < g.links.size(); ++li) {
      const Link& e = g.links[li];
      if (splittable) {
        m.flow_col[rc][li] =
            m.add_var("flow[" + link_label(g, e) + "]" + suf, VarKind::Continuous, 0,
                      std::numeric_limits<double>::infinity(), 0.0);
      } else if (e.kind != LinkKind::Virtual) {
        m.use_col[rc][li] =
            m.add_var("use[" + link_label(g, e) + "]" + suf, VarKind::Binary, 0, 1, 0.0);
      }
      if (e.kind == LinkKind::Lte)
        m.share_col[rc][li] =
            m.add_var("share[" + link_label(g, e) + "]" + suf, VarKind::Continuous, 0, 1, 0.0);
    }
  }

  // Periods to instantiate demand-dependent rows for; paired with the routing
  // copy they act on.
  struct PeriodRef {
    int t;        // demand column
    int rc;       // routing copy
    std::string suffix;
  };
  std::vector<PeriodRef> prefs;
  for (int t = 0; t < periods; ++t) {
    const int rc = ctx.routing_per_period ? t : 0;
    std::string suffix;
    if (ctx.routing_per_period || periods > 1) suffix = "@t" + std::to_string(t);
    prefs.push_back({t, rc, suffix});
  }
  // Demand-independent rows are emitted once per routing copy.
  std::vector<PeriodRef> rrefs;
  if (ctx.routing_per_period)
    rrefs = prefs;
  else
    rrefs.push_back({0, 0, std::string()});

  if (!splittable) {
    for (const auto& pr : rrefs) {
      // out-degree cap at sending households
      for (int i = 0; i < n_home; ++i) {
        auto& row = m.add_row("degree", g.node_ids[i] + pr.suffix, RowRel::Le, 0.0);
        for (int li : g.out_links[i]) row.terms.push_back({m.use_col[pr.rc][li], 1.0});
        row.terms.push_back({m.antenna_col[i], -double(s.rho)});
        if (two_hop) row.terms.push_back({m.relay_col[pr.rc][i], -double(s.rho)});
      }
      // every non-source household pulls exactly one in-link (scaled by the
      // activity flag when demand-aware)
      for (int j = 0; j < n_home; ++j) {
        const double delta = ctx.use_delta ? (ctx.d[pr.t][j] > 0.0 ? 1.0 : 0.0) : 1.0;
        auto& row = m.add_row("pull", g.node_ids[j] + pr.suffix, RowRel::Eq, delta);
        for (int li : g.in_links[j]) row.terms.push_back({m.use_col[pr.rc][li], 1.0});
        row.terms.push_back({m.antenna_col[j], delta});
        if (two_hop) {
          // relays keep their feed regardless of own demand
          const double ycoef = delta - 1.0;
          if (ycoef != 0.0) row.terms.push_back({m.relay_col[pr.rc][j], ycoef});
        }
      }
      if (two_hop) {
        for (int i = 0; i < n_home; ++i) {
          auto& row = m.add_row("role-mux", g.node_ids[i] + pr.suffix, RowRel::Le, 1.0);
          row.terms.push_back({m.antenna_col[i], 1.0});
          row.terms.push_back({m.relay_col[pr.rc][i], 1.0});
        }
        // a relay may not feed another relay
        for (std::size_t li = 0; li < g.links.size(); ++li) {
          const Link& e = g.links[li];
          if (e.kind != LinkKind::Wifi) continue;
          const int i = g.node_index(e.from);
          const int j = g.node_index(e.to);
          auto& row = m.add_row("relay-chain", link_label(g, e) + pr.suffix, RowRel::Le, 2.0);
          row.terms.push_back({m.relay_col[pr.rc][j], 1.0});
          row.terms.push_back({m.relay_col[pr.rc][i], 1.0});
          row.terms.push_back({m.use_col[pr.rc][li], 1.0});
        }
      }
      // LTE airtime budget needs an antenna at the base station
      for (int b = n_home; b < n_real; ++b) {
        auto& row = m.add_row("lte-share", g.node_ids[b] + pr.suffix, RowRel::Le, 0.0);
        for (int li : g.out_links[b]) row.terms.push_back({m.share_col[pr.rc][li], 1.0});
        row.terms.push_back({m.antenna_col[b], -s.lte_bs[b - n_home].tau});
      }
    }

    // capacity rows carry demand and are instantiated per period
    for (const auto& pr : prefs) {
      const auto& d = ctx.d[pr.t];
      if (!two_hop) {
        for (int j = 0; j < n_home; ++j) {
          auto& row = m.add_row("link-capacity", g.node_ids[j] + pr.suffix, RowRel::Ge, d[j]);
          for (int li : g.in_links[j])
            row.terms.push_back({m.use_col[pr.rc][li], g.links[li].capacity_mbps});
          row.terms.push_back({m.antenna_col[j], d[j]});
        }
        for (std::size_t li = 0; li < g.links.size(); ++li) {
          const Link& e = g.links[li];
          if (e.kind != LinkKind::Lte) continue;
          const int j = g.node_index(e.to);
          auto& row = m.add_row("lte-capacity", link_label(g, e) + pr.suffix, RowRel::Ge, 0.0);
          row.terms.push_back({m.share_col[pr.rc][li], e.capacity_mbps});
          row.terms.push_back({m.use_col[pr.rc][li], -d[j]});
        }
      } else {
        // A selected link must carry the receiver's demand plus everything the
        // receiver forwards; the big-M term switches the row off when the link
        // is idle.
        for (std::size_t li = 0; li < g.links.size(); ++li) {
          const Link& e = g.links[li];
          const int i = g.node_index(e.from);
          const int j = g.node_index(e.to);
          const bool lte = e.kind == LinkKind::Lte;
          auto& row = m.add_row(lte ? "lte-capacity" : "link-capacity",
                                link_label(g, e) + pr.suffix, RowRel::Le, ctx.big_m);
          for (int lo : g.out_links[j]) {
            const int k = g.node_index(g.links[lo].to);
            if (k == i) continue;  // the reverse of the feeder link
            row.terms.push_back({m.use_col[pr.rc][lo], d[k]});
          }
          if (lte) {
            row.terms.push_back({m.use_col[pr.rc][li], d[j] + ctx.big_m});
            row.terms.push_back({m.share_col[pr.rc][li], -e.capacity_mbps});
          } else {
            row.terms.push_back({m.use_col[pr.rc][li], d[j] + ctx.big_m - e.capacity_mbps});
          }
        }
      }
    }
  } else {
    // splittable: flow conservation with a hop budget
    const int vsrc = g.virtual_index();
    for (const auto& pr : prefs) {
      const auto& d = ctx.d[pr.t];
      double total = 0.0;
      for (double x : d) total += x;

      for (int i = 0; i < n_real; ++i) {
        auto& row = m.add_row("conservation", g.node_ids[i] + pr.suffix, RowRel::Eq,
                              g.is_household(i) ? d[i] : 0.0);
        for (int li : g.in_links[i]) row.terms.push_back({m.flow_col[pr.rc][li], 1.0});
        for (int li : g.out_links[i]) row.terms.push_back({m.flow_col[pr.rc][li], -1.0});
      }
      {
        auto& row = m.add_row("source-total", "all" + pr.suffix, RowRel::Eq, total);
        for (int li : g.out_links[vsrc]) row.terms.push_back({m.flow_col[pr.rc][li], 1.0});
      }
      for (std::size_t li = 0; li < g.links.size(); ++li) {
        const Link& e = g.links[li];
        if (e.kind == LinkKind::Virtual) continue;
        if (e.kind == LinkKind::Lte) {
          auto& row = m.add_row("lte-capacity", link_label(g, e) + pr.suffix, RowRel::Le, 0.0);
          row.terms.push_back({m.flow_col[pr.rc][li], 1.0});
          row.terms.push_back({m.share_col[pr.rc][li], -e.capacity_mbps});
        } else {
          auto& row = m.add_row("link-capacity", link_label(g, e) + pr.suffix, RowRel::Le,
                                e.capacity_mbps);
          row.terms.push_back({m.flow_col[pr.rc][li], 1.0});
        }
      }
      for (int li : g.out_links[vsrc]) {
        const Link& e = g.links[li];
        const int i = g.node_index(e.to);
        auto& row = m.add_row("virtual-capacity", g.node_ids[i] + pr.suffix, RowRel::Le, 0.0);
        row.terms.push_back({m.flow_col[pr.rc][li], 1.0});
        row.terms.push_back({m.antenna_col[i], -e.capacity_mbps});
      }
      for (int b = n_home; b < n_real; ++b) {
        auto& row = m.add_row("lte-share", g.node_ids[b] + pr.suffix, RowRel::Le, 0.0);
        for (int li : g.out_links[b]) row.terms.push_back({m.share_col[pr.rc][li], 1.0});
        row.terms.push_back({m.antenna_col[b], -s.lte_bs[b - n_home].tau});
      }
      {
        // total traffic on real links bounded by hop_limit * total demand
        auto& row = m.add_row("hop-budget", "all" + pr.suffix, RowRel::Le,
                              s.hop_limit * total);
        for (std::size_t li = 0; li < g.links.size(); ++li)
          if (g.links[li].kind != LinkKind::Virtual)
            row.terms.push_back({m.flow_col[pr.rc][li], 1.0});
      }
    }
  }
  return m;
}

}  // namespace detail

// Builds the model family for a variant: one model for fixed / semi-dynamic /
// static designs, one per period for dynamic designs.
inline std::vector<MipModel> build_model(const DistributionGraph& g,
                                         const DemandProfile& profile, Variant v,
                                         const Scenario& s, const SolverConfig& cfg = {}) {
  if (profile.homes() != g.household_count)
    throw std::invalid_argument("demand profile does not match the graph's households");
  if (profile.periods() < 1) throw std::invalid_argument("demand profile has no periods");
  if ((v.hops == HopMode::Splittable) != g.has_virtual)
    throw std::invalid_argument("graph virtual source does not match the variant");
  if (!v.lte && g.bs_count > 0)
    throw std::invalid_argument("graph has LTE links but the variant is WiFi-only");
  if (v.lte && g.bs_count != static_cast<int>(s.lte_bs.size()))
    throw std::invalid_argument("LTE variant expects the base stations in the graph");

  const double big_m = cfg.big_m > 0.0 ? cfg.big_m : derive_big_m(g, profile);
  const int T = profile.periods();

  auto column = [&](int t) {
    std::vector<double> d(g.household_count);
    for (int h = 0; h < g.household_count; ++h) d[h] = profile.delta[h][t];
    return d;
  };

  std::vector<MipModel> family;
  detail::BuildContext ctx{g, s, v, big_m, {}, false, false, 0};
  switch (v.temporal) {
    case TemporalMode::Fixed:
      ctx.d = {peak_demands(profile)};
      family.push_back(detail::build_single(ctx));
      break;
    case TemporalMode::Dynamic:
      for (int t = 0; t < T; ++t) {
        ctx.d = {column(t)};
        ctx.use_delta = true;
        ctx.period_offset = t;
        family.push_back(detail::build_single(ctx));
      }
      break;
    case TemporalMode::SemiDynamic: {
      ctx.use_delta = true;
      ctx.routing_per_period = true;
      for (int t = 0; t < T; ++t) ctx.d.push_back(column(t));
      family.push_back(detail::build_single(ctx));
      break;
    }
    case TemporalMode::Static: {
      if (v.hops == HopMode::Splittable) {
        // A time-independent flow cannot satisfy per-period conservation under
        // varying demand, so the static splittable design provisions for peak.
        ctx.d = {peak_demands(profile)};
      } else {
        for (int t = 0; t < T; ++t) ctx.d.push_back(column(t));
      }
      family.push_back(detail::build_single(ctx));
      break;
    }
  }
  return family;
}

// Lifts a feasible assignment into a Plan. Tiny flows (below 1e-8 Mbps) are
// dropped; that keeps node balances within the validator's tolerance.
inline Plan extract_plan(const MipModel& m, const std::vector<double>& x, Variant v,
                         const DistributionGraph& g) {
  constexpr double kFlowCutoff = 1e-8;
  const int n_real = g.real_node_count();
  Plan p;
  p.variant = v;
  p.period_offset = m.period_offset;
  p.antenna.assign(n_real, 0);
  for (int i = 0; i < n_real; ++i)
    if (m.antenna_col[i] >= 0 && x[m.antenna_col[i]] > 0.5) p.antenna[i] = 1;

  const int routing_copies = m.routing_per_period ? m.period_count : 1;
  for (int rc = 0; rc < routing_copies; ++rc) {
    PeriodPlan period;
    period.roles.assign(n_real, Role::Idle);
    for (int i = 0; i < n_real; ++i)
      if (p.antenna[i]) period.roles[i] = Role::Source;

    if (v.hops != HopMode::Splittable) {
      for (int i = 0; i < g.household_count; ++i)
        if (v.hops == HopMode::TwoHop && m.relay_col[rc][i] >= 0 &&
            x[m.relay_col[rc][i]] > 0.5 && period.roles[i] != Role::Source)
          period.roles[i] = Role::Relay;
      for (std::size_t li = 0; li < g.links.size(); ++li) {
        const int col = m.use_col[rc][li];
        if (col < 0 || x[col] < 0.5) continue;
        const Link& e = g.links[li];
        PlanLink pl;
        pl.from = g.node_index(e.from);
        pl.to = g.node_index(e.to);
        if (e.kind == LinkKind::Lte) pl.lambda = x[m.share_col[rc][li]];
        period.links.push_back(pl);
        if (period.roles[pl.to] == Role::Idle) period.roles[pl.to] = Role::Terminal;
      }
    } else {
      for (std::size_t li = 0; li < g.links.size(); ++li) {
        const int col = m.flow_col[rc][li];
        if (col < 0 || x[col] <= kFlowCutoff) continue;
        const Link& e = g.links[li];
        PlanLink pl;
        pl.from = e.kind == LinkKind::Virtual ? -1 : g.node_index(e.from);
        pl.to = g.node_index(e.to);
        pl.flow_mbps = x[col];
        if (e.kind == LinkKind::Lte) pl.lambda = x[m.share_col[rc][li]];
        period.links.push_back(pl);
      }
      for (const auto& l : period.links) {
        if (l.from >= 0 && period.roles[l.from] == Role::Idle)
          period.roles[l.from] = Role::Relay;
        if (l.from >= 0 && period.roles[l.from] == Role::Terminal)
          period.roles[l.from] = Role::Relay;
      }
      for (const auto& l : period.links)
        if (period.roles[l.to] == Role::Idle) period.roles[l.to] = Role::Terminal;
    }
    p.periods.push_back(std::move(period));
  }
  return p;
}

}  // namespace relayplan
