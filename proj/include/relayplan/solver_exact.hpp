#pragma once

// Exact minimisation of the antenna count: the LP relaxation runs on the
// dense simplex kernel and a deterministic branch-and-bound closes the
// integrality gap. Branching prefers binaries that carry objective weight
// (the placement indicators) and picks the most fractional of those, so the
// bound moves with every split; zero-weight routing binaries are only split
// once the weighted ones are integral. The 1-branch is explored first
// (antennas placed early prune deeper) and the search restarts at the best
// open bound once a dive is fathomed. The greedy cover seeds the incumbent
// so provably optimal starts are pruned at the root.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "relayplan/formulation.hpp"
#include "relayplan/simplex.hpp"
#include "relayplan/solver_greedy.hpp"

namespace relayplan {

struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded, NumericFailure };
  Status status = Status::Optimal;
  double objective = 0.0;  // model objective (minimised)
  std::vector<double> x;   // full-length assignment, fixed columns included
};

// Solves the LP relaxation of `m` under column fixings (-1 free, 0/1 pinned).
// Reduction to `max c.x, A.x <= b, x >= 0`: fixed columns fold into the
// right-hand sides, equalities split, >= rows negate, finite upper bounds
// become rows, and rows whose columns are all pinned are checked directly.
inline LpResult lp_solve(const MipModel& m, const std::vector<std::int8_t>& fixing) {
  const std::size_t nv = m.vars.size();
  if (fixing.size() != nv) throw std::invalid_argument("fixing vector does not match the model");
  LpResult out;

  std::vector<int> col(nv, -1);
  std::vector<double> base(nv, 0.0);
  int nfree = 0;
  for (std::size_t i = 0; i < nv; ++i) {
    if (fixing[i] < 0) {
      if (m.vars[i].lb != 0.0)
        throw std::logic_error("the LP reduction assumes zero lower bounds");
      col[i] = nfree++;
    } else {
      base[i] = fixing[i];
    }
  }

  const double feas_eps = 1e-6;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const MipRow& r : m.rows) {
    double pinned = 0.0;
    bool all_fixed = true;
    for (const auto& [c, w] : r.terms) {
      if (col[c] >= 0)
        all_fixed = false;
      else
        pinned += w * base[c];
    }
    const double rhs = r.rhs - pinned;
    if (all_fixed) {
      const bool ok = r.rel == RowRel::Le   ? 0.0 <= rhs + feas_eps
                      : r.rel == RowRel::Ge ? 0.0 >= rhs - feas_eps
                                            : std::fabs(rhs) <= feas_eps;
      if (!ok) {
        out.status = LpResult::Status::Infeasible;
        return out;
      }
      continue;
    }
    std::vector<double> row(nfree, 0.0);
    for (const auto& [c, w] : r.terms)
      if (col[c] >= 0) row[col[c]] += w;
    if (r.rel == RowRel::Le || r.rel == RowRel::Eq) {
      a.push_back(row);
      b.push_back(rhs);
    }
    if (r.rel == RowRel::Ge || r.rel == RowRel::Eq) {
      for (double& w : row) w = -w;
      a.push_back(std::move(row));
      b.push_back(-rhs);
    }
  }
  for (std::size_t i = 0; i < nv; ++i) {
    if (col[i] < 0 || !std::isfinite(m.vars[i].ub)) continue;
    std::vector<double> row(nfree, 0.0);
    row[col[i]] = 1.0;
    a.push_back(std::move(row));
    b.push_back(m.vars[i].ub);
  }

  if (nfree == 0) {
    out.x = std::move(base);
    out.objective = m.objective_value(out.x);
    return out;
  }

  std::vector<double> c(nfree, 0.0);
  for (std::size_t i = 0; i < nv; ++i)
    if (col[i] >= 0) c[col[i]] = -m.objective[i];

  const LpOutcome lp = solve_lp_max(a, b, c);
  switch (lp.status) {
    case LpStatus::Infeasible:
      out.status = LpResult::Status::Infeasible;
      return out;
    case LpStatus::Unbounded:
      out.status = LpResult::Status::Unbounded;
      return out;
    case LpStatus::IterLimit:
      out.status = LpResult::Status::NumericFailure;
      return out;
    case LpStatus::Optimal:
      break;
  }
  out.x = std::move(base);
  for (std::size_t i = 0; i < nv; ++i) {
    if (col[i] < 0) continue;
    double v = lp.x[col[i]];
    if (v < 0.0) v = 0.0;
    if (std::isfinite(m.vars[i].ub) && v > m.vars[i].ub) v = m.vars[i].ub;
    out.x[i] = v;
  }
  out.objective = m.objective_value(out.x);
  return out;
}

enum class MipStatus { Optimal, Infeasible, NodeLimit, TimeLimit, NumericFailure };

inline const char* mip_status_name(MipStatus s) {
  switch (s) {
    case MipStatus::Optimal: return "optimal";
    case MipStatus::Infeasible: return "infeasible";
    case MipStatus::NodeLimit: return "node-limit";
    case MipStatus::TimeLimit: return "time-limit";
    case MipStatus::NumericFailure: default: return "numeric-failure";
  }
}

struct MipSolution {
  MipStatus status = MipStatus::Optimal;
  bool has_solution = false;
  std::vector<double> x;     // best integral assignment found
  double objective = 0.0;    // its objective value
  double bound = 0.0;        // proven lower bound on the optimum
  long long nodes = 0;
};

namespace detail {
inline void bb_check(bool cond, const char* what) {
  if (!cond) throw std::logic_error(std::string("branch-and-bound invariant broken: ") + what);
}
}  // namespace detail

inline MipSolution solve_mip(const MipModel& m, const SolverConfig& cfg = {},
                             const std::vector<double>* warm_start = nullptr) {
  const auto t0 = std::chrono::steady_clock::now();
  const double tol = cfg.tolerance;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  MipSolution sol;

  std::vector<int> binaries;
  for (std::size_t i = 0; i < m.vars.size(); ++i)
    if (m.vars[i].kind == VarKind::Binary) binaries.push_back(static_cast<int>(i));
  // objective-weighted binaries drive the bound, so they branch first
  std::vector<int> branch_order = binaries;
  std::stable_partition(branch_order.begin(), branch_order.end(),
                        [&](int c) { return m.objective[c] != 0.0; });

  bool integral_obj = true;
  for (std::size_t i = 0; i < m.vars.size(); ++i) {
    const double w = m.objective[i];
    if (w != std::floor(w) || (w != 0.0 && m.vars[i].kind != VarKind::Binary))
      integral_obj = false;
  }
  const auto objective_floor = [&](double v) { return integral_obj ? std::ceil(v - tol) : v; };

  double inc_obj = kInf;
  std::vector<double> inc_x;
  const auto try_incumbent = [&](const std::vector<double>& cand) {
    if (!m.satisfied(cand, tol)) return false;
    const double v = m.objective_value(cand);
    if (v < inc_obj - 1e-9) {
      inc_obj = v;
      inc_x = cand;
      if (cfg.log)
        std::fprintf(stderr, "  incumbent %.6g after %lld nodes\n", v, sol.nodes);
    }
    return true;
  };
  if (warm_start && warm_start->size() == m.vars.size()) try_incumbent(*warm_start);

  struct Node {
    std::vector<std::int8_t> fixing;
    double bound = 0.0;  // LP objective of the parent
    long long seq = 0;
  };
  std::vector<Node> open;
  long long seq = 0;
  std::optional<Node> cur = Node{std::vector<std::int8_t>(m.vars.size(), -1), -kInf, seq++};

  bool aborted = false;
  MipStatus abort_status = MipStatus::Optimal;
  bool root_seen = false;

  while (true) {
    if (cfg.node_limit > 0 && sol.nodes >= cfg.node_limit) {
      aborted = true;
      abort_status = MipStatus::NodeLimit;
      break;
    }
    if (cfg.time_limit_s > 0.0) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      if (dt.count() >= cfg.time_limit_s) {
        aborted = true;
        abort_status = MipStatus::TimeLimit;
        break;
      }
    }

    Node node;
    if (cur) {
      node = std::move(*cur);
      cur.reset();
    } else if (!open.empty()) {
      std::size_t pick = 0;  // best-bound restart, ties to the oldest node
      for (std::size_t k = 1; k < open.size(); ++k)
        if (open[k].bound < open[pick].bound ||
            (open[k].bound == open[pick].bound && open[k].seq < open[pick].seq))
          pick = k;
      node = std::move(open[pick]);
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
    } else {
      break;
    }

    if (inc_obj < kInf && objective_floor(node.bound) >= inc_obj - 1e-9) continue;

    ++sol.nodes;
    const LpResult lp = lp_solve(m, node.fixing);
    if (lp.status == LpResult::Status::Infeasible) continue;
    if (lp.status != LpResult::Status::Optimal) {
      aborted = true;
      abort_status = MipStatus::NumericFailure;
      break;
    }
    detail::bb_check(lp.objective >= node.bound - 1e-4, "child relaxation beat its parent");
    if (!root_seen) {
      root_seen = true;
      if (inc_obj < kInf)
        detail::bb_check(lp.objective <= inc_obj + 1e-4, "root relaxation above the incumbent");
    }
    if (cfg.log)
      std::fprintf(stderr, "  node %lld: bound %.6g, open %zu\n", sol.nodes, lp.objective,
                   open.size());
    if (inc_obj < kInf && objective_floor(lp.objective) >= inc_obj - 1e-9) continue;

    int bvar = -1;
    if (!branch_order.empty()) {
      const bool weighted_first = m.objective[branch_order.front()] != 0.0;
      double bfrac = tol;
      bool in_weighted = weighted_first;
      for (int c : branch_order) {
        const bool w = m.objective[c] != 0.0;
        if (in_weighted && !w) {
          if (bvar >= 0) break;  // a fractional weighted binary wins outright
          in_weighted = false;
        }
        if (node.fixing[c] >= 0) continue;
        const double frac = std::fabs(lp.x[c] - std::round(lp.x[c]));
        if (frac > bfrac + 1e-12) {  // most fractional, ties to the lowest column
          bfrac = frac;
          bvar = c;
        }
      }
    }

    if (bvar < 0) {
      // integral on all free binaries: pin them and repair the continuous part
      std::vector<std::int8_t> pin = node.fixing;
      for (int c : binaries) pin[c] = lp.x[c] > 0.5 ? 1 : 0;
      const LpResult repaired = lp_solve(m, pin);
      bool accepted = false;
      if (repaired.status == LpResult::Status::Optimal) accepted = try_incumbent(repaired.x);
      if (!accepted) accepted = try_incumbent(lp.x);
      if (!accepted) {
        // numerically degenerate point: push the search on deterministically
        int lowest = -1;
        for (int c : binaries)
          if (node.fixing[c] < 0) {
            lowest = c;
            break;
          }
        if (lowest < 0) continue;
        bvar = lowest;
      } else {
        continue;
      }
    }

    Node one{node.fixing, lp.objective, seq++};
    one.fixing[bvar] = 1;
    Node zero{std::move(node.fixing), lp.objective, seq++};
    zero.fixing[bvar] = 0;
    open.push_back(std::move(zero));
    cur = std::move(one);
  }

  sol.has_solution = inc_obj < kInf;
  if (sol.has_solution) {
    sol.objective = inc_obj;
    sol.x = std::move(inc_x);
  }
  if (aborted) {
    sol.status = abort_status;
    double gl = kInf;
    if (cur) gl = std::min(gl, cur->bound);
    for (const Node& n : open) gl = std::min(gl, n.bound);
    sol.bound = std::min(gl, inc_obj);
  } else {
    sol.status = sol.has_solution ? MipStatus::Optimal : MipStatus::Infeasible;
    sol.bound = inc_obj;
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Plan-level orchestration

inline DistributionGraph build_variant_graph(const Scenario& s, Variant v,
                                             const DemandProfile& profile) {
  DistributionGraph g = build_wifi_graph(s);
  if (v.lte) g = augment_with_lte(std::move(g), s);
  if (v.hops == HopMode::Splittable)
    g = augment_virtual_source(std::move(g), derive_big_m(g, profile));
  return g;
}

namespace detail {

inline std::vector<double> demand_column(const DemandProfile& p, int t) {
  std::vector<double> d(p.homes());
  for (int h = 0; h < p.homes(); ++h) d[h] = p.delta[h][t];
  return d;
}

// Lifts a cover-style plan into a model assignment. `copy_plans` holds one
// period plan per routing copy; with per-period routing, feeds into
// households that are idle in that period are dropped unless they relay.
inline std::vector<double> warm_assignment(const MipModel& m, const DistributionGraph& g,
                                           const std::vector<std::uint8_t>& antenna,
                                           const std::vector<const PeriodPlan*>& copy_plans,
                                           const DemandProfile& profile) {
  std::vector<double> x(m.vars.size(), 0.0);
  for (int i = 0; i < g.real_node_count(); ++i)
    if (antenna[i] && m.antenna_col[i] >= 0) x[m.antenna_col[i]] = 1.0;

  std::map<std::pair<int, int>, int> link_of;
  for (std::size_t li = 0; li < g.links.size(); ++li)
    link_of[{g.node_index(g.links[li].from), g.node_index(g.links[li].to)}] =
        static_cast<int>(li);

  const int copies = m.routing_per_period ? m.period_count : 1;
  for (int rc = 0; rc < copies; ++rc) {
    const PeriodPlan& pp = *copy_plans[rc];
    std::vector<std::uint8_t> relays(g.household_count, 0);
    for (const PlanLink& l : pp.links)
      if (l.from >= 0 && l.from < g.household_count) relays[l.from] = 1;
    for (const PlanLink& l : pp.links) {
      if (l.from < 0) continue;  // cover plans carry no virtual flows
      const auto it = link_of.find({l.from, l.to});
      if (it == link_of.end()) continue;
      const int li = it->second;
      if (m.routing_per_period && l.to < g.household_count && !relays[l.to] &&
          profile.delta[l.to][m.period_offset + rc] <= 0.0)
        continue;  // an idle terminal pulls nothing this period
      if (m.use_col[rc][li] >= 0) x[m.use_col[rc][li]] = 1.0;
      if (g.links[li].kind == LinkKind::Lte && m.share_col[rc][li] >= 0)
        x[m.share_col[rc][li]] = l.lambda;
    }
    if (!m.relay_col.empty())
      for (int j = 0; j < g.household_count; ++j)
        if (m.relay_col[rc][j] >= 0 && j < static_cast<int>(pp.roles.size()) &&
            pp.roles[j] == Role::Relay)
          x[m.relay_col[rc][j]] = 1.0;
  }
  return x;
}

// The always-feasible splittable start: an antenna at every household, the
// whole demand arriving over the virtual link.
inline std::vector<double> splittable_warm(const MipModel& m, const DistributionGraph& g,
                                           const std::vector<std::vector<double>>& d_per_copy) {
  std::vector<double> x(m.vars.size(), 0.0);
  for (int i = 0; i < g.household_count; ++i)
    if (m.antenna_col[i] >= 0) x[m.antenna_col[i]] = 1.0;
  const int copies = m.routing_per_period ? m.period_count : 1;
  for (int rc = 0; rc < copies; ++rc)
    for (int li : g.out_links[g.virtual_index()]) {
      const int to = g.node_index(g.links[li].to);
      if (g.is_household(to) && m.flow_col[rc][li] >= 0)
        x[m.flow_col[rc][li]] = d_per_copy[rc][to];
    }
  return x;
}

}  // namespace detail

struct ExactOutcome {
  Plan plan;
  MipStatus status = MipStatus::Optimal;
  double bound = 0.0;     // sum of per-model proven bounds
  long long nodes = 0;    // branch-and-bound nodes over all models
};

// Builds the model family for the variant, solves each member exactly and
// stitches the plan. Dynamic designs yield one model per period; those are
// independent, so cfg.threads of them may run concurrently (each solve stays
// single-threaded and the stitched result is identical for any thread count).
inline ExactOutcome plan_exact(const Scenario& s, Variant v, const DemandProfile& profile,
                               const std::string& demand_mode, std::uint64_t demand_seed,
                               const SolverConfig& cfg = {}, bool warm = true) {
  const DistributionGraph g = build_variant_graph(s, v, profile);
  std::vector<MipModel> models = build_model(g, profile, v, s, cfg);

  // seed incumbents
  std::vector<std::vector<double>> warm_store(models.size());
  std::vector<const std::vector<double>*> warms(models.size(), nullptr);
  if (warm) {
    if (v.hops == HopMode::Splittable) {
      for (std::size_t k = 0; k < models.size(); ++k) {
        std::vector<std::vector<double>> cols;
        if (models[k].routing_per_period) {
          for (int t = 0; t < models[k].period_count; ++t)
            cols.push_back(detail::demand_column(profile, t));
        } else if (v.temporal == TemporalMode::Dynamic) {
          cols.push_back(detail::demand_column(profile, models[k].period_offset));
        } else {
          cols.push_back(peak_demands(profile));
        }
        warm_store[k] = detail::splittable_warm(models[k], g, cols);
        warms[k] = &warm_store[k];
      }
    } else if (v.temporal == TemporalMode::Dynamic) {
      const GreedyResult gr = plan_greedy(s, v, profile, demand_mode, demand_seed);
      for (std::size_t k = 0; k < models.size(); ++k) {
        const PeriodPlan& pp = gr.plan.periods[models[k].period_offset];
        std::vector<std::uint8_t> src(g.real_node_count(), 0);
        for (int i = 0; i < g.real_node_count(); ++i)
          if (i < static_cast<int>(pp.roles.size()) && pp.roles[i] == Role::Source) src[i] = 1;
        warm_store[k] = detail::warm_assignment(models[k], g, src, {&pp}, profile);
        warms[k] = &warm_store[k];
      }
    } else {
      Variant fixed = v;
      fixed.temporal = TemporalMode::Fixed;
      const GreedyResult gr = plan_greedy(s, fixed, profile, demand_mode, demand_seed);
      const int copies = models[0].routing_per_period ? models[0].period_count : 1;
      std::vector<const PeriodPlan*> copy_plans(copies, &gr.plan.periods[0]);
      warm_store[0] =
          detail::warm_assignment(models[0], g, gr.plan.antenna, copy_plans, profile);
      warms[0] = &warm_store[0];
    }
  }

  SolverConfig one = cfg;
  one.threads = 1;
  std::vector<MipSolution> sols(models.size());
  const auto run_one = [&](std::size_t k) { sols[k] = solve_mip(models[k], one, warms[k]); };
  const int workers =
      std::min<int>(std::max(cfg.threads, 1), static_cast<int>(models.size()));
  if (workers > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= models.size()) break;
          run_one(k);
        }
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t k = 0; k < models.size(); ++k) run_one(k);
  }

  ExactOutcome out;
  out.plan.variant = v;
  out.plan.streams = s.radio.streams;
  out.plan.solver = "exact";
  out.plan.demand_mode = demand_mode;
  out.plan.demand_seed = demand_seed;
  out.plan.antenna.assign(g.real_node_count(), 0);
  bool complete = true;
  for (std::size_t k = 0; k < models.size(); ++k) {
    out.nodes += sols[k].nodes;
    out.bound += sols[k].bound;
    if (sols[k].status != MipStatus::Optimal && out.status == MipStatus::Optimal)
      out.status = sols[k].status;
    if (!sols[k].has_solution) {
      complete = false;
      continue;
    }
    const Plan piece = extract_plan(models[k], sols[k].x, v, g);
    for (int i = 0; i < g.real_node_count(); ++i)
      if (piece.antenna[i]) out.plan.antenna[i] = 1;
    for (const PeriodPlan& pp : piece.periods) out.plan.periods.push_back(pp);
  }
  if (!complete) {  // a partial stitch is not a usable plan
    out.plan.periods.clear();
    out.plan.antenna.assign(g.real_node_count(), 0);
  }
  return out;
}

}  // namespace relayplan
