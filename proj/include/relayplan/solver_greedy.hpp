#pragma once

// Budgeted set-cover heuristics for antenna placement. The one-hop pass
// repeatedly opens the node that can feed the most unserved households
// directly; the two-hop pass scores candidates by direct coverage plus the
// extra ring their receivers could forward to, then lets receivers relay.
// Both run in milliseconds and give the exact solver its starting incumbent.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relayplan/demand.hpp"
#include "relayplan/netgraph.hpp"
#include "relayplan/plan.hpp"
#include "relayplan/rng.hpp"
#include "relayplan/scenario.hpp"
#include "relayplan/variant.hpp"

namespace relayplan {

struct GreedyStep {
  int source = -1;
  std::vector<int> receivers;                 // first-hop admissions, in order
  std::vector<std::pair<int, int>> relayed;   // (relay, child) admissions
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;

  std::string to_text(const DistributionGraph& g) const {
    std::ostringstream out;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const GreedyStep& st = steps[k];
      out << "step " << (k + 1) << ": source=" << g.node_ids[st.source] << ", receivers=[";
      for (std::size_t r = 0; r < st.receivers.size(); ++r) {
        if (r) out << ", ";
        out << g.node_ids[st.receivers[r]];
      }
      out << "]";
      if (!st.relayed.empty()) {
        out << ", relayed=[";
        for (std::size_t r = 0; r < st.relayed.size(); ++r) {
          if (r) out << ", ";
          out << g.node_ids[st.relayed[r].first] << "->" << g.node_ids[st.relayed[r].second];
        }
        out << "]";
      }
      out << '\n';
    }
    return out.str();
  }
};

struct GreedyOptions {
  bool randomize_receivers = false;  // shuffle admission order instead of ranking
  std::uint64_t seed = 0;
};

struct GreedyResult {
  Plan plan;
  std::vector<GreedyTrace> traces;  // one per emitted period
};

namespace detail {

struct CoverResult {
  std::vector<std::uint8_t> antenna;  // per real node
  std::vector<int> feeder;            // per household, -1 = self-served or inactive
  GreedyTrace trace;
};

class GreedyCover {
 public:
  GreedyCover(const DistributionGraph& g, const Scenario& s, std::vector<double> demand,
              bool cover_all, const GreedyOptions& opt)
      : g_(g), s_(s), d_(std::move(demand)), opt_(opt), gen_(opt.seed) {
    n_ = g.real_node_count();
    nh_ = g.household_count;
    cap_.assign(n_, std::vector<double>(nh_, 0.0));
    for (const Link& e : g_.links) {
      const int to = g_.node_index(e.to);
      if (to < nh_) cap_[g_.node_index(e.from)][to] = e.capacity_mbps;
    }
    antenna_.assign(n_, 0);
    feeder_.assign(nh_, -1);
    pending_.assign(nh_, 0);
    for (int j = 0; j < nh_; ++j) pending_[j] = (cover_all || d_[j] > 0.0) ? 1 : 0;
    out_budget_.assign(nh_, s_.rho);
    tau_rem_.assign(g_.bs_count, 0.0);
    for (int b = 0; b < g_.bs_count; ++b) tau_rem_[b] = s_.lte_bs[b].tau;
  }

  CoverResult run_one_hop() {
    for (;;) {
      int best = -1, best_gain = 0;
      for (int i = 0; i < n_; ++i) {
        const int gain = direct_gain(i);
        if (gain > best_gain) {
          best_gain = gain;
          best = i;
        }
      }
      if (best < 0) break;
      open_source(best);
      GreedyStep step;
      step.source = best;
      admit_receivers(best, step);
      trace_.steps.push_back(std::move(step));
    }
    serve_leftovers();
    return finish();
  }

  CoverResult run_two_hop() {
    for (;;) {
      int best = -1;
      long long best_gain = 0, best_reach = -1;
      for (int i = 0; i < n_; ++i) {
        const bool candidate = i < nh_ ? pending_[i] != 0 : antenna_[i] == 0;
        if (!candidate) continue;
        const auto bin = direct_bin(i);
        if (bin.empty()) continue;
        const long long gain = static_cast<long long>(bin.size());
        const long long reach = forward_reach(i, bin);
        if (gain > best_gain || (gain == best_gain && reach > best_reach)) {
          best_gain = gain;
          best_reach = reach;
          best = i;
        }
      }
      if (best < 0) break;
      open_source(best);
      GreedyStep step;
      step.source = best;
      admit_receivers(best, step);
      admit_second_hop(best, step);
      trace_.steps.push_back(std::move(step));
    }
    serve_leftovers();
    return finish();
  }

 private:
  static constexpr double kSlack = 1e-12;

  const DistributionGraph& g_;
  const Scenario& s_;
  std::vector<double> d_;
  GreedyOptions opt_;
  std::mt19937_64 gen_;
  int n_ = 0, nh_ = 0;
  std::vector<std::vector<double>> cap_;  // sender x household
  std::vector<std::uint8_t> antenna_;
  std::vector<int> feeder_;
  std::vector<std::uint8_t> pending_;
  std::vector<int> out_budget_;   // receiver slots left, households only
  std::vector<double> tau_rem_;   // airtime share left, per base station
  GreedyTrace trace_;

  bool serves(int i, int j) const {
    const double c = cap_[i][j];
    if (c <= 0.0) return false;
    if (i >= nh_) return d_[j] <= c * tau_rem_[i - nh_] + kSlack;
    return c + kSlack >= d_[j];
  }

  std::vector<int> direct_bin(int i) const {
    std::vector<int> bin;
    for (int j = 0; j < nh_; ++j)
      if (j != i && pending_[j] && serves(i, j)) bin.push_back(j);
    return bin;
  }

  // one-hop score: how many pending households i could actually take now
  int direct_gain(int i) const {
    if (i < nh_) {
      if (out_budget_[i] <= 0) return 0;
      int cnt = 0;
      for (int j = 0; j < nh_; ++j)
        if (j != i && pending_[j] && serves(i, j)) ++cnt;
      return std::min(cnt, out_budget_[i]);
    }
    // base station: fill the remaining airtime with the cheapest admissions
    std::vector<std::pair<double, int>> need;
    for (int j = 0; j < nh_; ++j)
      if (pending_[j] && cap_[i][j] > 0.0) need.push_back({d_[j] / cap_[i][j], j});
    std::sort(need.begin(), need.end());
    double rem = tau_rem_[i - nh_];
    int cnt = 0;
    for (const auto& [share, j] : need)
      if (share <= rem + kSlack) {
        rem -= share;
        ++cnt;
      }
    return cnt;
  }

  // households a fresh receiver ring could forward to in one more hop
  long long forward_reach(int i, const std::vector<int>& bin) const {
    std::vector<std::uint8_t> in_bin(nh_, 0);
    for (int j : bin) in_bin[j] = 1;
    long long reach = 0;
    for (int k = 0; k < nh_; ++k) {
      if (!pending_[k] || k == i || in_bin[k]) continue;
      for (int j : bin)
        if (cap_[j][k] + kSlack >= d_[k]) {
          ++reach;
          break;
        }
    }
    return reach;
  }

  void open_source(int i) {
    if (antenna_[i]) return;
    antenna_[i] = 1;
    if (i >= nh_) return;
    if (feeder_[i] >= 0) {  // promoting a covered receiver refunds its feeder
      const int f = feeder_[i];
      if (f < nh_)
        out_budget_[f] += 1;
      else
        tau_rem_[f - nh_] += d_[i] / cap_[f][i];
      feeder_[i] = -1;
    }
    pending_[i] = 0;
  }

  // receivers that would make the weakest sources go first; a seeded shuffle
  // replaces the ranking when the caller wants a randomized restart
  void order_receivers(std::vector<int>& cands) {
    if (opt_.randomize_receivers) {
      for (int k = static_cast<int>(cands.size()) - 1; k > 0; --k) {
        int r = static_cast<int>(uniform01(gen_) * (k + 1));
        if (r > k) r = k;
        std::swap(cands[k], cands[r]);
      }
      return;
    }
    std::vector<int> own(nh_, 0);
    for (int j : cands) {
      int cnt = 0;
      for (int k = 0; k < nh_; ++k)
        if (k != j && pending_[k] && cap_[j][k] + kSlack >= d_[k]) ++cnt;
      own[j] = cnt;
    }
    std::sort(cands.begin(), cands.end(), [&](int a, int b) {
      if (own[a] != own[b]) return own[a] < own[b];
      return a < b;
    });
  }

  void admit_receivers(int i, GreedyStep& step) {
    std::vector<int> cands;
    for (int j = 0; j < nh_; ++j)
      if (j != i && pending_[j] && cap_[i][j] > 0.0) cands.push_back(j);
    order_receivers(cands);
    for (int j : cands) {
      if (i < nh_) {
        if (out_budget_[i] <= 0) break;
        if (cap_[i][j] + kSlack < d_[j]) continue;
        out_budget_[i] -= 1;
      } else {
        const double share = d_[j] / cap_[i][j];
        if (share > tau_rem_[i - nh_] + kSlack) continue;
        tau_rem_[i - nh_] -= share;
      }
      feeder_[j] = i;
      pending_[j] = 0;
      step.receivers.push_back(j);
    }
  }

  void admit_second_hop(int src, GreedyStep& step) {
    std::vector<int> relays = step.receivers;
    std::sort(relays.begin(), relays.end());  // spare ties resolve to the lowest id
    std::vector<double> carried(nh_, 0.0);  // demand already forwarded per relay

    auto spare = [&](int j) {
      if (j >= nh_ || cap_[src][j] <= 0.0) return 0.0;
      if (src >= nh_) return tau_rem_[src - nh_] * cap_[src][j];
      return cap_[src][j] - d_[j] - carried[j];
    };
    auto fits = [&](int j, int k) {
      return pending_[k] && out_budget_[j] > 0 && cap_[j][k] + kSlack >= d_[k] &&
             d_[k] <= spare(j) + kSlack;
    };

    for (;;) {
      // the relay with the widest feeder headroom, among those with a child
      int j0 = -1;
      double best_spare = 0.0;
      for (int j : relays) {
        if (j >= nh_ || out_budget_[j] <= 0) continue;
        const double sp = spare(j);
        if (j0 >= 0 && sp <= best_spare + kSlack) continue;
        bool any = false;
        for (int k = 0; k < nh_ && !any; ++k) any = fits(j, k);
        if (!any) continue;
        j0 = j;
        best_spare = sp;
      }
      if (j0 < 0) break;

      // favour children no other relay could still pick up
      int child = -1;
      bool child_exclusive = false;
      for (int k = 0; k < nh_; ++k) {
        if (!fits(j0, k)) continue;
        bool exclusive = true;
        for (int j : relays) {
          if (j == j0) continue;
          if (fits(j, k)) {
            exclusive = false;
            break;
          }
        }
        const bool better =
            child < 0 || (exclusive && !child_exclusive) ||
            (exclusive == child_exclusive && d_[k] > d_[child] + kSlack);
        if (better) {
          child = k;
          child_exclusive = exclusive;
        }
      }
      if (child < 0) break;

      feeder_[child] = j0;
      pending_[child] = 0;
      out_budget_[j0] -= 1;
      if (src >= nh_)
        tau_rem_[src - nh_] -= d_[child] / cap_[src][j0];
      else
        carried[j0] += d_[child];
      step.relayed.push_back({j0, child});
    }
  }

  void serve_leftovers() {
    for (int j = 0; j < nh_; ++j)
      if (pending_[j]) {
        antenna_[j] = 1;
        pending_[j] = 0;
        GreedyStep step;
        step.source = j;
        trace_.steps.push_back(std::move(step));
      }
  }

  CoverResult finish() {
    CoverResult r;
    r.antenna = std::move(antenna_);
    r.feeder = std::move(feeder_);
    r.trace = std::move(trace_);
    return r;
  }
};

inline PeriodPlan cover_to_period(const DistributionGraph& g, const std::vector<double>& d,
                                  const CoverResult& c) {
  PeriodPlan p;
  const int n = g.real_node_count();
  const int nh = g.household_count;
  p.roles.assign(n, Role::Idle);
  for (int i = 0; i < n; ++i)
    if (c.antenna[i]) p.roles[i] = Role::Source;

  std::vector<double> forwarded(nh, 0.0);  // demand each household relays onward
  for (int k = 0; k < nh; ++k) {
    const int f = c.feeder[k];
    if (f >= 0 && f < nh) forwarded[f] += d[k];
  }
  for (int j = 0; j < nh; ++j) {
    if (c.feeder[j] < 0) continue;
    p.roles[j] = forwarded[j] > 0.0 ? Role::Relay : Role::Terminal;
  }

  std::map<std::pair<int, int>, double> cap;
  for (const Link& e : g.links) cap[{g.node_index(e.from), g.node_index(e.to)}] = e.capacity_mbps;
  for (int j = 0; j < nh; ++j) {
    const int f = c.feeder[j];
    if (f < 0) continue;
    PlanLink l;
    l.from = f;
    l.to = j;
    l.flow_mbps = d[j] + forwarded[j];
    if (f >= nh) l.lambda = l.flow_mbps / cap.at({f, j});
    p.links.push_back(l);
  }
  std::sort(p.links.begin(), p.links.end(), [](const PlanLink& a, const PlanLink& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });
  return p;
}

}  // namespace detail

// Greedy planner entry point. Fixed designs size every household at its peak
// demand; dynamic designs run one independent cover per period (the antenna
// vector accumulates every location that is ever a source).
inline GreedyResult plan_greedy(const Scenario& s, Variant v, const DemandProfile& profile,
                                const std::string& demand_mode, std::uint64_t demand_seed,
                                const GreedyOptions& opt = {}) {
  if (v.hops == HopMode::Splittable)
    throw std::invalid_argument("the greedy planner only places whole-channel feeds");
  if (v.temporal != TemporalMode::Fixed && v.temporal != TemporalMode::Dynamic)
    throw std::invalid_argument("the greedy planner supports fixed and dynamic designs");
  if (profile.homes() != static_cast<int>(s.households.size()))
    throw std::invalid_argument("demand profile does not match the scenario");

  DistributionGraph g = build_wifi_graph(s);
  if (v.lte) g = augment_with_lte(std::move(g), s);

  GreedyResult r;
  r.plan.variant = v;
  r.plan.streams = s.radio.streams;
  r.plan.solver = "greedy";
  r.plan.demand_mode = demand_mode;
  r.plan.demand_seed = demand_seed;
  r.plan.antenna.assign(g.real_node_count(), 0);

  auto run = [&](const std::vector<double>& d, bool cover_all) {
    detail::GreedyCover cover(g, s, d, cover_all, opt);
    detail::CoverResult c =
        v.hops == HopMode::TwoHop ? cover.run_two_hop() : cover.run_one_hop();
    for (int i = 0; i < g.real_node_count(); ++i)
      if (c.antenna[i]) r.plan.antenna[i] = 1;
    r.plan.periods.push_back(detail::cover_to_period(g, d, c));
    r.traces.push_back(std::move(c.trace));
  };

  if (v.temporal == TemporalMode::Fixed) {
    run(peak_demands(profile), true);
  } else {
    for (int t = 0; t < profile.periods(); ++t) {
      std::vector<double> d(profile.homes());
      for (int h = 0; h < profile.homes(); ++h) d[h] = profile.delta[h][t];
      run(d, false);
    }
  }
  return r;
}

}  // namespace relayplan
