#pragma once

// Parameter sweep: the cross product of communities, stream counts, variants,
// temporal modes, solvers and demand seeds, evaluated cell by cell into a CSV
// table and gnuplot-style plot data. Cells are independent, so a thread pool
// may run them concurrently; every cell writes into its own slot and rows are
// emitted in the fixed nesting order, which keeps the output byte-identical
// for any thread count.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "relayplan/demand.hpp"
#include "relayplan/scenario.hpp"
#include "relayplan/solver_exact.hpp"
#include "relayplan/solver_greedy.hpp"
#include "relayplan/validator.hpp"
#include "relayplan/variant.hpp"

namespace relayplan {

struct SweepAxes {
  std::vector<std::pair<std::string, Scenario>> communities;  // (label, scenario)
  std::vector<int> streams = {1, 2, 4};
  std::vector<Variant> variants;  // hop/lte/temporal combinations
  std::vector<std::string> solvers = {"exact", "greedy"};
  std::vector<std::uint64_t> seeds = {42};
};

// The full study grid: every hop mode, with and without LTE, across all
// temporal modes.
inline std::vector<Variant> full_variant_grid() {
  std::vector<Variant> out;
  for (HopMode h : {HopMode::OneHop, HopMode::TwoHop, HopMode::Splittable})
    for (bool lte : {false, true})
      for (TemporalMode t : {TemporalMode::Fixed, TemporalMode::Dynamic,
                             TemporalMode::SemiDynamic, TemporalMode::Static})
        out.push_back({h, lte, t});
  return out;
}

struct SweepOptions {
  SolverConfig solver;   // per-cell solve configuration (threads forced to 1)
  int threads = 1;       // concurrent cells
  bool timings = true;   // false zeroes runtime_ms for reproducible bytes
};

struct SweepRow {
  std::string community;
  int streams = 1;
  Variant variant;
  std::string solver;
  std::uint64_t seed = 0;
  bool solved = false;
  int antennas = -1;
  double fraction = 0.0;
  double savings = 0.0;
  double runtime_ms = 0.0;
};

// A greedy cell is meaningful only where the heuristic is defined.
inline bool solver_supports(const std::string& solver, const Variant& v) {
  if (solver != "greedy") return true;
  if (v.hops == HopMode::Splittable) return false;
  return v.temporal == TemporalMode::Fixed || v.temporal == TemporalMode::Dynamic;
}

inline SweepRow run_sweep_cell(const std::string& label, const Scenario& base, int streams,
                               Variant v, const std::string& solver, std::uint64_t seed,
                               const SweepOptions& opt) {
  SweepRow row;
  row.community = label;
  row.streams = streams;
  row.variant = v;
  row.solver = solver;
  row.seed = seed;

  Scenario s = base;
  s.radio.streams = streams;
  const DemandProfile profile =
      sample_profile(s.demand, static_cast<int>(s.households.size()), seed);

  SolverConfig cell_cfg = opt.solver;
  cell_cfg.threads = 1;

  const auto t0 = std::chrono::steady_clock::now();
  Plan plan;
  if (solver == "greedy") {
    plan = plan_greedy(s, v, profile, "profile", seed).plan;
    row.solved = true;
  } else {
    ExactOutcome out = plan_exact(s, v, profile, "profile", seed, cell_cfg);
    row.solved = out.status == MipStatus::Optimal;
    plan = std::move(out.plan);
  }
  const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
  if (opt.timings) row.runtime_ms = dt.count();

  if (row.solved) {
    const PlanMetrics m = plan_metrics(s, plan);
    row.antennas = m.antenna_count;
    row.fraction = m.antenna_fraction;
    row.savings = m.savings_pct;
  }
  return row;
}

inline std::vector<SweepRow> run_sweep(const SweepAxes& axes, const SweepOptions& opt = {}) {
  struct Cell {
    const std::pair<std::string, Scenario>* community;
    int streams;
    Variant variant;
    const std::string* solver;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& community : axes.communities)
    for (int streams : axes.streams)
      for (const Variant& v : axes.variants)
        for (const std::string& solver : axes.solvers)
          for (std::uint64_t seed : axes.seeds)
            if (solver_supports(solver, v)) cells.push_back({&community, streams, v, &solver, seed});

  std::vector<SweepRow> rows(cells.size());
  const auto run_one = [&](std::size_t k) {
    const Cell& c = cells[k];
    rows[k] = run_sweep_cell(c.community->first, c.community->second, c.streams, c.variant,
                             *c.solver, c.seed, opt);
  };
  const int workers = std::min<int>(std::max(opt.threads, 1), static_cast<int>(cells.size()));
  if (workers > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= cells.size()) break;
          run_one(k);
        }
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t k = 0; k < cells.size(); ++k) run_one(k);
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "community,streams,variant,temporal,solver,seed,antennas,fraction,savings,runtime_ms\n";
  char buf[160];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf), ",%d,%s,%s,%s,%llu,%d,%.6f,%.6f,%.3f\n", r.streams,
                  variant_name(r.variant).c_str(), temporal_mode_name(r.variant.temporal),
                  r.solver.c_str(), static_cast<unsigned long long>(r.seed), r.antennas,
                  r.fraction, r.savings, r.runtime_ms);
    out << r.community << buf;
  }
  return out.str();
}

// Plot data: one block per (community, variant, temporal, solver, seed) with
// "streams antennas savings" lines — the shape gnuplot and the bundled SVG
// writer consume.
inline std::string sweep_plot_data(const std::vector<SweepRow>& rows) {
  std::map<std::string, std::vector<const SweepRow*>> groups;
  std::vector<std::string> order;
  for (const SweepRow& r : rows) {
    std::string key = r.community + " " + variant_name(r.variant) + " " +
                      temporal_mode_name(r.variant.temporal) + " " + r.solver + " seed" +
                      std::to_string(r.seed);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::ostringstream out;
  char buf[96];
  for (const std::string& key : order) {
    out << "# " << key << "\n";
    for (const SweepRow* r : groups[key]) {
      std::snprintf(buf, sizeof(buf), "%d %d %.6f\n", r->streams, r->antennas, r->savings);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace relayplan
