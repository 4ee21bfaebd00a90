// Parameter sweep: cell gating, fixed row order, CSV/plot formats, and
// byte-identical output for any worker count.

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "relayplan/sweep.hpp"

using namespace relayplan;

namespace {

// three homes in a row, 30 m apart; demand is one 5 Mbps channel always on,
// so every seed samples the same profile and exact solves stay instant
Scenario chain_scenario() {
  Scenario s;
  s.households.push_back({"h0", 0.0, 0.0, true});
  s.households.push_back({"h1", 30.0, 0.0, true});
  s.households.push_back({"h2", 60.0, 0.0, true});
  s.demand.horizon = 2;
  s.demand.channel_rate_mbps = 5.0;
  s.demand.shape = DemandShape::Uniform;
  s.demand.uniform_pmf = {0.0, 1.0};
  return s;
}

SweepAxes small_axes() {
  SweepAxes axes;
  axes.communities.push_back({"c1", chain_scenario()});
  axes.streams = {1, 2};
  Variant fixed;
  Variant dynamic;
  dynamic.temporal = TemporalMode::Dynamic;
  axes.variants = {fixed, dynamic};
  axes.seeds = {1, 2};
  return axes;
}

}  // namespace

TEST_CASE("greedy cells exist only where the heuristic is defined", "[sweep]") {
  const std::vector<Variant> grid = full_variant_grid();
  CHECK(grid.size() == 24);  // 3 hop modes x lte on/off x 4 temporal modes

  int greedy_cells = 0;
  for (const Variant& v : grid) {
    CHECK(solver_supports("exact", v));
    if (solver_supports("greedy", v)) {
      ++greedy_cells;
      CHECK(v.hops != HopMode::Splittable);
      CHECK((v.temporal == TemporalMode::Fixed || v.temporal == TemporalMode::Dynamic));
    }
  }
  CHECK(greedy_cells == 8);
}

TEST_CASE("unsupported cells are dropped from the grid", "[sweep]") {
  SweepAxes axes;
  axes.communities.push_back({"c1", chain_scenario()});
  axes.streams = {1};
  Variant split;
  split.hops = HopMode::Splittable;
  axes.variants = {split};
  axes.seeds = {42};

  const std::vector<SweepRow> rows = run_sweep(axes);
  REQUIRE(rows.size() == 1);  // greedy cell is skipped entirely
  CHECK(rows[0].solver == "exact");
  CHECK(rows[0].solved);
  CHECK(rows[0].antennas >= 1);
}

TEST_CASE("rows come out in the fixed nesting order", "[sweep]") {
  const SweepAxes axes = small_axes();
  SweepOptions opt;
  opt.timings = false;
  const std::vector<SweepRow> rows = run_sweep(axes, opt);

  // communities -> streams -> variants -> solvers -> seeds
  REQUIRE(rows.size() == 16);
  CHECK(rows[0].streams == 1);
  CHECK(rows[0].variant.temporal == TemporalMode::Fixed);
  CHECK(rows[0].solver == "exact");
  CHECK(rows[0].seed == 1);
  CHECK(rows[1].seed == 2);
  CHECK(rows[2].solver == "greedy");
  CHECK(rows[3].solver == "greedy");
  CHECK(rows[4].variant.temporal == TemporalMode::Dynamic);
  CHECK(rows[7].variant.temporal == TemporalMode::Dynamic);
  CHECK(rows[8].streams == 2);
  CHECK(rows[15].streams == 2);
  CHECK(rows[15].solver == "greedy");
  CHECK(rows[15].seed == 2);

  for (const SweepRow& r : rows) {
    CHECK(r.community == "c1");
    CHECK(r.solved);
    CHECK(r.antennas == 1);  // the middle home feeds both neighbours
    CHECK(r.runtime_ms == 0.0);
  }
}

TEST_CASE("the CSV table has a stable header and row format", "[sweep]") {
  const SweepAxes axes = small_axes();
  SweepOptions opt;
  opt.timings = false;
  const std::string csv = sweep_csv(run_sweep(axes, opt));

  REQUIRE(csv.rfind("community,streams,variant,temporal,solver,seed,antennas,fraction,"
                    "savings,runtime_ms\n",
                    0) == 0);
  const std::string first_row = csv.substr(csv.find('\n') + 1);
  CHECK(first_row.rfind("c1,1,one-hop,fixed,exact,1,1,0.333333,66.666667,0.000\n", 0) == 0);

  // every row carries exactly ten comma-separated fields
  std::size_t lines = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    const std::size_t end = csv.find('\n', pos);
    const std::string line = csv.substr(pos, end - pos);
    std::size_t commas = 0;
    for (char c : line) commas += c == ',';
    CHECK(commas == 9);
    ++lines;
    pos = end + 1;
  }
  CHECK(lines == 17);  // header + 16 cells
}

TEST_CASE("unsolved cells are written with antennas = -1", "[sweep]") {
  SweepRow row;
  row.community = "x";
  row.streams = 1;
  row.solver = "exact";
  row.seed = 7;
  row.solved = false;
  row.runtime_ms = 12.5;
  const std::string csv = sweep_csv({row});
  CHECK(csv.find("x,1,one-hop,fixed,exact,7,-1,0.000000,0.000000,12.500\n") !=
        std::string::npos);
}

TEST_CASE("sweep output is byte-identical for any worker count", "[sweep]") {
  const SweepAxes axes = small_axes();
  SweepOptions serial;
  serial.timings = false;
  serial.threads = 1;
  SweepOptions parallel;
  parallel.timings = false;
  parallel.threads = 4;

  const std::string a = sweep_csv(run_sweep(axes, serial));
  const std::string b = sweep_csv(run_sweep(axes, parallel));
  CHECK(a == b);

  const std::string pa = sweep_plot_data(run_sweep(axes, serial));
  const std::string pb = sweep_plot_data(run_sweep(axes, parallel));
  CHECK(pa == pb);
}

TEST_CASE("plot data groups rows and lists one line per stream count", "[sweep]") {
  const SweepAxes axes = small_axes();
  SweepOptions opt;
  opt.timings = false;
  const std::string dat = sweep_plot_data(run_sweep(axes, opt));

  CHECK(dat.rfind("# c1 one-hop fixed exact seed1\n", 0) == 0);
  CHECK(dat.find("# c1 one-hop dynamic greedy seed2\n") != std::string::npos);
  CHECK(dat.find("1 1 66.666667\n") != std::string::npos);
  CHECK(dat.find("2 1 66.666667\n") != std::string::npos);

  // 8 groups (2 variants x 2 solvers x 2 seeds), each: header + 2 rows + blank
  std::size_t groups = 0;
  std::size_t pos = 0;
  while ((pos = dat.find("# ", pos)) != std::string::npos) {
    ++groups;
    pos += 2;
  }
  CHECK(groups == 8);
}

TEST_CASE("timings are recorded when requested", "[sweep]") {
  SweepAxes axes;
  axes.communities.push_back({"c1", chain_scenario()});
  axes.streams = {1};
  axes.variants = {Variant{}};
  axes.solvers = {"greedy"};
  const std::vector<SweepRow> rows = run_sweep(axes);  // default: timings on
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].runtime_ms >= 0.0);
  CHECK(rows[0].solved);
}
