// relayplan — planning tool for satellite-fed wireless live-TV distribution.
//
//   generate   synthesise a community scenario
//   plan       place antennas with the exact or the greedy solver
//   validate   re-check a plan file against its scenario
//   sweep      evaluate a parameter grid into CSV / plot data
//   report     turn a sweep CSV into plot data and an SVG chart
//
// Exit codes: 0 success, 1 operational failure (violations, non-optimal
// solves, bad inputs), 2 command-line usage errors.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relayplan/relayplan.hpp"

namespace rp = relayplan;

namespace {

rp::DemandProfile make_profile(const rp::Scenario& s, const std::string& mode,
                               std::uint64_t seed) {
  const int n = static_cast<int>(s.households.size());
  if (mode == "peak") return rp::worst_case_profile(s.demand, n);
  if (mode == "profile") return rp::sample_profile(s.demand, n, seed);
  throw std::invalid_argument("unknown demand mode: " + mode + " (use profile or peak)");
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_metrics(const rp::PlanMetrics& m, bool per_period) {
  std::printf("antennas=%d\n", m.antenna_count);
  std::printf("fraction=%.6f\n", m.antenna_fraction);
  std::printf("savings=%.6f\n", m.savings_pct);
  if (per_period) {
    std::string list;
    for (std::size_t t = 0; t < m.per_period_antennas.size(); ++t) {
      if (t) list += ",";
      list += std::to_string(m.per_period_antennas[t]);
    }
    std::printf("period_antennas=%s\n", list.c_str());
  }
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  int homes = 20;
  double spacing = 55.0;
  int bs = 0;
  std::uint64_t seed = 1;
  double tau = 0.5;
  int horizon = 24;
  double channel_rate = 5.0;
  int psi_max = 4;
  std::string out = "-";
};

int cmd_generate(const GenerateArgs& a) {
  rp::Scenario s = rp::generate_community(a.homes, a.spacing, a.bs, a.seed);
  for (auto& b : s.lte_bs) b.tau = a.tau;
  s.demand = rp::DemandModel::default_diurnal(a.horizon, a.channel_rate, a.psi_max);
  s.channel_rate_mbps = a.channel_rate;
  rp::validate_scenario(s);
  write_text(a.out, rp::serialize_scenario(s));
  return 0;
}

struct PlanArgs {
  std::string scenario;
  std::string variant = "one-hop";
  std::string temporal = "fixed";
  std::string solver = "exact";
  int streams = 0;  // 0 = keep the scenario's value
  std::string demand = "profile";
  std::uint64_t seed = 42;
  std::string out;
  std::string dump_model;
  std::string dump_graph;
  bool trace = false;
  bool log_solver = false;
  bool no_warm = false;
  double time_limit = 0.0;
  long long node_limit = 0;
  int threads = 1;
};

int cmd_plan(const PlanArgs& a) {
  rp::Scenario s = rp::load_scenario_file(a.scenario);
  if (a.streams > 0) s.radio.streams = a.streams;
  rp::validate_scenario(s);
  const rp::Variant v = rp::parse_variant(a.variant, rp::parse_temporal_mode(a.temporal));
  const rp::DemandProfile profile = make_profile(s, a.demand, a.seed);

  if (!a.dump_graph.empty())
    write_text(a.dump_graph, rp::edge_list_text(rp::build_variant_graph(s, v, profile)));
  if (!a.dump_model.empty()) {
    const rp::DistributionGraph g = rp::build_variant_graph(s, v, profile);
    const auto models = rp::build_model(g, profile, v, s);
    std::ostringstream all;
    for (std::size_t k = 0; k < models.size(); ++k) {
      if (models.size() > 1) all << "# model " << k << "\n";
      all << models[k].lp_text();
    }
    write_text(a.dump_model, all.str());
  }

  rp::Plan plan;
  if (a.solver == "greedy") {
    const rp::GreedyResult r = rp::plan_greedy(s, v, profile, a.demand, a.seed);
    if (a.trace) {
      const rp::DistributionGraph g = rp::build_variant_graph(s, v, profile);
      for (std::size_t t = 0; t < r.traces.size(); ++t) {
        if (r.traces.size() > 1) std::printf("# period %zu\n", t);
        std::fputs(r.traces[t].to_text(g).c_str(), stdout);
      }
    }
    plan = r.plan;
    std::printf("status=optimal-greedy\n");
  } else if (a.solver == "exact") {
    rp::SolverConfig cfg;
    cfg.log = a.log_solver;
    cfg.time_limit_s = a.time_limit;
    cfg.node_limit = a.node_limit;
    cfg.threads = a.threads;
    const rp::ExactOutcome out = rp::plan_exact(s, v, profile, a.demand, a.seed, cfg, !a.no_warm);
    std::printf("status=%s\n", rp::mip_status_name(out.status));
    std::printf("nodes=%lld\n", out.nodes);
    if (out.status != rp::MipStatus::Optimal) return 1;
    plan = out.plan;
  } else {
    throw std::invalid_argument("unknown solver: " + a.solver + " (use exact or greedy)");
  }

  const rp::PlanMetrics m = rp::plan_metrics(s, plan);
  print_metrics(m, v.temporal == rp::TemporalMode::Dynamic);
  if (!a.out.empty()) {
    const rp::DistributionGraph g = rp::build_variant_graph(s, v, profile);
    rp::save_plan_file(plan, g, a.out);
  }
  return 0;
}

struct ValidateArgs {
  std::string scenario;
  std::string plan;
};

int cmd_validate(const ValidateArgs& a) {
  rp::Scenario s = rp::load_scenario_file(a.scenario);
  // the plan knows the radio setup and demand column it was built for
  rp::detail::json pj = rp::detail::json::parse(read_text(a.plan));
  rp::Variant v;
  v.hops = rp::parse_hop_mode(pj.at("variant").at("hops").get<std::string>());
  v.lte = pj.at("variant").at("lte").get<bool>();
  v.temporal = rp::parse_temporal_mode(pj.at("variant").at("temporal").get<std::string>());
  s.radio.streams = pj.at("streams").get<int>();
  rp::validate_scenario(s);
  const std::string demand_mode = pj.at("demand_mode").get<std::string>();
  const std::uint64_t seed = pj.at("demand_seed").get<std::uint64_t>();
  const rp::DemandProfile profile = make_profile(s, demand_mode, seed);

  const rp::DistributionGraph g = rp::build_variant_graph(s, v, profile);
  const rp::Plan plan = rp::plan_from_json(pj, g);
  const rp::ValidationReport rep = rp::validate_plan(s, plan, profile);
  if (!rep.ok()) {
    std::fputs(rep.to_text().c_str(), stdout);
    std::printf("invalid: %zu violations\n", rep.violations.size());
    return 1;
  }
  std::printf("valid\n");
  print_metrics(rp::plan_metrics(s, plan), v.temporal == rp::TemporalMode::Dynamic);
  return 0;
}

struct SweepArgs {
  std::vector<std::string> scenarios;  // label=path or path
  std::vector<int> streams = {1, 2, 4};
  std::vector<std::string> variants = {"one-hop", "one-hop-lte", "two-hop",
                                       "two-hop-lte", "splittable", "splittable-lte"};
  std::vector<std::string> temporals = {"fixed", "dynamic", "semi-dynamic", "static"};
  std::vector<std::string> solvers = {"exact", "greedy"};
  std::vector<std::uint64_t> seeds = {42};
  int threads = 1;
  bool no_timings = false;
  double time_limit = 0.0;
  std::string out = "-";
  std::string plot_data;
};

int cmd_sweep(const SweepArgs& a) {
  rp::SweepAxes axes;
  for (const std::string& spec : a.scenarios) {
    std::string label = spec, path = spec;
    const auto eq = spec.find('=');
    if (eq != std::string::npos) {
      label = spec.substr(0, eq);
      path = spec.substr(eq + 1);
    } else {
      const auto slash = spec.find_last_of('/');
      label = slash == std::string::npos ? spec : spec.substr(slash + 1);
      const auto dot = label.find_last_of('.');
      if (dot != std::string::npos) label = label.substr(0, dot);
    }
    axes.communities.emplace_back(label, rp::load_scenario_file(path));
  }
  axes.streams = a.streams;
  for (const std::string& vs : a.variants)
    for (const std::string& ts : a.temporals)
      axes.variants.push_back(rp::parse_variant(vs, rp::parse_temporal_mode(ts)));
  axes.solvers = a.solvers;
  axes.seeds = a.seeds;

  rp::SweepOptions opt;
  opt.threads = a.threads;
  opt.timings = !a.no_timings;
  opt.solver.time_limit_s = a.time_limit;
  const std::vector<rp::SweepRow> rows = rp::run_sweep(axes, opt);
  write_text(a.out, rp::sweep_csv(rows));
  if (!a.plot_data.empty()) write_text(a.plot_data, rp::sweep_plot_data(rows));
  for (const rp::SweepRow& r : rows)
    if (!r.solved) return 1;
  return 0;
}

struct ReportArgs {
  std::string csv;
  std::string dat;
  std::string svg;
};

struct CsvRow {
  std::string community, variant, temporal, solver;
  int streams = 0;
  std::uint64_t seed = 0;
  int antennas = 0;
  double fraction = 0.0, savings = 0.0, runtime_ms = 0.0;
};

std::vector<CsvRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "community,streams,variant,temporal,solver,seed,antennas,fraction,savings,"
              "runtime_ms")
    throw std::runtime_error("not a sweep CSV (unexpected header)");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != 10) throw std::runtime_error("malformed sweep CSV row: " + line);
    CsvRow r;
    r.community = f[0];
    r.streams = std::stoi(f[1]);
    r.variant = f[2];
    r.temporal = f[3];
    r.solver = f[4];
    r.seed = std::stoull(f[5]);
    r.antennas = std::stoi(f[6]);
    r.fraction = std::stod(f[7]);
    r.savings = std::stod(f[8]);
    r.runtime_ms = std::stod(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

int cmd_report(const ReportArgs& a) {
  const std::vector<CsvRow> rows = parse_sweep_csv(read_text(a.csv));

  std::map<std::string, std::vector<const CsvRow*>> groups;
  std::vector<std::string> order;
  for (const CsvRow& r : rows) {
    const std::string key = r.community + " " + r.variant + " " + r.temporal + " " + r.solver +
                            " seed" + std::to_string(r.seed);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }

  if (!a.dat.empty()) {
    std::ostringstream out;
    char buf[96];
    for (const std::string& key : order) {
      out << "# " << key << "\n";
      for (const CsvRow* r : groups[key]) {
        std::snprintf(buf, sizeof(buf), "%d %d %.6f\n", r->streams, r->antennas, r->savings);
        out << buf;
      }
      out << "\n";
    }
    write_text(a.dat, out.str());
  }

  if (!a.svg.empty()) {
    // savings (%) against spatial streams, one polyline per sweep group
    const double w = 720, h = 420, ml = 56, mr = 16, mt = 16, mb = 120;
    int smin = rows.empty() ? 1 : rows.front().streams, smax = smin;
    for (const CsvRow& r : rows) {
      smin = std::min(smin, r.streams);
      smax = std::max(smax, r.streams);
    }
    if (smax == smin) smax = smin + 1;
    const auto sx = [&](double v) { return ml + (v - smin) / (smax - smin) * (w - ml - mr); };
    const auto sy = [&](double v) { return mt + (100.0 - v) / 100.0 * (h - mt - mb); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    out << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(0) << "\" x2=\"" << w - mr << "\" y2=\""
        << sy(0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << sy(100) << "\" x2=\"" << ml << "\" y2=\""
        << sy(0) << "\" stroke=\"black\"/>\n";
    for (int yv = 0; yv <= 100; yv += 25)
      out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(yv) + 4
          << "\" font-size=\"11\" text-anchor=\"end\">" << yv << "</text>\n";
    for (int s = smin; s <= smax; ++s)
      out << "<text x=\"" << sx(s) << "\" y=\"" << sy(0) + 16
          << "\" font-size=\"11\" text-anchor=\"middle\">" << s << "</text>\n";
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << sy(0) + 32
        << "\" font-size=\"12\" text-anchor=\"middle\">spatial streams</text>\n";
    out << "<text x=\"14\" y=\"" << (sy(0) + sy(100)) / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << (sy(0) + sy(100)) / 2 << ")\">antenna savings (%)</text>\n";
    int gi = 0;
    for (const std::string& key : order) {
      const char* color = palette[gi % 8];
      std::ostringstream pts;
      for (const CsvRow* r : groups[key])
        pts << sx(r->streams) << "," << sy(r->savings) << " ";
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
          << pts.str() << "\"/>\n";
      for (const CsvRow* r : groups[key])
        out << "<circle cx=\"" << sx(r->streams) << "\" cy=\"" << sy(r->savings)
            << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
      const double ly = h - mb + 18 + 13 * gi;
      if (ly < h - 4) {
        out << "<line x1=\"" << ml << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + 18
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + 24 << "\" y=\"" << ly
            << "\" font-size=\"10\">" << key << "</text>\n";
      }
      ++gi;
    }
    out << "</svg>\n";
    write_text(a.svg, out.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"antenna placement planner for wireless live-TV distribution"};
  app.require_subcommand(1);

  GenerateArgs ga;
  CLI::App* gen = app.add_subcommand("generate", "synthesise a community scenario");
  gen->add_option("--homes", ga.homes, "number of households")->check(CLI::PositiveNumber);
  gen->add_option("--spacing", ga.spacing, "target mean nearest-neighbour distance (m)");
  gen->add_option("--bs", ga.bs, "number of LTE base stations");
  gen->add_option("--seed", ga.seed, "placement seed");
  gen->add_option("--tau", ga.tau, "LTE airtime share available per base station");
  gen->add_option("--horizon", ga.horizon, "demand periods per day");
  gen->add_option("--channel-rate", ga.channel_rate, "one channel's rate (Mbps)");
  gen->add_option("--psi-max", ga.psi_max, "max concurrent channels per home");
  gen->add_option("-o,--out", ga.out, "output file (- for stdout)");

  PlanArgs pa;
  CLI::App* plan = app.add_subcommand("plan", "place antennas for a scenario");
  plan->add_option("scenario", pa.scenario, "scenario JSON file")->required();
  plan->add_option("--variant", pa.variant,
                   "one-hop|two-hop|splittable with optional -lte suffix");
  plan->add_option("--temporal", pa.temporal, "fixed|dynamic|semi-dynamic|static");
  plan->add_option("--solver", pa.solver, "exact|greedy");
  plan->add_option("--streams", pa.streams, "override the scenario's spatial streams");
  plan->add_option("--demand", pa.demand, "profile (seeded sample) or peak (worst case)");
  plan->add_option("--seed", pa.seed, "demand sampling seed");
  plan->add_option("-o,--out", pa.out, "write the plan JSON here");
  plan->add_option("--dump-model", pa.dump_model, "write the optimisation model as LP text");
  plan->add_option("--dump-graph", pa.dump_graph, "write the radio graph edge list");
  plan->add_flag("--trace", pa.trace, "print greedy decision steps");
  plan->add_flag("--log-solver", pa.log_solver, "branch-and-bound progress on stderr");
  plan->add_flag("--no-warm-start", pa.no_warm, "skip the greedy incumbent seed");
  plan->add_option("--time-limit", pa.time_limit, "per-model time limit (s)");
  plan->add_option("--node-limit", pa.node_limit, "branch-and-bound node limit");
  plan->add_option("--threads", pa.threads, "parallel independent solves");

  ValidateArgs va;
  CLI::App* val = app.add_subcommand("validate", "re-check a plan file");
  val->add_option("scenario", va.scenario, "scenario JSON file")->required();
  val->add_option("plan", va.plan, "plan JSON file")->required();

  SweepArgs sa;
  CLI::App* swp = app.add_subcommand("sweep", "evaluate a parameter grid");
  swp->add_option("--scenario", sa.scenarios, "label=path (repeatable)")->required();
  swp->add_option("--streams", sa.streams, "stream counts")->delimiter(',');
  swp->add_option("--variants", sa.variants, "hop/lte variants")->delimiter(',');
  swp->add_option("--temporals", sa.temporals, "temporal modes")->delimiter(',');
  swp->add_option("--solvers", sa.solvers, "exact,greedy")->delimiter(',');
  swp->add_option("--seeds", sa.seeds, "demand seeds")->delimiter(',');
  swp->add_option("--threads", sa.threads, "concurrent cells");
  swp->add_flag("--no-timings", sa.no_timings, "zero the runtime column");
  swp->add_option("--time-limit", sa.time_limit, "per-cell time limit (s)");
  swp->add_option("-o,--out", sa.out, "CSV output (- for stdout)");
  swp->add_option("--plot-data", sa.plot_data, "also write gnuplot-style blocks");

  ReportArgs ra;
  CLI::App* rep = app.add_subcommand("report", "plot data / SVG from a sweep CSV");
  rep->add_option("csv", ra.csv, "sweep CSV file")->required();
  rep->add_option("--dat", ra.dat, "write plot data here");
  rep->add_option("--svg", ra.svg, "write an SVG chart here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return cmd_generate(ga);
    if (plan->parsed()) return cmd_plan(pa);
    if (val->parsed()) return cmd_validate(va);
    if (swp->parsed()) return cmd_sweep(sa);
    if (rep->parsed()) return cmd_report(ra);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
