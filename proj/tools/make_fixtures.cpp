// Fixture sweeper: walks placement seeds until each community shows the
// solver landmarks the regression suite pins (antenna counts inside frozen
// ranges, greedy matching the exact optimum at one stream), then freezes the
// scenario JSON under fixtures/ together with a provenance note.
//
// Usage: make_fixtures [out_dir] [max_seed]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "relayplan/relayplan.hpp"

namespace rp = relayplan;

namespace {

struct FixtureSpec {
  std::string file;   // output basename
  int homes = 0;
  double spacing_m = 0.0;
  int bs = 0;
  std::set<int> one_hop_s1;  // exact one-hop fixed antennas, 1 stream
  std::set<int> two_hop_s4;  // exact two-hop fixed antennas, 4 streams
  std::set<int> split_lte_s4;  // exact splittable+LTE antennas, 4 streams (empty: skip)
};

struct Landmark {
  std::uint64_t seed = 0;
  int one_hop_s1 = 0;
  int two_hop_s1 = 0;
  int two_hop_s4 = 0;
  int split_lte_s4 = -1;
};

constexpr std::uint64_t kDemandSeed = 42;

// Solves one configuration with a short per-model time budget; returns the
// antenna count or -1 when the solve missed optimality inside the budget.
int exact_count(const rp::Scenario& s, const std::string& variant, int streams,
                double budget_s) {
  rp::Scenario sc = s;
  sc.radio.streams = streams;
  const rp::Variant v = rp::parse_variant(variant);
  const rp::DemandProfile p =
      rp::sample_profile(sc.demand, static_cast<int>(sc.households.size()), kDemandSeed);
  rp::SolverConfig cfg;
  cfg.time_limit_s = budget_s;
  const rp::ExactOutcome out = rp::plan_exact(sc, v, p, "profile", kDemandSeed, cfg);
  if (out.status != rp::MipStatus::Optimal) return -1;
  return rp::plan_metrics(sc, out.plan).antenna_count;
}

int greedy_count(const rp::Scenario& s, const std::string& variant, int streams) {
  rp::Scenario sc = s;
  sc.radio.streams = streams;
  const rp::Variant v = rp::parse_variant(variant);
  const rp::DemandProfile p =
      rp::sample_profile(sc.demand, static_cast<int>(sc.households.size()), kDemandSeed);
  const rp::GreedyResult r = rp::plan_greedy(sc, v, p, "profile", kDemandSeed);
  return rp::plan_metrics(sc, r.plan).antenna_count;
}

bool try_seed(const FixtureSpec& spec, std::uint64_t seed, Landmark& lm) {
  const rp::Scenario s = rp::generate_community(spec.homes, spec.spacing_m, spec.bs, seed);
  lm.seed = seed;

  lm.one_hop_s1 = exact_count(s, "one-hop", 1, 15.0);
  if (!spec.one_hop_s1.count(lm.one_hop_s1)) return false;
  if (greedy_count(s, "one-hop", 1) != lm.one_hop_s1) return false;

  lm.two_hop_s1 = exact_count(s, "two-hop", 1, 30.0);
  if (lm.two_hop_s1 < 0) return false;
  if (greedy_count(s, "two-hop", 1) != lm.two_hop_s1) return false;

  lm.two_hop_s4 = exact_count(s, "two-hop", 4, 30.0);
  if (!spec.two_hop_s4.count(lm.two_hop_s4)) return false;

  if (!spec.split_lte_s4.empty()) {
    lm.split_lte_s4 = exact_count(s, "splittable-lte", 4, 45.0);
    if (!spec.split_lte_s4.count(lm.split_lte_s4)) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "fixtures";
  const std::uint64_t max_seed = argc > 2 ? std::stoull(argv[2]) : 4000;

  // Sizes keep the two-hop exact solve inside its time budget; spacings put
  // the one-hop optimum at one stream inside the pinned share of homes
  // (about 50 / 30 / 38 / 29 percent). Sharing needs roughly a 26 Mbps hop
  // (a four-channel peak), which the radio model grants below ~45 m, so the
  // mean spacing controls how many homes each antenna can feed.
  const std::vector<FixtureSpec> specs = {
      {"community_i", 16, 39.0, 1, {7, 8, 9}, {4, 5, 6}, {2, 3}},
      {"community_ii", 13, 29.0, 0, {3, 4, 5}, {2, 3, 4}, {}},
      {"community_iii", 13, 31.0, 0, {4, 5, 6}, {2, 3, 4}, {}},
      {"community_iv", 12, 27.0, 0, {2, 3, 4}, {1, 2, 3}, {}},
  };

  std::string provenance =
      "# Fixture provenance\n\n"
      "Each community below was produced by the scenario generator in this\n"
      "repository (uniform placement over a square sized for the target mean\n"
      "nearest-neighbour spacing, base stations on the horizontal midline) and\n"
      "frozen at the first placement seed whose solver landmarks fell inside\n"
      "the ranges the regression suite pins. Landmarks use the diurnal demand\n"
      "model sampled with seed 42.\n\n"
      "Regenerate with: make_fixtures <out_dir> [max_seed]\n\n"
      "| file | homes | spacing (m) | base stations | placement seed | one-hop @1 stream "
      "| two-hop @1 stream | two-hop @4 streams | splittable+LTE @4 streams |\n"
      "|---|---|---|---|---|---|---|---|---|\n";

  for (const FixtureSpec& spec : specs) {
    bool found = false;
    Landmark lm;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= max_seed; ++seed) {
      if (try_seed(spec, seed, lm)) {
        found = true;
        break;
      }
      if (seed % 10 == 0) {
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::fprintf(stderr, "[%s] %llu seeds tried (%.0fs)\n", spec.file.c_str(),
                     static_cast<unsigned long long>(seed), dt);
      }
    }
    if (!found) {
      std::fprintf(stderr, "[%s] no seed <= %llu matched the landmark ranges\n",
                   spec.file.c_str(), static_cast<unsigned long long>(max_seed));
      return 1;
    }

    const rp::Scenario s =
        rp::generate_community(spec.homes, spec.spacing_m, spec.bs, lm.seed);
    const std::string path = out_dir + "/" + spec.file + ".json";
    rp::save_scenario_file(s, path);
    std::fprintf(stderr,
                 "[%s] seed %llu: one-hop@1=%d two-hop@1=%d two-hop@4=%d split+lte@4=%d\n",
                 spec.file.c_str(), static_cast<unsigned long long>(lm.seed), lm.one_hop_s1,
                 lm.two_hop_s1, lm.two_hop_s4, lm.split_lte_s4);

    const std::string split_cell =
        lm.split_lte_s4 < 0 ? "n/a" : std::to_string(lm.split_lte_s4);
    char row[256];
    std::snprintf(row, sizeof(row), "| %s.json | %d | %.0f | %d | %llu | %d | %d | %d | %s |\n",
                  spec.file.c_str(), spec.homes, spec.spacing_m, spec.bs,
                  static_cast<unsigned long long>(lm.seed), lm.one_hop_s1, lm.two_hop_s1,
                  lm.two_hop_s4, split_cell.c_str());
    provenance += row;
  }

  provenance +=
      "\nThe greedy planner matches the exact optimum on every fixture at one\n"
      "stream in both hop modes; the suite relies on that equality.\n";
  std::ofstream out(out_dir + "/PROVENANCE.md");
  out << provenance;
  return 0;
}
