// Independent plan checker: accepts sound plans and flags each rule family
// when a plan is tampered with.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "relayplan/demand.hpp"
#include "relayplan/radio.hpp"
#include "relayplan/solver_greedy.hpp"
#include "relayplan/validator.hpp"

using namespace relayplan;

namespace {

Scenario points_scenario(const std::vector<std::pair<double, double>>& pts, int rho = 5) {
  Scenario s;
  for (std::size_t i = 0; i < pts.size(); ++i)
    s.households.push_back({"h" + std::to_string(i), pts[i].first, pts[i].second, true});
  s.rho = rho;
  return s;
}

DemandProfile flat_profile(std::vector<double> demands) {
  DemandProfile p;
  for (double d : demands) p.delta.push_back({d});
  return p;
}

bool flags(const ValidationReport& rep, const std::string& family) {
  return std::any_of(rep.violations.begin(), rep.violations.end(),
                     [&](const Violation& v) { return v.family == family; });
}

// chain h0-h1-h2 fed from the middle: the smallest interesting one-hop plan
struct ChainFixture {
  Scenario s = points_scenario({{0.0, 0.0}, {50.0, 0.0}, {100.0, 0.0}});
  DemandProfile profile = flat_profile({5.0, 5.0, 5.0});
  Plan plan;

  ChainFixture() {
    plan.variant = Variant{};
    plan.solver = "handmade";
    plan.demand_mode = "peak";
    plan.antenna = {0, 1, 0};
    PeriodPlan pp;
    pp.roles = {Role::Terminal, Role::Source, Role::Terminal};
    pp.links.push_back({1, 0, 5.0, 0.0});
    pp.links.push_back({1, 2, 5.0, 0.0});
    plan.periods.push_back(pp);
  }
};

}  // namespace

TEST_CASE("a sound one-hop plan validates cleanly", "[validator]") {
  ChainFixture f;
  const ValidationReport rep = validate_plan(f.s, f.plan, f.profile);
  INFO(rep.to_text());
  CHECK(rep.ok());
}

TEST_CASE("structural tampering is flagged by rule family", "[validator]") {
  ChainFixture f;

  SECTION("duplicate link in one period") {
    f.plan.periods[0].links.push_back(f.plan.periods[0].links[0]);
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "link"));
  }
  SECTION("link that is not in the radio graph") {
    f.plan.periods[0].links.push_back({0, 2, 5.0, 0.0});  // 100 m, out of range
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "link"));
  }
  SECTION("airtime share annotated on a WiFi link") {
    f.plan.periods[0].links[0].lambda = 0.3;
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "lte-share"));
  }
  SECTION("source role without an antenna") {
    f.plan.antenna[1] = 0;
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "role"));
  }
  SECTION("antenna that is not marked as a source") {
    f.plan.antenna[2] = 1;  // still plays Terminal
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "role"));
  }
  SECTION("terminal that sends") {
    f.plan.periods[0].links.push_back({2, 1, 5.0, 0.0});
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "degree"));
    CHECK(flags(rep, "pull"));  // the source now also receives a feed
  }
  SECTION("terminal left without a feed") {
    f.plan.periods[0].links.erase(f.plan.periods[0].links.begin());
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "pull"));
  }
  SECTION("household abandoned with no feed and no antenna") {
    f.plan.periods[0].links.erase(f.plan.periods[0].links.begin());
    f.plan.periods[0].roles[0] = Role::Idle;
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].family == "pull");
    CHECK(rep.violations[0].where == "h0");
  }
  SECTION("relay role in a one-hop design") {
    f.plan.periods[0].roles[0] = Role::Relay;
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "role"));
  }
  SECTION("sender over its receiver budget") {
    f.s.rho = 1;  // the middle node feeds two households
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    CHECK(flags(rep, "degree"));
  }
  SECTION("report text names the rule, the node and the numbers") {
    f.plan.periods[0].links.erase(f.plan.periods[0].links.begin());
    f.plan.periods[0].roles[0] = Role::Idle;
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    const std::string text = rep.to_text();
    CHECK(text.find("pull at h0") != std::string::npos);
    CHECK(text.find("measured") != std::string::npos);
  }
}

TEST_CASE("a household fed twice is rejected", "[validator]") {
  // equilateral triangle, 50 m sides; both outer nodes feed h0
  Scenario s = points_scenario({{0.0, 0.0}, {50.0, 0.0}, {25.0, 43.30127}});
  const DemandProfile profile = flat_profile({5.0, 5.0, 5.0});
  Plan plan;
  plan.antenna = {0, 1, 1};
  PeriodPlan pp;
  pp.roles = {Role::Terminal, Role::Source, Role::Source};
  pp.links.push_back({1, 0, 5.0, 0.0});
  pp.links.push_back({2, 0, 5.0, 0.0});
  plan.periods.push_back(pp);

  const auto rep = validate_plan(s, plan, profile);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].family == "pull");
}

TEST_CASE("wifi feeds are checked against the link rate", "[validator]") {
  ChainFixture f;
  f.profile = flat_profile({25.0, 25.0, 25.0});  // 50 m links carry at most 19.5
  const auto rep = validate_plan(f.s, f.plan, f.profile);
  CHECK(flags(rep, "link-capacity"));
}

TEST_CASE("relayed demand is charged against the first-hop feed", "[validator]") {
  const Scenario s = points_scenario(
      {{0.0, 0.0}, {50.0, 0.0}, {100.0, 0.0}, {150.0, 0.0}, {200.0, 0.0}}, 2);
  Variant v;
  v.hops = HopMode::TwoHop;

  Plan plan;
  plan.variant = v;
  plan.antenna = {0, 0, 1, 0, 0};
  PeriodPlan pp;
  pp.roles = {Role::Terminal, Role::Relay, Role::Source, Role::Relay, Role::Terminal};
  pp.links.push_back({1, 0, 5.0, 0.0});
  pp.links.push_back({2, 1, 10.0, 0.0});
  pp.links.push_back({2, 3, 10.0, 0.0});
  pp.links.push_back({3, 4, 5.0, 0.0});
  plan.periods.push_back(pp);

  SECTION("the sound relay plan passes") {
    const auto rep = validate_plan(s, plan, flat_profile({5.0, 5.0, 5.0, 5.0, 5.0}));
    INFO(rep.to_text());
    CHECK(rep.ok());
  }
  SECTION("chain ends that pull more than the feeder link can carry") {
    // each feed now carries 5 own + 15 relayed = 20 > 19.5
    const auto rep = validate_plan(s, plan, flat_profile({15.0, 5.0, 5.0, 5.0, 15.0}));
    CHECK(flags(rep, "link-capacity"));
  }
  SECTION("a relay fed by another relay") {
    plan.periods[0].roles[2] = Role::Relay;  // the hub no longer sources
    const auto rep = validate_plan(s, plan, flat_profile({5.0, 5.0, 5.0, 5.0, 5.0}));
    CHECK(flags(rep, "relay-chain"));
    CHECK(flags(rep, "pull"));  // that relay has no feed of its own
  }
}

TEST_CASE("LTE shares are bounded per link and per tower", "[validator]") {
  Scenario s;
  s.households.push_back({"h0", 3146.0, 0.0, true});
  s.households.push_back({"h1", 3146.0, 100.0, true});
  s.households.push_back({"h2", 3146.0, 200.0, true});
  s.lte_bs.push_back({"bs0", 0.0, 0.0, 0.5, 46.0});
  s.rho = 2;
  const DemandProfile profile = flat_profile({20.0, 20.0, 20.0});

  Variant v;
  v.hops = HopMode::OneHop;
  v.lte = true;
  const GreedyResult base = plan_greedy(s, v, profile, "peak", 0);
  REQUIRE(validate_plan(s, base.plan, profile).ok());

  SECTION("share above 1 on a single link") {
    Plan plan = base.plan;
    plan.periods[0].links[0].lambda = 1.2;
    CHECK(flags(validate_plan(s, plan, profile), "lte-share"));
  }
  SECTION("share too small for the feed it carries") {
    Plan plan = base.plan;
    plan.periods[0].links[0].lambda = 0.1;  // 20 Mbps needs ~0.2 of this link
    CHECK(flags(validate_plan(s, plan, profile), "lte-capacity"));
  }
  SECTION("shares that individually fit but overrun the tower budget") {
    Plan plan = base.plan;
    plan.periods[0].links[0].lambda = 0.3;
    plan.periods[0].links[1].lambda = 0.3;
    const auto rep = validate_plan(s, plan, profile);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].family == "lte-share");
    CHECK(rep.violations[0].where == "bs0");
  }
  SECTION("a tower marked idle while it still sends") {
    Plan plan = base.plan;
    plan.periods[0].roles[3] = Role::Idle;
    CHECK(flags(validate_plan(s, plan, profile), "role"));
  }
  SECTION("a tower cannot play relay or terminal") {
    Plan plan = base.plan;
    plan.periods[0].roles[3] = Role::Relay;
    CHECK(flags(validate_plan(s, plan, profile), "role"));
  }
}

TEST_CASE("splittable flow plans are checked as flows", "[validator]") {
  Scenario s = points_scenario({{0.0, 0.0}, {50.0, 0.0}, {100.0, 0.0}});
  DemandProfile profile = flat_profile({5.0, 5.0, 5.0});

  Variant v;
  v.hops = HopMode::Splittable;

  Plan plan;
  plan.variant = v;
  plan.antenna = {0, 1, 0};
  PeriodPlan pp;
  pp.roles = {Role::Idle, Role::Source, Role::Idle};
  pp.links.push_back({-1, 1, 15.0, 0.0});  // injection at the antenna
  pp.links.push_back({1, 0, 5.0, 0.0});
  pp.links.push_back({1, 2, 5.0, 0.0});
  plan.periods.push_back(pp);

  SECTION("the sound flow plan passes") {
    const auto rep = validate_plan(s, plan, profile);
    INFO(rep.to_text());
    CHECK(rep.ok());
  }
  SECTION("negative flow") {
    plan.periods[0].links[1].flow_mbps = -5.0;
    CHECK(flags(validate_plan(s, plan, profile), "flow"));
  }
  SECTION("injection at a node without an antenna") {
    plan.periods[0].links[0].to = 0;
    const auto rep = validate_plan(s, plan, profile);
    CHECK(flags(rep, "virtual-capacity"));
  }
  SECTION("node balance that does not meet demand") {
    plan.periods[0].links[1].flow_mbps = 3.0;
    CHECK(flags(validate_plan(s, plan, profile), "conservation"));
  }
  SECTION("flow above the wifi link rate") {
    profile = flat_profile({25.0, 5.0, 5.0});
    plan.periods[0].links[0].flow_mbps = 35.0;
    plan.periods[0].links[1].flow_mbps = 25.0;  // 50 m links carry 19.5
    const auto rep = validate_plan(s, plan, profile);
    CHECK(flags(rep, "link-capacity"));
    CHECK_FALSE(flags(rep, "conservation"));
  }
  SECTION("relayed traffic above the hop budget") {
    s.hop_limit = 1;
    profile = flat_profile({5.0, 5.0, 10.0});
    plan.antenna = {1, 0, 0};
    plan.periods[0].links.clear();
    plan.periods[0].links.push_back({-1, 0, 20.0, 0.0});
    plan.periods[0].links.push_back({0, 1, 15.0, 0.0});
    plan.periods[0].links.push_back({1, 2, 10.0, 0.0});
    plan.periods[0].roles = {Role::Source, Role::Idle, Role::Idle};
    const auto rep = validate_plan(s, plan, profile);
    CHECK(flags(rep, "hop-budget"));
    CHECK_FALSE(flags(rep, "conservation"));
  }
  SECTION("source role without an antenna") {
    plan.periods[0].roles[2] = Role::Source;
    CHECK(flags(validate_plan(s, plan, profile), "role"));
  }
}

TEST_CASE("plan shape mismatches fail fast", "[validator]") {
  ChainFixture f;

  SECTION("antenna vector sized for a different graph") {
    f.plan.antenna.resize(2);
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].family == "shape");
  }
  SECTION("role vector sized for a different graph") {
    f.plan.periods[0].roles.pop_back();
    const auto rep = validate_plan(f.s, f.plan, f.profile);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].family == "shape");
  }
  SECTION("dynamic plan missing a period") {
    Scenario s = points_scenario({{0.0, 0.0}, {30.0, 0.0}});
    DemandProfile profile;
    profile.delta = {{0.0, 5.0}, {5.0, 0.0}};
    Variant v;
    v.temporal = TemporalMode::Dynamic;
    GreedyResult r = plan_greedy(s, v, profile, "profile", 1);
    REQUIRE(validate_plan(s, r.plan, profile).ok());
    r.plan.periods.pop_back();
    const auto rep = validate_plan(s, r.plan, profile);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].family == "shape");
  }
}

TEST_CASE("dynamic designs may keep idle antennas, fixed designs may not", "[validator]") {
  Scenario s = points_scenario({{0.0, 0.0}, {30.0, 0.0}});
  DemandProfile profile;
  profile.delta = {{0.0, 5.0}, {5.0, 0.0}};

  Variant v;
  v.temporal = TemporalMode::Dynamic;
  const GreedyResult r = plan_greedy(s, v, profile, "profile", 1);

  // the union plan holds both antennas while each period uses only one
  REQUIRE(r.plan.antenna == std::vector<std::uint8_t>{1, 1});
  const auto rep = validate_plan(s, r.plan, profile);
  INFO(rep.to_text());
  CHECK(rep.ok());

  SECTION("a feed into a household that is not watching") {
    Plan plan = r.plan;
    plan.periods[0].roles = {Role::Terminal, Role::Source};
    plan.periods[0].links.clear();
    plan.periods[0].links.push_back({1, 0, 0.0, 0.0});  // h0 is idle in period 0
    const auto rep2 = validate_plan(s, plan, profile);
    CHECK(flags(rep2, "pull"));
  }
}

TEST_CASE("headline metrics summarise a plan", "[validator]") {
  SECTION("one-hop hub") {
    ChainFixture f;
    const PlanMetrics m = plan_metrics(f.s, f.plan);
    CHECK(m.antenna_count == 1);
    CHECK(m.household_count == 3);
    CHECK(m.real_node_count == 3);
    CHECK(m.antenna_fraction == Catch::Approx(1.0 / 3.0));
    CHECK(m.savings_pct == Catch::Approx(100.0 * 2.0 / 3.0));
    CHECK(m.max_relay_depth == 1);
    CHECK(m.per_period_antennas == std::vector<int>{1});
  }
  SECTION("two-hop chains reach depth 2") {
    const Scenario s = points_scenario(
        {{0.0, 0.0}, {50.0, 0.0}, {100.0, 0.0}, {150.0, 0.0}, {200.0, 0.0}}, 2);
    Variant v;
    v.hops = HopMode::TwoHop;
    const GreedyResult r =
        plan_greedy(s, v, flat_profile({5.0, 5.0, 5.0, 5.0, 5.0}), "peak", 0);
    const PlanMetrics m = plan_metrics(s, r.plan);
    CHECK(m.antenna_count == 1);
    CHECK(m.max_relay_depth == 2);
    CHECK(m.savings_pct == Catch::Approx(80.0));
  }
  SECTION("dynamic headline is the busiest period, not the union") {
    Scenario s = points_scenario({{0.0, 0.0}, {30.0, 0.0}});
    DemandProfile profile;
    profile.delta = {{0.0, 5.0}, {5.0, 0.0}};
    Variant v;
    v.temporal = TemporalMode::Dynamic;
    const GreedyResult r = plan_greedy(s, v, profile, "profile", 1);
    REQUIRE(r.plan.antenna_count() == 2);
    const PlanMetrics m = plan_metrics(s, r.plan);
    CHECK(m.antenna_count == 1);
    CHECK(m.per_period_antennas == std::vector<int>{1, 1});
    CHECK(m.savings_pct == Catch::Approx(50.0));
  }
  SECTION("plans with no feeds have depth 0") {
    Scenario s = points_scenario({{0.0, 0.0}, {500.0, 0.0}});
    Plan plan;
    plan.antenna = {1, 1};
    PeriodPlan pp;
    pp.roles = {Role::Source, Role::Source};
    plan.periods.push_back(pp);
    const PlanMetrics m = plan_metrics(s, plan);
    CHECK(m.max_relay_depth == 0);
    CHECK(m.antenna_count == 2);
    CHECK(m.savings_pct == Catch::Approx(0.0));
  }
  SECTION("splittable depth counts pass-through households") {
    Scenario s = points_scenario({{0.0, 0.0}, {50.0, 0.0}, {100.0, 0.0}});
    Variant v;
    v.hops = HopMode::Splittable;
    Plan plan;
    plan.variant = v;
    plan.antenna = {1, 0, 0};
    PeriodPlan pp;
    pp.roles = {Role::Source, Role::Idle, Role::Idle};
    pp.links.push_back({-1, 0, 15.0, 0.0});
    pp.links.push_back({0, 1, 10.0, 0.0});
    pp.links.push_back({1, 2, 5.0, 0.0});  // h1 both receives and forwards
    plan.periods.push_back(pp);
    const PlanMetrics m = plan_metrics(s, plan);
    CHECK(m.max_relay_depth == 2);
  }
}
