// End-to-end checks of the command-line tool: generate -> plan -> validate
// round trips, failure exit codes, deterministic output bytes, and the sweep
// and report commands. Each test shells out to the built binary.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int status = -1;
  std::string output;  // stdout and stderr combined
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("relayplan_cli_" + std::to_string(static_cast<long>(::getpid())));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path capture = work_dir() / ("out" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(RELAYPLAN_CLI) + " " + args + " > " + capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CmdResult r;
  if (raw != -1 && WIFEXITED(raw)) r.status = WEXITSTATUS(raw);
  r.output = slurp(capture);
  return r;
}

// small communities the exact solver clears in well under a second
const fs::path& tiny_scenario() {
  static const fs::path p = [] {
    fs::path out = work_dir() / "tiny.json";
    const CmdResult r = run_cli("generate --homes 5 --spacing 30 --bs 0 --seed 2 --horizon 6 -o " +
                                out.string());
    REQUIRE(r.status == 0);
    return out;
  }();
  return p;
}

const fs::path& bs_scenario() {
  static const fs::path p = [] {
    fs::path out = work_dir() / "town.json";
    const CmdResult r = run_cli("generate --homes 8 --spacing 40 --bs 1 --seed 5 --horizon 6 -o " +
                                out.string());
    REQUIRE(r.status == 0);
    return out;
  }();
  return p;
}

}  // namespace

TEST_CASE("help and usage errors use the documented exit codes", "[cli]") {
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("plan --help").status == 0);
  CHECK(run_cli("").status == 2);                     // a subcommand is required
  CHECK(run_cli("plan").status == 2);                 // missing scenario argument
  CHECK(run_cli("frobnicate").status == 2);           // unknown subcommand
  CHECK(run_cli("generate --homes -3").status == 2);  // rejected by option check
  const CmdResult help = run_cli("--help");
  CHECK(help.output.find("generate") != std::string::npos);
  CHECK(help.output.find("validate") != std::string::npos);
}

TEST_CASE("generate writes a loadable scenario", "[cli]") {
  const std::string text = slurp(bs_scenario());
  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j.at("households").size() == 8);
  CHECK(j.at("lte_bs").size() == 1);

  // stdout target works too and is identical modulo the output channel
  const CmdResult to_stdout =
      run_cli("generate --homes 8 --spacing 40 --bs 1 --seed 5 --horizon 6 -o -");
  CHECK(to_stdout.status == 0);
  CHECK(to_stdout.output == text);
}

TEST_CASE("plan/validate round trip with the greedy solver", "[cli]") {
  const fs::path plan = work_dir() / "greedy_plan.json";
  const CmdResult r = run_cli("plan " + bs_scenario().string() +
                              " --solver greedy --demand profile --seed 3 -o " + plan.string());
  REQUIRE(r.status == 0);
  CHECK(r.output.find("status=optimal-greedy") != std::string::npos);
  CHECK(r.output.find("antennas=") != std::string::npos);
  CHECK(r.output.find("fraction=") != std::string::npos);
  CHECK(r.output.find("savings=") != std::string::npos);

  const CmdResult v = run_cli("validate " + bs_scenario().string() + " " + plan.string());
  CHECK(v.status == 0);
  CHECK(v.output.find("valid") != std::string::npos);
}

TEST_CASE("plan/validate round trip with the exact solver", "[cli]") {
  const fs::path plan = work_dir() / "exact_plan.json";
  const CmdResult r = run_cli("plan " + tiny_scenario().string() +
                              " --solver exact --demand profile --seed 3 -o " + plan.string());
  REQUIRE(r.status == 0);
  CHECK(r.output.find("status=optimal") != std::string::npos);
  CHECK(r.output.find("nodes=") != std::string::npos);

  const CmdResult v = run_cli("validate " + tiny_scenario().string() + " " + plan.string());
  CHECK(v.status == 0);
  CHECK(v.output.find("valid") != std::string::npos);
}

TEST_CASE("validate rejects a tampered plan with exit code 1", "[cli]") {
  const fs::path plan = work_dir() / "to_tamper.json";
  REQUIRE(run_cli("plan " + tiny_scenario().string() +
                  " --solver greedy --demand profile --seed 3 -o " + plan.string())
              .status == 0);

  nlohmann::json pj = nlohmann::json::parse(slurp(plan));
  pj["antennas"] = nlohmann::json::array();  // strip every antenna
  const fs::path tampered = work_dir() / "tampered.json";
  std::ofstream(tampered) << pj.dump(2);

  const CmdResult v = run_cli("validate " + tiny_scenario().string() + " " + tampered.string());
  CHECK(v.status == 1);
  CHECK(v.output.find("invalid:") != std::string::npos);

  // unreadable inputs are runtime errors, not usage errors
  const CmdResult missing = run_cli("validate " + tiny_scenario().string() + " /nonexistent.json");
  CHECK(missing.status == 1);
  CHECK(missing.output.find("error:") != std::string::npos);
}

TEST_CASE("planning output is deterministic byte for byte", "[cli]") {
  const std::string args = "plan " + tiny_scenario().string() +
                           " --solver exact --demand profile --seed 9 --temporal dynamic";
  const CmdResult a = run_cli(args + " --threads 1");
  const CmdResult b = run_cli(args + " --threads 1");
  const CmdResult c = run_cli(args + " --threads 4");
  REQUIRE(a.status == 0);
  CHECK(a.output == b.output);
  CHECK(a.output == c.output);
  CHECK(a.output.find("period_antennas=") != std::string::npos);

  const fs::path p1 = work_dir() / "rerun1.json";
  const fs::path p2 = work_dir() / "rerun2.json";
  REQUIRE(run_cli(args + " --threads 1 -o " + p1.string()).status == 0);
  REQUIRE(run_cli(args + " --threads 4 -o " + p2.string()).status == 0);
  CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("model and graph dumps are written on request", "[cli]") {
  const fs::path lp = work_dir() / "model.lp";
  const fs::path edges = work_dir() / "graph.txt";
  const CmdResult r = run_cli("plan " + tiny_scenario().string() +
                              " --solver exact --demand peak --dump-model " + lp.string() +
                              " --dump-graph " + edges.string());
  REQUIRE(r.status == 0);

  const std::string model = slurp(lp);
  CHECK(model.find("Minimize") != std::string::npos);
  CHECK(model.find("Subject To") != std::string::npos);
  CHECK(model.find("End") != std::string::npos);

  const std::string graph = slurp(edges);
  REQUIRE_FALSE(graph.empty());
  CHECK(graph.find(" wifi") != std::string::npos);
}

TEST_CASE("greedy trace prints its decision steps", "[cli]") {
  const CmdResult r =
      run_cli("plan " + bs_scenario().string() + " --solver greedy --demand peak --trace");
  REQUIRE(r.status == 0);
  CHECK(r.output.find("step 1: source=") != std::string::npos);
}

TEST_CASE("sweep and report build consistent tables and charts", "[cli]") {
  const fs::path csv1 = work_dir() / "sweep1.csv";
  const fs::path csv2 = work_dir() / "sweep2.csv";
  const std::string base = "sweep --scenario t=" + tiny_scenario().string() +
                           " --streams 1,2 --variants one-hop,two-hop --temporals fixed" +
                           " --solvers exact,greedy --seeds 42 --no-timings";
  REQUIRE(run_cli(base + " --threads 1 -o " + csv1.string()).status == 0);
  REQUIRE(run_cli(base + " --threads 4 -o " + csv2.string()).status == 0);

  const std::string table = slurp(csv1);
  CHECK(table.rfind("community,streams,variant,temporal,solver,seed,", 0) == 0);
  CHECK(table.find("t,1,one-hop,fixed,exact,42,") != std::string::npos);
  CHECK(table == slurp(csv2));  // identical for any worker count

  const fs::path dat = work_dir() / "report.dat";
  const fs::path svg = work_dir() / "report.svg";
  const CmdResult rep = run_cli("report " + csv1.string() + " --dat " + dat.string() +
                                " --svg " + svg.string());
  REQUIRE(rep.status == 0);

  const std::string plot = slurp(dat);
  CHECK(plot.find("# t one-hop fixed exact seed42") != std::string::npos);
  const std::string chart = slurp(svg);
  CHECK(chart.find("<svg") != std::string::npos);
  CHECK(chart.find("</svg>") != std::string::npos);

  // a corrupt table is a runtime error
  const fs::path bad = work_dir() / "bad.csv";
  std::ofstream(bad) << "not,a,sweep\n1,2,3\n";
  CHECK(run_cli("report " + bad.string()).status == 1);
}
