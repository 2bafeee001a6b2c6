#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bjortho/report.hpp"

using bjortho::Json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::string& args) {
  const std::string err_path = "cli_stderr.txt";
  const std::string cmd = std::string(BJORTHO_CLI) + " " + args + " 2>" + err_path;
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream e(err_path);
  std::stringstream ss;
  ss << e.rdbuf();
  r.err = ss.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

const char* kIntroT = "\"1,0,0;0,0.5,0;0,0,0.5\"";
const char* kIntroA = "\"0,0,0;0,1,0;0,0,0\"";

}  // namespace

TEST_CASE("vec-orth") {
  Run r = run("vec-orth --norm lp:2:2 --x 1,0 --y 0,1");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["verdict"]["decision"] == "ORTHOGONAL");
  CHECK(r.err.find("ORTHOGONAL") != std::string::npos);

  r = run("vec-orth --norm lp:1:2 --x 1,0 --y 1,1");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["verdict"]["decision"] == "ORTHOGONAL");

  r = run("vec-orth --norm lp:2:2 --x 1,0 --y 1,0");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["verdict"]["decision"] == "NOT_ORTHOGONAL");

  // cosine 5e-8 sits between the margin and derivative thresholds
  r = run("vec-orth --norm lp:2:2 --x 1,0 --y 1e-7,1");
  CHECK(r.code == 0);
  r = run("vec-orth --norm lp:2:2 --x 1,0 --y 4e-4,1");
  CHECK(r.code == 2);
  CHECK(Json::parse(r.out)["verdict"]["decision"] == "INDETERMINATE");
}

TEST_CASE("usage and parse errors exit 1") {
  CHECK(run("vec-orth --norm lp:2:3 --x 1,0 --y 0,1").code == 1);
  CHECK(run("vec-orth --norm lp:0:2 --x 1,0 --y 0,1").code == 1);
  CHECK(run("vec-orth --norm lp:2:2 --x 1,a --y 0,1").code == 1);
  CHECK(run("vec-orth --norm lp:2:2 --x 1,0").code == 1);
  CHECK(run("op-orth --norm lp:2:2 --t \"1,0;0,1\" --a 1 --route both").code == 1);
  CHECK(run("op-orth --norm lp:2:2 --t \"1,0;0,1\" --a \"1,0;0,1\" --route sideways").code == 1);
  CHECK(run("frobnicate").code == 1);
  const Run e = run("vec-orth --norm lp:2:3 --x 1,0 --y 0,1");
  CHECK(e.out.empty());
  CHECK_FALSE(e.err.empty());
}

TEST_CASE("version") {
  const Run r = run("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find(bjortho::kToolVersion) != std::string::npos);
}

TEST_CASE("op-orth on the example pair") {
  Run r = run(std::string("op-orth --norm lp:2:3 --t ") + kIntroT + " --a " + kIntroA + " --route both");
  CHECK(r.code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["direct"]["decision"] == "ORTHOGONAL");
  CHECK(j["via_attainment"]["decision"] == "ORTHOGONAL");
  CHECK(j["agreement"] == true);

  r = run(std::string("op-orth --norm lp:2:3 --t ") + kIntroA + " --a " + kIntroT + " --route both");
  CHECK(r.code == 0);
  j = Json::parse(r.out);
  CHECK(j["direct"]["decision"] == "NOT_ORTHOGONAL");
  CHECK(j["via_attainment"]["decision"] == "NOT_ORTHOGONAL");

  r = run(std::string("op-orth --norm lp:3:3 --t ") + kIntroT + " --a " + kIntroT);
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["direct"]["decision"] == "NOT_ORTHOGONAL");

  r = run("op-orth --norm lp:2:2 --t \"1,0;0,1\" --a \"0,1;1,0\" --route mt");
  CHECK(r.code == 9);
  CHECK(Json::parse(r.out)["via_attainment"]["error"] == "MT_UNRESOLVED");
}

TEST_CASE("witness") {
  Run r = run("witness --theorem 2.3 --norm lp:3:3 --t \"1,0,0;0,0.5,0;0,0,0.25\" --seed 1");
  CHECK(r.code == 0);
  const Json c = Json::parse(r.out)["certificate"];
  CHECK(c["forward"]["decision"] == "ORTHOGONAL");
  CHECK(c["backward"]["decision"] == "NOT_ORTHOGONAL");
  CHECK(c["backward"]["margin"].get<double>() < -1e-5);
  CHECK_NOTHROW(bjortho::certificate_from_json(c));

  r = run("witness --theorem 2.3 --norm lp:3:3 --t \"0,0,0;0,0,0;0,0,0\"");
  CHECK(r.code == 4);
  CHECK(Json::parse(r.out)["failure"]["error"] == "ZERO_OPERATOR");

  r = run("witness --theorem 2.6 --norm lp:3:3 --t \"0,0,0;0,1,0;0,0,0.5\"");
  CHECK(r.code == 0);
  const Json w = Json::parse(r.out)["result"];
  CHECK(w["case"] == "WITNESS");
  CHECK(w["i_perp_t"]["decision"] == "ORTHOGONAL");

  CHECK(run("witness --theorem 2.3 --norm lp:1:2 --t \"1,0;0,2\"").code == 5);
  CHECK(run("witness --theorem 2.4 --norm lp:2:2 --t \"1,0;0,1\"").code == 6);
  CHECK(run("witness --theorem 2.6 --norm lp:3:3 --t \"3,0,0;0,2,0;0,0,1\"").code == 7);
  CHECK(run("witness --theorem 2.1 --norm lp:3:3 --t \"1,0,0;0,2,0;0,0,1\"").code == 7);
  CHECK(run("witness --theorem 2.1 --norm lp:3:2 --t \"1,0;0,2\"").code == 0);
  CHECK(run("witness --theorem 2.5 --norm lp:3:3 --t \"2,0,0;0,1,0;0,0,0\"").code == 0);
  CHECK(run("witness --theorem 9.9 --norm lp:3:2 --t \"1,0;0,2\"").code == 1);
}

TEST_CASE("witness --out writes JSON to the file and the summary to stdout") {
  const Run r = run("witness --theorem 2.4 --norm lp:3:2 --t \"2,0;0,1\" --out cli_witness.json");
  CHECK(r.code == 0);
  CHECK(r.out.find("certificate") != std::string::npos);
  const Json j = Json::parse(slurp("cli_witness.json"));
  CHECK(j["certificate"]["direction"] == "REFUTES_RIGHT_SYMMETRY");
}

TEST_CASE("suite runs are byte-identical") {
  write("cli_suite.json", R"({
    "specs": ["lp:3:2"], "route_specs": ["lp:2:2"], "seeds": [1, 2, 3, 4, 5],
    "suites": ["left_symmetry", "route", "theorem25"],
    "counts": {"left": 1, "route_pairs": 2}
  })");
  const Run a = run("suite cli_suite.json --out cli_a.json --threads 1");
  const Run b = run("suite --config cli_suite.json --out cli_b.json --threads 2");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(a.out.find("summary:") != std::string::npos);
  const std::string ja = slurp("cli_a.json");
  CHECK_FALSE(ja.empty());
  CHECK(ja == slurp("cli_b.json"));
  CHECK(Json::parse(ja)["summary"]["fail"] == 0);
}

TEST_CASE("suite config errors and hypothesis records") {
  write("cli_bad.json", R"({"specs": ["lp:3:2"], "unknown": 1})");
  CHECK(run("suite cli_bad.json").code == 1);
  write("cli_broken.json", "{");
  CHECK(run("suite cli_broken.json").code == 1);
  CHECK(run("suite missing_file.json").code == 1);

  write("cli_l1.json", R"({"specs": ["lp:1:2"], "suites": ["left_symmetry"], "counts": {"left": 2}})");
  const Run r = run("suite cli_l1.json");
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["summary"]["hypothesis_failed"] == 2);
  for (const auto& rec : j["records"]) CHECK(rec["outcome"] == "HYPOTHESIS_FAILED");
}
