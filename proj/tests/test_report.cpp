#include <doctest.h>

#include "bjortho/suite.hpp"

using namespace bjortho;

namespace {

SuiteConfig small_config() {
  return SuiteConfig::from_json(Json::parse(R"({
    "specs": ["lp:3:2", "lp:1.5:3"],
    "route_specs": ["lp:3:2"],
    "seeds": [1, 2],
    "counts": {"left": 2, "right": 2, "transfer_operators": 1, "transfer_trials": 10,
               "route_pairs": 6, "hilbert_matrices": 3, "hilbert_pairs": 600, "construction": 1}
  })"));
}

}  // namespace

TEST_CASE("vectors and verdicts survive a JSON round trip bit for bit") {
  Vec x(3);
  x << 0.1, -1.0 / 3.0, 1e-300;
  CHECK((vec_from_json(Json::parse(to_json(x).dump())).array() == x.array()).all());
  const OrthoVerdict v = is_bj_orthogonal(NormSpec::lp(3, 2), (Vec(2) << 1, 0.5).finished(), (Vec(2) << 0.3, 1).finished());
  const OrthoVerdict w = verdict_from_json(Json::parse(to_json(v).dump()));
  CHECK(w.decision == v.decision);
  CHECK(w.margin == v.margin);
  CHECK(w.deriv_plus == v.deriv_plus);
  CHECK(w.deriv_minus == v.deriv_minus);
  CHECK(w.lambda_star == v.lambda_star);
  CHECK(decision_from_name("NOT_ORTHOGONAL") == Decision::NotOrthogonal);
  CHECK_THROWS_AS(decision_from_name("MAYBE"), Error);
}

TEST_CASE("certificates re-parse under their schema") {
  const NormSpec s = NormSpec::lp(3, 3);
  const WitnessCertificate c = refute_left_symmetry(s, LinearOperator::diagonal({1, 0.5, 0.25}), 1);
  const Json j = to_json(c);
  CHECK(j["schema"] == kCertificateSchema);
  const WitnessCertificate d = certificate_from_json(Json::parse(j.dump()));
  CHECK(d.spec == c.spec);
  CHECK(d.witness.matrix == c.witness.matrix);
  CHECK(d.target.matrix == c.target.matrix);
  CHECK(d.direction == c.direction);
  CHECK(d.trace.branch == c.trace.branch);
  CHECK(d.seed == c.seed);
  CHECK(to_json(d).dump() == j.dump());

  Json bad = j;
  bad["schema"] = "bjortho.certificate/0";
  CHECK_THROWS_AS(certificate_from_json(bad), Error);
}

TEST_CASE("config validation") {
  const SuiteConfig d = SuiteConfig::from_json(Json::object());
  CHECK(d.specs.size() == 4);
  CHECK(d.seeds == std::vector<std::uint64_t>{kDefaultMasterSeed});
  CHECK(d.counts.left == 50);

  CHECK_THROWS_AS(SuiteConfig::from_json(Json::parse(R"({"specz": []})")), Error);
  CHECK_THROWS_AS(SuiteConfig::from_json(Json::parse(R"({"specs": ["lp:0:2"]})")), Error);
  CHECK_THROWS_AS(SuiteConfig::from_json(Json::parse(R"({"counts": {"left": 0}})")), Error);
  CHECK_THROWS_AS(SuiteConfig::from_json(Json::parse(R"({"counts": {"lefty": 3}})")), Error);
  CHECK_THROWS_AS(SuiteConfig::from_json(Json::parse(R"({"tolerances": {"tau_orth": -1}})")), Error);
  CHECK_THROWS_AS(SuiteConfig::from_json(Json::parse(R"({"suites": ["nope"]})")), Error);
  CHECK_THROWS_AS(SuiteConfig::from_json(Json::parse(R"({"seeds": [-1]})")), Error);

  const SuiteConfig c = small_config();
  CHECK(SuiteConfig::from_json(c.to_json()).to_json() == c.to_json());
}

TEST_CASE("record ids hash stably") {
  CHECK(id_hash("") == 0xcbf29ce484222325ULL);
  CHECK(id_hash("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("small suite is deterministic across thread counts") {
  SuiteConfig a = small_config();
  a.threads = 1;
  SuiteConfig b = a;
  b.threads = 3;
  const RunReport ra = run_suite(a);
  const RunReport rb = run_suite(b);
  CHECK(ra.to_json().dump() == rb.to_json().dump());
  CHECK(ra.ok());
  const SuiteSummary t = tally(ra.records);
  CHECK(t.pass == ra.summary.pass);
  CHECK(t.pass + t.fail + t.indeterminate + t.hypothesis_failed == static_cast<int>(ra.records.size()));
  const Json j = ra.to_json();
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["tool_version"] == kToolVersion);
  CHECK_FALSE(j.contains("suite_seconds"));
}

TEST_CASE("non-smooth specs produce hypothesis records, not crashes") {
  SuiteConfig c = SuiteConfig::from_json(Json::parse(R"({
    "specs": ["lp:1:2"], "suites": ["left_symmetry"], "counts": {"left": 3}
  })"));
  const RunReport r = run_suite(c);
  REQUIRE(r.records.size() == 3);
  for (const CheckRecord& rec : r.records) {
    CHECK(rec.outcome == "HYPOTHESIS_FAILED");
    CHECK(rec.result["error"] == "SPEC_NOT_SC_SMOOTH");
  }
  CHECK(r.ok());
  CHECK(r.summary.hypothesis_failed == 3);
}
