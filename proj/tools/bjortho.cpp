// Command-line front end: single orthogonality queries, witness
// construction and the configurable check suite.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bjortho/suite.hpp"

namespace {

using namespace bjortho;

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kIndeterminate = 2,
  kRouteDisagreement = 3,
  kZeroOperator = 4,
  kSpecNotScSmooth = 5,
  kNotAntipodalMt = 6,
  kHypothesisFailed = 7,
  kBudgetExhausted = 8,
  kMtUnresolved = 9,
  kSuiteFailures = 10,
};

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroOperator: return kZeroOperator;
    case ErrorCode::SpecNotScSmooth: return kSpecNotScSmooth;
    case ErrorCode::NotAntipodalMt: return kNotAntipodalMt;
    case ErrorCode::HypothesisFailed: return kHypothesisFailed;
    case ErrorCode::BudgetExhausted: return kBudgetExhausted;
    case ErrorCode::MtUnresolved: return kMtUnresolved;
    default: return kUsage;
  }
}

// JSON goes to --out when given (summary to stdout), else to stdout
// (summary to stderr).
void emit(const Json& j, const std::string& out, const std::string& summary) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    std::cerr << summary << "\n";
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + out);
  f << text;
  std::cout << summary << "\n";
}

Json envelope(const char* command) {
  return Json{{"schema", kReportSchema}, {"tool_version", kToolVersion}, {"command", command}};
}

int decision_exit(Decision d) { return d == Decision::Indeterminate ? kIndeterminate : kOk; }

struct VecArgs {
  std::string norm, x, y, out;
};

int cmd_vec_orth(const VecArgs& a) {
  const NormSpec spec = NormSpec::parse(a.norm);
  const Vec x = parse_vector(a.x);
  const Vec y = parse_vector(a.y);
  const OrthoVerdict v = is_bj_orthogonal(spec, x, y);
  Json j = envelope("vec-orth");
  j["inputs"] = Json{{"norm", spec.to_string()}, {"x", to_json(x)}, {"y", to_json(y)}};
  j["verdict"] = to_json(v);
  emit(j, a.out, std::string(decision_name(v.decision)) + " margin " + format_real(v.margin));
  return decision_exit(v.decision);
}

struct OpArgs {
  std::string norm, t, a, route = "direct", out;
};

int cmd_op_orth(const OpArgs& args) {
  const NormSpec spec = NormSpec::parse(args.norm);
  const LinearOperator t = LinearOperator::parse(args.t);
  const LinearOperator a = LinearOperator::parse(args.a);
  check_dim(spec, t);
  check_dim(spec, a);
  const NormAttainmentSolver solver(spec);
  Json j = envelope("op-orth");
  j["inputs"] = Json{{"norm", spec.to_string()}, {"t", t.to_string()}, {"a", a.to_string()}, {"route", args.route}};

  std::optional<OrthoVerdict> direct, via;
  std::optional<Error> via_error;
  if (args.route == "direct" || args.route == "both") {
    direct = op_bj_orthogonal_direct(solver, t, a);
    j["direct"] = to_json(*direct);
  }
  if (args.route == "mt" || args.route == "both") {
    const NormAttainment att = solver.solve(t);
    j["attainment"] = to_json(att);
    try {
      via = op_bj_orthogonal_via_attainment(solver, att, t, a);
      j["via_attainment"] = to_json(*via);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MtUnresolved) throw;
      via_error = e;
      j["via_attainment"] = error_json(e);
    }
  }

  if (args.route == "mt") {
    if (via_error) {
      emit(j, args.out, "MT_UNRESOLVED");
      return kMtUnresolved;
    }
    emit(j, args.out, std::string(decision_name(via->decision)));
    return decision_exit(via->decision);
  }
  if (args.route == "both" && via && direct->decision != Decision::Indeterminate &&
      via->decision != direct->decision) {
    j["agreement"] = false;
    emit(j, args.out,
         "route disagreement: direct " + std::string(decision_name(direct->decision)) + ", attainment " +
             std::string(decision_name(via->decision)));
    return kRouteDisagreement;
  }
  if (args.route == "both") j["agreement"] = via.has_value() ? Json(true) : Json(nullptr);
  emit(j, args.out, std::string(decision_name(direct->decision)) + " margin " + format_real(direct->margin));
  return decision_exit(direct->decision);
}

struct WitnessArgs {
  std::string theorem, norm, t, out;
  std::uint64_t seed = kDefaultMasterSeed;
};

int cmd_witness(const WitnessArgs& args) {
  const NormSpec spec = NormSpec::parse(args.norm);
  const LinearOperator t = LinearOperator::parse(args.t);
  check_dim(spec, t);
  Json j = envelope("witness");
  j["inputs"] = Json{{"theorem", args.theorem}, {"norm", spec.to_string()}, {"t", t.to_string()}, {"seed", args.seed}};
  try {
    std::string summary;
    if (args.theorem == "2.1" || args.theorem == "2.3") {
      if (args.theorem == "2.1" && spec.dim() != 2)
        throw Error(ErrorCode::HypothesisFailed, "this statement is about two-dimensional spaces");
      const WitnessCertificate c = refute_left_symmetry(spec, t, args.seed);
      j["certificate"] = to_json(c);
      summary = "certificate (" + c.trace.branch + ")";
    } else if (args.theorem == "2.4") {
      const WitnessCertificate c = refute_right_symmetry_smooth(spec, t, args.seed);
      j["certificate"] = to_json(c);
      summary = "certificate (" + c.trace.branch + ")";
    } else if (args.theorem == "2.5") {
      const Theorem25Result r = theorem25_check(spec, t, args.seed);
      j["result"] = to_json(r);
      summary = std::string(theorem25_case_name(r.which));
    } else if (args.theorem == "2.6") {
      const Theorem26Result r = theorem26_check(spec, t, args.seed);
      j["result"] = to_json(r);
      summary = std::string(theorem26_case_name(r.which)) + ", I vs T " +
                std::string(decision_name(r.i_perp_t.decision));
    } else {
      throw Error(ErrorCode::ParseError, "unknown theorem '" + args.theorem + "'");
    }
    emit(j, args.out, summary);
    return kOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::DimMismatch) throw;
    j["failure"] = error_json(e);
    emit(j, args.out, std::string(error_name(e.code())));
    return exit_for(e.code());
  }
}

struct SuiteArgs {
  std::string config, out;
  int threads = 0;
  bool timings = false;
};

int cmd_suite(const SuiteArgs& args) {
  SuiteConfig config;
  if (!args.config.empty()) {
    std::ifstream f(args.config);
    if (!f) throw Error(ErrorCode::ParseError, "cannot read " + args.config);
    Json j;
    try {
      j = Json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, args.config + ": " + e.what());
    }
    config = SuiteConfig::from_json(j);
  }
  if (args.threads > 0) config.threads = args.threads;
  if (args.timings) config.include_timings = true;
  if (!args.out.empty()) config.output = args.out;

  const RunReport report = run_suite(config);
  std::ostringstream summary;
  for (const auto& [name, seconds] : report.suite_seconds) {
    int pass = 0, total = 0;
    for (const auto& r : report.records)
      if (r.suite == name) {
        ++total;
        pass += r.outcome == "PASS";
      }
    summary << name << ": " << pass << "/" << total << " pass (" << seconds << " s)\n";
  }
  summary << "summary: pass " << report.summary.pass << ", fail " << report.summary.fail << ", indeterminate "
          << report.summary.indeterminate << ", hypothesis_failed " << report.summary.hypothesis_failed;
  emit(report.to_json(), config.output, summary.str());
  return report.ok() ? kOk : kSuiteFailures;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birkhoff-James orthogonality of vectors and operators on finite-dimensional normed spaces"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  VecArgs vec;
  auto* v = app.add_subcommand("vec-orth", "Decide x orthogonal to y");
  v->add_option("--norm", vec.norm, "norm spec, e.g. lp:3:2")->required();
  v->add_option("--x", vec.x, "comma-separated coordinates")->required();
  v->add_option("--y", vec.y, "comma-separated coordinates")->required();
  v->add_option("--out", vec.out, "write JSON here");

  OpArgs op;
  auto* o = app.add_subcommand("op-orth", "Decide T orthogonal to A in B(X)");
  o->add_option("--norm", op.norm, "norm spec")->required();
  o->add_option("--t", op.t, "matrix, rows ';' entries ','")->required();
  o->add_option("--a", op.a, "matrix, rows ';' entries ','")->required();
  o->add_option("--route", op.route, "direct, mt or both")->check(CLI::IsMember({"direct", "mt", "both"}));
  o->add_option("--out", op.out, "write JSON here");

  WitnessArgs wit;
  auto* w = app.add_subcommand("witness", "Build a certified symmetry-refuting witness");
  w->add_option("--theorem", wit.theorem, "2.1, 2.3, 2.4, 2.5 or 2.6")->required();
  w->add_option("--norm", wit.norm, "norm spec")->required();
  w->add_option("--t", wit.t, "target matrix")->required();
  w->add_option("--seed", wit.seed, "master seed");
  w->add_option("--out", wit.out, "write JSON here");

  SuiteArgs suite;
  auto* s = app.add_subcommand("suite", "Run the check battery");
  s->add_option("config,--config", suite.config, "JSON config (defaults when omitted)");
  s->add_option("--out", suite.out, "write the JSON report here");
  s->add_option("--threads", suite.threads, "worker threads (default BJORTHO_THREADS or all cores)");
  s->add_flag("--timings", suite.timings, "include wall times (breaks byte-identical output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*v) return cmd_vec_orth(vec);
    if (*o) return cmd_op_orth(op);
    if (*w) return cmd_witness(wit);
    if (*s) return cmd_suite(suite);
  } catch (const Error& e) {
    std::cerr << "bjortho: " << e.what() << "\n";
    return e.code() == ErrorCode::ParseError || e.code() == ErrorCode::DimMismatch ||
                   e.code() == ErrorCode::InvalidSpec || e.code() == ErrorCode::ZeroVector
               ? kUsage
               : exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "bjortho: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
