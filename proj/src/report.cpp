#include "bjortho/report.hpp"

namespace bjortho {

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const LinearOperator& t) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < t.matrix.rows(); ++r) rows.push_back(to_json(Vec(t.matrix.row(r).transpose())));
  return rows;
}

Json to_json(const OrthoVerdict& v) {
  return Json{{"decision", decision_name(v.decision)},
              {"margin", v.margin},
              {"lambda_star", v.lambda_star},
              {"deriv_plus", v.deriv_plus},
              {"deriv_minus", v.deriv_minus},
              {"degenerate", v.degenerate}};
}

Json to_json(const NormAttainment& a) {
  Json m = Json::array();
  for (const Vec& x : a.maximizers) m.push_back(to_json(x));
  return Json{{"status", attainment_status_name(a.status)},
              {"op_norm", a.op_norm},
              {"cluster_gap", a.cluster_gap},
              {"maximizers", m}};
}

Json to_json(const ConstructionTrace& trace) {
  Json j;
  j["branch"] = trace.branch;
  auto put_vec = [&](const char* key, const std::optional<Vec>& v) { j[key] = v ? to_json(*v) : Json(nullptr); };
  auto put_num = [&](const char* key, const std::optional<double>& v) { j[key] = v ? Json(*v) : Json(nullptr); };
  put_vec("x1", trace.x1);
  put_vec("x2", trace.x2);
  put_vec("u", trace.u);
  put_vec("v", trace.v);
  put_num("delta", trace.delta);
  put_num("epsilon", trace.epsilon);
  put_num("t0", trace.t0);
  put_num("d", trace.d);
  put_vec("h0", trace.h0);
  put_vec("z", trace.z);
  j["flags"] = trace.flags;
  j["attempts"] = trace.attempts;
  return j;
}

Json to_json(const WitnessCertificate& c) {
  auto via = [](const std::optional<Decision>& d) { return d ? Json(decision_name(*d)) : Json(nullptr); };
  return Json{{"schema", kCertificateSchema},
              {"spec", c.spec.to_string()},
              {"target_matrix", to_json(c.target)},
              {"witness_matrix", to_json(c.witness)},
              {"direction", witness_direction_name(c.direction)},
              {"forward", to_json(c.forward)},
              {"backward", to_json(c.backward)},
              {"forward_recheck", to_json(c.forward_recheck)},
              {"backward_recheck", to_json(c.backward_recheck)},
              {"cross_check", Json{{"forward", via(c.forward_via)}, {"backward", via(c.backward_via)}}},
              {"trace", to_json(c.trace)},
              {"tolerances", Json{{"tau_orth", c.tau}, {"tau_mt", kTauMt}, {"tau_gap", kTauGap}}},
              {"seed", c.seed}};
}

Json to_json(const Theorem25Result& r) {
  Json j{{"case", theorem25_case_name(r.which)}, {"rank", r.rank}, {"x0", to_json(r.x0)}};
  j["u0"] = r.u0 ? to_json(*r.u0) : Json(nullptr);
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  return j;
}

Json to_json(const Theorem26Result& r) {
  Json j{{"case", theorem26_case_name(r.which)},
         {"x0", to_json(r.x0)},
         {"u0", to_json(r.u0)},
         {"i_perp_t", to_json(r.i_perp_t)},
         {"t_perp_i", to_json(r.t_perp_i)}};
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json(nullptr);
  return j;
}

Json to_json(const TransferReport& r) {
  return Json{{"x", to_json(r.x)},
              {"trials", r.trials},
              {"passed", r.passed},
              {"worst_margin", r.worst_margin},
              {"worst_slope", r.worst_slope}};
}

Json to_json(const IntroExampleReport& r) {
  return Json{{"t_perp_a_direct", to_json(r.t_perp_a_direct)},
              {"a_perp_t_direct", to_json(r.a_perp_t_direct)},
              {"t_perp_a_via", to_json(r.t_perp_a_via)},
              {"a_perp_t_via", to_json(r.a_perp_t_via)},
              {"holds", r.holds}};
}

Json error_json(const Error& e) {
  Json j{{"error", error_name(e.code())}, {"message", e.what()}};
  if (const auto* w = dynamic_cast<const WitnessError*>(&e)) j["trace"] = to_json(w->trace());
  return j;
}

// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j) {
  if (!j.is_number()) schema_error("expected a number");
  return j.get<double>();
}

std::optional<Vec> opt_vec(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (v.is_null()) return std::nullopt;
  return vec_from_json(v);
}

std::optional<double> opt_num(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (v.is_null()) return std::nullopt;
  return number(v);
}

std::optional<Decision> opt_decision(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return decision_from_name(j.get<std::string>());
}

}  // namespace

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) schema_error("expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i]);
  return v;
}

LinearOperator operator_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) schema_error("expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Vec row = vec_from_json(j[static_cast<std::size_t>(r)]);
    if (row.size() != n) schema_error("matrix rows must have " + std::to_string(n) + " entries");
    m.row(r) = row.transpose();
  }
  return LinearOperator(std::move(m));
}

Decision decision_from_name(std::string_view name) {
  for (Decision d : {Decision::Orthogonal, Decision::NotOrthogonal, Decision::Indeterminate})
    if (decision_name(d) == name) return d;
  schema_error("unknown decision '" + std::string(name) + "'");
}

OrthoVerdict verdict_from_json(const Json& j) {
  OrthoVerdict v;
  v.decision = decision_from_name(field(j, "decision").get<std::string>());
  v.margin = number(field(j, "margin"));
  v.lambda_star = number(field(j, "lambda_star"));
  v.deriv_plus = number(field(j, "deriv_plus"));
  v.deriv_minus = number(field(j, "deriv_minus"));
  v.degenerate = field(j, "degenerate").get<bool>();
  return v;
}

WitnessCertificate certificate_from_json(const Json& j) {
  if (field(j, "schema") != kCertificateSchema) schema_error("not a certificate");
  const std::string dir = field(j, "direction").get<std::string>();
  WitnessCertificate c{NormSpec::parse(field(j, "spec").get<std::string>()),
                       operator_from_json(field(j, "target_matrix")),
                       operator_from_json(field(j, "witness_matrix")),
                       dir == witness_direction_name(WitnessDirection::RefutesLeftSymmetry)
                           ? WitnessDirection::RefutesLeftSymmetry
                           : WitnessDirection::RefutesRightSymmetry,
                       verdict_from_json(field(j, "forward")),
                       verdict_from_json(field(j, "backward")),
                       verdict_from_json(field(j, "forward_recheck")),
                       verdict_from_json(field(j, "backward_recheck")),
                       opt_decision(field(field(j, "cross_check"), "forward")),
                       opt_decision(field(field(j, "cross_check"), "backward")),
                       {},
                       field(j, "seed").get<std::uint64_t>(),
                       number(field(field(j, "tolerances"), "tau_orth"))};
  if (dir != witness_direction_name(c.direction)) schema_error("unknown direction '" + dir + "'");
  const Json& t = field(j, "trace");
  c.trace.branch = field(t, "branch").get<std::string>();
  c.trace.x1 = opt_vec(t, "x1");
  c.trace.x2 = opt_vec(t, "x2");
  c.trace.u = opt_vec(t, "u");
  c.trace.v = opt_vec(t, "v");
  c.trace.delta = opt_num(t, "delta");
  c.trace.epsilon = opt_num(t, "epsilon");
  c.trace.t0 = opt_num(t, "t0");
  c.trace.d = opt_num(t, "d");
  c.trace.h0 = opt_vec(t, "h0");
  c.trace.z = opt_vec(t, "z");
  c.trace.flags = field(t, "flags").get<std::vector<std::string>>();
  c.trace.attempts = field(t, "attempts").get<std::vector<std::string>>();
  return c;
}

}  // namespace bjortho
