#include "bjortho/symmetry_lab.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "bjortho/rng.hpp"

namespace bjortho {

std::string_view witness_direction_name(WitnessDirection d) {
  return d == WitnessDirection::RefutesLeftSymmetry ? "REFUTES_LEFT_SYMMETRY" : "REFUTES_RIGHT_SYMMETRY";
}

std::string_view theorem25_case_name(Theorem25Case c) {
  return c == Theorem25Case::RankGeNMinus1 ? "RANK_GE_N_MINUS_1" : "WITNESS";
}

std::string_view theorem26_case_name(Theorem26Case c) {
  return c == Theorem26Case::MutualWithIdentity ? "MUTUAL_WITH_IDENTITY" : "WITNESS";
}

int numerical_rank(const LinearOperator& t) {
  Eigen::JacobiSVD<Mat> svd(t.matrix);
  const Vec& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > kTauRank * s[0]) ++rank;
  return rank;
}

namespace {

// Seed streams inside one pipeline.
enum Stream : std::uint64_t {
  kStreamP1 = 1,
  kStreamP2 = 2,
  kStreamQ1 = 3,
  kStreamQ2 = 4,
  kStreamSymmetry = 7,
  kStreamTransfer = 8,
  kStreamFallback = 1000,
};

void require_sc_smooth(const NormSpec& spec) {
  if (!spec.is_strictly_convex() || !spec.is_smooth())
    throw Error(ErrorCode::SpecNotScSmooth, spec.to_string() + " is not strictly convex and smooth");
}

// The basis vectors of a hyperplane followed by `count` random unit
// combinations of them.
std::vector<Vec> hyperplane_candidates(const NormSpec& spec, const std::vector<Vec>& basis, int count,
                                       std::uint64_t seed) {
  std::vector<Vec> out = basis;
  if (basis.size() < 2) return out;
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(basis.front().size());
  for (int k = 0; k < count; ++k) {
    Vec v = Vec::Zero(n);
    for (const Vec& b : basis) v += rng.gaussian() * b;
    if (eval_norm(spec, v) > 0.0) out.push_back(normalized(spec, v));
  }
  return out;
}

// Null space of m via SVD, thresholded relative to the largest singular value.
std::vector<Vec> null_space(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cut = s.size() ? kTauRank * std::max(s[0], 1e-300) : 0.0;
  std::vector<Vec> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double sj = j < s.size() ? s[j] : 0.0;
    if (sj <= cut) out.push_back(svd.matrixV().col(j));
  }
  return out;
}

Functional support_at(const NormSpec& spec, const Vec& x) {
  return is_smooth_point(spec, x) ? supporting_functional(spec, x) : extreme_subgradient(spec, x, x, +1);
}

std::string describe(const OrthoVerdict& v) {
  return std::string(decision_name(v.decision)) + " margin " + format_real(v.margin);
}

class Certifier {
 public:
  Certifier(const NormSpec& spec, const LabOptions& options)
      : spec_(spec), options_(options), solver_(spec, options.search) {}

  const NormAttainmentSolver& solver() const { return solver_; }

  // Runs all checks for the pair; on failure records the reason in `why`.
  std::optional<WitnessCertificate> attempt(const LinearOperator& t, const LinearOperator& a,
                                            WitnessDirection dir, const ConstructionTrace& trace,
                                            std::uint64_t seed, std::string& why) {
    const bool left = dir == WitnessDirection::RefutesLeftSymmetry;
    const LinearOperator& p = left ? t : a;
    const LinearOperator& q = left ? a : t;
    const double tau = options_.tau;

    WitnessCertificate c{spec_, t, a, dir, {}, {}, {}, {}, {}, {}, trace, seed, tau};
    c.forward = op_bj_orthogonal_direct(solver_, p, q, tau);
    if (c.forward.decision != Decision::Orthogonal || c.forward.margin < -tau) {
      why = "forward " + describe(c.forward);
      return std::nullopt;
    }
    c.backward = op_bj_orthogonal_direct(solver_, q, p, tau);
    if (c.backward.decision != Decision::NotOrthogonal || c.backward.margin >= -options_.backward_margin) {
      why = "backward " + describe(c.backward);
      return std::nullopt;
    }
    if (!fine_) fine_.emplace(spec_, options_.search.doubled());
    c.forward_recheck = op_bj_orthogonal_direct(*fine_, p, q, tau / 2.0);
    c.backward_recheck = op_bj_orthogonal_direct(*fine_, q, p, tau / 2.0);
    if (c.forward_recheck.decision != Decision::Orthogonal || c.forward_recheck.margin < -tau / 2.0) {
      why = "forward recheck " + describe(c.forward_recheck);
      return std::nullopt;
    }
    if (c.backward_recheck.decision != Decision::NotOrthogonal || c.backward_recheck.margin >= -2.0 * tau) {
      why = "backward recheck " + describe(c.backward_recheck);
      return std::nullopt;
    }
    c.forward_via = via(p, q);
    c.backward_via = via(q, p);
    return c;
  }

 private:
  std::optional<Decision> via(const LinearOperator& p, const LinearOperator& q) const {
    const NormAttainment att = solver_.solve(p);
    if (att.status != AttainmentStatus::Resolved && att.status != AttainmentStatus::Zero) return std::nullopt;
    return op_bj_orthogonal_via_attainment(solver_, att, p, q, options_.tau).decision;
  }

  const NormSpec& spec_;
  const LabOptions& options_;
  NormAttainmentSolver solver_;
  std::optional<NormAttainmentSolver> fine_;
};

// Unit vector z in span(candidates) maximising ||T z||.
std::pair<Vec, double> best_image(const NormSpec& spec, const LinearOperator& t, const std::vector<Vec>& cands) {
  Vec best = cands.front();
  double value = -1.0;
  for (const Vec& z : cands) {
    const double r = eval_norm(spec, t(z));
    if (r > value) {
      value = r;
      best = z;
    }
  }
  return {best, value};
}

}  // namespace

// ---------------------------------------------------------------------------

WitnessCertificate refute_left_symmetry(const NormSpec& spec, const LinearOperator& t, std::uint64_t seed,
                                        const LabOptions& options) {
  check_dim(spec, t);
  require_sc_smooth(spec);
  if (t.is_zero()) throw Error(ErrorCode::ZeroOperator, "the zero operator is left symmetric");
  if (spec.dim() < 2) throw Error(ErrorCode::HypothesisFailed, "dimension 1 has no orthogonal directions");
  const int n = spec.dim();

  Certifier cert(spec, options);
  const NormAttainment att = cert.solver().solve(t);
  const LinearOperator th = (1.0 / att.op_norm) * t;
  const Vec x1 = att.maximizers.front();
  const Vec tx1 = th(x1);
  const std::vector<Vec> hyper = orthogonal_hyperplane(spec, x1);

  ConstructionTrace trace;
  trace.x1 = x1;
  std::string why;

  // P1: A = Tz (x) f_z for z in H_{x1} with Tz != 0.
  const auto [z, tz_norm] = best_image(spec, th, hyperplane_candidates(spec, hyper, 256, derive_seed(seed, kStreamP1)));
  if (tz_norm > 1e-6) {
    ConstructionTrace tr = trace;
    tr.branch = "P1";
    tr.z = z;
    if (auto c = cert.attempt(t, rank_one(th(z), supporting_functional(spec, z)), WitnessDirection::RefutesLeftSymmetry,
                              tr, seed, why))
      return *c;
    trace.attempts.push_back("P1: " + why);
  } else {
    trace.attempts.push_back("P1: T vanishes on the hyperplane of x1");
  }

  // P2: Ax1 = u, Ax2 = v, zero on the rest of a basis.
  {
    const auto cands = hyperplane_candidates(spec, hyper, 256, derive_seed(seed, kStreamP2));
    Vec x2 = cands.front();
    double best_slope = std::numeric_limits<double>::infinity();
    for (const Vec& c : cands) {
      const double mid = std::abs(dir_deriv_plus(spec, c, x1) + dir_deriv_minus(spec, c, x1));
      if (mid < best_slope) {
        best_slope = mid;
        x2 = c;
      }
    }
    if (eval_norm(spec, x1 + x2) < eval_norm(spec, x1 - x2)) x2 = -x2;
    const double delta = 2.0 - eval_norm(spec, x1 + x2);
    if (eval_norm(spec, th(x2)) > 1e-6) {
      trace.attempts.push_back("P2: T x2 is not zero");
    } else if (!(delta > 0.0 && delta < 1.0)) {
      trace.attempts.push_back("P2: delta " + format_real(delta) + " outside (0,1)");
    } else {
      const Vec u = find_orthogonal_from(spec, tx1, derive_seed(seed, kStreamP2 + 100));
      const double eps = delta / (2.0 * (3.0 - delta));
      const double t0 = std::max(0.5, 1.0 - eps / (2.0 * eval_norm(spec, u - tx1)));
      const Vec v = t0 * u + (1.0 - t0) * tx1;
      Mat rows(2, n);
      rows.row(0) = supporting_functional(spec, x1).coeffs.transpose();
      rows.row(1) = supporting_functional(spec, x2).coeffs.transpose();
      std::vector<Vec> basis{x1, x2};
      std::vector<Vec> images{u, v};
      for (const Vec& k : null_space(rows)) {
        basis.push_back(k);
        images.push_back(Vec::Zero(n));
      }
      ConstructionTrace tr = trace;
      tr.branch = "P2";
      tr.x2 = x2;
      tr.u = u;
      tr.v = v;
      tr.delta = delta;
      tr.epsilon = eps;
      tr.t0 = t0;
      try {
        if (auto c = cert.attempt(t, operator_from_basis(basis, images), WitnessDirection::RefutesLeftSymmetry, tr,
                                  seed, why))
          return *c;
        trace.attempts.push_back("P2: " + why);
      } catch (const Error& e) {
        trace.attempts.push_back(std::string("P2: ") + e.what());
      }
    }
  }

  // P3: rank-one A = w (x) g with Ax1 in ker f_{Tx1}, so Tx1 is orthogonal to Ax1.
  const std::vector<Vec> image_kernel = kernel_basis(spec, supporting_functional(spec, tx1));
  for (int k = 0; k < options.budget; ++k) {
    Rng rng(derive_seed(seed, kStreamFallback + static_cast<std::uint64_t>(k)));
    Vec w = Vec::Zero(n);
    for (const Vec& b : image_kernel) w += rng.gaussian() * b;
    const Vec g = rng.gaussian_vector(n);
    if (w.isZero(0.0)) continue;
    ConstructionTrace tr = trace;
    tr.branch = "P3";
    tr.u = w;
    if (auto c = cert.attempt(t, LinearOperator(Mat(w * g.transpose())), WitnessDirection::RefutesLeftSymmetry, tr,
                              seed, why))
      return *c;
  }
  trace.attempts.push_back("P3: " + std::to_string(options.budget) + " random candidates rejected");
  throw WitnessError(ErrorCode::BudgetExhausted, "no certified left-symmetry witness", trace);
}

bool p2_constraints_hold(const NormSpec& spec, const ConstructionTrace& trace) {
  if (trace.branch != "P2" || !trace.delta || !trace.epsilon || !trace.t0 || !trace.u || !trace.v) return false;
  const double delta = *trace.delta, eps = *trace.epsilon, t0 = *trace.t0;
  return delta > 0.0 && delta < 1.0 && eps > 0.0 && eps < delta / (3.0 - delta) && t0 > 0.0 && t0 < 1.0 &&
         eval_norm(spec, *trace.v - *trace.u) < eps;
}

WitnessCertificate refute_right_symmetry_smooth(const NormSpec& spec, const LinearOperator& t,
                                                std::uint64_t seed, const LabOptions& options) {
  check_dim(spec, t);
  require_sc_smooth(spec);
  if (t.is_zero()) throw Error(ErrorCode::ZeroOperator, "the zero operator is right symmetric");
  if (spec.dim() < 2) throw Error(ErrorCode::HypothesisFailed, "dimension 1 has no orthogonal directions");
  const int n = spec.dim();

  SmoothOperatorProxy proxy;
  try {
    proxy = is_smooth_operator_proxy(spec, t, options.search);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MtUnresolved) throw;
    throw Error(ErrorCode::NotAntipodalMt, "norm attainment set could not be resolved");
  }
  if (!proxy.antipodal_mt)
    throw Error(ErrorCode::NotAntipodalMt,
                "M_T is " + std::string(attainment_status_name(proxy.attainment.status)) + " with " +
                    std::to_string(proxy.attainment.maximizers.size()) + " cluster(s)");
  if (!proxy.image_smooth) throw Error(ErrorCode::HypothesisFailed, "T x0 is not a smooth point");

  Certifier cert(spec, options);
  const LinearOperator th = (1.0 / proxy.attainment.op_norm) * t;
  const Vec x0 = *proxy.x0;
  const Vec tx0 = th(x0);
  const std::vector<Vec> hyper = orthogonal_hyperplane(spec, x0);

  ConstructionTrace trace;
  trace.x1 = x0;
  std::string why;

  // Q1: x0 not left symmetric. y in H_{x0} with f_y(x0) != 0; A = Tx0 (x) f_y.
  {
    const auto cands = hyperplane_candidates(spec, hyper, 256, derive_seed(seed, kStreamQ1));
    Vec y = cands.front();
    double lean = -1.0;
    for (const Vec& c : cands) {
      const double s = std::abs(supporting_functional(spec, c)(x0));
      if (s > lean) {
        lean = s;
        y = c;
      }
    }
    if (lean > 1e-6) {
      ConstructionTrace tr = trace;
      tr.branch = "Q1";
      tr.z = y;
      if (auto c = cert.attempt(t, rank_one(tx0, supporting_functional(spec, y)),
                                WitnessDirection::RefutesRightSymmetry, tr, seed, why))
        return *c;
      trace.attempts.push_back("Q1: " + why);
    } else {
      trace.attempts.push_back("Q1: x0 passed the hyperplane symmetry test");
    }
  }

  // Q2: h0 in H_{x0} with ||T h0|| > ||T||; A = (d Tz' + Th0) (x) f_{z'}.
  {
    const auto [h, th_norm] = best_image(spec, th, hyperplane_candidates(spec, hyper, 256, derive_seed(seed, kStreamQ2)));
    if (th_norm <= 1e-9) {
      trace.flags.push_back("T_RESTRICTED_ZERO");
      trace.attempts.push_back("Q2: T vanishes on the hyperplane of x0");
    } else {
      const Vec h0 = (2.0 / th_norm) * h;
      const Vec zp = normalized(spec, x0 + h0);
      const Vec tzp = th(zp);
      const Vec th0 = th(h0);
      const double d = james_foot(spec, tzp, th0);
      ConstructionTrace tr = trace;
      tr.branch = "Q2";
      tr.h0 = h0;
      tr.z = zp;
      tr.d = d;
      if (auto c = cert.attempt(t, rank_one(d * tzp + th0, supporting_functional(spec, zp)),
                                WitnessDirection::RefutesRightSymmetry, tr, seed, why))
        return *c;
      trace.attempts.push_back("Q2: " + why);
    }
  }

  // Q3: random w, b with b orthogonal to Tw, A = b (x) f_w.
  for (int k = 0; k < options.budget; ++k) {
    Rng rng(derive_seed(seed, kStreamFallback + static_cast<std::uint64_t>(k)));
    const Vec w = rng.gaussian_vector(n);
    const Vec tw = th(w);
    if (eval_norm(spec, w) == 0.0 || eval_norm(spec, tw) < 1e-6 * eval_norm(spec, w)) continue;
    const Vec wh = normalized(spec, w);
    const Vec r = rng.gaussian_vector(n);
    const Vec b = r + james_foot(spec, tw, r) * tw;
    if (eval_norm(spec, b) == 0.0) continue;
    ConstructionTrace tr = trace;
    tr.branch = "Q3";
    tr.z = wh;
    tr.u = b;
    if (auto c = cert.attempt(t, rank_one(b, supporting_functional(spec, wh)),
                              WitnessDirection::RefutesRightSymmetry, tr, seed, why))
      return *c;
  }
  trace.attempts.push_back("Q3: " + std::to_string(options.budget) + " random candidates rejected");
  throw WitnessError(ErrorCode::BudgetExhausted, "no certified right-symmetry witness", trace);
}

// ---------------------------------------------------------------------------

namespace {

// M_T = {±x0} or HYPOTHESIS_FAILED.
Vec single_maximizer(const NormAttainment& att) {
  if (att.status == AttainmentStatus::Zero) throw Error(ErrorCode::HypothesisFailed, "T is zero");
  if (!att.single_pair())
    throw Error(ErrorCode::HypothesisFailed,
                "M_T is not a single antipodal pair (" + std::string(attainment_status_name(att.status)) + ", " +
                    std::to_string(att.maximizers.size()) + " cluster(s))");
  return att.maximizers.front();
}

bool left_symmetric_up_to_budget(const NormSpec& spec, const Vec& x, std::uint64_t seed,
                                 const LabOptions& options) {
  return is_left_symmetric_point(spec, x, options.symmetry_budget, derive_seed(seed, kStreamSymmetry), options.tau)
             .verdict == SymmetryVerdict::SymmetricUpToBudget;
}

// A = 1/2 I + 1/2 u0 (x) g with g supporting u0 and vanishing on x0:
// A u0 = u0 and A = 1/2 on ker g, which contains x0.
LinearOperator half_identity_witness(const NormSpec& spec, const Vec& u0, const Vec& x0, double tau) {
  const auto g = supporting_functional_annihilating(spec, u0, x0, tau);
  if (!g) throw Error(ErrorCode::HypothesisFailed, "u0 is not orthogonal to x0");
  const int n = spec.dim();
  return LinearOperator(Mat(0.5 * Mat::Identity(n, n) + 0.5 * u0 * g->coeffs.transpose()));
}

}  // namespace

Theorem25Result theorem25_check(const NormSpec& spec, const LinearOperator& t, std::uint64_t seed,
                                const LabOptions& options) {
  check_dim(spec, t);
  const int n = spec.dim();
  Certifier cert(spec, options);
  Theorem25Result out;
  out.x0 = single_maximizer(cert.solver().solve(t));
  const Vec tx0 = t(out.x0);
  const double mu = out.x0.dot(tx0) / out.x0.squaredNorm();
  if (eval_norm(spec, tx0 - mu * out.x0) > options.tau * eval_norm(spec, tx0))
    throw Error(ErrorCode::HypothesisFailed, "x0 is not an eigenvector of T");
  if (!left_symmetric_up_to_budget(spec, out.x0, seed, options))
    throw Error(ErrorCode::HypothesisFailed, "x0 is not a left symmetric point");

  out.rank = numerical_rank(t);
  if (out.rank >= n - 1) {
    out.which = Theorem25Case::RankGeNMinus1;
    return out;
  }

  Mat stacked(n + 1, n);
  stacked.topRows(n) = t.matrix;
  stacked.row(n) = support_at(spec, out.x0).coeffs.transpose();
  const auto kernel = null_space(stacked);
  if (kernel.empty()) throw Error(ErrorCode::HypothesisFailed, "H0 and ker T meet only in 0");
  const Vec u0 = normalized(spec, kernel.front());
  out.u0 = u0;

  ConstructionTrace trace;
  trace.branch = "T25";
  trace.x1 = out.x0;
  trace.u = u0;
  std::string why;
  auto c = cert.attempt(t, half_identity_witness(spec, u0, out.x0, options.tau),
                        WitnessDirection::RefutesRightSymmetry, trace, seed, why);
  if (!c) {
    trace.attempts.push_back("T25: " + why);
    throw WitnessError(ErrorCode::BudgetExhausted, "witness did not certify", trace);
  }
  out.which = Theorem25Case::Witness;
  out.certificate = std::move(c);
  return out;
}

Theorem26Result theorem26_check(const NormSpec& spec, const LinearOperator& t, std::uint64_t seed,
                                const LabOptions& options) {
  check_dim(spec, t);
  const int n = spec.dim();
  Certifier cert(spec, options);
  Theorem26Result out;
  out.x0 = single_maximizer(cert.solver().solve(t));

  const auto kernel = null_space(t.matrix);
  if (kernel.empty()) throw Error(ErrorCode::HypothesisFailed, "ker T is trivial");
  std::optional<Vec> u0;
  for (const Vec& k : kernel) {
    const Vec cand = normalized(spec, k);
    if (left_symmetric_up_to_budget(spec, cand, seed, options)) {
      u0 = cand;
      break;
    }
  }
  if (!u0) throw Error(ErrorCode::HypothesisFailed, "no left symmetric point found in ker T");
  out.u0 = *u0;

  const LinearOperator id = LinearOperator::identity(n);
  out.i_perp_t = op_bj_orthogonal_direct(cert.solver(), id, t, options.tau);
  out.t_perp_i = op_bj_orthogonal_direct(cert.solver(), t, id, options.tau);
  if (out.t_perp_i.decision == Decision::Orthogonal) {
    out.which = Theorem26Case::MutualWithIdentity;
    return out;
  }

  ConstructionTrace trace;
  trace.branch = "T26";
  trace.x1 = out.x0;
  trace.u = out.u0;
  std::string why;
  auto c = cert.attempt(t, half_identity_witness(spec, out.u0, out.x0, options.tau),
                        WitnessDirection::RefutesRightSymmetry, trace, seed, why);
  if (!c) {
    trace.attempts.push_back("T26: " + why);
    throw WitnessError(ErrorCode::BudgetExhausted, "witness did not certify", trace);
  }
  out.which = Theorem26Case::Witness;
  out.certificate = std::move(c);
  return out;
}

TransferReport lemma22_transfer_check(const NormSpec& spec, const LinearOperator& t, int trials,
                                      std::uint64_t seed, const LabOptions& options) {
  check_dim(spec, t);
  if (!spec.is_smooth()) throw Error(ErrorCode::HypothesisFailed, spec.to_string() + " is not smooth");
  if (t.is_zero()) throw Error(ErrorCode::HypothesisFailed, "T is zero");
  const NormAttainment att = operator_norm(spec, t, options.search);
  if (att.status != AttainmentStatus::Resolved)
    throw Error(ErrorCode::HypothesisFailed,
                "M_T unresolved (" + std::string(attainment_status_name(att.status)) + ")");
  TransferReport out;
  out.x = att.maximizers.front();
  const Vec tx = t(out.x);
  const std::vector<Vec> hyper = orthogonal_hyperplane(spec, out.x);
  const int n = spec.dim();
  for (int k = 0; k < trials; ++k) {
    Rng rng(derive_seed(seed, kStreamTransfer + static_cast<std::uint64_t>(k)));
    Vec y = Vec::Zero(n);
    for (const Vec& b : hyper) y += rng.gaussian() * b;
    const OrthoVerdict v = is_bj_orthogonal(spec, tx, t(y), options.tau);
    ++out.trials;
    if (v.decision == Decision::Orthogonal) ++out.passed;
    out.worst_margin = std::min(out.worst_margin, v.margin);
    out.worst_slope = std::max({out.worst_slope, std::abs(v.deriv_plus), std::abs(v.deriv_minus)});
  }
  return out;
}

IntroExampleReport intro_example_check(const LabOptions& options) {
  const NormSpec spec = NormSpec::lp(2.0, 3);
  const LinearOperator t = LinearOperator::diagonal({1.0, 0.5, 0.5});
  const LinearOperator a = LinearOperator::diagonal({0.0, 1.0, 0.0});
  const NormAttainmentSolver solver(spec, options.search);
  IntroExampleReport r;
  r.t_perp_a_direct = op_bj_orthogonal_direct(solver, t, a, options.tau);
  r.a_perp_t_direct = op_bj_orthogonal_direct(solver, a, t, options.tau);
  r.t_perp_a_via = op_bj_orthogonal_via_attainment(solver, solver.solve(t), t, a, options.tau);
  r.a_perp_t_via = op_bj_orthogonal_via_attainment(solver, solver.solve(a), a, t, options.tau);
  r.holds = r.t_perp_a_direct.decision == Decision::Orthogonal &&
            r.a_perp_t_direct.decision == Decision::NotOrthogonal &&
            r.t_perp_a_via.decision == r.t_perp_a_direct.decision &&
            r.a_perp_t_via.decision == r.a_perp_t_direct.decision;
  return r;
}

}  // namespace bjortho
