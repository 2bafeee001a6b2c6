#include "bjortho/bj_vectors.hpp"

#include <algorithm>
#include <cmath>

#include "bjortho/minimize.hpp"
#include "bjortho/rng.hpp"

namespace bjortho {

std::string_view decision_name(Decision d) {
  switch (d) {
    case Decision::Orthogonal: return "ORTHOGONAL";
    case Decision::NotOrthogonal: return "NOT_ORTHOGONAL";
    case Decision::Indeterminate: return "INDETERMINATE";
  }
  return "UNKNOWN";
}

std::string_view symmetry_verdict_name(SymmetryVerdict v, bool left) {
  if (v == SymmetryVerdict::Refuted) return "REFUTED";
  return left ? "LEFT_SYMMETRIC_UP_TO_BUDGET" : "RIGHT_SYMMETRIC_UP_TO_BUDGET";
}

Decision decide(double margin, double deriv_plus, double deriv_minus, double tau) {
  if (margin < -tau) return Decision::NotOrthogonal;
  if (deriv_minus <= tau && deriv_plus >= -tau) return Decision::Orthogonal;
  return Decision::Indeterminate;
}

OrthoVerdict is_bj_orthogonal(const NormSpec& spec, const Vec& x, const Vec& y, double tau) {
  check_dim(spec, x);
  check_dim(spec, y);
  OrthoVerdict v;
  const double nx = eval_norm(spec, x);
  const double ny = eval_norm(spec, y);
  if (nx == 0.0) {
    v.decision = Decision::Orthogonal;
    v.degenerate = true;
    return v;
  }
  if (ny == 0.0) {
    v.decision = Decision::Orthogonal;
    return v;
  }
  const Vec xh = x / nx;
  const Vec yh = y / ny;
  v.deriv_plus = dir_deriv_plus(spec, xh, yh);
  v.deriv_minus = dir_deriv_minus(spec, xh, yh);

  auto f = [&](double t) { return eval_norm(spec, xh + t * yh); };
  const double f0 = f(0.0);
  const auto [lo, hi] = grow_bracket(f, 0.0, 2.0);
  const Minimum1d m = golden_section(f, lo, hi, 1e-12);
  if (m.value < f0) {
    v.margin = (m.value - f0) / f0;
    v.lambda_star = m.arg * nx / ny;
  }
  v.decision = decide(v.margin, v.deriv_plus, v.deriv_minus, tau);
  return v;
}

bool in_plus(const NormSpec& spec, const Vec& x, const Vec& y, double tau) {
  const double ny = eval_norm(spec, y);
  if (ny == 0.0) return true;
  return dir_deriv_plus(spec, normalized(spec, x), y / ny) >= -tau;
}

bool in_minus(const NormSpec& spec, const Vec& x, const Vec& y, double tau) {
  const double ny = eval_norm(spec, y);
  if (ny == 0.0) return true;
  return dir_deriv_minus(spec, normalized(spec, x), y / ny) <= tau;
}

double james_foot(const NormSpec& spec, const Vec& x, const Vec& y) {
  check_dim(spec, y);
  const double nx = eval_norm(spec, x);
  if (nx == 0.0) throw Error(ErrorCode::ZeroVector, "james_foot needs a nonzero base vector");
  const double ny = eval_norm(spec, y);
  if (ny == 0.0) return 0.0;
  const Vec xh = x / nx;
  // Right derivative of b -> ||y + b xh||; nondecreasing by convexity and
  // the minimiser lies in [-2||y||, 2||y||].
  auto slope = [&](double b) {
    const Vec r = y + b * xh;
    if (eval_norm(spec, r) == 0.0) return 1.0;
    return dir_deriv_plus(spec, r, xh);
  };
  const double b = bisect_nonnegative(slope, -2.0 * ny, 2.0 * ny, 0.0);
  return b / nx;
}

std::vector<Vec> kernel_basis(const NormSpec& spec, const Functional& f) {
  const int n = spec.dim();
  Eigen::Index k = 0;
  f.coeffs.cwiseAbs().maxCoeff(&k);
  if (f.coeffs[k] == 0.0) throw Error(ErrorCode::ZeroVector, "kernel of the zero functional is everything");
  std::vector<Vec> basis;
  for (int j = 0; j < n; ++j) {
    if (j == k) continue;
    Vec v = Vec::Zero(n);
    v[j] = 1.0;
    v[k] = -f.coeffs[j] / f.coeffs[k];
    basis.push_back(normalized(spec, v));
  }
  return basis;
}

std::vector<Vec> orthogonal_hyperplane(const NormSpec& spec, const Vec& x) {
  return kernel_basis(spec, supporting_functional(spec, x));
}

namespace {

Vec independent_direction(const Vec& x, Rng& rng) {
  const Vec xe = x.normalized();
  while (true) {
    Vec r = rng.gaussian_vector(static_cast<int>(x.size()));
    const double nr = r.norm();
    if (nr > 0.0 && std::abs(xe.dot(r)) < 0.95 * nr) return r;
  }
}

}  // namespace

Vec find_orthogonal_to(const NormSpec& spec, const Vec& x, std::uint64_t seed) {
  check_dim(spec, x);
  if (eval_norm(spec, x) == 0.0) throw Error(ErrorCode::ZeroVector, "no direction is singled out by 0");
  if (spec.dim() < 2) throw Error(ErrorCode::DimMismatch, "orthogonal complements need dim >= 2");
  Rng rng(seed);
  const Vec r = independent_direction(x, rng);
  return normalized(spec, r + james_foot(spec, x, r) * x);
}

Vec find_orthogonal_from(const NormSpec& spec, const Vec& x, std::uint64_t seed) {
  check_dim(spec, x);
  const double nx = eval_norm(spec, x);
  if (nx == 0.0) throw Error(ErrorCode::ZeroVector, "no direction is singled out by 0");
  if (spec.dim() < 2) throw Error(ErrorCode::DimMismatch, "orthogonal complements need dim >= 2");
  Rng rng(seed);
  const Vec xh = x / nx;
  while (true) {
    const Vec r = independent_direction(x, rng);
    // rho'(x, r + a x) = rho'(x, r) + a ||x||: centre the two one-sided slopes on 0.
    const double dp = dir_deriv_plus(spec, xh, r);
    const double dm = dir_deriv_minus(spec, xh, r);
    const Vec y = r - 0.5 * (dp + dm) * xh;
    if (eval_norm(spec, y) > 0.0) return normalized(spec, y);
  }
}

SymmetryProbe is_left_symmetric_point(const NormSpec& spec, const Vec& x, int budget, std::uint64_t seed,
                                      double tau) {
  const Vec xh = normalized(spec, x);
  std::vector<Vec> fixed;
  if (is_smooth_point(spec, xh)) fixed = orthogonal_hyperplane(spec, xh);
  SymmetryProbe probe;
  for (int k = 0; k < std::max(budget, 1); ++k) {
    const Vec y = k < static_cast<int>(fixed.size())
                      ? fixed[static_cast<std::size_t>(k)]
                      : find_orthogonal_from(spec, xh, derive_seed(seed, static_cast<std::uint64_t>(k)));
    ++probe.examined;
    if (is_bj_orthogonal(spec, y, xh, tau).decision == Decision::NotOrthogonal) {
      probe.verdict = SymmetryVerdict::Refuted;
      probe.witness = y;
      return probe;
    }
  }
  return probe;
}

SymmetryProbe is_right_symmetric_point(const NormSpec& spec, const Vec& x, int budget, std::uint64_t seed,
                                       double tau) {
  const Vec xh = normalized(spec, x);
  SymmetryProbe probe;
  for (int k = 0; k < std::max(budget, 1); ++k) {
    const Vec y = find_orthogonal_to(spec, xh, derive_seed(seed, static_cast<std::uint64_t>(k)));
    ++probe.examined;
    if (is_bj_orthogonal(spec, xh, y, tau).decision == Decision::NotOrthogonal) {
      probe.verdict = SymmetryVerdict::Refuted;
      probe.witness = y;
      return probe;
    }
  }
  return probe;
}

}  // namespace bjortho
