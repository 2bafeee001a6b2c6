#pragma once

// Norm families on R^n: evaluation, one-sided directional derivatives,
// supporting functionals (subgradients of the norm) and sphere sampling.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bjortho/error.hpp"
#include "bjortho/kernels.hpp"

namespace bjortho {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class NormFamily { Lp, WeightedLp, Polyhedral };

/// Relative tolerance used to decide which pieces of a non-smooth norm are
/// active at a point (zero coordinates for p = 1, maximal terms for p = inf
/// and polyhedral norms).
inline constexpr double kActiveRelTol = 1e-10;

/// Closed-form norm identities are checked to this relative accuracy.
inline constexpr double kTauRel = 1e-10;

/// Grid-certified claims (e.g. dual norms by sphere search) use this slack.
inline constexpr double kTauGrid = 1e-6;

class NormSpec {
 public:
  /// p may be +infinity. Throws InvalidSpec for p < 1 or dim < 1.
  static NormSpec lp(double p, int dim);
  /// Norm (sum_i w_i |x_i|^p)^(1/p); for p = inf, max_i w_i |x_i|.
  static NormSpec weighted_lp(double p, std::vector<double> weights);
  /// Norm max_k |<f_k, x>| over the rows f_k; rows must span R^n.
  static NormSpec polyhedral(Mat functionals);

  /// Parses `lp:<p>:<dim>`, `wlp:<p>:<w1,...,wn>` or `poly:<f11,f12;f21,f22;...>`.
  /// p accepts `inf`.
  static NormSpec parse(std::string_view text);
  /// Canonical text form; parse(to_string()) reproduces it exactly.
  std::string to_string() const;

  NormFamily family() const { return family_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  bool p_is_inf() const;
  const Vec& weights() const { return weights_; }
  const Mat& functionals() const { return functionals_; }

  bool is_strictly_convex() const;
  bool is_smooth() const;

  /// Precomputed parameters for the batched kernels.
  const kernels::NormParams& kernel_params() const { return params_; }

  bool operator==(const NormSpec& other) const;

 private:
  NormSpec() = default;

  NormFamily family_ = NormFamily::Lp;
  int dim_ = 0;
  double p_ = 2.0;
  Vec weights_;
  Mat functionals_;
  kernels::NormParams params_;
};

/// A linear functional on R^n under the standard pairing.
struct Functional {
  Vec coeffs;

  double operator()(const Vec& x) const { return coeffs.dot(x); }
};

double eval_norm(const NormSpec& spec, const Vec& x);

/// One-sided derivatives of t -> ||x + t y|| at t = 0. Throws ZeroVector for x = 0.
double dir_deriv_plus(const NormSpec& spec, const Vec& x, const Vec& y);
double dir_deriv_minus(const NormSpec& spec, const Vec& x, const Vec& y);

/// Element g of the subdifferential of the norm at x that maximises
/// (sense > 0) or minimises (sense < 0) g(y). Every such g has g(x) = ||x||
/// and dual norm 1.
Functional extreme_subgradient(const NormSpec& spec, const Vec& x, const Vec& y, int sense);

/// True when x has a unique supporting functional.
bool is_smooth_point(const NormSpec& spec, const Vec& x);

/// The unique norm-one functional f with f(x) = ||x||. Throws NotSmoothPoint
/// at a corner of the unit ball.
Functional supporting_functional(const NormSpec& spec, const Vec& x);

/// A supporting functional of x vanishing on y, if one exists. By James'
/// characterisation this exists iff x is Birkhoff-James orthogonal to y.
std::optional<Functional> supporting_functional_annihilating(const NormSpec& spec, const Vec& x,
                                                             const Vec& y, double tol);

/// Norm of f in the dual space (closed form for every family).
double dual_norm(const NormSpec& spec, const Functional& f);

/// `count` unit vectors (in the spec norm) from normalised Gaussian directions.
/// Deterministic in `seed`.
std::vector<Vec> sphere_sample(const NormSpec& spec, int count, std::uint64_t seed);

/// x / ||x||. Throws ZeroVector for x = 0.
Vec normalized(const NormSpec& spec, const Vec& x);

void check_dim(const NormSpec& spec, const Vec& x);

/// Parses a comma-separated list of decimal literals.
Vec parse_vector(std::string_view text);
/// Parses one decimal literal (also `inf`); bit-exact round trip via from_chars.
double parse_real(std::string_view text);
/// Shortest decimal form that parses back to the same double.
std::string format_real(double value);

}  // namespace bjortho
