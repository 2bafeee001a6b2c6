#include "bjortho/norm_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "bjortho/rng.hpp"

namespace bjortho {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double weight(const NormSpec& spec, int i) {
  return spec.family() == NormFamily::WeightedLp ? spec.weights()[i] : 1.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Text formats

double parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || std::isnan(value))
    throw Error(ErrorCode::ParseError, "not a real number: '" + std::string(text) + "'");
  return value;
}

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

Vec parse_vector(std::string_view text) {
  const auto parts = split(trim(text), ',');
  Vec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = parse_real(parts[i]);
    if (!std::isfinite(v[static_cast<Eigen::Index>(i)]))
      throw Error(ErrorCode::ParseError, "vector entries must be finite");
  }
  return v;
}

// ---------------------------------------------------------------------------
// NormSpec

NormSpec NormSpec::lp(double p, int dim) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidSpec, "p must be >= 1");
  if (dim < 1) throw Error(ErrorCode::InvalidSpec, "dimension must be positive");
  NormSpec spec;
  spec.family_ = NormFamily::Lp;
  spec.dim_ = dim;
  spec.p_ = p;
  spec.params_ = kernels::NormParams::from(spec);
  return spec;
}

NormSpec NormSpec::weighted_lp(double p, std::vector<double> weights) {
  if (!(p >= 1.0)) throw Error(ErrorCode::InvalidSpec, "p must be >= 1");
  if (weights.empty()) throw Error(ErrorCode::InvalidSpec, "at least one weight required");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidSpec, "weights must be positive and finite");
  NormSpec spec;
  spec.family_ = NormFamily::WeightedLp;
  spec.dim_ = static_cast<int>(weights.size());
  spec.p_ = p;
  spec.weights_ = Eigen::Map<const Vec>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  spec.params_ = kernels::NormParams::from(spec);
  return spec;
}

NormSpec NormSpec::polyhedral(Mat functionals) {
  if (functionals.rows() < 1 || functionals.cols() < 1)
    throw Error(ErrorCode::InvalidSpec, "polyhedral norm needs at least one functional");
  if (!functionals.allFinite()) throw Error(ErrorCode::InvalidSpec, "functionals must be finite");
  Eigen::FullPivLU<Mat> lu(functionals);
  if (lu.rank() < functionals.cols())
    throw Error(ErrorCode::InvalidSpec, "functionals must span R^n");
  NormSpec spec;
  spec.family_ = NormFamily::Polyhedral;
  spec.dim_ = static_cast<int>(functionals.cols());
  spec.p_ = std::numeric_limits<double>::infinity();
  spec.functionals_ = std::move(functionals);
  spec.params_ = kernels::NormParams::from(spec);
  return spec;
}

NormSpec NormSpec::parse(std::string_view text) {
  text = trim(text);
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorCode::ParseError, "norm spec needs a family prefix: '" + std::string(text) + "'");
  const std::string_view family = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);
  try {
    if (family == "lp" || family == "wlp") {
      const std::size_t colon2 = rest.find(':');
      if (colon2 == std::string_view::npos)
        throw Error(ErrorCode::ParseError, "expected <p>:<...> after '" + std::string(family) + ":'");
      const double p = parse_real(rest.substr(0, colon2));
      const std::string_view tail = trim(rest.substr(colon2 + 1));
      if (family == "lp") {
        int dim = 0;
        const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), dim);
        if (tail.empty() || ec != std::errc() || ptr != tail.data() + tail.size())
          throw Error(ErrorCode::ParseError, "bad dimension '" + std::string(tail) + "'");
        return lp(p, dim);
      }
      const Vec w = parse_vector(tail);
      return weighted_lp(p, std::vector<double>(w.data(), w.data() + w.size()));
    }
    if (family == "poly") {
      const auto rows = split(trim(rest), ';');
      std::vector<Vec> parsed;
      for (auto r : rows) parsed.push_back(parse_vector(r));
      const Eigen::Index n = parsed.front().size();
      Mat f(static_cast<Eigen::Index>(parsed.size()), n);
      for (std::size_t k = 0; k < parsed.size(); ++k) {
        if (parsed[k].size() != n) throw Error(ErrorCode::ParseError, "ragged functional rows");
        f.row(static_cast<Eigen::Index>(k)) = parsed[k].transpose();
      }
      return polyhedral(std::move(f));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidSpec) throw;
    throw Error(ErrorCode::ParseError, std::string(e.what()) + " in '" + std::string(text) + "'");
  }
  throw Error(ErrorCode::ParseError, "unknown norm family '" + std::string(family) + "'");
}

std::string NormSpec::to_string() const {
  auto join = [](const Vec& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += format_real(v[i]);
    }
    return s;
  };
  switch (family_) {
    case NormFamily::Lp: return "lp:" + format_real(p_) + ":" + std::to_string(dim_);
    case NormFamily::WeightedLp: return "wlp:" + format_real(p_) + ":" + join(weights_);
    case NormFamily::Polyhedral: {
      std::string s = "poly:";
      for (Eigen::Index k = 0; k < functionals_.rows(); ++k) {
        if (k) s += ';';
        s += join(functionals_.row(k).transpose());
      }
      return s;
    }
  }
  return {};
}

bool NormSpec::p_is_inf() const { return std::isinf(p_); }

bool NormSpec::is_strictly_convex() const {
  return family_ != NormFamily::Polyhedral && p_ > 1.0 && !std::isinf(p_);
}

// On the line every norm is a multiple of |x|, smooth away from 0.
bool NormSpec::is_smooth() const { return dim_ == 1 || is_strictly_convex(); }

bool NormSpec::operator==(const NormSpec& other) const {
  return family_ == other.family_ && dim_ == other.dim_ && p_ == other.p_ &&
         weights_.size() == other.weights_.size() && weights_ == other.weights_ &&
         functionals_.rows() == other.functionals_.rows() &&
         functionals_.cols() == other.functionals_.cols() && functionals_ == other.functionals_;
}

// ---------------------------------------------------------------------------
// Evaluation and derivatives

void check_dim(const NormSpec& spec, const Vec& x) {
  if (x.size() != spec.dim())
    throw Error(ErrorCode::DimMismatch, "vector of dimension " + std::to_string(x.size()) +
                                            " used with a norm on R^" + std::to_string(spec.dim()));
}

double eval_norm(const NormSpec& spec, const Vec& x) {
  check_dim(spec, x);
  return kernels::norm_one(spec.kernel_params(), x.data(), 1);
}

Vec normalized(const NormSpec& spec, const Vec& x) {
  const double n = eval_norm(spec, x);
  if (n == 0.0) throw Error(ErrorCode::ZeroVector, "cannot normalise the zero vector");
  return x / n;
}

Functional extreme_subgradient(const NormSpec& spec, const Vec& x, const Vec& y, int sense) {
  check_dim(spec, x);
  check_dim(spec, y);
  const double nx = eval_norm(spec, x);
  if (nx == 0.0) throw Error(ErrorCode::ZeroVector, "norm is not differentiable at 0");
  const int n = spec.dim();
  const double s = sense >= 0 ? 1.0 : -1.0;
  Vec g = Vec::Zero(n);

  if (spec.family() == NormFamily::Polyhedral) {
    const Mat& f = spec.functionals();
    double best = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < f.rows(); ++k) {
      const double v = f.row(k).dot(x);
      if (std::abs(v) < (1.0 - kActiveRelTol) * nx) continue;
      const Vec cand = sign_of(v) * f.row(k).transpose();
      const double score = s * cand.dot(y);
      if (score > best) {
        best = score;
        g = cand;
      }
    }
    return {g};
  }

  const double p = spec.p();
  if (std::isinf(p)) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double w = weight(spec, i);
      if (w * std::abs(x[i]) < (1.0 - kActiveRelTol) * nx) continue;
      const double score = s * sign_of(x[i]) * w * y[i];
      if (score > best) {
        best = score;
        g = Vec::Zero(n);
        g[i] = w * sign_of(x[i]);
      }
    }
    return {g};
  }
  if (p == 1.0) {
    for (int i = 0; i < n; ++i) {
      const double w = weight(spec, i);
      if (w * std::abs(x[i]) > kActiveRelTol * nx)
        g[i] = w * sign_of(x[i]);
      else
        g[i] = w * s * sign_of(y[i]);
    }
    return {g};
  }
  for (int i = 0; i < n; ++i)
    g[i] = weight(spec, i) * sign_of(x[i]) * std::pow(std::abs(x[i]) / nx, p - 1.0);
  return {g};
}

double dir_deriv_plus(const NormSpec& spec, const Vec& x, const Vec& y) {
  return extreme_subgradient(spec, x, y, +1)(y);
}

double dir_deriv_minus(const NormSpec& spec, const Vec& x, const Vec& y) {
  return extreme_subgradient(spec, x, y, -1)(y);
}

bool is_smooth_point(const NormSpec& spec, const Vec& x) {
  check_dim(spec, x);
  const double nx = eval_norm(spec, x);
  if (nx == 0.0) return false;
  if (spec.family() != NormFamily::Polyhedral && spec.p() > 1.0 && !spec.p_is_inf()) return true;
  // Non-smooth families: unique subgradient iff the extreme subgradients
  // agree in every coordinate direction.
  for (int i = 0; i < spec.dim(); ++i) {
    const Vec e = Vec::Unit(spec.dim(), i);
    const Vec hi = extreme_subgradient(spec, x, e, +1).coeffs;
    const Vec lo = extreme_subgradient(spec, x, e, -1).coeffs;
    if ((hi - lo).lpNorm<Eigen::Infinity>() > 1e-12 * std::max(1.0, hi.lpNorm<Eigen::Infinity>()))
      return false;
  }
  return true;
}

Functional supporting_functional(const NormSpec& spec, const Vec& x) {
  if (!is_smooth_point(spec, x)) {
    if (eval_norm(spec, x) == 0.0) throw Error(ErrorCode::ZeroVector, "no supporting functional at 0");
    throw Error(ErrorCode::NotSmoothPoint, "point has several supporting functionals");
  }
  return extreme_subgradient(spec, x, x, +1);
}

std::optional<Functional> supporting_functional_annihilating(const NormSpec& spec, const Vec& x,
                                                             const Vec& y, double tol) {
  const Functional hi = extreme_subgradient(spec, x, y, +1);
  const double ny = eval_norm(spec, y);
  if (ny == 0.0) return hi;
  const Functional lo = extreme_subgradient(spec, x, y, -1);
  const double a = hi(y) / ny;
  const double b = lo(y) / ny;
  if (a < -tol || b > tol) return std::nullopt;
  if (a <= 0.0) return hi;
  if (b >= 0.0) return lo;
  const double theta = a / (a - b);
  return Functional{(1.0 - theta) * hi.coeffs + theta * lo.coeffs};
}

double dual_norm(const NormSpec& spec, const Functional& f) {
  check_dim(spec, f.coeffs);
  const Vec& c = f.coeffs;
  const int n = spec.dim();
  if (spec.family() == NormFamily::Polyhedral) {
    // The dual ball is conv{±f_k}; its gauge at c is min sum |a_k| subject to
    // sum a_k f_k = c, attained on a basis of n rows.
    if (c.isZero(0.0)) return 0.0;
    const Mat& rows = spec.functionals();
    const int m = static_cast<int>(rows.rows());
    std::vector<int> pick(n);
    std::iota(pick.begin(), pick.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
      Mat basis(n, n);
      for (int j = 0; j < n; ++j) basis.col(j) = rows.row(pick[j]).transpose();
      Eigen::FullPivLU<Mat> lu(basis);
      if (lu.isInvertible()) best = std::min(best, lu.solve(c).lpNorm<1>());
      int k = n - 1;
      while (k >= 0 && pick[k] == m - n + k) --k;
      if (k < 0) break;
      ++pick[k];
      for (int j = k + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
  }
  const double p = spec.p();
  const bool weighted = spec.family() == NormFamily::WeightedLp;
  if (std::isinf(p)) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::abs(c[i]) / weight(spec, i);
    return sum;
  }
  if (p == 1.0) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) best = std::max(best, std::abs(c[i]) / weight(spec, i));
    return best;
  }
  const double q = p / (p - 1.0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(c[i]));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = std::pow(std::abs(c[i]) / scale, q);
    sum += weighted ? std::pow(weight(spec, i), 1.0 - q) * t : t;
  }
  return scale * std::pow(sum, 1.0 / q);
}

std::vector<Vec> sphere_sample(const NormSpec& spec, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  while (static_cast<int>(out.size()) < count) {
    Vec d = rng.gaussian_vector(spec.dim());
    const double nd = eval_norm(spec, d);
    if (nd == 0.0) continue;
    out.push_back(d / nd);
  }
  return out;
}

}  // namespace bjortho
