#include "bjortho/operator_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/tools/minima.hpp>

#include "bjortho/minimize.hpp"
#include "bjortho/rng.hpp"

namespace bjortho {

std::string_view attainment_status_name(AttainmentStatus s) {
  switch (s) {
    case AttainmentStatus::Zero: return "ZERO";
    case AttainmentStatus::Resolved: return "RESOLVED";
    case AttainmentStatus::Continuum: return "MT_CONTINUUM";
    case AttainmentStatus::Ambiguous: return "MT_UNRESOLVED";
  }
  return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator LinearOperator::diagonal(const std::vector<double>& d) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return LinearOperator(std::move(m));
}

LinearOperator LinearOperator::parse(std::string_view text) {
  std::vector<Vec> rows;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(';', start);
    rows.push_back(parse_vector(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Mat m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (rows[static_cast<std::size_t>(r)].size() != n)
      throw Error(ErrorCode::ParseError, "matrix must be square: row " + std::to_string(r) + " has " +
                                             std::to_string(rows[static_cast<std::size_t>(r)].size()) +
                                             " entries, expected " + std::to_string(n));
    m.row(r) = rows[static_cast<std::size_t>(r)].transpose();
  }
  return LinearOperator(std::move(m));
}

std::string LinearOperator::to_string() const {
  std::string s;
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    if (r) s += ';';
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c) s += ',';
      s += format_real(matrix(r, c));
    }
  }
  return s;
}

void check_dim(const NormSpec& spec, const LinearOperator& t) {
  if (t.matrix.rows() != spec.dim() || t.matrix.cols() != spec.dim())
    throw Error(ErrorCode::DimMismatch, "operator of size " + std::to_string(t.matrix.rows()) + "x" +
                                            std::to_string(t.matrix.cols()) + " on R^" + std::to_string(spec.dim()));
}

LinearOperator operator_from_basis(const std::vector<Vec>& basis, const std::vector<Vec>& images) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Mat b(n, n), img(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    b.col(j) = basis[static_cast<std::size_t>(j)];
    img.col(j) = images[static_cast<std::size_t>(j)];
  }
  Eigen::FullPivLU<Mat> lu(b.transpose());
  if (!lu.isInvertible()) throw Error(ErrorCode::HypothesisFailed, "basis vectors are linearly dependent");
  return LinearOperator(Mat(lu.solve(img.transpose()).transpose()));
}

LinearOperator rank_one(const Vec& image, const Functional& f) {
  return LinearOperator(Mat(image * f.coeffs.transpose()));
}

double norm_ratio(const NormSpec& spec, const LinearOperator& t, const Vec& x) {
  return eval_norm(spec, t(x)) / eval_norm(spec, x);
}

// ---------------------------------------------------------------------------
// Sphere search

SearchOptions SearchOptions::doubled() const {
  SearchOptions o = *this;
  o.grid_2d *= 2;
  o.samples_nd *= 2;
  o.top_k *= 2;
  return o;
}

namespace {

double antipodal_distance(const Vec& a, const Vec& b) {
  return std::min((a - b).norm(), (a + b).norm());
}

Vec canonical_sign(Vec x) {
  Eigen::Index k = 0;
  const double m = x.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) >= m * (1.0 - 1e-12)) {
      k = i;
      break;
    }
  }
  return x[k] < 0.0 ? Vec(-x) : x;
}

struct ScratchBuffers {
  std::vector<double> images;
  std::vector<double> image_norms;
};

ScratchBuffers& scratch() {
  thread_local ScratchBuffers buffers;
  return buffers;
}

}  // namespace

NormAttainmentSolver::NormAttainmentSolver(NormSpec spec, SearchOptions options)
    : spec_(std::move(spec)), options_(options) {
  const int n = spec_.dim();
  std::vector<Vec> dirs;
  if (n == 1) {
    dirs.push_back(Vec::Ones(1));
  } else if (n == 2) {
    const int m = std::max(options_.grid_2d, 8);
    for (int i = 0; i < m; ++i) {
      const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
      Vec d(2);
      d << std::cos(theta), std::sin(theta);
      dirs.push_back(d);
    }
  } else {
    Rng rng(options_.grid_seed);
    while (static_cast<int>(dirs.size()) < std::max(options_.samples_nd, 1)) {
      Vec d = rng.gaussian_vector(n);
      const double nd = d.norm();
      if (nd > 0.0) dirs.push_back(d / nd);
    }
  }
  count_ = dirs.size();
  grid_.resize(count_ * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < count_; ++i)
    for (int j = 0; j < n; ++j) grid_[static_cast<std::size_t>(j) * count_ + i] = dirs[i][j];
  grid_norms_.resize(count_);
  kernels::norm_batch(options_.isa, spec_.kernel_params(), grid_.data(), count_, count_, grid_norms_.data());
}

NormAttainmentSolver::Refined NormAttainmentSolver::refine(const LinearOperator& t, Vec x) const {
  const int n = spec_.dim();
  auto g = [&](const Vec& v) {
    const double nv = eval_norm(spec_, v);
    return nv == 0.0 ? 0.0 : eval_norm(spec_, t(v)) / nv;
  };
  x.normalize();
  double value = g(x);

  // Line maximisation of g along a direction, with bracket expansion.
  auto line_search = [&](const Vec& dir, double step) -> double {
    double moved = 0.0;
    for (int expand = 0; expand < 6; ++expand) {
      auto phi = [&](double s) { return -g(x + s * dir); };
      const auto [arg, neg] = boost::math::tools::brent_find_minima(phi, -step, step, 26);
      if (-neg > value) {
        x = (x + arg * dir).normalized();
        moved += std::abs(arg);
        value = g(x);
      }
      if (std::abs(arg) < 0.9 * step) break;
      step *= 4.0;
    }
    return moved;
  };

  auto snap_small = [&]() {
    const double big = x.cwiseAbs().maxCoeff();
    for (int j = 0; j < n; ++j) {
      if (x[j] == 0.0 || std::abs(x[j]) > 1e-6 * big) continue;
      Vec y = x;
      y[j] = 0.0;
      y.normalize();
      const double gy = g(y);
      if (gy >= value * (1.0 - 1e-15)) {
        x = y;
        value = std::max(value, gy);
      }
    }
  };

  // Sup-norm balls are cubes and a convex ratio peaks at a vertex, which the
  // coordinate line searches only approach. Push near-active coordinates
  // onto the active face.
  auto snap_cube = [&]() {
    if (!spec_.p_is_inf() || spec_.family() == NormFamily::Polyhedral) return;
    auto w = [&](int j) { return spec_.weights().size() == static_cast<Eigen::Index>(n) ? spec_.weights()[j] : 1.0; };
    double m = 0.0;
    for (int j = 0; j < n; ++j) m = std::max(m, w(j) * std::abs(x[j]));
    Vec y = x;
    for (int j = 0; j < n; ++j)
      if (w(j) * std::abs(x[j]) >= (1.0 - 1e-4) * m) y[j] = std::copysign(m / w(j), x[j]);
    y.normalize();
    const double gy = g(y);
    if (gy >= value) {
      x = y;
      value = gy;
    }
  };

  if (n > 1) {
    double step = n == 2 ? 4.0 * std::numbers::pi / std::max(options_.grid_2d, 8) : 0.05;
    for (int sweep = 0; sweep < 60; ++sweep) {
      const Vec before = x;
      const double value_before = value;
      double largest = 0.0;
      for (int j = 0; j < n; ++j) largest = std::max(largest, line_search(Vec::Unit(n, j), step));
      const Vec pattern = x - before;
      if (pattern.norm() > 1e-12) line_search(pattern / pattern.norm(), std::max(pattern.norm(), 1e-9));
      if (value - value_before <= 1e-15 * value && sweep > 0) break;
      step = std::max(4.0 * largest, 1e-7);
    }
    snap_small();
    snap_cube();

    if (spec_.is_smooth() && value > 0.0) {
      // Newton polish on the tangent space using the analytic gradient
      // grad g(v) = T^t f_{Tv} / |v| - |Tv| f_v / |v|^2.
      auto grad = [&](const Vec& v) -> Vec {
        const double nv = eval_norm(spec_, v);
        const Vec tv = t(v);
        const double ntv = eval_norm(spec_, tv);
        if (ntv == 0.0) return Vec::Zero(n);
        const Vec fv = extreme_subgradient(spec_, v, v, +1).coeffs;
        const Vec ftv = extreme_subgradient(spec_, tv, tv, +1).coeffs;
        return t.matrix.transpose() * ftv / nv - ntv * fv / (nv * nv);
      };
      for (int it = 0; it < 8; ++it) {
        const Vec gx = grad(x);
        const double gnorm = gx.norm();
        if (gnorm < 1e-15) break;
        Eigen::HouseholderQR<Mat> qr(x);
        const Mat basis = Mat(qr.householderQ()).rightCols(n - 1);
        Mat h(n - 1, n - 1);
        const double hstep = 1e-6;
        for (int k = 0; k < n - 1; ++k) {
          const Vec e = basis.col(k);
          h.col(k) = basis.transpose() * (grad(x + hstep * e) - grad(x - hstep * e)) / (2.0 * hstep);
        }
        h = 0.5 * (h + h.transpose()).eval();
        const Vec rhs = basis.transpose() * gx;
        const Vec delta = basis * h.fullPivLu().solve(-rhs);
        if (!delta.allFinite() || delta.norm() > 0.1) break;
        const Vec candidate = (x + delta).normalized();
        const double cv = g(candidate);
        if (cv < value * (1.0 - 1e-14) || grad(candidate).norm() >= gnorm) break;
        x = candidate;
        value = std::max(cv, value);
      }
      snap_small();
    }
  }
  const double nx = eval_norm(spec_, x);
  x /= nx;
  return {canonical_sign(x), g(x)};
}

std::vector<NormAttainmentSolver::Refined> NormAttainmentSolver::search(const LinearOperator& t,
                                                                        std::vector<double>* values) const {
  check_dim(spec_, t);
  const int n = spec_.dim();
  ScratchBuffers& buf = scratch();
  buf.images.resize(count_ * static_cast<std::size_t>(n));
  buf.image_norms.resize(count_);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rowmajor = t.matrix;
  kernels::matvec_batch(options_.isa, rowmajor.data(), n, n, grid_.data(), count_, count_, buf.images.data(),
                        count_);
  kernels::norm_batch(options_.isa, spec_.kernel_params(), buf.images.data(), count_, count_,
                      buf.image_norms.data());
  std::vector<double> local;
  std::vector<double>& ratio = values ? *values : local;
  ratio.resize(count_);
  for (std::size_t i = 0; i < count_; ++i) ratio[i] = buf.image_norms[i] / grid_norms_[i];

  auto direction = [&](std::size_t i) {
    Vec d(n);
    for (int j = 0; j < n; ++j) d[j] = grid_[static_cast<std::size_t>(j) * count_ + i];
    return d;
  };

  // Candidate pool: cyclic local maxima on the half circle in 2-D, the
  // top_k samples otherwise. Ties resolve to the lowest sample index.
  std::vector<std::size_t> pool;
  if (n == 2) {
    for (std::size_t i = 0; i < count_; ++i) {
      const double left = ratio[(i + count_ - 1) % count_];
      const double right = ratio[(i + 1) % count_];
      if (ratio[i] >= left && ratio[i] >= right) pool.push_back(i);
    }
  } else {
    pool.resize(count_);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
  }
  auto better = [&](std::size_t a, std::size_t b) { return ratio[a] > ratio[b] || (ratio[a] == ratio[b] && a < b); };
  const std::size_t keep = n == 2 ? pool.size() : std::min<std::size_t>(pool.size(), static_cast<std::size_t>(std::max(options_.top_k, 1)));
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(), better);
  pool.resize(keep);

  std::vector<Vec> seeds;
  const double top = pool.empty() ? 0.0 : ratio[pool.front()];
  for (std::size_t idx : pool) {
    if (static_cast<int>(seeds.size()) >= options_.max_seeds) break;
    if (ratio[idx] < top * 0.95) break;
    const Vec d = direction(idx);
    bool distinct = true;
    for (const Vec& s : seeds)
      if (antipodal_distance(s, d) < options_.seed_radius) distinct = false;
    if (distinct) seeds.push_back(d);
  }

  std::vector<Refined> refined;
  for (const Vec& s : seeds) refined.push_back(refine(t, s));
  std::stable_sort(refined.begin(), refined.end(),
                   [](const Refined& a, const Refined& b) { return a.value > b.value; });
  return refined;
}

double NormAttainmentSolver::norm(const LinearOperator& t) const {
  check_dim(spec_, t);
  if (t.is_zero()) return 0.0;
  std::vector<double> ratio;
  const auto refined = search(t, &ratio);
  double op = *std::max_element(ratio.begin(), ratio.end());
  for (const auto& r : refined) op = std::max(op, r.value);
  return op;
}

NormAttainment NormAttainmentSolver::solve(const LinearOperator& t) const {
  check_dim(spec_, t);
  NormAttainment out;
  if (t.is_zero()) return out;
  std::vector<double> ratio;
  const auto refined = search(t, &ratio);
  double op = *std::max_element(ratio.begin(), ratio.end());
  for (const auto& r : refined) op = std::max(op, r.value);
  out.op_norm = op;

  double second = 0.0;
  for (const auto& r : refined) {
    const Vec xe = r.x.normalized();
    bool near_existing = false;
    for (const Vec& m : out.maximizers)
      if (antipodal_distance(m.normalized(), xe) < 1e-3) near_existing = true;
    if (r.value >= op * (1.0 - kTauMt)) {
      if (!near_existing) out.maximizers.push_back(r.x);
    } else if (!near_existing) {
      second = std::max(second, r.value);
    }
  }

  const int n = spec_.dim();
  double outside = 0.0;
  std::vector<Vec> centres;
  for (const Vec& m : out.maximizers) centres.push_back(m.normalized());
  for (std::size_t i = 0; i < count_; ++i) {
    if (ratio[i] <= outside) continue;
    Vec d(n);
    for (int j = 0; j < n; ++j) d[j] = grid_[static_cast<std::size_t>(j) * count_ + i];
    bool inside = false;
    for (const Vec& c : centres)
      if (antipodal_distance(c, d) < options_.seed_radius) inside = true;
    if (!inside) outside = ratio[i];
  }
  out.cluster_gap = op - std::max(second, outside);
  const double rel = out.cluster_gap / op;
  if (rel <= kTauContinuum)
    out.status = AttainmentStatus::Continuum;
  else if (rel < kTauGap)
    out.status = AttainmentStatus::Ambiguous;
  else
    out.status = AttainmentStatus::Resolved;
  return out;
}

NormAttainment operator_norm(const NormSpec& spec, const LinearOperator& t, const SearchOptions& options) {
  check_dim(spec, t);
  return NormAttainmentSolver(spec, options).solve(t);
}

// ---------------------------------------------------------------------------
// Operator orthogonality

OrthoVerdict op_bj_orthogonal_direct(const NormAttainmentSolver& solver, const LinearOperator& t,
                                     const LinearOperator& a, double tau) {
  check_dim(solver.spec(), t);
  check_dim(solver.spec(), a);
  OrthoVerdict v;
  const double nt = solver.norm(t);
  if (nt == 0.0) {
    v.decision = Decision::Orthogonal;
    v.degenerate = true;
    return v;
  }
  const double na = solver.norm(a);
  if (na == 0.0) {
    v.decision = Decision::Orthogonal;
    return v;
  }
  const LinearOperator th = (1.0 / nt) * t;
  const LinearOperator ah = (1.0 / na) * a;
  auto f = [&](double lambda) { return solver.norm(th + lambda * ah); };
  const NormAttainment att = solver.solve(th);
  const double f0 = att.op_norm;

  // lambda -> ||T + lambda A|| is smooth on a radius comparable to the
  // relative gap between maximiser basins, so the step shrinks with it.
  const double gap = att.cluster_gap / att.op_norm;
  const double h = att.status == AttainmentStatus::Resolved ? std::clamp(0.05 * gap, 1e-5, 1e-3) : 1e-4;
  auto richardson = [&](double sign) {
    auto quotient = [&](double step) { return sign * (f(sign * step) - f0) / step; };
    return (8.0 * quotient(h / 4.0) - 6.0 * quotient(h / 2.0) + quotient(h)) / 3.0;
  };
  v.deriv_plus = richardson(+1.0);
  v.deriv_minus = richardson(-1.0);

  const auto [lo, hi] = grow_bracket(f, 0.0, 2.0);
  const Minimum1d m = golden_section(f, lo, hi, 1e-12);
  if (m.value < f0) {
    v.margin = (m.value - f0) / f0;
    v.lambda_star = m.arg * nt / na;
  }
  v.decision = decide(v.margin, v.deriv_plus, v.deriv_minus, tau);
  return v;
}

OrthoVerdict op_bj_orthogonal_direct(const NormSpec& spec, const LinearOperator& t, const LinearOperator& a,
                                     const SearchOptions& options, double tau) {
  check_dim(spec, t);
  return op_bj_orthogonal_direct(NormAttainmentSolver(spec, options), t, a, tau);
}

OrthoVerdict op_bj_orthogonal_via_attainment(const NormAttainmentSolver& solver, const NormAttainment& attainment,
                                             const LinearOperator& t, const LinearOperator& a, double tau) {
  const NormSpec& spec = solver.spec();
  check_dim(spec, t);
  check_dim(spec, a);
  OrthoVerdict v;
  if (attainment.status == AttainmentStatus::Zero) {
    v.decision = Decision::Orthogonal;
    v.degenerate = true;
    return v;
  }
  if (attainment.status != AttainmentStatus::Resolved)
    throw Error(ErrorCode::MtUnresolved, std::string("norm attainment set is ") +
                                             std::string(attainment_status_name(attainment.status)));
  // Slopes are taken on T/||T|| and A/||A||, the same scaling as the direct
  // route, so that a tiny Ax is not blown up to a unit direction.
  const double na = solver.norm(a);
  if (na == 0.0) {
    v.decision = Decision::Orthogonal;
    return v;
  }
  double best_plus = -std::numeric_limits<double>::infinity();
  double best_minus = std::numeric_limits<double>::infinity();
  for (const Vec& x : attainment.maximizers) {
    const Vec tx = t(x) / attainment.op_norm;
    const Vec ax = a(x) / na;
    best_plus = std::max(best_plus, dir_deriv_plus(spec, tx, ax));
    best_minus = std::min(best_minus, dir_deriv_minus(spec, tx, ax));
  }
  v.deriv_plus = best_plus;
  v.deriv_minus = best_minus;
  v.margin = -std::max({0.0, -best_plus, best_minus});
  v.decision = (best_plus >= -tau && best_minus <= tau) ? Decision::Orthogonal : Decision::NotOrthogonal;
  return v;
}

OrthoVerdict op_bj_orthogonal_via_attainment(const NormSpec& spec, const LinearOperator& t,
                                             const LinearOperator& a, const SearchOptions& options, double tau) {
  check_dim(spec, t);
  const NormAttainmentSolver solver(spec, options);
  return op_bj_orthogonal_via_attainment(solver, solver.solve(t), t, a, tau);
}

SmoothOperatorProxy is_smooth_operator_proxy(const NormSpec& spec, const LinearOperator& t,
                                             const SearchOptions& options) {
  check_dim(spec, t);
  if (t.is_zero()) throw Error(ErrorCode::ZeroOperator, "the zero operator attains its norm everywhere");
  SmoothOperatorProxy proxy;
  proxy.attainment = operator_norm(spec, t, options);
  if (proxy.attainment.status == AttainmentStatus::Ambiguous)
    throw Error(ErrorCode::MtUnresolved, "norm attainment set is numerically ambiguous");
  proxy.antipodal_mt = proxy.attainment.single_pair();
  if (proxy.antipodal_mt) {
    proxy.x0 = proxy.attainment.maximizers.front();
    proxy.image_smooth = is_smooth_point(spec, t(*proxy.x0));
  }
  return proxy;
}

}  // namespace bjortho
