#pragma once

// Operator norms, norm-attainment sets and operator-level Birkhoff-James
// orthogonality on (R^n, spec).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bjortho/bj_vectors.hpp"
#include "bjortho/kernels.hpp"
#include "bjortho/norm_core.hpp"

namespace bjortho {

struct LinearOperator {
  Mat matrix;

  LinearOperator() = default;
  explicit LinearOperator(Mat m) : matrix(std::move(m)) {}

  static LinearOperator identity(int n) { return LinearOperator(Mat::Identity(n, n)); }
  static LinearOperator zero(int n) { return LinearOperator(Mat::Zero(n, n)); }
  static LinearOperator diagonal(const std::vector<double>& d);
  /// Rows separated by ';', entries by ',' (e.g. `1,0;0,0.5`).
  static LinearOperator parse(std::string_view text);
  std::string to_string() const;

  int dim() const { return static_cast<int>(matrix.rows()); }
  Vec operator()(const Vec& x) const { return matrix * x; }
  bool is_zero() const { return matrix.isZero(0.0); }

  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
    return LinearOperator(a.matrix + b.matrix);
  }
  friend LinearOperator operator*(double s, const LinearOperator& a) { return LinearOperator(s * a.matrix); }
};

/// Maximiser values within this relative distance of the norm belong to M_T.
inline constexpr double kTauMt = 1e-9;
/// Attainment sets whose cluster gap (relative) is below this are ambiguous.
inline constexpr double kTauGap = 1e-5;
/// A gap below this (relative) means the norm is attained far from every
/// reported maximiser: a continuum.
inline constexpr double kTauContinuum = 1e-8;

enum class AttainmentStatus { Zero, Resolved, Continuum, Ambiguous };

std::string_view attainment_status_name(AttainmentStatus s);

struct NormAttainment {
  double op_norm = 0.0;
  /// Unit maximisers, one per antipodal cluster, sign-canonicalised.
  std::vector<Vec> maximizers;
  /// op_norm minus the best value found away from every maximiser cluster.
  double cluster_gap = 0.0;
  AttainmentStatus status = AttainmentStatus::Zero;

  bool single_pair() const { return status == AttainmentStatus::Resolved && maximizers.size() == 1; }
};

struct SearchOptions {
  int grid_2d = 4096;        // angular grid on the half circle (dim 2)
  int samples_nd = 20000;    // quasi-uniform sphere samples (dim >= 3)
  int top_k = 50;            // best samples considered as refinement seeds
  int max_seeds = 8;         // distinct basins refined
  double seed_radius = 0.25; // Euclidean separation of seed basins / clusters
  std::uint64_t grid_seed = 0x5EED5EEDULL;
  kernels::Isa isa = kernels::active_isa();

  /// Same search at twice the resolution.
  SearchOptions doubled() const;
};

/// Sphere search for ||T|| and M_T. The grid is built once per solver and
/// the solver is immutable afterwards, so one instance may serve many
/// operators (and threads).
class NormAttainmentSolver {
 public:
  explicit NormAttainmentSolver(NormSpec spec, SearchOptions options = {});

  const NormSpec& spec() const { return spec_; }
  const SearchOptions& options() const { return options_; }

  NormAttainment solve(const LinearOperator& t) const;
  /// ||T|| only (skips the attainment-set bookkeeping).
  double norm(const LinearOperator& t) const;

 private:
  struct Refined {
    Vec x;  // unit in spec norm
    double value;
  };

  std::vector<Refined> search(const LinearOperator& t, std::vector<double>* values) const;
  Refined refine(const LinearOperator& t, Vec start) const;

  NormSpec spec_;
  SearchOptions options_;
  std::size_t count_ = 0;
  std::vector<double> grid_;        // SoA, dim x count, Euclidean-unit directions
  std::vector<double> grid_norms_;  // spec norm of each direction
};

/// ||Tx|| / ||x||.
double norm_ratio(const NormSpec& spec, const LinearOperator& t, const Vec& x);

NormAttainment operator_norm(const NormSpec& spec, const LinearOperator& t, const SearchOptions& options = {});

/// Direct route: minimises lambda -> ||T + lambda A|| by golden section.
/// Margin is relative to ||T||; derivatives are one-sided Richardson
/// difference quotients on T/||T|| and A/||A||.
OrthoVerdict op_bj_orthogonal_direct(const NormSpec& spec, const LinearOperator& t, const LinearOperator& a,
                                     const SearchOptions& options = {}, double tau = kTauOrth);

/// Same, reusing a solver built for spec.
OrthoVerdict op_bj_orthogonal_direct(const NormAttainmentSolver& solver, const LinearOperator& t,
                                     const LinearOperator& a, double tau = kTauOrth);

/// Attainment route: T orthogonal to A iff some x in M_T has Ax in (Tx)+ and
/// some y in M_T has Ay in (Ty)-. Slopes use T/||T|| and A/||A||. Throws
/// MtUnresolved when M_T is not a resolved finite set.
OrthoVerdict op_bj_orthogonal_via_attainment(const NormSpec& spec, const LinearOperator& t,
                                             const LinearOperator& a, const SearchOptions& options = {},
                                             double tau = kTauOrth);

/// Same, with M_T already computed by `solver`.
OrthoVerdict op_bj_orthogonal_via_attainment(const NormAttainmentSolver& solver, const NormAttainment& attainment,
                                             const LinearOperator& t, const LinearOperator& a,
                                             double tau = kTauOrth);

struct SmoothOperatorProxy {
  bool antipodal_mt = false;
  std::optional<Vec> x0;
  bool image_smooth = false;
  NormAttainment attainment;
};

/// Necessary condition for smoothness of T in B(X): M_T is one antipodal
/// pair {±x0} and T x0 is a smooth point. Throws ZeroOperator for T = 0 and
/// MtUnresolved when the attainment set is numerically ambiguous.
SmoothOperatorProxy is_smooth_operator_proxy(const NormSpec& spec, const LinearOperator& t,
                                             const SearchOptions& options = {});

/// Operator with A x_i = images[i] for the basis columns x_i.
LinearOperator operator_from_basis(const std::vector<Vec>& basis, const std::vector<Vec>& images);

/// Rank-one operator w -> f(w) * image.
LinearOperator rank_one(const Vec& image, const Functional& f);

void check_dim(const NormSpec& spec, const LinearOperator& t);

}  // namespace bjortho
