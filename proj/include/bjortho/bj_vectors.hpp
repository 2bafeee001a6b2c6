#pragma once

// Birkhoff-James orthogonality of vectors: x is orthogonal to y when
// ||x + t y|| >= ||x|| for every real t.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bjortho/norm_core.hpp"

namespace bjortho {

/// Absolute tolerance on unit-normalised inputs for orthogonality decisions.
inline constexpr double kTauOrth = 1e-7;

enum class Decision { Orthogonal, NotOrthogonal, Indeterminate };

std::string_view decision_name(Decision d);

struct OrthoVerdict {
  Decision decision = Decision::Indeterminate;
  /// min_t ||x + t y|| - ||x||, relative to ||x||. Never positive.
  double margin = 0.0;
  /// A minimising t, in the caller's scale.
  double lambda_star = 0.0;
  /// One-sided derivatives at t = 0 of t -> ||x^ + t y^|| for unit x^, y^.
  double deriv_plus = 0.0;
  double deriv_minus = 0.0;
  /// Set when the left argument is zero (orthogonal to everything).
  bool degenerate = false;
};

/// Combines the derivative test with the minimisation margin:
/// NOT_ORTHOGONAL iff margin < -tau; otherwise ORTHOGONAL iff
/// deriv_minus <= tau and deriv_plus >= -tau; INDETERMINATE in between.
Decision decide(double margin, double deriv_plus, double deriv_minus, double tau);

OrthoVerdict is_bj_orthogonal(const NormSpec& spec, const Vec& x, const Vec& y, double tau = kTauOrth);

/// y in x+ : ||x + t y|| >= ||x|| for all t >= 0.
bool in_plus(const NormSpec& spec, const Vec& x, const Vec& y, double tau = kTauOrth);
/// y in x- : ||x + t y|| >= ||x|| for all t <= 0.
bool in_minus(const NormSpec& spec, const Vec& x, const Vec& y, double tau = kTauOrth);

/// a0 minimising ||y + a x||; the residual y + a0 x is orthogonal to x.
double james_foot(const NormSpec& spec, const Vec& x, const Vec& y);

/// Basis of ker f (n - 1 vectors, each of unit spec norm).
std::vector<Vec> kernel_basis(const NormSpec& spec, const Functional& f);

/// Basis of the hyperplane H with x orthogonal to H. Requires a smooth point.
std::vector<Vec> orthogonal_hyperplane(const NormSpec& spec, const Vec& x);

/// Unit y with y orthogonal to x (left foot of a random direction).
Vec find_orthogonal_to(const NormSpec& spec, const Vec& x, std::uint64_t seed);

/// Unit y with x orthogonal to y, from a random direction shifted along x
/// into the middle of the admissible band.
Vec find_orthogonal_from(const NormSpec& spec, const Vec& x, std::uint64_t seed);

enum class SymmetryVerdict { SymmetricUpToBudget, Refuted };

std::string_view symmetry_verdict_name(SymmetryVerdict v, bool left = true);

struct SymmetryProbe {
  SymmetryVerdict verdict = SymmetryVerdict::SymmetricUpToBudget;
  std::optional<Vec> witness;
  int examined = 0;
};

/// Searches {y : x orthogonal to y} for y not orthogonal to x. A refutation
/// carries its witness; survival only means no witness within `budget`.
SymmetryProbe is_left_symmetric_point(const NormSpec& spec, const Vec& x, int budget, std::uint64_t seed,
                                      double tau = kTauOrth);

/// Searches {y : y orthogonal to x} for y with x not orthogonal to y.
SymmetryProbe is_right_symmetric_point(const NormSpec& spec, const Vec& x, int budget, std::uint64_t seed,
                                       double tau = kTauOrth);

}  // namespace bjortho
