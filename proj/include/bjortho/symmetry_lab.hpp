#pragma once

// Witness operators refuting left/right symmetry of T in B(X), certified by
// the definitional (direct) orthogonality route.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bjortho/operator_analysis.hpp"

namespace bjortho {

enum class WitnessDirection { RefutesLeftSymmetry, RefutesRightSymmetry };

std::string_view witness_direction_name(WitnessDirection d);

/// Construction record. Only the fields of the branch that produced the
/// witness are set.
struct ConstructionTrace {
  std::string branch;
  std::optional<Vec> x1, x2, u, v, h0, z;
  std::optional<double> delta, epsilon, t0, d;
  std::vector<std::string> flags;
  /// Branches tried, in order, with the reason each was left.
  std::vector<std::string> attempts;
};

struct WitnessCertificate {
  NormSpec spec;
  LinearOperator target;
  LinearOperator witness;
  WitnessDirection direction = WitnessDirection::RefutesLeftSymmetry;
  /// T vs A for left, A vs T for right. Must be ORTHOGONAL.
  OrthoVerdict forward;
  /// The failing direction. Must be NOT_ORTHOGONAL.
  OrthoVerdict backward;
  /// Re-run at doubled grid resolution and half tolerance.
  OrthoVerdict forward_recheck;
  OrthoVerdict backward_recheck;
  /// Attainment-route cross-check; empty when M_T is not resolved.
  std::optional<Decision> forward_via;
  std::optional<Decision> backward_via;
  ConstructionTrace trace;
  std::uint64_t seed = 0;
  double tau = kTauOrth;
};

/// Thrown for BUDGET_EXHAUSTED so that callers can report how far the
/// pipeline got.
class WitnessError : public Error {
 public:
  WitnessError(ErrorCode code, const std::string& what, ConstructionTrace trace)
      : Error(code, what), trace_(std::move(trace)) {}
  const ConstructionTrace& trace() const { return trace_; }

 private:
  ConstructionTrace trace_;
};

struct LabOptions {
  SearchOptions search;
  double tau = kTauOrth;
  /// A backward verdict counts only when its margin is below -this.
  double backward_margin = 1e-5;
  /// Randomised fallback attempts.
  int budget = 48;
  /// Budget for left-symmetric-point hypothesis checks.
  int symmetry_budget = 24;
};

WitnessCertificate refute_left_symmetry(const NormSpec& spec, const LinearOperator& t, std::uint64_t seed,
                                        const LabOptions& options = {});

/// The two-vector branch's recorded parameters satisfy 0 < delta < 1,
/// 0 < epsilon < delta / (3 - delta), 0 < t0 < 1 and ||v - u|| < epsilon.
bool p2_constraints_hold(const NormSpec& spec, const ConstructionTrace& trace);

WitnessCertificate refute_right_symmetry_smooth(const NormSpec& spec, const LinearOperator& t,
                                                std::uint64_t seed, const LabOptions& options = {});

enum class Theorem25Case { RankGeNMinus1, Witness };
std::string_view theorem25_case_name(Theorem25Case c);

struct Theorem25Result {
  Theorem25Case which = Theorem25Case::RankGeNMinus1;
  int rank = 0;
  Vec x0;
  std::optional<Vec> u0;
  std::optional<WitnessCertificate> certificate;
};

/// Relative singular-value threshold for numerical rank.
inline constexpr double kTauRank = 1e-8;

int numerical_rank(const LinearOperator& t);

Theorem25Result theorem25_check(const NormSpec& spec, const LinearOperator& t, std::uint64_t seed,
                                const LabOptions& options = {});

enum class Theorem26Case { MutualWithIdentity, Witness };
std::string_view theorem26_case_name(Theorem26Case c);

struct Theorem26Result {
  Theorem26Case which = Theorem26Case::MutualWithIdentity;
  Vec x0;
  Vec u0;
  OrthoVerdict i_perp_t;
  OrthoVerdict t_perp_i;
  std::optional<WitnessCertificate> certificate;
};

Theorem26Result theorem26_check(const NormSpec& spec, const LinearOperator& t, std::uint64_t seed,
                                const LabOptions& options = {});

struct TransferReport {
  Vec x;
  int trials = 0;
  int passed = 0;
  double worst_margin = 0.0;
  /// Largest |derivative| seen; both one-sided slopes should vanish.
  double worst_slope = 0.0;
};

/// Samples y with x orthogonal to y (x in M_T) and checks Tx orthogonal to Ty.
TransferReport lemma22_transfer_check(const NormSpec& spec, const LinearOperator& t, int trials,
                                      std::uint64_t seed, const LabOptions& options = {});

struct IntroExampleReport {
  OrthoVerdict t_perp_a_direct;
  OrthoVerdict a_perp_t_direct;
  OrthoVerdict t_perp_a_via;
  OrthoVerdict a_perp_t_via;
  bool holds = false;
};

/// diag(1, 1/2, 1/2) against diag(0, 1, 0) on Euclidean R^3.
IntroExampleReport intro_example_check(const LabOptions& options = {});

}  // namespace bjortho
