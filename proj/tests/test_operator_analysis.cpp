#include <doctest.h>

#include <cmath>

#include "bjortho/operator_analysis.hpp"
#include "bjortho/rng.hpp"

using namespace bjortho;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

double sigma_max(const Mat& m) { return Eigen::JacobiSVD<Mat>(m).singularValues()[0]; }

// Distance between x and the nearer of +/- y.
double antipodal_distance(const Vec& x, const Vec& y) { return std::min((x - y).norm(), (x + y).norm()); }

const LinearOperator kIntroT = LinearOperator::diagonal({1, 0.5, 0.5});
const LinearOperator kIntroA = LinearOperator::diagonal({0, 1, 0});

}  // namespace

TEST_CASE("matrix text") {
  const LinearOperator t = LinearOperator::parse("1,0;0,0.5");
  CHECK(t.matrix(1, 1) == 0.5);
  CHECK(LinearOperator::parse(t.to_string()).matrix == t.matrix);
  CHECK_THROWS_AS(LinearOperator::parse("1,0;0"), Error);
  CHECK_THROWS_AS(LinearOperator::parse("1,0,0;0,1,0"), Error);
  CHECK_THROWS_AS(check_dim(NormSpec::lp(2, 3), t), Error);
}

TEST_CASE("norm of the example diagonal operator") {
  for (double p : {1.5, 2.0, 3.0}) {
    const NormAttainment a = operator_norm(NormSpec::lp(p, 3), kIntroT);
    CHECK(a.op_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.status == AttainmentStatus::Resolved);
    REQUIRE(a.maximizers.size() == 1);
    CHECK(antipodal_distance(a.maximizers[0], v({1, 0, 0})) < 1e-6);
    CHECK(a.single_pair());
  }
}

TEST_CASE("isometries attain everywhere") {
  for (const char* text : {"lp:2:2", "lp:3:3", "lp:1.5:2"}) {
    const NormSpec s = NormSpec::parse(text);
    const NormAttainment a = operator_norm(s, LinearOperator::identity(s.dim()));
    CHECK(a.op_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.status == AttainmentStatus::Continuum);
    CHECK(std::abs(a.cluster_gap) < kTauContinuum);
  }
}

TEST_CASE("zero operator") {
  const NormAttainment a = operator_norm(NormSpec::lp(2, 2), LinearOperator::zero(2));
  CHECK(a.status == AttainmentStatus::Zero);
  CHECK(a.op_norm == 0.0);
  CHECK(a.maximizers.empty());
}

TEST_CASE("nilpotent Jordan block") {
  const NormAttainment a = operator_norm(NormSpec::lp(2, 2), LinearOperator::parse("0,2;0,0"));
  CHECK(a.op_norm == doctest::Approx(sigma_max(LinearOperator::parse("0,2;0,0").matrix)).epsilon(1e-12));
  CHECK(a.op_norm == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(a.maximizers.size() == 1);
  CHECK(antipodal_distance(a.maximizers[0], v({0, 1})) < 1e-6);
}

TEST_CASE("Euclidean operator norm is the top singular value") {
  Rng rng(43);
  for (int k = 0; k < 60; ++k) {
    const int n = 2 + k % 3;
    const LinearOperator t(rng.gaussian_matrix(n, n));
    CHECK(operator_norm(NormSpec::lp(2, n), t).op_norm == doctest::Approx(sigma_max(t.matrix)).epsilon(1e-9));
  }
}

TEST_CASE("closed forms for p = 1 and p = inf") {
  Rng rng(47);
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 2;
    const LinearOperator t(rng.gaussian_matrix(n, n));
    const double col = t.matrix.cwiseAbs().colwise().sum().maxCoeff();
    const double row = t.matrix.cwiseAbs().rowwise().sum().maxCoeff();
    CHECK(operator_norm(NormSpec::lp(1, n), t).op_norm == doctest::Approx(col).epsilon(1e-9));
    CHECK(operator_norm(NormSpec::parse("lp:inf:" + std::to_string(n)), t).op_norm ==
          doctest::Approx(row).epsilon(1e-9));
  }
}

TEST_CASE("lp:3 operator norm against a dense-angle oracle") {
  // mpmath: 20001 angles on the half circle, then a root of the derivative.
  const NormAttainment a = operator_norm(NormSpec::lp(3, 2), LinearOperator::parse("1,2;0.5,-1"));
  CHECK(a.op_norm == doctest::Approx(2.4587139758247744).epsilon(1e-11));
  REQUIRE(a.maximizers.size() == 1);
  CHECK(antipodal_distance(a.maximizers[0], v({0.62510615813751695, 0.91087021767534768})) < 1e-6);
}

TEST_CASE("operator norm properties") {
  Rng rng(53);
  const NormAttainmentSolver solver(NormSpec::lp(1.5, 3));
  for (int k = 0; k < 20; ++k) {
    const LinearOperator s(rng.gaussian_matrix(3, 3));
    const LinearOperator t(rng.gaussian_matrix(3, 3));
    const double c = rng.uniform(-4, 4);
    CHECK(solver.norm(s + t) <= solver.norm(s) + solver.norm(t) + 1e-9);
    CHECK(solver.norm(c * s) == doctest::Approx(std::abs(c) * solver.norm(s)).epsilon(1e-9));
    const NormAttainment a = solver.solve(s);
    CHECK(a.op_norm == solver.norm(s));
    for (const Vec& x : a.maximizers) {
      CHECK(eval_norm(solver.spec(), x) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(norm_ratio(solver.spec(), s, x) == doctest::Approx(a.op_norm).epsilon(kTauMt));
    }
  }
}

TEST_CASE("solver output does not depend on the ISA path") {
  Rng rng(59);
  SearchOptions scalar;
  scalar.isa = kernels::Isa::Scalar;
  for (kernels::Isa isa : kernels::available_isas()) {
    SearchOptions other;
    other.isa = isa;
    const NormAttainmentSolver a(NormSpec::lp(3, 3), scalar), b(NormSpec::lp(3, 3), other);
    for (int k = 0; k < 5; ++k) {
      const LinearOperator t(rng.gaussian_matrix(3, 3));
      const NormAttainment ra = a.solve(t), rb = b.solve(t);
      CHECK(ra.op_norm == rb.op_norm);
      CHECK(ra.cluster_gap == rb.cluster_gap);
      REQUIRE(ra.maximizers.size() == rb.maximizers.size());
      for (std::size_t i = 0; i < ra.maximizers.size(); ++i)
        CHECK((ra.maximizers[i].array() == rb.maximizers[i].array()).all());
    }
  }
}

TEST_CASE("direct route on the example pair") {
  const NormSpec s = NormSpec::lp(2, 3);
  const OrthoVerdict f = op_bj_orthogonal_direct(s, kIntroT, kIntroA);
  CHECK(f.decision == Decision::Orthogonal);
  CHECK(f.margin >= -1e-7);
  // ||A + l T|| = max(|l|, |1 + l/2|) is smallest at l = -2/3.
  const OrthoVerdict b = op_bj_orthogonal_direct(s, kIntroA, kIntroT);
  CHECK(b.decision == Decision::NotOrthogonal);
  CHECK(b.margin == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
  CHECK(b.lambda_star == doctest::Approx(-2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("attainment route on the example pair") {
  const NormSpec s = NormSpec::lp(2, 3);
  CHECK(op_bj_orthogonal_via_attainment(s, kIntroT, kIntroA).decision == Decision::Orthogonal);
  CHECK(op_bj_orthogonal_via_attainment(s, kIntroA, kIntroT).decision == Decision::NotOrthogonal);
  CHECK_THROWS_AS(op_bj_orthogonal_via_attainment(s, LinearOperator::identity(3), kIntroA), Error);
}

TEST_CASE("T is never orthogonal to itself") {
  Rng rng(61);
  for (const char* text : {"lp:1.5:2", "lp:3:3", "lp:2:2"}) {
    const NormSpec s = NormSpec::parse(text);
    const LinearOperator t(rng.gaussian_matrix(s.dim(), s.dim()));
    const OrthoVerdict r = op_bj_orthogonal_direct(s, t, t);
    CHECK(r.decision == Decision::NotOrthogonal);
    CHECK(r.margin == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(op_bj_orthogonal_via_attainment(s, t, t).decision == Decision::NotOrthogonal);
  }
}

TEST_CASE("zero operands") {
  const NormSpec s = NormSpec::lp(2, 2);
  const OrthoVerdict r = op_bj_orthogonal_direct(s, LinearOperator::zero(2), LinearOperator::identity(2));
  CHECK(r.decision == Decision::Orthogonal);
  CHECK(r.degenerate);
  CHECK(op_bj_orthogonal_direct(s, LinearOperator::identity(2), LinearOperator::zero(2)).decision ==
        Decision::Orthogonal);
}

TEST_CASE("routes agree on random lp:3:2 pairs") {
  Rng rng(67);
  const NormAttainmentSolver solver(NormSpec::lp(3, 2));
  int agree = 0, band = 0;
  for (int k = 0; k < 100; ++k) {
    const LinearOperator t(rng.gaussian_matrix(2, 2));
    LinearOperator a(rng.gaussian_matrix(2, 2));
    const NormAttainment att = solver.solve(t);
    if (k % 2 && !att.maximizers.empty()) {
      const Vec tx = t(att.maximizers[0]);
      a = a + (-supporting_functional(solver.spec(), tx)(a(att.maximizers[0])) / eval_norm(solver.spec(), tx)) * t;
    }
    const OrthoVerdict d = op_bj_orthogonal_direct(solver, t, a);
    if (att.status != AttainmentStatus::Resolved || d.decision == Decision::Indeterminate) {
      ++band;
      continue;
    }
    agree += d.decision == op_bj_orthogonal_via_attainment(solver, att, t, a).decision;
  }
  CHECK(band <= 2);
  CHECK(agree == 100 - band);
}

TEST_CASE("smooth operator proxy") {
  const SmoothOperatorProxy p = is_smooth_operator_proxy(NormSpec::lp(3, 2), LinearOperator::diagonal({2, 1}));
  CHECK(p.antipodal_mt);
  REQUIRE(p.x0.has_value());
  CHECK(antipodal_distance(*p.x0, v({1, 0})) < 1e-6);
  CHECK(p.image_smooth);

  CHECK_FALSE(is_smooth_operator_proxy(NormSpec::lp(2, 2), LinearOperator::identity(2)).antipodal_mt);
  // Top singular value of multiplicity two: a whole circle attains.
  CHECK_FALSE(is_smooth_operator_proxy(NormSpec::lp(2, 3), LinearOperator::diagonal({1, 1, 0.5})).antipodal_mt);
  CHECK_THROWS_AS(is_smooth_operator_proxy(NormSpec::lp(2, 2), LinearOperator::zero(2)), Error);
}

TEST_CASE("operators from bases") {
  const std::vector<Vec> basis{v({1, 1}), v({1, -1})};
  const std::vector<Vec> images{v({2, 0}), v({0, 3})};
  const LinearOperator a = operator_from_basis(basis, images);
  for (int i = 0; i < 2; ++i) CHECK((a(basis[i]) - images[i]).norm() < 1e-14);
  const LinearOperator r = rank_one(v({1, 2}), Functional{v({3, -1})});
  CHECK((r(v({1, 1})) - v({2, 4})).norm() < 1e-14);
}
