#include <doctest.h>

#include <cmath>
#include <limits>

#include "bjortho/norm_core.hpp"
#include "bjortho/rng.hpp"

using namespace bjortho;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

// Max of f(x) over a dense grid of the unit sphere of lp:p:2. Only used as
// a cross-check of the closed-form dual norm.
double dual_by_grid(const NormSpec& spec, const Functional& f) {
  double best = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    const Vec x = v({std::cos(th), std::sin(th)});
    best = std::max(best, f(x) / eval_norm(spec, x));
  }
  return best;
}

}  // namespace

TEST_CASE("norm text parsing and canonical form") {
  CHECK(NormSpec::parse("lp:3:2").dim() == 2);
  CHECK(NormSpec::parse("lp:inf:3").p_is_inf());
  for (const char* text : {"lp:1.5:3", "lp:inf:2", "wlp:3:1,2", "poly:1,0;0,1;1,1"}) {
    const NormSpec s = NormSpec::parse(text);
    CHECK(NormSpec::parse(s.to_string()) == s);
  }
  CHECK_THROWS_AS(NormSpec::parse("lp:0.5:2"), Error);
  CHECK_THROWS_AS(NormSpec::parse("lp:2:0"), Error);
  CHECK_THROWS_AS(NormSpec::parse("lq:2:2"), Error);
  CHECK_THROWS_AS(NormSpec::parse("poly:1,0"), Error);  // rows must span R^2
  CHECK_THROWS_AS(NormSpec::parse("wlp:2:1,-1"), Error);
}

TEST_CASE("geometry flags") {
  CHECK(NormSpec::parse("lp:3:2").is_strictly_convex());
  CHECK(NormSpec::parse("lp:3:2").is_smooth());
  CHECK_FALSE(NormSpec::parse("lp:1:2").is_strictly_convex());
  CHECK_FALSE(NormSpec::parse("lp:inf:2").is_smooth());
  CHECK_FALSE(NormSpec::parse("poly:1,0;0,1").is_smooth());
  CHECK(NormSpec::parse("lp:1:1").is_smooth());
}

TEST_CASE("norm values") {
  CHECK(eval_norm(NormSpec::lp(2, 2), v({3, 4})) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(eval_norm(NormSpec::lp(1, 2), v({1, -2})) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(eval_norm(NormSpec::lp(3, 2), v({1, 1})) == doctest::Approx(1.2599210498948732).epsilon(1e-14));
  // mpmath, 40 digits
  CHECK(eval_norm(NormSpec::lp(1.5, 3), v({1, -2, 0.5})) == doctest::Approx(2.5957010334043913).epsilon(1e-14));
  CHECK(eval_norm(NormSpec::parse("wlp:3:1,2"), v({1, -1})) == doctest::Approx(1.4422495703074083).epsilon(1e-14));
  CHECK(eval_norm(NormSpec::parse("lp:inf:3"), v({1, -3, 2})) == 3.0);
  CHECK(eval_norm(NormSpec::parse("poly:1,0;0,1;1,1"), v({1, -2})) == 2.0);
}

TEST_CASE("norm axioms on random vectors") {
  Rng rng(11);
  for (const char* text : {"lp:1.5:3", "lp:3:3", "lp:1:2", "lp:inf:3", "wlp:4:1,0.5,3", "poly:1,0,0;0,1,0;0,0,1;1,1,1"}) {
    const NormSpec s = NormSpec::parse(text);
    for (int k = 0; k < 200; ++k) {
      const Vec x = rng.gaussian_vector(s.dim());
      const Vec y = rng.gaussian_vector(s.dim());
      const double c = rng.uniform(-3, 3);
      CHECK(eval_norm(s, x + y) <= eval_norm(s, x) + eval_norm(s, y) + 1e-12);
      CHECK(eval_norm(s, c * x) == doctest::Approx(std::abs(c) * eval_norm(s, x)).epsilon(1e-12));
      CHECK(eval_norm(s, -x) == eval_norm(s, x));
    }
  }
}

TEST_CASE("one-sided derivatives") {
  const NormSpec l2 = NormSpec::lp(2, 2);
  CHECK(dir_deriv_plus(l2, v({1, 0}), v({0, 1})) == doctest::Approx(0.0));
  CHECK(dir_deriv_plus(l2, v({1, 0}), v({1, 0})) == doctest::Approx(1.0));

  const NormSpec l1 = NormSpec::lp(1, 2);
  CHECK(dir_deriv_plus(l1, v({1, 0}), v({0, 1})) == doctest::Approx(1.0));
  CHECK(dir_deriv_minus(l1, v({1, 0}), v({0, 1})) == doctest::Approx(-1.0));

  // mpmath one-sided quotients with h = 1e-20
  const NormSpec p15 = NormSpec::lp(1.5, 3);
  CHECK(dir_deriv_plus(p15, v({1, -2, 0.5}), v({0.3, 1, -1})) == doctest::Approx(-1.1304699007079069).epsilon(1e-12));
  CHECK(dir_deriv_minus(p15, v({1, -2, 0.5}), v({0.3, 1, -1})) == doctest::Approx(-1.1304699007079069).epsilon(1e-12));
  const NormSpec l13 = NormSpec::lp(1, 3);
  CHECK(dir_deriv_plus(l13, v({1, 0, 2}), v({1, 1, -1})) == doctest::Approx(1.0));
  CHECK(dir_deriv_minus(l13, v({1, 0, 2}), v({1, 1, -1})) == doctest::Approx(-1.0));
  const NormSpec linf = NormSpec::parse("lp:inf:3");
  CHECK(dir_deriv_plus(linf, v({1, -1, 0.5}), v({0.2, 0.3, 1})) == doctest::Approx(0.2));
  CHECK(dir_deriv_minus(linf, v({1, -1, 0.5}), v({0.2, 0.3, 1})) == doctest::Approx(-0.3));

  CHECK_THROWS_AS(dir_deriv_plus(l2, v({0, 0}), v({1, 0})), Error);
}

TEST_CASE("derivatives bracket difference quotients") {
  Rng rng(5);
  for (const char* text : {"lp:1.5:3", "lp:3:2", "lp:1:3", "lp:inf:2", "poly:1,0;0,1;1,1;1,-1"}) {
    const NormSpec s = NormSpec::parse(text);
    for (int k = 0; k < 100; ++k) {
      const Vec x = rng.gaussian_vector(s.dim());
      const Vec y = rng.gaussian_vector(s.dim());
      const double h = 1e-6;
      const double q_plus = (eval_norm(s, x + h * y) - eval_norm(s, x)) / h;
      const double q_minus = (eval_norm(s, x) - eval_norm(s, x - h * y)) / h;
      const double dp = dir_deriv_plus(s, x, y);
      const double dm = dir_deriv_minus(s, x, y);
      CHECK(dm <= dp + 1e-12);
      // Convexity: forward quotient >= d+ >= d- >= backward quotient.
      CHECK(q_plus >= dp - 1e-6);
      CHECK(q_minus <= dm + 1e-6);
      CHECK(q_plus - dp < 1e-3);
      CHECK(dm - q_minus < 1e-3);
    }
  }
}

TEST_CASE("supporting functionals") {
  const NormSpec l2 = NormSpec::lp(2, 2);
  const Functional f = supporting_functional(l2, v({0.6, 0.8}));
  CHECK(f.coeffs[0] == doctest::Approx(0.6));
  CHECK(f.coeffs[1] == doctest::Approx(0.8));

  const NormSpec l3 = NormSpec::lp(3, 2);
  const Functional g = supporting_functional(l3, v({1, 0}));
  CHECK(g.coeffs[0] == doctest::Approx(1.0));
  CHECK(g.coeffs[1] == doctest::Approx(0.0));

  // sign(x)|x|^2 / ||x||^2 at (1, 2), mpmath
  const Functional h = supporting_functional(l3, v({1, 2}));
  CHECK(h.coeffs[0] == doctest::Approx(0.23112042478354490).epsilon(1e-13));
  CHECK(h.coeffs[1] == doctest::Approx(0.92448169913417961).epsilon(1e-13));

  const Functional k = supporting_functional(l3, v({1, 1}));
  CHECK(k(v({1, 1})) == doctest::Approx(eval_norm(l3, v({1, 1}))));
  CHECK(dual_norm(l3, k) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(dual_by_grid(l3, k) == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(supporting_functional(NormSpec::lp(1, 2), v({1, 0})), Error);
  CHECK_NOTHROW(supporting_functional(NormSpec::lp(1, 2), v({1, -2})));
}

TEST_CASE("dual norms") {
  CHECK(dual_norm(NormSpec::lp(3, 2), Functional{v({1, -1})}) == doctest::Approx(1.5874010519681995).epsilon(1e-14));
  CHECK(dual_norm(NormSpec::lp(1, 3), Functional{v({1, -4, 2})}) == doctest::Approx(4.0));
  CHECK(dual_norm(NormSpec::parse("lp:inf:3"), Functional{v({1, -4, 2})}) == doctest::Approx(7.0));
  const NormSpec w = NormSpec::parse("wlp:3:1,2");
  const Functional f{v({0.3, -0.7})};
  CHECK(dual_norm(w, f) == doctest::Approx(dual_by_grid(w, f)).epsilon(1e-6));
  const NormSpec poly = NormSpec::parse("poly:1,0;0,1;1,1");
  const Functional g{v({0.4, 0.9})};
  CHECK(dual_norm(poly, g) == doctest::Approx(dual_by_grid(poly, g)).epsilon(1e-6));
}

TEST_CASE("subgradients at corners") {
  const NormSpec l1 = NormSpec::lp(1, 2);
  const Vec x = v({1, 0});
  const Vec y = v({0, 1});
  const Functional up = extreme_subgradient(l1, x, y, +1);
  const Functional down = extreme_subgradient(l1, x, y, -1);
  CHECK(up(y) == doctest::Approx(1.0));
  CHECK(down(y) == doctest::Approx(-1.0));
  CHECK(up(x) == doctest::Approx(1.0));
  CHECK(dual_norm(l1, down) == doctest::Approx(1.0));
  CHECK_FALSE(is_smooth_point(l1, x));
  CHECK(is_smooth_point(NormSpec::lp(3, 2), x));

  const auto ann = supporting_functional_annihilating(l1, x, y, 1e-12);
  REQUIRE(ann.has_value());
  CHECK((*ann)(y) == doctest::Approx(0.0));
  CHECK((*ann)(x) == doctest::Approx(1.0));
  CHECK_FALSE(supporting_functional_annihilating(NormSpec::lp(2, 2), x, v({1, 1}), 1e-12).has_value());
}

TEST_CASE("sphere sampling") {
  const auto a = sphere_sample(NormSpec::lp(2, 2), 4, 0);
  CHECK(a.size() == 4);
  for (const Vec& x : a) CHECK(eval_norm(NormSpec::lp(2, 2), x) == doctest::Approx(1.0).epsilon(kTauRel));
  const NormSpec l3 = NormSpec::lp(3, 3);
  const auto b = sphere_sample(l3, 1000, 7);
  for (const Vec& x : b) {
    CHECK(eval_norm(l3, x) >= 1.0 - kTauRel);
    CHECK(eval_norm(l3, x) <= 1.0 + kTauRel);
  }
  const auto c = sphere_sample(l3, 1000, 7);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK((b[i].array() == c[i].array()).all());
}

TEST_CASE("number text round trip") {
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.gaussian() * std::pow(10.0, rng.uniform(-300, 300));
    CHECK(parse_real(format_real(x)) == x);
  }
  CHECK(std::isinf(parse_real("inf")));
  CHECK_THROWS_AS(parse_real("1.0x"), Error);
  CHECK_THROWS_AS(parse_vector("1,,2"), Error);
  CHECK(parse_vector("1, -2.5,3e2") == v({1, -2.5, 300}));
  CHECK_THROWS_AS(check_dim(NormSpec::lp(2, 3), v({1, 2})), Error);
  CHECK_THROWS_AS(normalized(NormSpec::lp(2, 2), v({0, 0})), Error);
}
