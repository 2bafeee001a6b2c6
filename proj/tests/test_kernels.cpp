#include <doctest.h>

#include <cstring>

#include "bjortho/kernels.hpp"
#include "bjortho/norm_core.hpp"
#include "bjortho/rng.hpp"

using namespace bjortho;
using namespace bjortho::kernels;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

std::vector<double> random_soa(int dim, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> soa(static_cast<std::size_t>(dim) * count);
  for (double& x : soa) x = rng.gaussian() * std::pow(10.0, rng.uniform(-3, 3));
  return soa;
}

}  // namespace

TEST_CASE("scalar path is always available") {
  const auto isas = available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == Isa::Scalar);
  MESSAGE("active isa: " << isa_name(active_isa()));
}

TEST_CASE("norm_batch is bit-identical across ISA paths") {
  const char* specs[] = {"lp:2:2", "lp:2:3",   "lp:1:3",     "lp:1.5:3", "lp:3:2",
                         "lp:inf:3", "wlp:3:1,2,0.5", "wlp:inf:2,1", "poly:1,0;0,1;1,1;1,-1"};
  // Counts straddle the vector width so that tails are exercised.
  for (const char* text : specs) {
    const NormSpec spec = NormSpec::parse(text);
    const NormParams& params = spec.kernel_params();
    for (std::size_t count : {1u, 3u, 4u, 5u, 17u, 1000u}) {
      const std::size_t ld = count + 3;
      const auto soa = random_soa(spec.dim(), ld, count * 31 + spec.dim());
      std::vector<double> ref(count);
      norm_batch(Isa::Scalar, params, soa.data(), ld, count, ref.data());
      for (std::size_t i = 0; i < count; ++i) CHECK(same_bits(ref[i], norm_one(params, soa.data() + i, ld)));
      for (Isa isa : available_isas()) {
        std::vector<double> out(count);
        norm_batch(isa, params, soa.data(), ld, count, out.data());
        for (std::size_t i = 0; i < count; ++i) CHECK_MESSAGE(same_bits(ref[i], out[i]), text << " " << isa_name(isa));
      }
    }
  }
}

TEST_CASE("norm_one agrees with eval_norm") {
  Rng rng(9);
  for (const char* text : {"lp:2:3", "lp:1.5:3", "lp:inf:2", "poly:1,0;0,1;1,1"}) {
    const NormSpec spec = NormSpec::parse(text);
    for (int k = 0; k < 50; ++k) {
      const Vec x = rng.gaussian_vector(spec.dim());
      CHECK(norm_one(spec.kernel_params(), x.data(), 1) == doctest::Approx(eval_norm(spec, x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("matvec_batch is bit-identical across ISA paths") {
  Rng rng(21);
  for (int n : {1, 2, 3, 5}) {
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (double& x : m) x = rng.gaussian();
    for (std::size_t count : {1u, 2u, 7u, 64u, 333u}) {
      const std::size_t ld_in = count + 1, ld_out = count + 2;
      const auto in = random_soa(n, ld_in, count + n);
      std::vector<double> ref(n * ld_out, 0.0);
      matvec_batch(Isa::Scalar, m.data(), n, n, in.data(), ld_in, count, ref.data(), ld_out);
      for (std::size_t i = 0; i < count; ++i)
        for (int r = 0; r < n; ++r) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) acc += m[r * n + j] * in[j * ld_in + i];
          CHECK(same_bits(acc, ref[r * ld_out + i]));
        }
      for (Isa isa : available_isas()) {
        std::vector<double> out(n * ld_out, 0.0);
        matvec_batch(isa, m.data(), n, n, in.data(), ld_in, count, out.data(), ld_out);
        for (int r = 0; r < n; ++r)
          for (std::size_t i = 0; i < count; ++i) CHECK(same_bits(ref[r * ld_out + i], out[r * ld_out + i]));
      }
    }
  }
}
