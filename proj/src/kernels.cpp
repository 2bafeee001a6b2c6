#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bjortho/norm_core.hpp"
#include "kernels_impl.hpp"

namespace bjortho::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> isas{Isa::Scalar};
#if defined(BJORTHO_HAVE_AVX2)
  if (avx2::supported()) isas.push_back(Isa::Avx2);
#endif
#if defined(BJORTHO_HAVE_NEON)
  isas.push_back(Isa::Neon);
#endif
  return isas;
}

Isa active_isa() {
  static const Isa isa = [] {
    if (const char* env = std::getenv("BJORTHO_SIMD"); env && std::string(env) == "scalar")
      return Isa::Scalar;
    return available_isas().back();
  }();
  return isa;
}

NormParams NormParams::from(const NormSpec& spec) {
  NormParams params;
  params.dim = spec.dim();
  params.p = spec.p();
  params.inv_p = 1.0 / spec.p();
  switch (spec.family()) {
    case NormFamily::Polyhedral: {
      params.kind = Kind::Poly;
      const Mat& f = spec.functionals();
      params.rows = static_cast<int>(f.rows());
      params.functionals.resize(static_cast<std::size_t>(f.rows() * f.cols()));
      for (Eigen::Index r = 0; r < f.rows(); ++r)
        for (Eigen::Index c = 0; c < f.cols(); ++c)
          params.functionals[static_cast<std::size_t>(r * f.cols() + c)] = f(r, c);
      return params;
    }
    case NormFamily::WeightedLp:
      params.weights.assign(spec.weights().data(), spec.weights().data() + spec.weights().size());
      [[fallthrough]];
    case NormFamily::Lp:
      if (std::isinf(spec.p()))
        params.kind = Kind::LInf;
      else if (spec.p() == 1.0)
        params.kind = Kind::L1;
      else if (spec.p() == 2.0)
        params.kind = Kind::L2;
      else
        params.kind = Kind::Lp;
      return params;
  }
  return params;
}

void norm_batch(Isa isa, const NormParams& params, const double* soa, std::size_t ld,
                std::size_t count, double* out) {
  switch (isa) {
    case Isa::Scalar:
      scalar::norm_batch(params, soa, ld, 0, count, out);
      return;
    case Isa::Avx2:
#if defined(BJORTHO_HAVE_AVX2)
      avx2::norm_batch(params, soa, ld, count, out);
      return;
#else
      break;
#endif
    case Isa::Neon:
#if defined(BJORTHO_HAVE_NEON)
      neon::norm_batch(params, soa, ld, count, out);
      return;
#else
      break;
#endif
  }
  throw std::invalid_argument("kernel path not compiled in: " + std::string(isa_name(isa)));
}

void matvec_batch(Isa isa, const double* m, int rows, int cols, const double* in, std::size_t ld_in,
                  std::size_t count, double* out, std::size_t ld_out) {
  switch (isa) {
    case Isa::Scalar:
      scalar::matvec_batch(m, rows, cols, in, ld_in, 0, count, out, ld_out);
      return;
    case Isa::Avx2:
#if defined(BJORTHO_HAVE_AVX2)
      avx2::matvec_batch(m, rows, cols, in, ld_in, count, out, ld_out);
      return;
#else
      break;
#endif
    case Isa::Neon:
#if defined(BJORTHO_HAVE_NEON)
      neon::matvec_batch(m, rows, cols, in, ld_in, count, out, ld_out);
      return;
#else
      break;
#endif
  }
  throw std::invalid_argument("kernel path not compiled in: " + std::string(isa_name(isa)));
}

}  // namespace bjortho::kernels
