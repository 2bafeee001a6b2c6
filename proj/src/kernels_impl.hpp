#pragma once

#include <cmath>
#include <cstddef>

#include "bjortho/kernels.hpp"

namespace bjortho::kernels {

// Per-sample tail shared by every path for the general-p reduction. Ratios
// r_j = |x_j| / scale are produced by the caller (vectorised or not).
inline double lp_finish(const NormParams& params, const double* ratios, std::size_t stride,
                        double scale) {
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  const bool weighted = !params.weights.empty();
  for (int j = 0; j < params.dim; ++j) {
    const double t = std::pow(ratios[j * stride], params.p);
    sum = sum + (weighted ? params.weights[j] * t : t);
  }
  return scale * std::pow(sum, params.inv_p);
}

namespace scalar {
void norm_batch(const NormParams& params, const double* soa, std::size_t ld, std::size_t begin,
                std::size_t end, double* out);
void matvec_batch(const double* m, int rows, int cols, const double* in, std::size_t ld_in,
                  std::size_t begin, std::size_t end, double* out, std::size_t ld_out);
}  // namespace scalar

namespace avx2 {
bool supported();
void norm_batch(const NormParams& params, const double* soa, std::size_t ld, std::size_t count,
                double* out);
void matvec_batch(const double* m, int rows, int cols, const double* in, std::size_t ld_in,
                  std::size_t count, double* out, std::size_t ld_out);
}  // namespace avx2

namespace neon {
void norm_batch(const NormParams& params, const double* soa, std::size_t ld, std::size_t count,
                double* out);
void matvec_batch(const double* m, int rows, int cols, const double* in, std::size_t ld_in,
                  std::size_t count, double* out, std::size_t ld_out);
}  // namespace neon

}  // namespace bjortho::kernels
