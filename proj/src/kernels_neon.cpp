#include <arm_neon.h>

#include <vector>

#include "kernels_impl.hpp"

namespace bjortho::kernels::neon {

namespace {

inline float64x2_t load_coord(const double* soa, std::size_t ld, int j, std::size_t i) {
  return vld1q_f64(soa + static_cast<std::size_t>(j) * ld + i);
}

inline float64x2_t scale_of(const double* soa, std::size_t ld, int n, std::size_t i) {
  float64x2_t scale = vdupq_n_f64(0.0);
  for (int j = 0; j < n; ++j) scale = vmaxq_f64(scale, vabsq_f64(load_coord(soa, ld, j, i)));
  return scale;
}

}  // namespace

void norm_batch(const NormParams& params, const double* soa, std::size_t ld, std::size_t count,
                double* out) {
  const int n = params.dim;
  const bool weighted = !params.weights.empty();
  std::vector<double> ratios(static_cast<std::size_t>(n) * 2);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    switch (params.kind) {
      case NormParams::Kind::L1: {
        float64x2_t acc = vdupq_n_f64(0.0);
        for (int j = 0; j < n; ++j) {
          float64x2_t a = vabsq_f64(load_coord(soa, ld, j, i));
          if (weighted) a = vmulq_f64(vdupq_n_f64(params.weights[j]), a);
          acc = vaddq_f64(acc, a);
        }
        vst1q_f64(out + i, acc);
        break;
      }
      case NormParams::Kind::LInf: {
        float64x2_t best = vdupq_n_f64(0.0);
        for (int j = 0; j < n; ++j) {
          float64x2_t a = vabsq_f64(load_coord(soa, ld, j, i));
          if (weighted) a = vmulq_f64(vdupq_n_f64(params.weights[j]), a);
          best = vmaxq_f64(best, a);
        }
        vst1q_f64(out + i, best);
        break;
      }
      case NormParams::Kind::L2: {
        const float64x2_t scale = scale_of(soa, ld, n, i);
        float64x2_t sum = vdupq_n_f64(0.0);
        for (int j = 0; j < n; ++j) {
          const float64x2_t r = vdivq_f64(vabsq_f64(load_coord(soa, ld, j, i)), scale);
          float64x2_t t = vmulq_f64(r, r);
          if (weighted) t = vmulq_f64(vdupq_n_f64(params.weights[j]), t);
          sum = vaddq_f64(sum, t);
        }
        const float64x2_t value = vmulq_f64(scale, vsqrtq_f64(sum));
        const uint64x2_t zero_lane = vceqq_f64(scale, vdupq_n_f64(0.0));
        vst1q_f64(out + i, vbslq_f64(zero_lane, vdupq_n_f64(0.0), value));
        break;
      }
      case NormParams::Kind::Lp: {
        const float64x2_t scale = scale_of(soa, ld, n, i);
        for (int j = 0; j < n; ++j)
          vst1q_f64(ratios.data() + 2 * j, vdivq_f64(vabsq_f64(load_coord(soa, ld, j, i)), scale));
        double scales[2];
        vst1q_f64(scales, scale);
        for (int lane = 0; lane < 2; ++lane)
          out[i + lane] = lp_finish(params, ratios.data() + lane, 2, scales[lane]);
        break;
      }
      case NormParams::Kind::Poly: {
        float64x2_t best = vdupq_n_f64(0.0);
        for (int k = 0; k < params.rows; ++k) {
          const double* f = params.functionals.data() + static_cast<std::size_t>(k) * n;
          float64x2_t acc = vdupq_n_f64(0.0);
          for (int j = 0; j < n; ++j)
            acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(f[j]), load_coord(soa, ld, j, i)));
          best = vmaxq_f64(best, vabsq_f64(acc));
        }
        vst1q_f64(out + i, best);
        break;
      }
    }
  }
  scalar::norm_batch(params, soa, ld, i, count, out);
}

void matvec_batch(const double* m, int rows, int cols, const double* in, std::size_t ld_in,
                  std::size_t count, double* out, std::size_t ld_out) {
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    for (int r = 0; r < rows; ++r) {
      const double* row = m + static_cast<std::size_t>(r) * cols;
      float64x2_t acc = vdupq_n_f64(0.0);
      for (int j = 0; j < cols; ++j)
        acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(row[j]), load_coord(in, ld_in, j, i)));
      vst1q_f64(out + static_cast<std::size_t>(r) * ld_out + i, acc);
    }
  }
  scalar::matvec_batch(m, rows, cols, in, ld_in, i, count, out, ld_out);
}

}  // namespace bjortho::kernels::neon
