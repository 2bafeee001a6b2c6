#include <immintrin.h>

#include <vector>

#include "kernels_impl.hpp"

namespace bjortho::kernels::avx2 {

namespace {

inline __m256d vabs(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline __m256d load_coord(const double* soa, std::size_t ld, int j, std::size_t i) {
  return _mm256_loadu_pd(soa + static_cast<std::size_t>(j) * ld + i);
}

inline __m256d scale_of(const double* soa, std::size_t ld, int n, std::size_t i) {
  __m256d scale = _mm256_setzero_pd();
  for (int j = 0; j < n; ++j) scale = _mm256_max_pd(scale, vabs(load_coord(soa, ld, j, i)));
  return scale;
}

}  // namespace

bool supported() { return __builtin_cpu_supports("avx2"); }

void norm_batch(const NormParams& params, const double* soa, std::size_t ld, std::size_t count,
                double* out) {
  const int n = params.dim;
  const bool weighted = !params.weights.empty();
  std::vector<double> ratios(static_cast<std::size_t>(n) * 4);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    switch (params.kind) {
      case NormParams::Kind::L1: {
        __m256d acc = _mm256_setzero_pd();
        for (int j = 0; j < n; ++j) {
          __m256d a = vabs(load_coord(soa, ld, j, i));
          if (weighted) a = _mm256_mul_pd(_mm256_set1_pd(params.weights[j]), a);
          acc = _mm256_add_pd(acc, a);
        }
        _mm256_storeu_pd(out + i, acc);
        break;
      }
      case NormParams::Kind::LInf: {
        __m256d best = _mm256_setzero_pd();
        for (int j = 0; j < n; ++j) {
          __m256d a = vabs(load_coord(soa, ld, j, i));
          if (weighted) a = _mm256_mul_pd(_mm256_set1_pd(params.weights[j]), a);
          best = _mm256_max_pd(best, a);
        }
        _mm256_storeu_pd(out + i, best);
        break;
      }
      case NormParams::Kind::L2: {
        const __m256d scale = scale_of(soa, ld, n, i);
        __m256d sum = _mm256_setzero_pd();
        for (int j = 0; j < n; ++j) {
          const __m256d r = _mm256_div_pd(vabs(load_coord(soa, ld, j, i)), scale);
          __m256d t = _mm256_mul_pd(r, r);
          if (weighted) t = _mm256_mul_pd(_mm256_set1_pd(params.weights[j]), t);
          sum = _mm256_add_pd(sum, t);
        }
        const __m256d value = _mm256_mul_pd(scale, _mm256_sqrt_pd(sum));
        const __m256d zero_lane = _mm256_cmp_pd(scale, _mm256_setzero_pd(), _CMP_EQ_OQ);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(value, _mm256_setzero_pd(), zero_lane));
        break;
      }
      case NormParams::Kind::Lp: {
        const __m256d scale = scale_of(soa, ld, n, i);
        for (int j = 0; j < n; ++j) {
          _mm256_storeu_pd(ratios.data() + 4 * j,
                           _mm256_div_pd(vabs(load_coord(soa, ld, j, i)), scale));
        }
        alignas(32) double scales[4];
        _mm256_store_pd(scales, scale);
        for (int lane = 0; lane < 4; ++lane)
          out[i + lane] = lp_finish(params, ratios.data() + lane, 4, scales[lane]);
        break;
      }
      case NormParams::Kind::Poly: {
        __m256d best = _mm256_setzero_pd();
        for (int k = 0; k < params.rows; ++k) {
          const double* f = params.functionals.data() + static_cast<std::size_t>(k) * n;
          __m256d acc = _mm256_setzero_pd();
          for (int j = 0; j < n; ++j)
            acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(f[j]), load_coord(soa, ld, j, i)));
          best = _mm256_max_pd(best, vabs(acc));
        }
        _mm256_storeu_pd(out + i, best);
        break;
      }
    }
  }
  scalar::norm_batch(params, soa, ld, i, count, out);
}

void matvec_batch(const double* m, int rows, int cols, const double* in, std::size_t ld_in,
                  std::size_t count, double* out, std::size_t ld_out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    for (int r = 0; r < rows; ++r) {
      const double* row = m + static_cast<std::size_t>(r) * cols;
      __m256d acc = _mm256_setzero_pd();
      for (int j = 0; j < cols; ++j)
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(row[j]), load_coord(in, ld_in, j, i)));
      _mm256_storeu_pd(out + static_cast<std::size_t>(r) * ld_out + i, acc);
    }
  }
  scalar::matvec_batch(m, rows, cols, in, ld_in, i, count, out, ld_out);
}

}  // namespace bjortho::kernels::avx2
