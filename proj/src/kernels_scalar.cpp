#include <algorithm>
#include <cmath>

#include "kernels_impl.hpp"

namespace bjortho::kernels {

double norm_one(const NormParams& params, const double* x, std::size_t stride) {
  const bool weighted = !params.weights.empty();
  const int n = params.dim;
  switch (params.kind) {
    case NormParams::Kind::L1: {
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const double a = std::abs(x[j * stride]);
        sum = sum + (weighted ? params.weights[j] * a : a);
      }
      return sum;
    }
    case NormParams::Kind::LInf: {
      double best = 0.0;
      for (int j = 0; j < n; ++j) {
        const double a = std::abs(x[j * stride]);
        best = std::max(best, weighted ? params.weights[j] * a : a);
      }
      return best;
    }
    case NormParams::Kind::L2: {
      double scale = 0.0;
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(x[j * stride]));
      if (scale == 0.0) return 0.0;
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const double r = std::abs(x[j * stride]) / scale;
        const double t = r * r;
        sum = sum + (weighted ? params.weights[j] * t : t);
      }
      return scale * std::sqrt(sum);
    }
    case NormParams::Kind::Lp: {
      double scale = 0.0;
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(x[j * stride]));
      if (scale == 0.0) return 0.0;
      double sum = 0.0;
      for (int j = 0; j < n; ++j) {
        const double t = std::pow(std::abs(x[j * stride]) / scale, params.p);
        sum = sum + (weighted ? params.weights[j] * t : t);
      }
      return scale * std::pow(sum, params.inv_p);
    }
    case NormParams::Kind::Poly: {
      double best = 0.0;
      for (int k = 0; k < params.rows; ++k) {
        const double* f = params.functionals.data() + static_cast<std::size_t>(k) * n;
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc = acc + f[j] * x[j * stride];
        best = std::max(best, std::abs(acc));
      }
      return best;
    }
  }
  return 0.0;
}

namespace scalar {

void norm_batch(const NormParams& params, const double* soa, std::size_t ld, std::size_t begin,
                std::size_t end, double* out) {
  for (std::size_t i = begin; i < end; ++i) out[i] = norm_one(params, soa + i, ld);
}

void matvec_batch(const double* m, int rows, int cols, const double* in, std::size_t ld_in,
                  std::size_t begin, std::size_t end, double* out, std::size_t ld_out) {
  for (int r = 0; r < rows; ++r) {
    const double* row = m + static_cast<std::size_t>(r) * cols;
    for (std::size_t i = begin; i < end; ++i) {
      double acc = 0.0;
      for (int j = 0; j < cols; ++j) acc = acc + row[j] * in[j * ld_in + i];
      out[r * ld_out + i] = acc;
    }
  }
}

}  // namespace scalar
}  // namespace bjortho::kernels
