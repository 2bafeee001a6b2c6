#pragma once

// Batched arithmetic used by the sphere searches: norms of many vectors and
// a fixed small matrix applied to many vectors. Vectors are stored
// structure-of-arrays: coordinate j of sample i lives at soa[j * ld + i].
//
// Every ISA path performs the same IEEE operations in the same order (no FMA
// contraction, per-sample accumulation over j = 0..dim-1), so results are
// bit-identical to the scalar reference.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace bjortho {
class NormSpec;
}

namespace bjortho::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

/// Paths compiled in and supported by the running CPU.
std::vector<Isa> available_isas();

/// Best available path, unless BJORTHO_SIMD=scalar forces the reference.
Isa active_isa();

struct NormParams {
  enum class Kind { L1, L2, Lp, LInf, Poly };

  Kind kind = Kind::L2;
  int dim = 0;
  double p = 2.0;
  double inv_p = 0.5;
  std::vector<double> weights;      // empty means unit weights
  std::vector<double> functionals;  // row-major rows x dim (Poly only)
  int rows = 0;

  static NormParams from(const NormSpec& spec);
};

/// Scalar reference for a single vector with coordinates x[j * stride].
double norm_one(const NormParams& params, const double* x, std::size_t stride);

void norm_batch(Isa isa, const NormParams& params, const double* soa, std::size_t ld,
                std::size_t count, double* out);

/// out[r * ld_out + i] = sum_j m[r * cols + j] * in[j * ld_in + i].
void matvec_batch(Isa isa, const double* m, int rows, int cols, const double* in, std::size_t ld_in,
                  std::size_t count, double* out, std::size_t ld_out);

}  // namespace bjortho::kernels
