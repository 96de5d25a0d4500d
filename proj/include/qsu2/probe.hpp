#pragma once

#include <cstdint>
#include <vector>

#include "qsu2/numerics.hpp"
#include "qsu2/params.hpp"
#include "qsu2/qalgebra.hpp"

namespace qsu2 {

enum class ProbeKind : std::uint8_t { TwistedCommutator, Lipschitz, LemmaRegularity };

/// twisted_commutator: D rho(x) - rho(sigma_L x) D
/// lipschitz:          |D| rho(x) - rho(sigma_L x) |D|
/// lemma_regularity:   |D|^r (|D|^s rho(x) - rho(sigma_L^s x) |D|^s) |D|^{-s}
struct ProbeSpec {
  ProbeKind kind = ProbeKind::TwistedCommutator;
  Monomial x;
  double s = 0.0;
  double r = 0.0;
};

/// Compressed sparse rows in double precision.
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> ptr{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  CsrMatrix transpose() const;
  double max_abs() const;
};

/// y = A x, rows split across threads; each row is summed in a fixed order.
void spmv(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y,
          ExecPolicy policy = ExecPolicy::Parallel);

struct PowerResult {
  double sigma = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value of A by power iteration on A^T A from a fixed seed vector.
PowerResult power_iteration(const CsrMatrix& A, const CsrMatrix& At, int max_iter = 200, double rel_tol = 1e-6,
                            ExecPolicy policy = ExecPolicy::Parallel);

/// Bits needed so the cancellation in the probe entries (terms up to q^{-2 l_max}
/// against O(1) results) leaves `prec` good bits.
Precision probe_precision(const mpq_class& q, HalfInt l_max, Precision prec);

/// The probe operator restricted to interior columns (l <= l_max - 1/2), assembled in
/// high precision and rounded to double. Rows cover the full truncated lattice.
CsrMatrix assemble_probe(const ProbeSpec& spec, const DeformationParameter& dp, HalfInt l_max,
                         Precision prec = kDefaultPrecision, ExecPolicy policy = ExecPolicy::Parallel);

struct ProbeResult {
  HalfInt l_max;
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t dim = 0;
  std::size_t nnz = 0;
};

std::vector<ProbeResult> norm_probe(const ProbeSpec& spec, const DeformationParameter& dp,
                                    const std::vector<HalfInt>& schedule, Precision prec = kDefaultPrecision,
                                    ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace qsu2
