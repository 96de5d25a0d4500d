#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qsu2/bigfloat.hpp"
#include "qsu2/params.hpp"

namespace qsu2 {

/// k-th term of the series, with the shifted exponents beta = b + shift_i and
/// kappa = k + shift_l:
///   q^{kappa+z/2} (1 - q^{2kappa+z})
///   / ((1 - q^{z-a-beta+kappa}) (1 - q^{z-a+beta+kappa}) (1 - q^{a+beta+kappa}) (1 - q^{a-beta+kappa}))
/// Throws PoleHit when a denominator is within 2^{-prec/2} of zero.
BigComplex S_k(const ZetaParams& params, unsigned k, const BigComplex& z, Precision prec = kDefaultPrecision);

struct ZetaValue {
  BigComplex value;
  BigFloat tail_bound;  // bound on the dropped terms k >= k_truncation
  unsigned k_truncation = 0;
};

/// (q^{-z/2} + q^{z/2}) (q^{-1} - q)^z c q^{-shift_l} sum_k C(z+k-1, k) S_k(z), summed until
/// the geometric majorant of the tail falls below target_eps * max(1, |value|).
ZetaValue zeta_closed(const ZetaParams& params, const BigComplex& z, double target_eps = 1e-30,
                      Precision prec = kDefaultPrecision);

double spectral_dimension(const ZetaParams& params);

enum class PoleOrder : std::uint8_t { None, Simple, Double };

struct ResidueReport {
  double z0 = 0.0;
  PoleOrder order = PoleOrder::None;
  std::vector<int> contributing_k;
  BigComplex residue;
  double error_bound = 0.0;
  std::optional<BigComplex> numeric_residue;  // Richardson limit of (z - z0) zeta(z), verify mode only
  bool cross_check_ok = true;
};

/// Which terms k have a vanishing denominator at the real point z0.
/// Throws DoublePole when beta = 0 (b = 0 without insertion).
ResidueReport pole_structure(const ZetaParams& params, double z0);

enum class ResidueMode : std::uint8_t { Fast, Verify };

/// Residue at z0 from the pole factors (each (1 - q^{z-z0})^{-1} contributes -1/ln q).
ResidueReport residue(const ZetaParams& params, double z0, ResidueMode mode = ResidueMode::Verify,
                      Precision prec = kDefaultPrecision);

/// Gamma(z0) times the residue; GammaPole at z0 in {0, -1, -2, ...}.
BigComplex residue_gamma_weighted(const ZetaParams& params, double z0, ResidueMode mode = ResidueMode::Verify,
                                  Precision prec = kDefaultPrecision);

struct A2ScanReport {
  std::vector<double> roots;
  std::vector<std::pair<double, double>> brackets;
  int samples = 0;
};

/// Roots in a of the residue at z0 = n - 2 = a - 1 for b = 1.
A2ScanReport a2_criterion_scan(const DeformationParameter& dp, double a_min, double a_max, int samples = 64,
                               Precision prec = kDefaultPrecision);

}  // namespace qsu2
