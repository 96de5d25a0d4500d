#pragma once

#include <cstdint>
#include <string>

#include "qsu2/numerics.hpp"

namespace qsu2 {

/// One member of the zeta family: weight Tr(Delta_L^{-a} Delta_R^{b} . |D|^{-z}) with an
/// optional diagonal insertion const * q^{2 shift_i i} q^{2 shift_l l}.
struct ZetaParams {
  DeformationParameter dp;
  double a = 2.0;
  double b = 1.0;
  int shift_i = 0;
  int shift_l = 0;
  ExactScalar const_factor{1L};

  ZetaParams(DeformationParameter dp_in, double a_in, double b_in)
      : dp(std::move(dp_in)), a(a_in), b(b_in) {}

  /// The insertion b^n c^n, whose rho-diagonal is (-1)^n q^{2nl} q^{2ni} q^n.
  ZetaParams with_bc_power(int n) const;

  /// Throws DivergentParameters unless a + b > 0 and a - b > 0.
  void validate() const;
  double spectral_dimension() const;
  bool has_insertion() const { return shift_i != 0 || shift_l != 0 || !(const_factor == ExactScalar(1L)); }
};

enum class ExecPolicy : std::uint8_t { Serial, Parallel };

}  // namespace qsu2
