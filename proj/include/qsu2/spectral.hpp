#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsu2/bigfloat.hpp"
#include "qsu2/numerics.hpp"
#include "qsu2/params.hpp"
#include "qsu2/qalgebra.hpp"

namespace qsu2 {

/// Index (l, i, j) of the basis vector xi^l_{i,j}.
struct LatticePoint {
  HalfInt l;
  HalfInt i;
  HalfInt j;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

enum class Spinor : std::uint8_t { Up = 0, Down = 1 };

struct SpinorSite {
  LatticePoint point;
  Spinor component = Spinor::Up;
  friend bool operator==(const SpinorSite&, const SpinorSite&) = default;
};

/// Spinor-doubled lattice l <= l_max, ordered by l, then i, then j, then spinor.
///
/// With L = 2l, I = i + l and J = j + l the site index is
/// 2 * (L(L+1)(2L+1)/6 + I(L+1) + J) + spinor.
class Lattice {
 public:
  explicit Lattice(HalfInt l_max);

  HalfInt l_max() const { return HalfInt::from_twice(l2_max_); }
  int l2_max() const { return l2_max_; }
  std::size_t num_points() const { return shell_offset(l2_max_ + 1); }
  std::size_t num_sites() const { return 2 * num_points(); }

  static std::size_t shell_offset(int l2) {
    const auto L = static_cast<std::size_t>(l2);
    return L * (L + 1) * (2 * L + 1) / 6;
  }
  static bool valid(int l2, int i2, int j2) {
    return l2 >= 0 && i2 >= -l2 && i2 <= l2 && j2 >= -l2 && j2 <= l2 && ((l2 - i2) & 1) == 0 && ((l2 - j2) & 1) == 0;
  }

  std::size_t point_index(int l2, int i2, int j2) const {
    const int I = (i2 + l2) / 2, J = (j2 + l2) / 2;
    return shell_offset(l2) + static_cast<std::size_t>(I) * static_cast<std::size_t>(l2 + 1) + static_cast<std::size_t>(J);
  }
  std::size_t site_index(int l2, int i2, int j2, Spinor s) const {
    return 2 * point_index(l2, i2, j2) + static_cast<std::size_t>(s);
  }
  /// Index of the site, or nothing if it is not a basis vector or lies beyond l_max.
  std::optional<std::size_t> find(int l2, int i2, int j2, Spinor s) const {
    if (l2 > l2_max_ || !valid(l2, i2, j2)) return std::nullopt;
    return site_index(l2, i2, j2, s);
  }
  std::size_t index(const SpinorSite& s) const {
    return site_index(s.point.l.twice, s.point.i.twice, s.point.j.twice, s.component);
  }
  SpinorSite site(std::size_t idx) const;

 private:
  int l2_max_;
};

std::vector<SpinorSite> build_lattice(HalfInt l_max);

/// Sparse operator on a truncated spinor lattice, stored by columns:
/// T e_col = sum over entries of value * e_row.
class TruncatedOperator {
 public:
  struct Entry {
    std::uint32_t row;
    BigComplex value;
  };

  TruncatedOperator(Lattice lattice, HalfInt interior_l, Precision prec);

  const Lattice& lattice() const { return lattice_; }
  HalfInt interior_l() const { return interior_l_; }
  Precision precision() const { return prec_; }
  std::size_t dim() const { return cols_.size(); }
  std::size_t nnz() const;

  const std::vector<Entry>& column(std::size_t col) const { return cols_[col]; }
  std::vector<Entry>& column(std::size_t col) { return cols_[col]; }
  /// Adds v to the (row, col) entry.
  void add(std::size_t row, std::size_t col, const BigComplex& v);
  BigComplex entry(std::size_t row, std::size_t col) const;

  TruncatedOperator adjoint() const;
  std::vector<BigComplex> apply(const std::vector<BigComplex>& x) const;

 private:
  Lattice lattice_;
  HalfInt interior_l_;
  Precision prec_;
  std::vector<std::vector<Entry>> cols_;
};

/// A * B; the interior shrinks to the smaller of the two.
TruncatedOperator compose(const TruncatedOperator& A, const TruncatedOperator& B,
                          ExecPolicy policy = ExecPolicy::Parallel);
TruncatedOperator operator+(const TruncatedOperator& A, const TruncatedOperator& B);
TruncatedOperator operator-(const TruncatedOperator& A, const TruncatedOperator& B);
TruncatedOperator scaled(const TruncatedOperator& A, const BigComplex& s);

// Site-level coefficients shared by operator assembly, probes and the trace oracle.

/// Diagonal of D_q at (j, spinor).
BigFloat dirac_diagonal(const FloatContext& ctx, int j2, Spinor s);
/// Off-diagonal of D_q from (l, j, s) to the other spinor at j + 1 (s = Down) or j - 1 (s = Up).
BigFloat dirac_offdiagonal(const FloatContext& ctx, int l2, int j2, Spinor s);
/// |D_q| eigenvalue q^{+-1/2} q^{-j} [l + 1/2].
BigFloat abs_dirac(const FloatContext& ctx, int l2, int j2, Spinor s);

struct RhoStep {
  int l2, i2, j2;
  BigFloat coeff;
};
/// rho(g) applied to xi^l_{i,j}, g in {a, b, c, d}; nothing if the image leaves the lattice or l_max.
std::optional<RhoStep> rho_step(const FloatContext& ctx, char g, int l2, int i2, int j2, int l2_max);
/// Image of a site under rho(monomial) (c first, then b, then a/d) with its coefficient.
std::optional<RhoStep> rho_monomial_step(const FloatContext& ctx, const Monomial& mono, int l2, int i2, int j2,
                                         int l2_max);

TruncatedOperator op_modular_L(const FloatContext& ctx, HalfInt l_max);
TruncatedOperator op_modular_R(const FloatContext& ctx, HalfInt l_max);
TruncatedOperator op_casimir(const FloatContext& ctx, HalfInt l_max);
TruncatedOperator op_chi(const FloatContext& ctx, HalfInt l_max);
TruncatedOperator build_dirac(const FloatContext& ctx, HalfInt l_max);
TruncatedOperator op_absD_power(const FloatContext& ctx, HalfInt l_max, const BigComplex& z);
TruncatedOperator rho_apply(const FloatContext& ctx, const Monomial& mono, HalfInt l_max);
TruncatedOperator rho_apply(const FloatContext& ctx, const AlgebraElement& x, HalfInt l_max);

struct TruncatedZetaResult {
  BigComplex partial_sum;      // sum over all shells l <= l_max
  BigComplex value;            // partial sum plus extrapolated tail
  BigFloat tail_estimate;      // |value - partial_sum|
  BigFloat tail_uncertainty;   // spread of the extrapolation
  int shells = 0;
};

/// Per-shell sums T_L (L = 2l) of diag(Delta_L^{-a} Delta_R^{b} rho(insertion) |D|^{-z}).
/// Uses only dp, a, b of the params; the insertion enters through rho.
std::vector<BigComplex> zeta_shell_sums(const ZetaParams& params, const BigComplex& z, HalfInt l_max,
                                        const std::optional<Monomial>& insertion, Precision prec,
                                        ExecPolicy policy = ExecPolicy::Parallel);

/// Brute-force trace over the lattice plus a Wynn-epsilon tail estimate.
TruncatedZetaResult truncated_zeta(const ZetaParams& params, const BigComplex& z, HalfInt l_max,
                                   const std::optional<Monomial>& insertion = std::nullopt,
                                   Precision prec = kDefaultPrecision, ExecPolicy policy = ExecPolicy::Parallel);

/// Wynn epsilon extrapolation of a sequence of partial sums; returns (limit, uncertainty).
std::pair<BigComplex, BigFloat> wynn_epsilon(const std::vector<BigComplex>& partial_sums);

}  // namespace qsu2
