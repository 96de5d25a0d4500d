#pragma once

#include <gmpxx.h>

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "qsu2/bigfloat.hpp"

namespace qsu2 {

/// A half-integer x stored as the integer 2x.
struct HalfInt {
  int twice = 0;

  static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
  static constexpr HalfInt from_int(int n) { return HalfInt{2 * n}; }

  constexpr bool is_integer() const { return twice % 2 == 0; }
  double to_double() const { return twice / 2.0; }
  std::string to_string() const;

  constexpr HalfInt operator-() const { return HalfInt{-twice}; }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice += o.twice;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice -= o.twice;
    return *this;
  }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt{a.twice + b.twice}; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt{a.twice - b.twice}; }
  friend constexpr HalfInt operator*(int n, HalfInt a) { return HalfInt{n * a.twice}; }
  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
};

inline constexpr HalfInt kHalf = HalfInt::from_twice(1);

/// Exact scalar in the field Q(sqrt r): value = rational + irrational * sqrt(r).
///
/// The radicand is shared by every scalar derived from the same deformation
/// parameter. A null radicand means the value is a plain rational.
class ExactScalar {
 public:
  using Radicand = std::shared_ptr<const mpq_class>;

  ExactScalar() = default;
  ExactScalar(long n) : rational_(n) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(mpq_class q) : rational_(std::move(q)) { rational_.canonicalize(); }  // NOLINT
  ExactScalar(mpq_class rational, mpq_class irrational, Radicand radicand);

  const mpq_class& rational_part() const { return rational_; }
  const mpq_class& irrational_part() const { return irrational_; }
  const Radicand& radicand() const { return radicand_; }
  bool is_rational() const { return irrational_ == 0; }
  bool is_zero() const { return rational_ == 0 && irrational_ == 0; }

  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  ExactScalar& operator/=(const ExactScalar& o);
  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
  ExactScalar operator-() const;
  ExactScalar inverse() const;

  friend bool operator==(const ExactScalar& a, const ExactScalar& b);

  BigFloat to_bigfloat(Precision prec) const;
  double to_double() const { return to_bigfloat(64).to_double(); }
  /// "p/r" for rationals, "p/r + s/t*sqrt(u)" otherwise.
  std::string to_string() const;

 private:
  void adopt(const Radicand& other);

  mpq_class rational_{0};
  mpq_class irrational_{0};
  Radicand radicand_;
};

ExactScalar pow(const ExactScalar& base, int exponent);

/// The deformation parameter 0 < q < 1 together with v = q^{1/2}.
///
/// v is a rational number when q is a rational square; otherwise v is the
/// generator sqrt(q) of the quadratic field carried by ExactScalar.
class DeformationParameter {
 public:
  static DeformationParameter from_q(const mpq_class& q);
  static DeformationParameter from_v(const mpq_class& v);
  /// Parses "p/r" or a decimal such as "0.3" into an exact rational q.
  static DeformationParameter parse(std::string_view text);

  const mpq_class& q() const { return q_; }
  const ExactScalar& v() const { return v_; }
  bool v_is_rational() const { return v_.is_rational(); }
  std::string to_string() const { return q_.get_str(); }

 private:
  DeformationParameter(mpq_class q, ExactScalar v) : q_(std::move(q)), v_(std::move(v)) {}
  mpq_class q_;
  ExactScalar v_;
};

mpq_class parse_rational(std::string_view text);

/// q^x = v^{2x}, exact.
ExactScalar q_pow(const DeformationParameter& dp, HalfInt x);
/// [x]_q = (q^{-x} - q^x) / (q^{-1} - q), exact.
ExactScalar q_number(const DeformationParameter& dp, HalfInt x);

/// Floating-point view of q at a working precision; ln q is cached once at
/// prec + 32 guard bits.
class FloatContext {
 public:
  FloatContext(const mpq_class& q, Precision prec = kDefaultPrecision);
  explicit FloatContext(const DeformationParameter& dp, Precision prec = kDefaultPrecision)
      : FloatContext(dp.q(), prec) {}

  Precision precision() const { return prec_; }
  const mpq_class& q_exact() const { return q_exact_; }
  const BigFloat& q() const { return q_; }
  const BigFloat& sqrt_q() const { return sqrt_q_; }
  /// ln q at precision + 32 bits.
  const BigFloat& log_q() const { return log_q_; }

  BigFloat real(double x) const { return BigFloat(x, prec_); }
  BigFloat real(long x) const { return BigFloat(x, prec_); }

  /// q^x for a half-integer x.
  BigFloat pow(HalfInt x) const;
  /// q^x for a real x.
  BigFloat pow(const BigFloat& x) const;
  /// [x]_q for a half-integer x.
  BigFloat q_number(HalfInt x) const;

 private:
  mpq_class q_exact_;
  Precision prec_;
  BigFloat q_;
  BigFloat sqrt_q_;
  BigFloat log_q_;
};

/// q^z = exp(z ln q), principal branch.
BigComplex q_complex_pow(const FloatContext& ctx, const BigComplex& z);

/// prod_{m=1..k} (z + m - 1) / m, i.e. the binomial coefficient C(z+k-1, k).
BigComplex gen_binomial(const BigComplex& z, unsigned k);

}  // namespace qsu2
