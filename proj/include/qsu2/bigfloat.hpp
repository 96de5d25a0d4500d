#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <string>
#include <string_view>
#include <utility>

namespace qsu2 {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 128;

/// Arbitrary-precision real backed by an MPFR value.
///
/// Every value owns its precision. Binary operations produce a result at the
/// larger of the two operand precisions, so precision never drops silently.
class BigFloat {
 public:
  explicit BigFloat(Precision prec = kDefaultPrecision);
  BigFloat(double x, Precision prec);
  BigFloat(long x, Precision prec);
  BigFloat(int x, Precision prec) : BigFloat(static_cast<long>(x), prec) {}
  BigFloat(const mpq_class& x, Precision prec);

  static BigFloat parse(std::string_view text, Precision prec);
  static BigFloat pi(Precision prec);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  Precision precision() const { return mpfr_get_prec(value_); }
  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }

  BigFloat& operator+=(const BigFloat& rhs);
  BigFloat& operator-=(const BigFloat& rhs);
  BigFloat& operator*=(const BigFloat& rhs);
  BigFloat& operator/=(const BigFloat& rhs);
  BigFloat& operator*=(long rhs);
  BigFloat& operator/=(long rhs);

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, long b);
  friend BigFloat operator/(const BigFloat& a, long b);
  BigFloat operator-() const;

  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);
  friend bool operator==(const BigFloat& a, const BigFloat& b);
  friend std::partial_ordering operator<=>(const BigFloat& a, double b);
  friend bool operator==(const BigFloat& a, double b);

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  /// Decimal scientific notation with `digits` significant digits.
  std::string to_string(int digits = 40) const;

 private:
  mpfr_t value_;
};

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat sin(const BigFloat& x);
BigFloat cos(const BigFloat& x);
BigFloat pow(const BigFloat& base, const BigFloat& exponent);
BigFloat pow(const BigFloat& base, long exponent);
BigFloat gamma(const BigFloat& x);
BigFloat with_precision(const BigFloat& x, Precision prec);

// In-place kernels for hot loops; `out` keeps its own precision.
void add_into(BigFloat& out, const BigFloat& a, const BigFloat& b);
void sub_into(BigFloat& out, const BigFloat& a, const BigFloat& b);
void mul_into(BigFloat& out, const BigFloat& a, const BigFloat& b);

/// Complex number with BigFloat components.
class BigComplex {
 public:
  explicit BigComplex(Precision prec = kDefaultPrecision) : re_(prec), im_(prec) {}
  BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit BigComplex(const BigFloat& re) : re_(re), im_(re.precision()) {}
  BigComplex(double re, double im, Precision prec) : re_(re, prec), im_(im, prec) {}

  const BigFloat& re() const { return re_; }
  const BigFloat& im() const { return im_; }
  BigFloat& re() { return re_; }
  BigFloat& im() { return im_; }
  Precision precision() const { return std::max(re_.precision(), im_.precision()); }

  BigComplex& operator+=(const BigComplex& rhs);
  BigComplex& operator-=(const BigComplex& rhs);
  BigComplex& operator*=(const BigComplex& rhs);
  BigComplex& operator*=(const BigFloat& rhs);
  BigComplex& operator/=(const BigComplex& rhs);

  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator*(BigComplex a, const BigFloat& b) { return a *= b; }
  friend BigComplex operator*(const BigFloat& a, BigComplex b) { return b *= a; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }
  BigComplex operator-() const { return BigComplex(-re_, -im_); }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  std::string to_string(int digits = 40) const;

 private:
  BigFloat re_;
  BigFloat im_;
};

BigFloat abs(const BigComplex& z);
BigComplex conj(const BigComplex& z);
BigComplex exp(const BigComplex& z);
/// base^z for a strictly positive real base (principal branch).
BigComplex pow(const BigFloat& positive_base, const BigComplex& z);

/// out += a * b, using `scratch` to avoid allocation.
void fma_into(BigComplex& out, const BigComplex& a, const BigComplex& b, BigFloat& scratch);
void mul_into(BigComplex& out, const BigComplex& a, const BigComplex& b, BigFloat& scratch);

/// Neumaier (Kahan-Babuska) compensated accumulator for BigFloat values.
class CompensatedSum {
 public:
  explicit CompensatedSum(Precision prec = kDefaultPrecision);
  void add(const BigFloat& x);
  BigFloat value() const;
  const BigFloat& compensation() const { return comp_; }

 private:
  BigFloat sum_;
  BigFloat comp_;
  BigFloat t_;
  BigFloat d_;
};

/// Componentwise compensated accumulation of complex values.
class CompensatedComplexSum {
 public:
  explicit CompensatedComplexSum(Precision prec = kDefaultPrecision) : re_(prec), im_(prec) {}
  void add(const BigComplex& z) {
    re_.add(z.re());
    im_.add(z.im());
  }
  BigComplex value() const { return BigComplex(re_.value(), im_.value()); }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace qsu2
