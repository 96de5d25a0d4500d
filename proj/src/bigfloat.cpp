#include "qsu2/bigfloat.hpp"

#include <cstdio>
#include <stdexcept>
#include <vector>

namespace qsu2 {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

Precision max_prec(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}

}  // namespace

BigFloat::BigFloat(Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double x, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_d(value_, x, kRound);
}

BigFloat::BigFloat(long x, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_si(value_, x, kRound);
}

BigFloat::BigFloat(const mpq_class& x, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_q(value_, x.get_mpq_t(), kRound);
}

BigFloat BigFloat::parse(std::string_view text, Precision prec) {
  BigFloat out(prec);
  std::string s(text);
  char* end = nullptr;
  if (mpfr_strtofr(out.value_, s.c_str(), &end, 10, kRound) == 0 && end == s.c_str()) {
    throw std::invalid_argument("not a number: " + s);
  }
  if (end != s.c_str() + s.size()) throw std::invalid_argument("trailing characters in number: " + s);
  return out;
}

BigFloat BigFloat::pi(Precision prec) {
  BigFloat out(prec);
  mpfr_const_pi(out.value_, kRound);
  return out;
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, kRound);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    if (precision() != other.precision()) mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, kRound);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

namespace {

// Raises `x` to precision `p` while keeping its value (exactly, since p only grows).
void widen(mpfr_ptr x, Precision p) {
  if (mpfr_get_prec(x) < p) mpfr_prec_round(x, p, kRound);
}

}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& rhs) {
  widen(value_, rhs.precision());
  mpfr_add(value_, value_, rhs.value_, kRound);
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& rhs) {
  widen(value_, rhs.precision());
  mpfr_sub(value_, value_, rhs.value_, kRound);
  return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& rhs) {
  widen(value_, rhs.precision());
  mpfr_mul(value_, value_, rhs.value_, kRound);
  return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& rhs) {
  widen(value_, rhs.precision());
  mpfr_div(value_, value_, rhs.value_, kRound);
  return *this;
}

BigFloat& BigFloat::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, kRound);
  return *this;
}

BigFloat& BigFloat::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, kRound);
  return *this;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat out(max_prec(a, b));
  mpfr_add(out.value_, a.value_, b.value_, kRound);
  return out;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat out(max_prec(a, b));
  mpfr_sub(out.value_, a.value_, b.value_, kRound);
  return out;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat out(max_prec(a, b));
  mpfr_mul(out.value_, a.value_, b.value_, kRound);
  return out;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat out(max_prec(a, b));
  mpfr_div(out.value_, a.value_, b.value_, kRound);
  return out;
}

BigFloat operator*(const BigFloat& a, long b) {
  BigFloat out(a.precision());
  mpfr_mul_si(out.value_, a.value_, b, kRound);
  return out;
}

BigFloat operator/(const BigFloat& a, long b) {
  BigFloat out(a.precision());
  mpfr_div_si(out.value_, a.value_, b, kRound);
  return out;
}

BigFloat BigFloat::operator-() const {
  BigFloat out(precision());
  mpfr_neg(out.value_, value_, kRound);
  return out;
}

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const BigFloat& a, double b) {
  if (mpfr_nan_p(a.value_) || b != b) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_d(a.value_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

bool operator==(const BigFloat& a, double b) { return (a <=> b) == std::partial_ordering::equivalent; }

std::string BigFloat::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  std::vector<char> buf(static_cast<std::size_t>(digits) + 32);
  const int n = mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, value_);
  if (n < 0) throw std::runtime_error("mpfr_snprintf failed");
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

BigFloat abs(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_abs(out.raw(), x.raw(), kRound);
  return out;
}

BigFloat sqrt(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_sqrt(out.raw(), x.raw(), kRound);
  return out;
}

BigFloat exp(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_exp(out.raw(), x.raw(), kRound);
  return out;
}

BigFloat log(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_log(out.raw(), x.raw(), kRound);
  return out;
}

BigFloat sin(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_sin(out.raw(), x.raw(), kRound);
  return out;
}

BigFloat cos(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_cos(out.raw(), x.raw(), kRound);
  return out;
}

BigFloat pow(const BigFloat& base, const BigFloat& exponent) {
  BigFloat out(max_prec(base, exponent));
  mpfr_pow(out.raw(), base.raw(), exponent.raw(), kRound);
  return out;
}

BigFloat pow(const BigFloat& base, long exponent) {
  BigFloat out(base.precision());
  mpfr_pow_si(out.raw(), base.raw(), exponent, kRound);
  return out;
}

BigFloat gamma(const BigFloat& x) {
  BigFloat out(x.precision());
  mpfr_gamma(out.raw(), x.raw(), kRound);
  return out;
}

BigFloat with_precision(const BigFloat& x, Precision prec) {
  BigFloat out(prec);
  mpfr_set(out.raw(), x.raw(), kRound);
  return out;
}

void add_into(BigFloat& out, const BigFloat& a, const BigFloat& b) { mpfr_add(out.raw(), a.raw(), b.raw(), kRound); }
void sub_into(BigFloat& out, const BigFloat& a, const BigFloat& b) { mpfr_sub(out.raw(), a.raw(), b.raw(), kRound); }
void mul_into(BigFloat& out, const BigFloat& a, const BigFloat& b) { mpfr_mul(out.raw(), a.raw(), b.raw(), kRound); }

BigComplex& BigComplex::operator+=(const BigComplex& rhs) {
  re_ += rhs.re_;
  im_ += rhs.im_;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& rhs) {
  re_ -= rhs.re_;
  im_ -= rhs.im_;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& rhs) {
  BigFloat re = re_ * rhs.re_ - im_ * rhs.im_;
  BigFloat im = re_ * rhs.im_ + im_ * rhs.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

BigComplex& BigComplex::operator*=(const BigFloat& rhs) {
  re_ *= rhs;
  im_ *= rhs;
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& rhs) {
  if (rhs.im_.is_zero()) {
    re_ /= rhs.re_;
    im_ /= rhs.re_;
    return *this;
  }
  // Smith's algorithm avoids overflow in the squared modulus.
  if (abs(rhs.re_) >= abs(rhs.im_)) {
    const BigFloat r = rhs.im_ / rhs.re_;
    const BigFloat den = rhs.re_ + rhs.im_ * r;
    BigFloat re = (re_ + im_ * r) / den;
    BigFloat im = (im_ - re_ * r) / den;
    re_ = std::move(re);
    im_ = std::move(im);
  } else {
    const BigFloat r = rhs.re_ / rhs.im_;
    const BigFloat den = rhs.re_ * r + rhs.im_;
    BigFloat re = (re_ * r + im_) / den;
    BigFloat im = (im_ * r - re_) / den;
    re_ = std::move(re);
    im_ = std::move(im);
  }
  return *this;
}

std::string BigComplex::to_string(int digits) const {
  return "(" + re_.to_string(digits) + ", " + im_.to_string(digits) + ")";
}

BigFloat abs(const BigComplex& z) {
  BigFloat out(z.precision());
  mpfr_hypot(out.raw(), z.re().raw(), z.im().raw(), kRound);
  return out;
}

BigComplex conj(const BigComplex& z) { return BigComplex(z.re(), -z.im()); }

BigComplex exp(const BigComplex& z) {
  const BigFloat m = exp(z.re());
  if (z.im().is_zero()) return BigComplex(m);
  BigFloat s(z.precision());
  BigFloat c(z.precision());
  mpfr_sin_cos(s.raw(), c.raw(), z.im().raw(), kRound);
  return BigComplex(m * c, m * s);
}

BigComplex pow(const BigFloat& positive_base, const BigComplex& z) {
  if (positive_base.sign() <= 0) throw std::domain_error("pow: base must be positive");
  return exp(z * log(with_precision(positive_base, std::max(positive_base.precision(), z.precision()))));
}

void mul_into(BigComplex& out, const BigComplex& a, const BigComplex& b, BigFloat& scratch) {
  // out may alias neither a nor b.
  mul_into(out.re(), a.re(), b.re());
  mul_into(scratch, a.im(), b.im());
  mpfr_sub(out.re().raw(), out.re().raw(), scratch.raw(), kRound);
  mul_into(out.im(), a.re(), b.im());
  mul_into(scratch, a.im(), b.re());
  mpfr_add(out.im().raw(), out.im().raw(), scratch.raw(), kRound);
}

void fma_into(BigComplex& out, const BigComplex& a, const BigComplex& b, BigFloat& scratch) {
  mul_into(scratch, a.re(), b.re());
  mpfr_add(out.re().raw(), out.re().raw(), scratch.raw(), kRound);
  mul_into(scratch, a.im(), b.im());
  mpfr_sub(out.re().raw(), out.re().raw(), scratch.raw(), kRound);
  mul_into(scratch, a.re(), b.im());
  mpfr_add(out.im().raw(), out.im().raw(), scratch.raw(), kRound);
  mul_into(scratch, a.im(), b.re());
  mpfr_add(out.im().raw(), out.im().raw(), scratch.raw(), kRound);
}

CompensatedSum::CompensatedSum(Precision prec) : sum_(prec), comp_(prec), t_(prec), d_(prec) {}

void CompensatedSum::add(const BigFloat& x) {
  // Neumaier: keep the rounding error of each addition in comp_.
  mpfr_add(t_.raw(), sum_.raw(), x.raw(), kRound);
  if (mpfr_cmpabs(sum_.raw(), x.raw()) >= 0) {
    mpfr_sub(d_.raw(), sum_.raw(), t_.raw(), kRound);
    mpfr_add(d_.raw(), d_.raw(), x.raw(), kRound);
  } else {
    mpfr_sub(d_.raw(), x.raw(), t_.raw(), kRound);
    mpfr_add(d_.raw(), d_.raw(), sum_.raw(), kRound);
  }
  mpfr_add(comp_.raw(), comp_.raw(), d_.raw(), kRound);
  mpfr_swap(sum_.raw(), t_.raw());
}

BigFloat CompensatedSum::value() const { return sum_ + comp_; }

}  // namespace qsu2
