#include "qsu2/numerics.hpp"

#include <cctype>
#include <stdexcept>

#include "qsu2/errors.hpp"

namespace qsu2 {

std::string HalfInt::to_string() const {
  if (is_integer()) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

ExactScalar::ExactScalar(mpq_class rational, mpq_class irrational, Radicand radicand)
    : rational_(std::move(rational)), irrational_(std::move(irrational)), radicand_(std::move(radicand)) {
  rational_.canonicalize();
  irrational_.canonicalize();
  if (irrational_ != 0 && !radicand_) throw std::logic_error("ExactScalar: irrational part without radicand");
}

void ExactScalar::adopt(const Radicand& other) {
  if (!other || other == radicand_) return;
  if (!radicand_) {
    radicand_ = other;
    return;
  }
  if (*radicand_ != *other) throw std::logic_error("ExactScalar: mixing scalars over different fields");
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  adopt(o.radicand_);
  rational_ += o.rational_;
  irrational_ += o.irrational_;
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
  adopt(o.radicand_);
  rational_ -= o.rational_;
  irrational_ -= o.irrational_;
  return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
  adopt(o.radicand_);
  if (irrational_ == 0 && o.irrational_ == 0) {
    rational_ *= o.rational_;
    return *this;
  }
  mpq_class r = rational_ * o.rational_ + irrational_ * o.irrational_ * (*radicand_);
  mpq_class s = rational_ * o.irrational_ + irrational_ * o.rational_;
  rational_ = std::move(r);
  irrational_ = std::move(s);
  return *this;
}

ExactScalar ExactScalar::inverse() const {
  if (is_zero()) throw std::domain_error("ExactScalar: division by zero");
  if (irrational_ == 0) {
    ExactScalar out(mpq_class(1) / rational_);
    out.radicand_ = radicand_;
    return out;
  }
  // (r + s sqrt d)^{-1} = (r - s sqrt d) / (r^2 - s^2 d); d is not a square.
  const mpq_class norm = rational_ * rational_ - irrational_ * irrational_ * (*radicand_);
  return ExactScalar(rational_ / norm, -irrational_ / norm, radicand_);
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  ExactScalar inv = o.inverse();
  return *this *= inv;
}

ExactScalar ExactScalar::operator-() const { return ExactScalar(-rational_, -irrational_, radicand_); }

bool operator==(const ExactScalar& a, const ExactScalar& b) {
  return a.rational_ == b.rational_ && a.irrational_ == b.irrational_;
}

BigFloat ExactScalar::to_bigfloat(Precision prec) const {
  BigFloat out(rational_, prec + 16);
  if (irrational_ != 0) out += BigFloat(irrational_, prec + 16) * sqrt(BigFloat(*radicand_, prec + 16));
  return with_precision(out, prec);
}

std::string ExactScalar::to_string() const {
  if (irrational_ == 0) return rational_.get_str();
  std::string s = rational_ == 0 ? std::string() : rational_.get_str() + " + ";
  return s + irrational_.get_str() + "*sqrt(" + radicand_->get_str() + ")";
}

ExactScalar pow(const ExactScalar& base, int exponent) {
  if (exponent < 0) return pow(base.inverse(), -exponent);
  if (base.is_rational()) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), base.rational_part().get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(r.get_den_mpz_t(), base.rational_part().get_den_mpz_t(), static_cast<unsigned long>(exponent));
    return ExactScalar(r, 0, base.radicand());
  }
  ExactScalar result(mpq_class(1), mpq_class(0), base.radicand());
  ExactScalar square = base;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1U) result *= square;
    if (e > 1) square *= square;
  }
  return result;
}

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  if (s.empty()) throw ParseError("empty rational");
  try {
    const auto dot = s.find('.');
    if (dot == std::string::npos) {
      mpq_class r(s, 10);
      r.canonicalize();
      return r;
    }
    if (s.find('/') != std::string::npos) throw ParseError("mixed decimal and fraction: " + s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t scale = s.size() - dot - 1;
    mpz_class num(digits.empty() || digits == "-" ? std::string("0") : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    mpq_class r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ParseError("not a rational number: " + s);
  }
}

namespace {

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0) {
    return std::nullopt;
  }
  mpq_class r;
  mpz_sqrt(r.get_num_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(r.get_den_mpz_t(), q.get_den_mpz_t());
  r.canonicalize();
  return r;
}

}  // namespace

DeformationParameter DeformationParameter::from_q(const mpq_class& q_in) {
  mpq_class q = q_in;
  q.canonicalize();
  if (q <= 0 || q >= 1) throw std::invalid_argument("q must satisfy 0 < q < 1, got " + q.get_str());
  if (auto v = rational_sqrt(q)) return DeformationParameter(q, ExactScalar(*v));
  auto radicand = std::make_shared<const mpq_class>(q);
  return DeformationParameter(q, ExactScalar(mpq_class(0), mpq_class(1), radicand));
}

DeformationParameter DeformationParameter::from_v(const mpq_class& v_in) {
  mpq_class v = v_in;
  v.canonicalize();
  if (v <= 0 || v >= 1) throw std::invalid_argument("v must satisfy 0 < v < 1, got " + v.get_str());
  return DeformationParameter(v * v, ExactScalar(v));
}

DeformationParameter DeformationParameter::parse(std::string_view text) { return from_q(parse_rational(text)); }

ExactScalar q_pow(const DeformationParameter& dp, HalfInt x) {
  if (x.is_integer()) return pow(ExactScalar(dp.q(), 0, dp.v().radicand()), x.twice / 2);
  return pow(dp.v(), x.twice);
}

ExactScalar q_number(const DeformationParameter& dp, HalfInt x) {
  const ExactScalar num = q_pow(dp, -x) - q_pow(dp, x);
  const ExactScalar den = q_pow(dp, HalfInt::from_int(-1)) - q_pow(dp, HalfInt::from_int(1));
  return num / den;
}

FloatContext::FloatContext(const mpq_class& q, Precision prec)
    : q_exact_(q), prec_(prec), q_(q, prec), sqrt_q_(sqrt(BigFloat(q, prec))), log_q_(log(BigFloat(q, prec + 32))) {
  if (q <= 0 || q >= 1) throw std::invalid_argument("q must satisfy 0 < q < 1, got " + q.get_str());
}

BigFloat FloatContext::pow(HalfInt x) const {
  if (x.is_integer()) return qsu2::pow(q_, static_cast<long>(x.twice / 2));
  return qsu2::pow(sqrt_q_, static_cast<long>(x.twice));
}

BigFloat FloatContext::pow(const BigFloat& x) const {
  return with_precision(exp(with_precision(x, prec_ + 32) * log_q_), std::max(prec_, x.precision()));
}

BigFloat FloatContext::q_number(HalfInt x) const {
  return (pow(-x) - pow(x)) / (pow(HalfInt::from_int(-1)) - q_);
}

BigComplex q_complex_pow(const FloatContext& ctx, const BigComplex& z) {
  const Precision out_prec = std::max(ctx.precision(), z.precision());
  BigComplex w(with_precision(z.re(), out_prec + 32), with_precision(z.im(), out_prec + 32));
  w *= ctx.log_q();
  BigComplex e = exp(w);
  return BigComplex(with_precision(e.re(), out_prec), with_precision(e.im(), out_prec));
}

BigComplex gen_binomial(const BigComplex& z, unsigned k) {
  BigComplex out(BigFloat(1L, z.precision()));
  for (unsigned m = 1; m <= k; ++m) {
    BigComplex factor = z;
    factor.re() += BigFloat(static_cast<long>(m) - 1, z.precision());
    out *= factor;
    out.re() /= static_cast<long>(m);
    out.im() /= static_cast<long>(m);
  }
  return out;
}

}  // namespace qsu2
