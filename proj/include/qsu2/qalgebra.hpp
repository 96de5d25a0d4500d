#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "qsu2/numerics.hpp"

namespace qsu2 {

enum class Side : std::uint8_t { A, D };

/// Normal-ordered monomial a^p b^m c^n (side A) or d^p b^m c^n (side D, p >= 1).
struct Monomial {
  Side side = Side::A;
  int p = 0;
  int m = 0;
  int n = 0;

  static Monomial one() { return {}; }
  static Monomial make(Side side, int p, int m, int n);
  static Monomial a(int p = 1) { return make(Side::A, p, 0, 0); }
  static Monomial d(int p = 1) { return make(Side::D, p, 0, 0); }
  static Monomial b(int m = 1) { return make(Side::A, 0, m, 0); }
  static Monomial c(int n = 1) { return make(Side::A, 0, 0, n); }

  int degree() const { return p + m + n; }
  bool is_one() const { return degree() == 0; }
  /// +p for powers of a, -p for powers of d.
  int signed_p() const { return side == Side::A ? p : -p; }
  /// Generator word, e.g. "aabcc" for a^2 b c^2; empty for the unit.
  std::string word() const;
  std::string to_string() const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Twice the k-weight (k|>x = q^{w/2} x) and twice the right k-weight (x<|k).
int left_weight_twice(const Monomial& mono);
int right_weight_twice(const Monomial& mono);

/// Lattice shift (2*dl, 2*di, 2*dj) produced by rho of the monomial.
struct LatticeShift {
  int l2 = 0;
  int i2 = 0;
  int j2 = 0;
  bool is_zero() const { return l2 == 0 && i2 == 0 && j2 == 0; }
  friend bool operator==(const LatticeShift&, const LatticeShift&) = default;
};
LatticeShift lattice_shift(const Monomial& mono);

/// Finite linear combination of normal-ordered monomials; zero coefficients are never stored.
class AlgebraElement {
 public:
  using Terms = std::map<Monomial, ExactScalar>;

  AlgebraElement() = default;
  AlgebraElement(const Monomial& mono, ExactScalar coeff = ExactScalar(1L));  // NOLINT
  static AlgebraElement scalar(ExactScalar s) { return AlgebraElement(Monomial::one(), std::move(s)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  ExactScalar coefficient(const Monomial& mono) const;
  int degree() const;

  void add_term(const Monomial& mono, const ExactScalar& coeff);
  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(const ExactScalar& s);
  friend AlgebraElement operator+(AlgebraElement x, const AlgebraElement& y) { return x += y; }
  friend AlgebraElement operator-(AlgebraElement x, const AlgebraElement& y) { return x -= y; }
  friend AlgebraElement operator*(AlgebraElement x, const ExactScalar& s) { return x *= s; }
  friend AlgebraElement operator*(const ExactScalar& s, AlgebraElement x) { return x *= s; }
  AlgebraElement operator-() const;

  friend bool operator==(const AlgebraElement& x, const AlgebraElement& y) { return x.terms_ == y.terms_; }

  std::string to_string() const;

 private:
  Terms terms_;
};

/// Diagonal automorphism a -> q^s a, d -> q^{-s} d, b -> q^t b, c -> q^{-t} c.
struct AutomorphismSpec {
  HalfInt lambda_exp;
  HalfInt mu_exp;

  static AutomorphismSpec identity() { return {}; }
  AutomorphismSpec then(const AutomorphismSpec& o) const {
    return {lambda_exp + o.lambda_exp, mu_exp + o.mu_exp};
  }
  /// Twice the q-exponent by which the spec scales a monomial.
  int scale_twice(const Monomial& mono) const {
    return lambda_exp.twice * mono.signed_p() + mu_exp.twice * (mono.m - mono.n);
  }
  friend bool operator==(const AutomorphismSpec&, const AutomorphismSpec&) = default;
};

/// sigma_L = k^{-2} acting from the left.
inline constexpr AutomorphismSpec kSigmaL{HalfInt::from_int(1), HalfInt::from_int(-1)};
/// sigma_R = k^{-2} acting from the right.
inline constexpr AutomorphismSpec kSigmaR{HalfInt::from_int(1), HalfInt::from_int(1)};
/// Modular automorphism of the Haar state, sigma_L o sigma_R.
inline constexpr AutomorphismSpec kTheta{HalfInt::from_int(2), HalfInt::from_int(0)};

enum class HopfGen : std::uint8_t { K, KInv, E, F };

struct TwistedComponents {
  AlgebraElement diagonal;
  AlgebraElement raising;
  AlgebraElement lowering;
};

/// The algebra O(SU_q(2)) at a fixed rational q.
///
/// Exact q-powers for small exponents are tabulated at construction; the object is
/// immutable afterwards and can be shared between threads.
class QAlgebra {
 public:
  explicit QAlgebra(DeformationParameter dp);

  const DeformationParameter& parameter() const { return dp_; }
  /// q^{twice/2}.
  ExactScalar qpow_twice(int twice) const;
  ExactScalar q_number(HalfInt x) const { return qsu2::q_number(dp_, x); }

  AlgebraElement gen(char g) const;
  AlgebraElement one() const { return AlgebraElement(Monomial::one()); }

  AlgebraElement multiply(const Monomial& x, const Monomial& y) const;
  AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) const;
  /// Normal-ordered product of a generator word such as "dbca".
  AlgebraElement word(std::string_view letters) const;
  AlgebraElement power(const AlgebraElement& x, int k) const;

  AlgebraElement star(const Monomial& x) const;
  AlgebraElement star(const AlgebraElement& x) const;

  AlgebraElement apply(const AutomorphismSpec& spec, const AlgebraElement& x) const;

  AlgebraElement left_action(HopfGen g, const AlgebraElement& x) const;
  AlgebraElement right_action(const AlgebraElement& x, HopfGen g) const;
  /// k^r acting from the left (r may be negative).
  AlgebraElement left_k_power(int r, const AlgebraElement& x) const;

  ExactScalar haar_state(const Monomial& x) const;
  ExactScalar haar_state(const AlgebraElement& x) const;
  ExactScalar haar_inner_product(const AlgebraElement& x, const AlgebraElement& y) const;

  TwistedComponents twisted_commutator_components(const AlgebraElement& x) const;

  /// Parses "a^2 b c^3 - 3/4 d b^2 + 1"; letters inside a term are multiplied in order.
  AlgebraElement parse(std::string_view text) const;

 private:
  AlgebraElement act_on_word(const Monomial& mono, bool left, HopfGen g) const;

  static constexpr int kTableHalf = 512;
  DeformationParameter dp_;
  std::vector<ExactScalar> qpow_table_;  // q^{t/2}, t in [-kTableHalf, kTableHalf]
};

}  // namespace qsu2
