#pragma once

#include <map>
#include <vector>

#include <gmpxx.h>

#include "qsu2/bigfloat.hpp"
#include "qsu2/qalgebra.hpp"

namespace qsu2 {

/// The weight Tr(Delta_L^{-a} Delta_R^{b} .).
struct WeightSpec {
  double a = 2.0;
  double b = 1.0;
  /// Throws DivergentParameters unless a + b > 0 and a - b > 0.
  void validate() const;
};

/// phi(x) = residue at z = a + b of Tr(Delta_L^{-a} Delta_R^{b} rho(x) |D|^{-z}).
///
/// Only monomials whose rho has zero lattice shift (b^n c^n) contribute; their
/// residue comes from the closed form with the b^n c^n insertion. Needs b > 0.
class NcIntegral {
 public:
  NcIntegral(DeformationParameter dp, WeightSpec w, Precision prec = kDefaultPrecision);

  const WeightSpec& weight() const { return w_; }
  BigComplex operator()(const Monomial& x) const;
  BigComplex operator()(const AlgebraElement& x) const;
  /// phi(x) / phi(1).
  BigComplex normalized(const Monomial& x) const;
  BigComplex normalized(const AlgebraElement& x) const;
  const BigComplex& phi_one() const { return phi_one_; }

 private:
  const BigComplex& bc_residue(int n) const;

  DeformationParameter dp_;
  WeightSpec w_;
  Precision prec_;
  mutable std::map<int, BigComplex> cache_;
  BigComplex phi_one_;
};

BigComplex nc_integral(const AlgebraElement& x, const DeformationParameter& dp, const WeightSpec& w,
                       Precision prec = kDefaultPrecision);
BigComplex normalized_integral(const AlgebraElement& x, const DeformationParameter& dp, const WeightSpec& w,
                               Precision prec = kDefaultPrecision);

struct HaarTerm {
  Monomial mono;
  BigComplex phi_tilde;
  BigFloat haar;
  double diff = 0.0;
  bool pass = false;
};

struct HaarReport {
  BigComplex phi_tilde;
  BigFloat haar;
  double diff = 0.0;
  bool pass = false;
  std::vector<HaarTerm> terms;                     // per monomial, coefficient 1
  std::vector<std::pair<double, BigComplex>> sweep;  // phi_tilde(x) for a in {1.5, 2, 3}
  double sweep_spread = 0.0;
  bool a_independent = false;
};

/// |phi_tilde(x) - h(x)| <= tol, per monomial and in total, plus the a-sweep.
HaarReport haar_equality_check(const AlgebraElement& x, const QAlgebra& alg, const WeightSpec& w, double tol = 1e-9,
                               Precision prec = kDefaultPrecision);

/// theta = sigma_L^{left_exp} o sigma_R^{right_exp}.
struct ModularDescriptor {
  mpq_class left_exp;
  mpq_class right_exp;

  ModularDescriptor then(const ModularDescriptor& o) const {
    return {left_exp + o.left_exp, right_exp + o.right_exp};
  }
  /// As a diagonal automorphism; throws if an exponent is not a half-integer.
  AutomorphismSpec spec() const;
  friend bool operator==(const ModularDescriptor& x, const ModularDescriptor& y) {
    return x.left_exp == y.left_exp && x.right_exp == y.right_exp;
  }
};

/// Descriptor of the Haar modular automorphism: sigma_L o sigma_R.
ModularDescriptor haar_descriptor();

/// sigma^phi o sigma_L^n with sigma^phi = sigma_L^{-a} o sigma_R^{b} and n = a + |b|, i.e. (|b|, b).
ModularDescriptor modular_descriptor(const WeightSpec& w);

struct ModularReport {
  BigComplex lhs;  // phi(x y)
  BigComplex rhs;  // phi(theta(y) x)
  double diff = 0.0;  // |lhs - rhs| / |phi(1)|
  bool pass = false;
};

ModularReport modular_property_check(const Monomial& x, const Monomial& y, const QAlgebra& alg, const WeightSpec& w,
                                     double tol = 1e-9, Precision prec = kDefaultPrecision);
ModularReport modular_property_check(const Monomial& x, const Monomial& y, const QAlgebra& alg, const NcIntegral& phi,
                                     double tol = 1e-9);

}  // namespace qsu2
