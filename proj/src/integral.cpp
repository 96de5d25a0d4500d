#include "qsu2/integral.hpp"

#include <cmath>

#include "qsu2/errors.hpp"
#include "qsu2/params.hpp"
#include "qsu2/zeta.hpp"

namespace qsu2 {

void WeightSpec::validate() const {
  if (!(a + b > 0) || !(a - b > 0))
    throw DivergentParameters("weight needs a + b > 0 and a - b > 0 (got a=" + std::to_string(a) +
                              ", b=" + std::to_string(b) + ")");
}

NcIntegral::NcIntegral(DeformationParameter dp, WeightSpec w, Precision prec)
    : dp_(std::move(dp)), w_(w), prec_(prec), phi_one_(prec) {
  w_.validate();
  if (!(w_.b > 0)) throw Error("nc_integral needs b > 0");
  phi_one_ = bc_residue(0);
}

const BigComplex& NcIntegral::bc_residue(int n) const {
  auto it = cache_.find(n);
  if (it != cache_.end()) return it->second;
  const ZetaParams p = ZetaParams(dp_, w_.a, w_.b).with_bc_power(n);
  const ResidueReport r = residue(p, w_.a + w_.b, ResidueMode::Fast, prec_);
  return cache_.emplace(n, r.residue).first->second;
}

BigComplex NcIntegral::operator()(const Monomial& x) const {
  if (!lattice_shift(x).is_zero()) return BigComplex(prec_);
  // zero shift forces p = 0 and m = n
  return bc_residue(x.m);
}

BigComplex NcIntegral::operator()(const AlgebraElement& x) const {
  CompensatedComplexSum acc(prec_);
  for (const auto& [mono, c] : x.terms()) {
    if (!lattice_shift(mono).is_zero()) continue;
    acc.add((*this)(mono) * c.to_bigfloat(prec_));
  }
  return acc.value();
}

BigComplex NcIntegral::normalized(const Monomial& x) const { return (*this)(x) / phi_one_; }
BigComplex NcIntegral::normalized(const AlgebraElement& x) const { return (*this)(x) / phi_one_; }

BigComplex nc_integral(const AlgebraElement& x, const DeformationParameter& dp, const WeightSpec& w, Precision prec) {
  return NcIntegral(dp, w, prec)(x);
}

BigComplex normalized_integral(const AlgebraElement& x, const DeformationParameter& dp, const WeightSpec& w,
                               Precision prec) {
  return NcIntegral(dp, w, prec).normalized(x);
}

HaarReport haar_equality_check(const AlgebraElement& x, const QAlgebra& alg, const WeightSpec& w, double tol,
                               Precision prec) {
  const NcIntegral phi(alg.parameter(), w, prec);
  HaarReport rep;
  auto diff_to = [&](const BigComplex& v, const BigFloat& h) { return abs(v - BigComplex(h)).to_double(); };
  bool all = true;
  for (const auto& [mono, c] : x.terms()) {
    HaarTerm t{mono, phi.normalized(mono), alg.haar_state(mono).to_bigfloat(prec)};
    t.diff = diff_to(t.phi_tilde, t.haar);
    t.pass = t.diff <= tol;
    all = all && t.pass;
    rep.terms.push_back(std::move(t));
  }
  rep.phi_tilde = phi.normalized(x);
  rep.haar = alg.haar_state(x).to_bigfloat(prec);
  rep.diff = diff_to(rep.phi_tilde, rep.haar);
  rep.pass = all && rep.diff <= tol;

  for (double a : {1.5, 2.0, 3.0}) {
    const WeightSpec wa{a, w.b};
    rep.sweep.emplace_back(a, NcIntegral(alg.parameter(), wa, prec).normalized(x));
  }
  for (const auto& [a1, v1] : rep.sweep)
    for (const auto& [a2, v2] : rep.sweep) rep.sweep_spread = std::max(rep.sweep_spread, abs(v1 - v2).to_double());
  rep.a_independent = rep.sweep_spread <= tol;
  return rep;
}

AutomorphismSpec ModularDescriptor::spec() const {
  // sigma_L = (1, -1), sigma_R = (1, 1) in (lambda, mu) exponents
  const mpq_class lambda = left_exp + right_exp, mu = right_exp - left_exp;
  auto half = [](const mpq_class& v) {
    const mpq_class t = v * 2;
    if (t.get_den() != 1 || !t.get_num().fits_sint_p())
      throw Error("modular descriptor exponent " + v.get_str() + " is not a half-integer");
    return HalfInt::from_twice(static_cast<int>(t.get_num().get_si()));
  };
  return {half(lambda), half(mu)};
}

ModularDescriptor haar_descriptor() { return {mpq_class(1), mpq_class(1)}; }

ModularDescriptor modular_descriptor(const WeightSpec& w) {
  w.validate();
  const mpq_class a(w.a), b(w.b);
  const mpq_class abs_b = b < 0 ? mpq_class(-b) : b;
  const ModularDescriptor sigma_phi{-a, b};
  const ModularDescriptor sigma_n{a + abs_b, 0};
  return sigma_phi.then(sigma_n);
}

ModularReport modular_property_check(const Monomial& x, const Monomial& y, const QAlgebra& alg, const NcIntegral& phi,
                                     double tol) {
  const AutomorphismSpec theta = modular_descriptor(phi.weight()).spec();
  ModularReport r;
  r.lhs = phi(alg.multiply(x, y));
  r.rhs = phi(alg.multiply(alg.apply(theta, AlgebraElement(y)), AlgebraElement(x)));
  r.diff = (abs(r.lhs - r.rhs) / abs(phi.phi_one())).to_double();
  r.pass = r.diff <= tol;
  return r;
}

ModularReport modular_property_check(const Monomial& x, const Monomial& y, const QAlgebra& alg, const WeightSpec& w,
                                     double tol, Precision prec) {
  return modular_property_check(x, y, alg, NcIntegral(alg.parameter(), w, prec), tol);
}

}  // namespace qsu2
