#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "qsu2/errors.hpp"
#include "qsu2/spectral.hpp"
#include "qsu2/zeta.hpp"

using namespace qsu2;

namespace {

HalfInt hi(int twice) { return HalfInt::from_twice(twice); }
BigComplex cz(double re, double im = 0.0, Precision p = 128) { return BigComplex(re, im, p); }

double rel(const BigComplex& x, const BigComplex& y) {
  const BigFloat s = std::max(abs(x), abs(y));
  return s.is_zero() ? 0.0 : (abs(x - y) / s).to_double();
}

double qnum(double q, double x) { return (std::pow(q, -x) - std::pow(q, x)) / (1 / q - q); }

// (q^{-1}-q)^a (q^{a+1}+1) / ((q^a - q) ln q), evaluated in MPFR
BigFloat phi1_closed(const mpq_class& qq, double a, Precision p) {
  const BigFloat q(qq, p), one(1L, p), A(a, p);
  return pow(one / q - q, A) * (pow(q, A + one) + one) / ((pow(q, A) - q) * log(q));
}

}  // namespace

TEST_CASE("S_k against a direct lattice sum") {
  const auto dp = DeformationParameter::parse("1/2");
  const ZetaParams p(dp, 2.0, 1.0);
  const Precision prec = 160;
  const FloatContext ctx(dp, prec);
  for (unsigned k : {0u, 1u, 3u}) {
    const double z = 4.0;
    // sum_{2l <= 120} q^{(z-2a) j} q^{2 b i} q^{(l+1/2)(z+2k)}
    CompensatedSum acc(prec);
    for (int L = 0; L <= 120; ++L)
      for (int i2 = -L; i2 <= L; i2 += 2)
        for (int j2 = -L; j2 <= L; j2 += 2)
          acc.add(ctx.pow(BigFloat((z - 4.0) * j2 / 2 + 1.0 * i2 + (L + 1) / 2.0 * (z + 2 * k), prec)));
    CHECK(rel(S_k(p, k, cz(z, 0, prec), prec), BigComplex(acc.value())) < 1e-20);
  }
}

TEST_CASE("S_k: b -> -b symmetry and geometric decay") {
  const auto dp = DeformationParameter::parse("3/10");
  const ZetaParams p(dp, 2.0, 1.0), m(dp, 2.0, -1.0);
  const BigComplex z = cz(4.3, 0.7);
  BigFloat prev = abs(S_k(p, 10, z));
  for (unsigned k = 0; k < 40; ++k) CHECK(rel(S_k(p, k, z), S_k(m, k, z)) < 1e-35);
  for (unsigned k = 11; k < 60; ++k) {
    const BigFloat cur = abs(S_k(p, k, z));
    // |S_{k+1}/S_k| -> q
    CHECK((cur / prev).to_double() < 0.3 * 1.01);
    prev = cur;
  }
  CHECK_THROWS_AS(S_k(p, 0, cz(3.0)), PoleHit);
}

TEST_CASE("zeta_closed matches the lattice trace") {
  for (const char* qs : {"3/10", "1/2", "4/5"}) {
    const auto dp = DeformationParameter::parse(qs);
    for (double b : {1.0, -1.0}) {
      const ZetaParams p(dp, 2.0, b);
      for (const BigComplex& z : {cz(3.5), cz(4.0, 0.6), cz(5.0)}) {
        const ZetaValue c = zeta_closed(p, z);
        const TruncatedZetaResult t = truncated_zeta(p, z, hi(120));
        const double bound = (c.tail_bound + t.tail_uncertainty).to_double();
        const double diff = abs(c.value - t.value).to_double();
        CHECK_MESSAGE(diff <= bound + 1e-8 * abs(c.value).to_double(), qs << " z=" << z.to_string(6));
        CHECK(rel(c.value, t.value) < 1e-8);
      }
    }
  }
}

TEST_CASE("zeta_closed: tail bound, b symmetry, parameter checks") {
  const auto dp = DeformationParameter::parse("1/2");
  const ZetaValue v = zeta_closed(ZetaParams(dp, 2.0, 1.0), cz(5.0));
  CHECK(v.tail_bound.to_double() < 1e-20);
  CHECK(v.k_truncation > 0);
  for (const BigComplex& z : {cz(3.7), cz(6.1, -2.0), cz(1.5, 0.4)})
    CHECK(rel(zeta_closed(ZetaParams(dp, 2.0, 1.0), z).value, zeta_closed(ZetaParams(dp, 2.0, -1.0), z).value) < 1e-30);
  CHECK_THROWS_AS(zeta_closed(ZetaParams(dp, 1.0, 1.0), cz(5.0)), DivergentParameters);
  CHECK_THROWS_AS(zeta_closed(ZetaParams(dp, 2.0, 1.0), cz(3.0)), PoleHit);
  CHECK_THROWS_AS(zeta_closed(ZetaParams(dp, 2.0, 1.0), cz(1.0)), PoleHit);
  // b = 0 evaluates; only residues reject it
  CHECK(abs(zeta_closed(ZetaParams(dp, 2.0, 0.0), cz(5.0)).value).to_double() > 0);
  // near-classical q needs more terms
  const ZetaValue slow = zeta_closed(ZetaParams(DeformationParameter::parse("9/10"), 2.0, 1.0), cz(5.0));
  CHECK(slow.k_truncation > v.k_truncation);
}

TEST_CASE("insertions: closed form = masked trace + edge sites") {
  const auto dp = DeformationParameter::parse("1/2");
  const ZetaParams base(dp, 2.0, 1.0);
  const Precision prec = 128;
  const FloatContext ctx(dp, prec + 32);
  const double z = 4.0;
  for (int n = 1; n <= 2; ++n) {
    const ZetaParams p = base.with_bc_power(n);
    const ZetaValue c = zeta_closed(p, cz(z));
    const auto t = truncated_zeta(base, cz(z), hi(120), Monomial::make(Side::A, 0, n, n), prec);
    // ideal diagonal (-1)^n q^{2n(l+i)+n} on the sites rho(b^n c^n) drops
    CompensatedSum edge(prec + 32);
    for (int L = 0; L <= 120; ++L)
      for (int i2 = -L; i2 <= L; i2 += 2)
        for (int j2 = -L; j2 <= L; j2 += 2) {
          if ((L - i2) / 2 >= n && (L + j2) / 2 >= n) continue;
          BigFloat w = pow(ctx.q_number(hi(L + 1)), BigFloat(-z, prec + 32));
          w *= ctx.pow(BigFloat(1.0 * i2 + (z - 4.0) * j2 / 2 + n * (L + i2) + n, prec + 32));
          w *= ctx.pow(BigFloat(-z / 2, prec + 32)) + ctx.pow(BigFloat(z / 2, prec + 32));
          edge.add(n % 2 ? -w : w);
        }
    CHECK_MESSAGE(rel(c.value, t.value + BigComplex(edge.value())) < 1e-25, "n = " << n);
  }
}

TEST_CASE("spectral dimension") {
  const auto dp = DeformationParameter::parse("1/2");
  CHECK(spectral_dimension(ZetaParams(dp, 2.0, 1.0)) == 3.0);
  CHECK(spectral_dimension(ZetaParams(dp, 2.0, -1.0)) == 3.0);
  CHECK(spectral_dimension(ZetaParams(dp, 1.5, 1.0)) == 2.5);
  CHECK_THROWS_AS(spectral_dimension(ZetaParams(dp, 0.5, 1.0)), DivergentParameters);

  const ZetaParams p(dp, 2.0, 1.0);
  CHECK(abs(zeta_closed(p, cz(3.25)).value).to_double() < 1e6);
  // below n the lattice trace diverges
  const auto s20 = truncated_zeta(p, cz(2.75), hi(40)).partial_sum;
  const auto s40 = truncated_zeta(p, cz(2.75), hi(80)).partial_sum;
  CHECK(s40.re() > s20.re() * 10L);

  // (z - n) zeta(z) -> residue
  const ResidueReport r = residue(p, 3.0);
  double last = 0.0;
  for (int m = 3; m <= 8; ++m) {
    const double eps = std::pow(10.0, -m);
    const double v = (zeta_closed(p, cz(3.0 + eps)).value.re() * BigFloat(eps, 128)).to_double();
    CHECK(std::abs(v - r.residue.re().to_double()) < 50 * eps * std::abs(v));
    if (m == 8) CHECK(std::abs(v - last) < 1e-4 * std::abs(v));
    last = v;
  }
}

TEST_CASE("pole structure") {
  const auto dp = DeformationParameter::parse("1/2");
  const ZetaParams p(dp, 2.0, 1.0);
  CHECK(pole_structure(p, 3.0).contributing_k == std::vector<int>{0});
  CHECK(pole_structure(p, 1.0).contributing_k == std::vector<int>{0, 2});
  CHECK(pole_structure(p, 2.5).order == PoleOrder::None);
  CHECK(pole_structure(p, 1.0).order == PoleOrder::Simple);
  CHECK_THROWS_AS(pole_structure(ZetaParams(dp, 2.0, 0.0), 2.0), DoublePole);

  // candidate poles sit exactly on {a+b-k} u {a-b-k}; h zeta(z0 + h) reproduces the
  // residue there (zero where C(z+k-1,k) vanishes) and h zeta -> 0 elsewhere
  for (const auto& [a, b] : {std::pair{2.0, 1.0}, std::pair{2.5, 0.5}}) {
    const ZetaParams w(dp, a, b);
    for (int t = -12; t <= 12; ++t) {
      const double z0 = t / 2.0;
      bool expect = false;
      for (int k = 0; k < 40; ++k) expect |= (a + b - k == z0) || (a - b - k == z0);
      const bool listed = !pole_structure(w, z0).contributing_k.empty();
      CHECK_MESSAGE(listed == expect, "a=" << a << " z0=" << z0);
      const BigFloat h(1e-12, 128);
      const BigComplex near = zeta_closed(w, BigComplex(BigFloat(z0, 128) + h)).value * h;
      const double res = expect ? abs(residue(w, z0, ResidueMode::Fast).residue).to_double() : 0.0;
      CHECK_MESSAGE(std::abs(abs(near).to_double() - res) < 1e-9 * std::max(1.0, res), "z0=" << z0);
    }
  }
}

TEST_CASE("residues") {
  for (const char* qs : {"3/10", "1/2", "4/5"}) {
    const auto dp = DeformationParameter::parse(qs);
    for (double a : {1.5, 2.0, 3.0}) {
      const ZetaParams p(dp, a, 1.0);
      const ResidueReport r = residue(p, a + 1.0);
      CHECK(r.cross_check_ok);
      REQUIRE(r.numeric_residue);
      CHECK(rel(r.residue, BigComplex(phi1_closed(dp.q(), a, 128))) < 1e-10);
    }
  }
  const auto dp = DeformationParameter::parse("1/2");
  const ResidueReport phi1 = residue(ZetaParams(dp, 2.0, 1.0), 3.0);
  CHECK(phi1.residue.re().to_double() == doctest::Approx(14.6074).epsilon(1e-5));

  // b^n c^n insertion: ratio (-1)^n / [n+1]
  for (const char* qs : {"1/4", "1/2"}) {
    const auto d = DeformationParameter::parse(qs);
    const double q = d.q().get_d();
    const ZetaParams p(d, 2.0, 1.0);
    const BigComplex r0 = residue(p, 3.0).residue;
    for (int n = 1; n <= 6; ++n) {
      const ResidueReport rn = residue(p.with_bc_power(n), 3.0);
      CHECK(rn.cross_check_ok);
      const double ratio = (rn.residue.re() / r0.re()).to_double();
      CHECK(ratio == doctest::Approx((n % 2 ? -1.0 : 1.0) / qnum(q, n + 1)).epsilon(1e-12));
    }
  }

  // residue at n - 2 = a - 1 vanishes only at a = 2
  for (const char* qs : {"3/10", "1/2", "4/5"}) {
    const auto d = DeformationParameter::parse(qs);
    const ResidueReport r = residue(ZetaParams(d, 2.0, 1.0), 1.0);
    CHECK(r.contributing_k == std::vector<int>{0, 2});
    CHECK(abs(r.residue).to_double() < 1e-10 * abs(residue(ZetaParams(d, 2.0, 1.0), 3.0).residue).to_double());
  }
  for (double a : {1.6, 2.5}) {
    const ZetaParams p(dp, a, 1.0);
    const ResidueReport r = residue(p, a - 1.0);
    CHECK(r.cross_check_ok);
    // P(a-1) (-1/ln q) q^{(a-1)/2} / (1-q^{a+1}) * q^2/(1-q^2) * (a(a-1)/2 - 1)
    const Precision pr = 128;
    const BigFloat q(dp.q(), pr), one(1L, pr), z0(a - 1.0, pr);
    const BigFloat pref = (pow(q, -z0 / 2L) + pow(q, z0 / 2L)) * pow(one / q - q, z0);
    const BigFloat expect = pref * (-one / log(q)) * pow(q, z0 / 2L) / (one - pow(q, BigFloat(a + 1, pr))) * q * q /
                            (one - q * q) * (BigFloat(a, pr) * (BigFloat(a, pr) - one) / 2L - one);
    CHECK(rel(r.residue, BigComplex(expect)) < 1e-25);
    CHECK(abs(r.residue).to_double() > 1e-3 * phi1.residue.re().to_double());
  }
  CHECK_THROWS_AS(residue(ZetaParams(dp, 2.0, 0.0), 2.0), DoublePole);
}

TEST_CASE("gamma-weighted residue") {
  const auto dp = DeformationParameter::parse("1/2");
  CHECK(abs(residue_gamma_weighted(ZetaParams(dp, 2.0, 1.0), 1.0)).to_double() < 1e-20);
  const ZetaParams p3(dp, 3.0, 1.0);
  CHECK(rel(residue_gamma_weighted(p3, 2.0), residue(p3, 2.0).residue) < 1e-30);
  CHECK(abs(residue_gamma_weighted(ZetaParams(dp, 1.6, 1.0), 0.6)).to_double() > 1e-3);
  CHECK_THROWS_AS(residue_gamma_weighted(ZetaParams(dp, 1.5, 0.5), 0.0), GammaPole);
  CHECK_THROWS_AS(residue_gamma_weighted(ZetaParams(dp, 1.5, 0.5), -1.0), GammaPole);
}

TEST_CASE("a2 criterion scan") {
  const auto half = DeformationParameter::parse("1/2");
  const A2ScanReport r = a2_criterion_scan(half, 1.2, 3.5);
  REQUIRE(r.roots.size() == 1);
  CHECK(std::abs(r.roots[0] - 2.0) < 1e-8);
  CHECK(a2_criterion_scan(half, 2.5, 3.5).roots.empty());
  const A2ScanReport r3 = a2_criterion_scan(DeformationParameter::parse("3/10"), 1.2, 3.5);
  REQUIRE(r3.roots.size() == 1);
  CHECK(std::abs(r3.roots[0] - 2.0) < 1e-8);
  CHECK_THROWS_AS(a2_criterion_scan(half, 0.5, 3.0), DivergentParameters);
}
