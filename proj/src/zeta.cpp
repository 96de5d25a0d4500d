#include "qsu2/zeta.hpp"

#include <algorithm>
#include <cmath>

#include "qsu2/errors.hpp"

namespace qsu2 {

namespace {

constexpr double kIntegerSlack = 1e-9;

// Which pole factor of S_k to leave out (for residues).
enum class Drop { None, First, Second };

BigComplex shifted(const BigComplex& z, const BigFloat& s) {
  BigComplex out = z;
  out.re() += s;
  return out;
}

struct SeriesContext {
  FloatContext ctx;
  BigFloat a, beta;
  long shift_l;
  BigFloat pole_tol;

  SeriesContext(const ZetaParams& p, Precision prec)
      : ctx(p.dp, prec),
        a(p.a, prec),
        beta(p.b + p.shift_i, prec),
        shift_l(p.shift_l),
        pole_tol(std::ldexp(1.0, -static_cast<int>(prec / 2)), prec) {}

  BigComplex one() const { return BigComplex(BigFloat(1L, ctx.precision())); }

  // 1 - q^w, with a pole check on the z-dependent factors
  BigComplex one_minus(const BigComplex& w, const BigComplex& z, bool z_dependent) const {
    BigComplex f = one() - q_complex_pow(ctx, w);
    if (z_dependent && abs(f) < pole_tol)
      throw PoleHit("zeta: z = " + z.to_string(12) + " is a pole", z.re().to_double());
    return f;
  }

  BigComplex term(unsigned k, const BigComplex& z, Drop drop) const {
    const BigFloat kappa(static_cast<long>(k) + shift_l, ctx.precision());
    BigComplex half = z;
    half.re() /= 2L;
    half.im() /= 2L;
    BigComplex num = q_complex_pow(ctx, shifted(half, kappa));
    BigComplex twice = z;
    twice.re() += kappa * 2L;
    num *= one() - q_complex_pow(ctx, twice);

    BigComplex den = one();
    if (drop != Drop::First) den *= one_minus(shifted(z, kappa - a - beta), z, true);
    if (drop != Drop::Second) den *= one_minus(shifted(z, kappa - a + beta), z, true);
    const BigFloat one_r(1L, ctx.precision());
    den *= BigComplex(one_r - ctx.pow(a + beta + kappa));
    den *= BigComplex(one_r - ctx.pow(a - beta + kappa));
    return num / den;
  }

  // (q^{-z/2} + q^{z/2}) (q^{-1} - q)^z c q^{-shift_l}
  BigComplex prefactor(const ZetaParams& p, const BigComplex& z) const {
    BigComplex half = z;
    half.re() /= 2L;
    half.im() /= 2L;
    BigComplex pre = q_complex_pow(ctx, half) + q_complex_pow(ctx, -half);
    pre *= pow(ctx.pow(HalfInt::from_int(-1)) - ctx.q(), z);
    pre *= p.const_factor.to_bigfloat(ctx.precision());
    pre *= ctx.pow(HalfInt::from_int(static_cast<int>(-shift_l)));
    return pre;
  }
};

// Bound on sum_{k >= K} |C(z+k-1,k) S_k| given |C(z+K-1,K)|, or nothing if the
// geometric majorant does not apply yet at K.
std::optional<BigFloat> tail_majorant(const SeriesContext& s, const BigComplex& z, unsigned K, const BigFloat& gb_abs) {
  const Precision p = 64;
  const double q = s.ctx.q().to_double();
  const double zr = z.re().to_double();
  const double kappa = static_cast<double>(K) + static_cast<double>(s.shift_l);
  const double a = s.a.to_double(), beta = s.beta.to_double();
  const double w1 = zr - a - beta + kappa, w2 = zr - a + beta + kappa, w3 = a + beta + kappa, w4 = a - beta + kappa;
  if (w1 <= 0 || w2 <= 0 || w3 <= 0 || w4 <= 0 || 2 * kappa + zr <= 0) return std::nullopt;
  const double zabs = abs(z).to_double();
  const double ratio = q * std::max(1.0, (zabs + K) / (K + 1.0));
  if (ratio >= 1.0) return std::nullopt;
  // every factor below is monotone in k, so its value at K bounds all later k
  const BigFloat qb = with_precision(s.ctx.q(), p);
  BigFloat bound = pow(qb, BigFloat(kappa + zr / 2, p)) * (BigFloat(1L, p) + pow(qb, BigFloat(2 * kappa + zr, p)));
  for (double w : {w1, w2, w3, w4}) bound /= BigFloat(1L, p) - pow(qb, BigFloat(w, p));
  bound *= with_precision(gb_abs, p);
  bound /= BigFloat(1.0 - ratio, p);
  return bound;
}

}  // namespace

BigComplex S_k(const ZetaParams& params, unsigned k, const BigComplex& z, Precision prec) {
  const SeriesContext s(params, prec);
  return s.term(k, z, Drop::None);
}

ZetaValue zeta_closed(const ZetaParams& params, const BigComplex& z, double target_eps, Precision prec) {
  params.validate();
  const Precision wp = prec + 32;
  const SeriesContext s(params, wp);
  const BigComplex zw(with_precision(z.re(), wp), with_precision(z.im(), wp));
  CompensatedComplexSum acc(wp);
  BigComplex gb = s.one();  // C(z+k-1, k)
  const BigComplex pre = s.prefactor(params, zw);
  const BigFloat pre_abs = abs(pre);
  constexpr unsigned kMaxTerms = 200000;
  for (unsigned k = 0; k < kMaxTerms; ++k) {
    BigComplex t = s.term(k, zw, Drop::None);
    t *= gb;
    acc.add(t);
    // advance the binomial to k + 1
    BigComplex step = zw;
    step.re() += BigFloat(static_cast<long>(k), wp);
    gb *= step;
    gb.re() /= static_cast<long>(k + 1);
    gb.im() /= static_cast<long>(k + 1);
    if (auto tail = tail_majorant(s, zw, k + 1, abs(gb))) {
      const BigFloat tail_abs = *tail * with_precision(pre_abs, 64);
      const BigComplex value = acc.value() * pre;
      const double scale = std::max(1.0, abs(value).to_double());
      if (tail_abs.to_double() <= target_eps * scale) {
        ZetaValue out{BigComplex(with_precision(value.re(), prec), with_precision(value.im(), prec)),
                      with_precision(tail_abs, prec), k + 1};
        return out;
      }
    }
  }
  throw Error("zeta_closed: series did not reach the target accuracy");
}

double spectral_dimension(const ZetaParams& params) { return params.spectral_dimension(); }

namespace {

struct PoleTerm {
  int k;
  Drop drop;
};

std::vector<PoleTerm> pole_terms(const ZetaParams& params, double z0) {
  const double beta = params.b + params.shift_i;
  if (beta == 0.0) throw DoublePole("b = 0: the zeta function has double poles");
  std::vector<PoleTerm> out;
  auto add = [&](double kd, Drop d) {
    const double kr = std::round(kd);
    if (std::abs(kd - kr) < kIntegerSlack && kr >= 0) out.push_back({static_cast<int>(kr), d});
  };
  add(params.a + beta - z0 - params.shift_l, Drop::First);
  add(params.a - beta - z0 - params.shift_l, Drop::Second);
  return out;
}

// distance from z0 to the nearest other pole on the real axis
double pole_gap(const ZetaParams& params, double z0) {
  const double beta = params.b + params.shift_i;
  double gap = 1e9;
  for (double c : {params.a + beta - params.shift_l, params.a - beta - params.shift_l}) {
    const double kmax = std::max(0.0, std::ceil(c - z0)) + 2;
    for (double k = 0; k <= kmax; ++k) {
      const double d = std::abs(c - k - z0);
      if (d > kIntegerSlack) gap = std::min(gap, d);
    }
  }
  return gap;
}

}  // namespace

ResidueReport pole_structure(const ZetaParams& params, double z0) {
  params.validate();
  ResidueReport r;
  r.z0 = z0;
  for (const auto& t : pole_terms(params, z0)) r.contributing_k.push_back(t.k);
  std::sort(r.contributing_k.begin(), r.contributing_k.end());
  r.order = r.contributing_k.empty() ? PoleOrder::None : PoleOrder::Simple;
  return r;
}

ResidueReport residue(const ZetaParams& params, double z0, ResidueMode mode, Precision prec) {
  ResidueReport r = pole_structure(params, z0);
  const Precision wp = prec + 32;
  const SeriesContext s(params, wp);
  const auto terms = pole_terms(params, z0);
  // evaluate at the exact pole a +- beta - kappa rather than the rounded z0
  BigFloat z_exact(z0, wp);
  if (!terms.empty()) {
    const auto& t = terms.front();
    const BigFloat kappa(static_cast<long>(t.k) + params.shift_l, wp);
    z_exact = t.drop == Drop::First ? s.a + s.beta - kappa : s.a - s.beta - kappa;
  }
  const BigComplex z(z_exact);
  CompensatedComplexSum acc(wp);
  for (const auto& t : terms) {
    BigComplex v = s.term(static_cast<unsigned>(t.k), z, t.drop);
    v *= gen_binomial(z, static_cast<unsigned>(t.k));
    acc.add(v);
  }
  BigComplex res = acc.value() * s.prefactor(params, z);
  res *= BigFloat(-1L, wp) / s.ctx.log_q();
  r.residue = BigComplex(with_precision(res.re(), prec), with_precision(res.im(), prec));
  const double res_abs = abs(r.residue).to_double();
  r.error_bound = res_abs * std::ldexp(1.0, -static_cast<int>(prec) / 2);

  if (mode == ResidueMode::Verify && r.order == PoleOrder::Simple) {
    // Richardson extrapolation of h zeta(z0 + h) as h -> 0, h halved each level
    constexpr int kLevels = 8;
    const double h0 = std::min(1.0 / 16, pole_gap(params, z0) / 4);
    std::vector<std::vector<BigComplex>> T(kLevels);
    for (int m = 0; m < kLevels; ++m) {
      const BigFloat h(std::ldexp(h0, -m), wp);
      const ZetaValue zv = zeta_closed(params, BigComplex(z_exact + h), 1e-45, wp);
      T[m].push_back(zv.value * h);
      for (int j = 1; j <= m; ++j) {
        BigComplex d = T[m][j - 1] - T[m - 1][j - 1];
        const BigFloat f(std::ldexp(1.0, j) - 1.0, wp);
        d.re() /= f;
        d.im() /= f;
        T[m].push_back(T[m][j - 1] + d);
      }
    }
    const BigComplex& best = T[kLevels - 1][kLevels - 1];
    const double spread = abs(best - T[kLevels - 2][kLevels - 2]).to_double();
    r.numeric_residue = BigComplex(with_precision(best.re(), prec), with_precision(best.im(), prec));
    r.error_bound = std::max(r.error_bound, 10 * spread);
    r.cross_check_ok = abs(*r.numeric_residue - r.residue).to_double() <= r.error_bound;
  }
  return r;
}

BigComplex residue_gamma_weighted(const ZetaParams& params, double z0, ResidueMode mode, Precision prec) {
  if (z0 <= 0 && std::abs(z0 - std::round(z0)) < kIntegerSlack)
    throw GammaPole("Gamma has a pole at z0 = " + std::to_string(z0));
  const ResidueReport r = residue(params, z0, mode, prec);
  return r.residue * gamma(BigFloat(z0, prec));
}

A2ScanReport a2_criterion_scan(const DeformationParameter& dp, double a_min, double a_max, int samples,
                               Precision prec) {
  if (!(a_min > 1.0) || !(a_max >= a_min)) throw DivergentParameters("a2 scan needs 1 < a_min <= a_max");
  if (samples < 2) samples = 2;
  auto g = [&](double a) {
    const ZetaParams p(dp, a, 1.0);
    return residue(p, a - 1.0, ResidueMode::Fast, prec).residue.re().to_double();
  };
  A2ScanReport out;
  out.samples = samples;
  std::vector<double> xs(static_cast<std::size_t>(samples)), ys(xs.size());
  double scale = 0.0;
  for (int k = 0; k < samples; ++k) {
    xs[static_cast<std::size_t>(k)] = a_min + (a_max - a_min) * k / (samples - 1);
    ys[static_cast<std::size_t>(k)] = g(xs[static_cast<std::size_t>(k)]);
    scale = std::max(scale, std::abs(ys[static_cast<std::size_t>(k)]));
  }
  const double tiny = scale * 1e-25;
  auto is_zero = [&](double v) { return std::abs(v) <= tiny; };
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (is_zero(ys[k])) {
      out.roots.push_back(xs[k]);
      out.brackets.emplace_back(xs[k], xs[k]);
      continue;
    }
    if (k + 1 == xs.size() || is_zero(ys[k + 1]) || (ys[k] > 0) == (ys[k + 1] > 0)) continue;
    double lo = xs[k], hi = xs[k + 1], flo = ys[k];
    out.brackets.emplace_back(lo, hi);
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = g(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0) == (flo > 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    out.roots.push_back(0.5 * (lo + hi));
  }
  return out;
}

}  // namespace qsu2
