#include "qsu2/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "qsu2/errors.hpp"
#include "qsu2/probe.hpp"
#include "qsu2/spectral.hpp"
#include "qsu2/zeta.hpp"

namespace qsu2 {
namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

Monomial random_monomial(std::mt19937_64& rng, int max_degree) {
  const int total = std::uniform_int_distribution<int>(0, max_degree)(rng);
  const int p = std::uniform_int_distribution<int>(0, total)(rng);
  const int m = std::uniform_int_distribution<int>(0, total - p)(rng);
  const Side side = std::bernoulli_distribution(0.5)(rng) ? Side::A : Side::D;
  return Monomial::make(side, p, m, total - p - m);
}

AlgebraElement random_element(std::mt19937_64& rng, int max_degree, int terms) {
  AlgebraElement out;
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int t = 0; t < terms; ++t) {
    const Monomial mono = random_monomial(rng, max_degree);
    out.add_term(mono, ExactScalar(mpq_class(num(rng), den(rng))));
  }
  return out;
}

double rel_diff(const BigComplex& x, const BigComplex& y) {
  const BigFloat scale = std::max(abs(x), abs(y));
  if (scale.is_zero()) return 0.0;
  return (abs(x - y) / scale).to_double();
}

double qnum(double q, double x) { return (std::pow(q, -x) - std::pow(q, x)) / (1 / q - q); }

class Recorder {
 public:
  explicit Recorder(std::string suite) : suite_(std::move(suite)) {}
  void add(std::string name, bool pass, std::string detail) {
    out_.push_back({suite_, std::move(name), pass, std::move(detail)});
  }
  /// Counts failures of a loop of exact checks.
  void count(std::string name, int failures, int total) {
    add(std::move(name), failures == 0, std::to_string(total - failures) + "/" + std::to_string(total) + " exact");
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::string suite_;
  std::vector<CheckResult> out_;
};

std::vector<CheckResult> algebra_suite(const VerifyOptions& o) {
  Recorder rec("algebra");
  std::mt19937_64 rng(o.seed);
  const QAlgebra A(o.dp);
  const ExactScalar q = A.qpow_twice(2), qi = A.qpow_twice(-2);
  auto g = [&](char c) { return A.gen(c); };

  int bad = 0;
  bad += !(A.multiply(g('a'), g('b')) == A.multiply(g('b'), g('a')) * q);
  bad += !(A.multiply(g('a'), g('c')) == A.multiply(g('c'), g('a')) * q);
  bad += !(A.multiply(g('b'), g('d')) == A.multiply(g('d'), g('b')) * q);
  bad += !(A.multiply(g('c'), g('d')) == A.multiply(g('d'), g('c')) * q);
  bad += !(A.multiply(g('b'), g('c')) == A.multiply(g('c'), g('b')));
  bad += !(A.multiply(g('a'), g('d')) == A.one() + A.multiply(g('c'), g('b')) * q);
  bad += !(A.multiply(g('d'), g('a')) == A.one() + A.multiply(g('b'), g('c')) * qi);
  rec.count("defining_relations", bad, 7);

  bad = 0;
  for (int it = 0; it < 100; ++it) {
    const AlgebraElement x = random_element(rng, 4, 3), y = random_element(rng, 4, 3);
    bad += !(A.star(A.star(x)) == x) || !(A.star(A.multiply(x, y)) == A.multiply(A.star(y), A.star(x)));
  }
  rec.count("star_involution", bad, 100);

  bad = 0;
  for (int it = 0; it < 100; ++it) {
    const AlgebraElement x(random_monomial(rng, 6)), y(random_monomial(rng, 6)), z(random_monomial(rng, 6));
    bad += !(A.multiply(A.multiply(x, y), z) == A.multiply(x, A.multiply(y, z)));
  }
  rec.count("associativity", bad, 100);

  bad = 0;
  for (int it = 0; it < 200; ++it) {
    const AlgebraElement x = random_element(rng, 4, 3), y = random_element(rng, 4, 3);
    bad += !(A.haar_state(A.multiply(x, y)) == A.haar_state(A.multiply(A.apply(kTheta, y), x)));
  }
  rec.count("kms", bad, 200);

  auto dd = [&](const AlgebraElement& x) { return A.left_action(HopfGen::E, A.left_k_power(-1, x)); };
  auto leibniz_ok = [&](const AlgebraElement& x, const AlgebraElement& y) {
    return dd(A.multiply(x, y)) - A.multiply(A.left_k_power(-2, x), dd(y)) == A.multiply(dd(x), y);
  };
  bad = 0;
  for (char u : {'a', 'b', 'c', 'd'})
    for (char v : {'a', 'b', 'c', 'd'}) bad += !leibniz_ok(g(u), g(v));
  for (int it = 0; it < 100; ++it) bad += !leibniz_ok(AlgebraElement(random_monomial(rng, 4)), AlgebraElement(random_monomial(rng, 4)));
  rec.count("twisted_leibniz", bad, 116);

  // exact symmetric elimination of the Gram matrix on {1, a, b, c, d}
  const AlgebraElement basis[] = {A.one(), g('a'), g('b'), g('c'), g('d')};
  std::vector<std::vector<ExactScalar>> gram(5, std::vector<ExactScalar>(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) gram[i][j] = A.haar_inner_product(basis[i], basis[j]);
  bool psd = true;
  for (int k = 0; k < 5 && psd; ++k) {
    const int s = gram[k][k].to_bigfloat(256).sign();
    if (s < 0) psd = false;
    if (s <= 0) {
      for (int j = k + 1; j < 5; ++j) psd = psd && gram[k][j].is_zero();
      continue;
    }
    for (int i = k + 1; i < 5; ++i) {
      const ExactScalar f = gram[i][k] / gram[k][k];
      for (int j = k; j < 5; ++j) gram[i][j] -= f * gram[k][j];
    }
  }
  rec.add("haar_gram_psd", psd, "exact LDL^T pivots");
  rec.add("haar_normalized", A.haar_state(A.one()) == ExactScalar(1L), "h(1) = 1");
  return rec.take();
}

bool deep(const SpinorSite& s, int deg, int l2_max) {
  const int l2 = s.point.l.twice, i2 = s.point.i.twice, j2 = s.point.j.twice;
  return l2 + deg <= l2_max && (l2 - i2) / 2 >= deg && (l2 + j2) / 2 >= deg;
}

std::vector<CheckResult> spectral_suite(const VerifyOptions& o) {
  Recorder rec("spectral");
  std::mt19937_64 rng(o.seed + 1);
  const FloatContext ctx(o.dp, o.prec);
  const HalfInt lm = o.l_max;

  {
    const auto D = build_dirac(ctx, lm);
    const auto D2 = compose(D, D);
    const auto chi = op_chi(ctx, lm), dl = op_modular_L(ctx, lm), cas = op_casimir(ctx, lm);
    double worst = 0.0;
    for (std::size_t c = 0; c < D2.dim(); ++c) {
      const BigComplex expect = cas.entry(c, c) / (chi.entry(c, c) * dl.entry(c, c));
      for (const auto& e : D2.column(c))
        worst = std::max(worst, e.row == c ? rel_diff(e.value, expect) : (abs(e.value) / abs(expect)).to_double());
    }
    const double tol = std::ldexp(1.0, -static_cast<int>(o.prec) + 28);
    rec.add("dirac_square", worst < tol, "max rel " + sci(worst) + " at l_max " + lm.to_string());
  }

  {
    const QAlgebra alg(o.dp);
    const HalfInt small = std::min(lm, HalfInt::from_twice(8));
    const Lattice lat(small);
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) {
      const Monomial x = random_monomial(rng, 2), y = random_monomial(rng, 2);
      const int deg = x.degree() + y.degree();
      const auto lhs = compose(rho_apply(ctx, x, small), rho_apply(ctx, y, small));
      const auto rhs = rho_apply(ctx, alg.multiply(x, y), small);
      for (std::size_t c = 0; c < lat.num_sites(); ++c) {
        if (!deep(lat.site(c), deg, small.twice)) continue;
        for (const auto* op : {&lhs, &rhs})
          for (const auto& e : op->column(c)) worst = std::max(worst, rel_diff(lhs.entry(e.row, c), rhs.entry(e.row, c)));
      }
    }
    rec.add("rho_multiplicative", worst < 1e-25, "max rel " + sci(worst) + " on deep sites");
  }

  {
    const ZetaParams p(o.dp, o.weight.a, o.weight.b);
    const HalfInt small = std::min(lm, HalfInt::from_int(10));
    const BigComplex z(o.weight.a + std::abs(o.weight.b) + 0.75, 0.5, o.prec);
    const auto s = truncated_zeta(p, z, small, std::nullopt, o.prec, ExecPolicy::Serial);
    const auto par = truncated_zeta(p, z, small, std::nullopt, o.prec, ExecPolicy::Parallel);
    const bool same = s.value.re() == par.value.re() && s.value.im() == par.value.im();
    rec.add("trace_serial_parallel", same, same ? "bitwise identical" : "differ");
  }

  {
    bool zero = true;
    for (ProbeKind kind : {ProbeKind::TwistedCommutator, ProbeKind::Lipschitz, ProbeKind::LemmaRegularity})
      zero = zero && assemble_probe({kind, Monomial::one(), 2.0, 1.0}, o.dp, HalfInt::from_int(3), o.prec).nnz() == 0;
    rec.add("probe_of_one_vanishes", zero, "all probe kinds");
  }
  return rec.take();
}

std::vector<CheckResult> zeta_suite(const VerifyOptions& o) {
  Recorder rec("zeta");
  const ZetaParams p(o.dp, o.weight.a, o.weight.b);
  p.validate();
  const double n = p.spectral_dimension();

  double worst_rel = 0.0, worst_excess = 0.0;
  unsigned kmax = 0;
  bool agree = true;
  for (const auto& [re, im] : {std::pair{n + 0.5, 0.0}, std::pair{n + 1.0, 0.6}, std::pair{n + 2.0, 0.0}}) {
    const BigComplex z(re, im, o.prec);
    const ZetaValue c = zeta_closed(p, z, 1e-30, o.prec);
    const TruncatedZetaResult t = truncated_zeta(p, z, o.l_max, std::nullopt, o.prec);
    const double bound = (c.tail_bound + t.tail_uncertainty).to_double() + 1e-8 * abs(c.value).to_double();
    const double diff = abs(c.value - t.value).to_double();
    agree = agree && diff <= bound;
    worst_rel = std::max(worst_rel, rel_diff(c.value, t.value));
    worst_excess = std::max(worst_excess, diff / bound);
    kmax = std::max(kmax, c.k_truncation);
  }
  rec.add("closed_vs_trace", agree,
          "max rel " + sci(worst_rel) + ", diff/bound " + sci(worst_excess) + ", k_truncation " + std::to_string(kmax));

  const ZetaValue far = zeta_closed(p, BigComplex(n + 2.0, 0.0, o.prec), 1e-30, o.prec);
  rec.add("tail_bound", far.tail_bound.to_double() < 1e-20, "tail " + sci(far.tail_bound.to_double()));

  const ZetaValue mirrored = zeta_closed(ZetaParams(o.dp, o.weight.a, -o.weight.b), BigComplex(n + 2.0, 0.0, o.prec), 1e-30, o.prec);
  const double sym = rel_diff(far.value, mirrored.value);
  rec.add("b_symmetry", sym < 1e-25, "rel " + sci(sym));

  const ZetaValue above = zeta_closed(p, BigComplex(n + 0.25, 0.0, o.prec), 1e-30, o.prec);
  rec.add("finite_above_n", above.value.re().is_finite() && above.value.im().is_finite(),
          "zeta(n + 1/4) = " + sci(above.value.re().to_double()));

  if (o.weight.b == 0.0) {
    rec.add("spectral_dimension", true, "b = 0: double pole, residue checks skipped");
  } else {
    const ResidueReport r = residue(p, n, ResidueMode::Verify, o.prec);
    const BigComplex h(BigFloat::parse("1e-12", o.prec), BigFloat(o.prec));
    const BigComplex zn = BigComplex(BigFloat(n, o.prec)) + h;
    const BigComplex lim = h * zeta_closed(p, zn, 1e-30, o.prec).value;
    const double rel = rel_diff(lim, r.residue);
    rec.add("spectral_dimension", !r.residue.is_zero() && rel < 1e-8,
            "res " + sci(r.residue.re().to_double()) + ", (z-n) zeta rel " + sci(rel));
    rec.add("residue_cross_check", r.cross_check_ok, "error bound " + sci(r.error_bound));
  }

  const A2ScanReport scan = a2_criterion_scan(o.dp, 1.25, 4.0, 32, o.prec);
  const bool two = std::any_of(scan.roots.begin(), scan.roots.end(), [](double r) { return std::abs(r - 2.0) < 1e-8; });
  rec.add("a2_root_at_two", two && scan.roots.size() == 1, std::to_string(scan.roots.size()) + " root(s) in [1.25, 4]");
  return rec.take();
}

std::vector<CheckResult> integral_suite(const VerifyOptions& o) {
  Recorder rec("integral");
  std::mt19937_64 rng(o.seed + 2);
  const QAlgebra alg(o.dp);
  const double q = o.dp.q().get_d();
  const WeightSpec w{o.weight.a, 1.0};

  double worst = 0.0;
  for (double a : {1.5, 2.0, 3.0}) {
    const NcIntegral phi(o.dp, {a, 1.0}, o.prec);
    for (int n = 0; n <= 6; ++n) {
      const double want = (n % 2 ? -1.0 : 1.0) / qnum(q, n + 1);
      worst = std::max(worst, std::abs(phi.normalized(Monomial::make(Side::A, 0, n, n)).re().to_double() - want));
    }
  }
  rec.add("phi_tilde_bc_powers", worst < 1e-10, "max abs " + sci(worst));

  int bad = 0, total = 0;
  double worst_diff = 0.0, worst_spread = 0.0;
  auto check = [&](const AlgebraElement& x) {
    const HaarReport r = haar_equality_check(x, alg, w, 1e-9, o.prec);
    bad += !(r.pass && r.a_independent);
    ++total;
    worst_diff = std::max(worst_diff, r.diff);
    worst_spread = std::max(worst_spread, r.sweep_spread);
  };
  for (int d = 0; d <= 5; ++d)
    for (int p = 0; p <= d; ++p)
      for (int m = 0; p + m <= d; ++m) {
        check(AlgebraElement(Monomial::make(Side::A, p, m, d - p - m)));
        if (p > 0) check(AlgebraElement(Monomial::make(Side::D, p, m, d - p - m)));
      }
  for (int it = 0; it < 20; ++it) check(random_element(rng, 6, 4));
  rec.add("phi_tilde_equals_haar", bad == 0,
          std::to_string(total - bad) + "/" + std::to_string(total) + ", max diff " + sci(worst_diff) + ", a-spread " +
              sci(worst_spread));

  const NcIntegral phi(o.dp, w, o.prec);
  double least = 0.0;
  for (int it = 0; it < 20; ++it) {
    const AlgebraElement x = random_element(rng, 3, 3);
    least = std::min(least, phi.normalized(alg.multiply(alg.star(x), x)).re().to_double());
  }
  rec.add("positivity", least >= -1e-12, "min phi_tilde(x* x) " + sci(least));

  bool iff = true;
  for (double b : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0})
    iff = iff && ((modular_descriptor({o.weight.a + 2.0, b}) == haar_descriptor()) == (b == 1.0));
  rec.add("modular_descriptor", iff, "equals the Haar descriptor iff b = 1");

  double worst_mod = 0.0;
  bad = 0;
  for (int it = 0; it < 50; ++it) {
    const ModularReport r = modular_property_check(random_monomial(rng, 4), random_monomial(rng, 4), alg, phi);
    bad += !r.pass;
    worst_mod = std::max(worst_mod, r.diff);
  }
  rec.add("modular_property", bad == 0, std::to_string(50 - bad) + "/50, max diff " + sci(worst_mod));
  return rec.take();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra", "spectral", "zeta", "integral"};
  return names;
}

std::vector<CheckResult> run_suite(std::string_view suite, const VerifyOptions& opts) {
  using Runner = std::function<std::vector<CheckResult>(const VerifyOptions&)>;
  const std::vector<std::pair<std::string, Runner>> runners{
      {"algebra", algebra_suite}, {"spectral", spectral_suite}, {"zeta", zeta_suite}, {"integral", integral_suite}};
  std::vector<CheckResult> out;
  bool known = suite == "all";
  for (const auto& [name, run] : runners) {
    if (suite != "all" && suite != name) continue;
    known = true;
    auto part = run(opts);
    out.insert(out.end(), part.begin(), part.end());
  }
  if (!known) throw Error("unknown suite '" + std::string(suite) + "'");
  return out;
}

}  // namespace qsu2
