#include <algorithm>
#include <cmath>

#include "qsu2/errors.hpp"
#include "qsu2/spectral.hpp"

namespace qsu2 {

namespace {

// Site weights factor as  lt[L] * it[i] * jt[j] * spin[s] (* rho diagonal); the
// tables are read-only so shells can be summed independently.
struct ShellTables {
  std::vector<BigComplex> lt;  // [l+1/2]^{-z}
  std::vector<BigFloat> it;    // q^{2 b i}
  std::vector<BigComplex> jt;  // q^{(z - 2a) j}
  BigComplex up;               // q^{-z/2}
  BigComplex down;             // q^{z/2}
};

ShellTables make_tables(const FloatContext& ctx, const ZetaParams& params, const BigComplex& z, int l2_max) {
  const Precision wp = ctx.precision();
  ShellTables t;
  const BigComplex zw(with_precision(z.re(), wp), with_precision(z.im(), wp));
  const BigComplex minus_z = -zw;
  t.lt.reserve(static_cast<std::size_t>(l2_max) + 1);
  for (int L = 0; L <= l2_max; ++L) t.lt.push_back(pow(ctx.q_number(HalfInt::from_twice(L + 1)), minus_z));
  const BigFloat a(params.a, wp), b(params.b, wp);
  BigComplex zj = zw;
  zj.re() -= a * 2L;
  for (int k2 = -l2_max; k2 <= l2_max; ++k2) {
    t.it.push_back(ctx.pow(b * static_cast<long>(k2)));
    BigComplex e = zj;
    e.re() *= static_cast<long>(k2);
    e.im() *= static_cast<long>(k2);
    e.re() /= 2L;
    e.im() /= 2L;
    t.jt.push_back(q_complex_pow(ctx, e));
  }
  BigComplex half = zw;
  half.re() /= 2L;
  half.im() /= 2L;
  t.up = q_complex_pow(ctx, -half);
  t.down = q_complex_pow(ctx, half);
  return t;
}

BigComplex shell_sum(const FloatContext& ctx, const ShellTables& t, int L, int l2_max,
                     const std::optional<Monomial>& insertion) {
  const Precision wp = ctx.precision();
  CompensatedComplexSum acc(wp);
  BigComplex w(wp), site(wp);
  BigFloat scratch(wp);
  for (int i2 = -L; i2 <= L; i2 += 2) {
    BigComplex li = t.lt[static_cast<std::size_t>(L)];
    li *= t.it[static_cast<std::size_t>(i2 + l2_max)];
    for (int j2 = -L; j2 <= L; j2 += 2) {
      mul_into(w, li, t.jt[static_cast<std::size_t>(j2 + l2_max)], scratch);
      if (insertion) {
        auto step = rho_monomial_step(ctx, *insertion, L, i2, j2, l2_max);
        if (!step || step->l2 != L || step->i2 != i2 || step->j2 != j2) continue;
        w *= step->coeff;
      }
      mul_into(site, w, t.up, scratch);
      acc.add(site);
      mul_into(site, w, t.down, scratch);
      acc.add(site);
    }
  }
  return acc.value();
}

}  // namespace

std::vector<BigComplex> zeta_shell_sums(const ZetaParams& params, const BigComplex& z, HalfInt l_max,
                                        const std::optional<Monomial>& insertion, Precision prec,
                                        ExecPolicy policy) {
  params.validate();
  const int l2_max = l_max.twice;
  const Precision wp = prec + 32;
  std::vector<BigComplex> shells(static_cast<std::size_t>(l2_max) + 1, BigComplex(wp));
  if (insertion && !lattice_shift(*insertion).is_zero()) return shells;  // no diagonal at all

  const FloatContext ctx(params.dp, wp);
  const ShellTables tables = make_tables(ctx, params, z, l2_max);
  // Shells are independent; results land in fixed slots, so the reduction order
  // below does not depend on the thread schedule.
#pragma omp parallel for schedule(dynamic, 1) if (policy == ExecPolicy::Parallel)
  for (int L = l2_max; L >= 0; --L)
    shells[static_cast<std::size_t>(L)] = shell_sum(ctx, tables, L, l2_max, insertion);
  return shells;
}

std::pair<BigComplex, BigFloat> wynn_epsilon(const std::vector<BigComplex>& s) {
  const std::size_t n = s.size();
  if (n == 0) throw std::invalid_argument("wynn_epsilon: empty sequence");
  const Precision prec = s.back().precision();
  if (n < 3) return {s.back(), n == 1 ? BigFloat(prec) : abs(s[n - 1] - s[n - 2])};

  // the uncertainty is the spread of the last two entries in the deepest even column
  std::vector<BigComplex> prev(n + 1, BigComplex(prec));  // eps_{-1}
  std::vector<BigComplex> cur = s;                         // eps_0
  std::vector<BigComplex> best_col = s;
  const BigFloat tiny = abs(s.back()) * BigFloat(std::ldexp(1.0, -static_cast<int>(prec) + 16), prec);
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<BigComplex> next;
    next.reserve(cur.size() - 1);
    bool stalled = false;
    for (std::size_t m = 0; m + 1 < cur.size(); ++m) {
      const BigComplex diff = cur[m + 1] - cur[m];
      if (abs(diff) <= tiny) {
        stalled = true;
        break;
      }
      next.push_back(prev[m + 1] + BigComplex(BigFloat(1L, prec)) / diff);
    }
    if (stalled || next.empty()) break;
    if (k % 2 == 0 && next.size() >= 2) best_col = next;
    prev = std::move(cur);
    cur = std::move(next);
  }
  const std::size_t m = best_col.size();
  return {best_col[m - 1], abs(best_col[m - 1] - best_col[m - 2])};
}

TruncatedZetaResult truncated_zeta(const ZetaParams& params, const BigComplex& z, HalfInt l_max,
                                   const std::optional<Monomial>& insertion, Precision prec, ExecPolicy policy) {
  const std::vector<BigComplex> shells = zeta_shell_sums(params, z, l_max, insertion, prec, policy);
  const Precision wp = prec + 32;
  CompensatedComplexSum acc(wp);
  std::vector<BigComplex> partial;
  partial.reserve(shells.size());
  for (const auto& t : shells) {
    acc.add(t);
    partial.push_back(acc.value());
  }
  TruncatedZetaResult out{partial.back(), partial.back(), BigFloat(prec), BigFloat(prec),
                          static_cast<int>(shells.size())};
  constexpr std::size_t kWindow = 16;
  if (partial.size() >= 4 && !partial.back().is_zero()) {
    const std::size_t w = std::min(kWindow, partial.size());
    std::vector<BigComplex> tail(partial.end() - static_cast<std::ptrdiff_t>(w), partial.end());
    auto [limit, spread] = wynn_epsilon(tail);
    out.value = limit;
    out.tail_estimate = abs(limit - out.partial_sum);
    out.tail_uncertainty = spread;
  }
  return out;
}

}  // namespace qsu2
