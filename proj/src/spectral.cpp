#include "qsu2/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsu2/errors.hpp"

namespace qsu2 {

void ZetaParams::validate() const {
  if (!(a + b > 0) || !(a - b > 0))
    throw DivergentParameters("weight needs a + b > 0 and a - b > 0 (got a=" + std::to_string(a) +
                              ", b=" + std::to_string(b) + ")");
}

double ZetaParams::spectral_dimension() const {
  validate();
  return a + std::abs(b);
}

ZetaParams ZetaParams::with_bc_power(int n) const {
  ZetaParams out = *this;
  out.shift_i = shift_i + n;
  out.shift_l = shift_l + n;
  ExactScalar c = q_pow(dp, HalfInt::from_int(n));
  if (n % 2 != 0) c = -c;
  out.const_factor = const_factor * c;
  return out;
}

Lattice::Lattice(HalfInt l_max) : l2_max_(l_max.twice) {
  if (l_max.twice < 0) throw std::invalid_argument("l_max must be >= 0");
}

SpinorSite Lattice::site(std::size_t idx) const {
  const std::size_t point = idx / 2;
  int L = static_cast<int>(std::cbrt(3.0 * static_cast<double>(point)));
  while (L > 0 && shell_offset(L) > point) --L;
  while (shell_offset(L + 1) <= point) ++L;
  const std::size_t rem = point - shell_offset(L);
  const int I = static_cast<int>(rem / static_cast<std::size_t>(L + 1));
  const int J = static_cast<int>(rem % static_cast<std::size_t>(L + 1));
  return SpinorSite{{HalfInt::from_twice(L), HalfInt::from_twice(2 * I - L), HalfInt::from_twice(2 * J - L)},
                    idx % 2 == 0 ? Spinor::Up : Spinor::Down};
}

std::vector<SpinorSite> build_lattice(HalfInt l_max) {
  const Lattice lat(l_max);
  std::vector<SpinorSite> out;
  out.reserve(lat.num_sites());
  for (int L = 0; L <= lat.l2_max(); ++L)
    for (int i2 = -L; i2 <= L; i2 += 2)
      for (int j2 = -L; j2 <= L; j2 += 2)
        for (Spinor s : {Spinor::Up, Spinor::Down})
          out.push_back({{HalfInt::from_twice(L), HalfInt::from_twice(i2), HalfInt::from_twice(j2)}, s});
  return out;
}

TruncatedOperator::TruncatedOperator(Lattice lattice, HalfInt interior_l, Precision prec)
    : lattice_(lattice), interior_l_(interior_l), prec_(prec), cols_(lattice.num_sites()) {}

std::size_t TruncatedOperator::nnz() const {
  std::size_t n = 0;
  for (const auto& c : cols_) n += c.size();
  return n;
}

void TruncatedOperator::add(std::size_t row, std::size_t col, const BigComplex& v) {
  auto& c = cols_[col];
  for (auto& e : c)
    if (e.row == row) {
      e.value += v;
      return;
    }
  c.push_back({static_cast<std::uint32_t>(row), v});
}

BigComplex TruncatedOperator::entry(std::size_t row, std::size_t col) const {
  for (const auto& e : cols_[col])
    if (e.row == row) return e.value;
  return BigComplex(prec_);
}

TruncatedOperator TruncatedOperator::adjoint() const {
  TruncatedOperator out(lattice_, interior_l_, prec_);
  for (std::size_t c = 0; c < cols_.size(); ++c)
    for (const auto& e : cols_[c]) out.cols_[e.row].push_back({static_cast<std::uint32_t>(c), conj(e.value)});
  return out;
}

std::vector<BigComplex> TruncatedOperator::apply(const std::vector<BigComplex>& x) const {
  if (x.size() != cols_.size()) throw std::invalid_argument("dimension mismatch");
  std::vector<BigComplex> y(cols_.size(), BigComplex(prec_));
  for (std::size_t c = 0; c < cols_.size(); ++c)
    for (const auto& e : cols_[c]) y[e.row] += e.value * x[c];
  return y;
}

TruncatedOperator compose(const TruncatedOperator& A, const TruncatedOperator& B, ExecPolicy policy) {
  if (A.dim() != B.dim()) throw std::invalid_argument("compose: lattice mismatch");
  TruncatedOperator out(A.lattice(), std::min(A.interior_l(), B.interior_l()), std::max(A.precision(), B.precision()));
  const auto n = static_cast<std::ptrdiff_t>(B.dim());
#pragma omp parallel for schedule(dynamic, 256) if (policy == ExecPolicy::Parallel)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    auto& col = out.column(static_cast<std::size_t>(c));
    for (const auto& eb : B.column(static_cast<std::size_t>(c)))
      for (const auto& ea : A.column(eb.row)) {
        BigComplex v = ea.value * eb.value;
        auto it = std::find_if(col.begin(), col.end(), [&](const auto& e) { return e.row == ea.row; });
        if (it == col.end())
          col.push_back({ea.row, std::move(v)});
        else
          it->value += v;
      }
  }
  return out;
}

namespace {

TruncatedOperator combine(const TruncatedOperator& A, const TruncatedOperator& B, bool subtract) {
  if (A.dim() != B.dim()) throw std::invalid_argument("lattice mismatch");
  TruncatedOperator out(A.lattice(), std::min(A.interior_l(), B.interior_l()), std::max(A.precision(), B.precision()));
  for (std::size_t c = 0; c < A.dim(); ++c) {
    out.column(c) = A.column(c);
    for (const auto& e : B.column(c)) out.add(e.row, c, subtract ? -e.value : e.value);
  }
  return out;
}

BigComplex real_entry(const BigFloat& x) { return BigComplex(x); }

}  // namespace

TruncatedOperator operator+(const TruncatedOperator& A, const TruncatedOperator& B) { return combine(A, B, false); }
TruncatedOperator operator-(const TruncatedOperator& A, const TruncatedOperator& B) { return combine(A, B, true); }

TruncatedOperator scaled(const TruncatedOperator& A, const BigComplex& s) {
  TruncatedOperator out = A;
  for (std::size_t c = 0; c < out.dim(); ++c)
    for (auto& e : out.column(c)) e.value *= s;
  return out;
}

BigFloat dirac_diagonal(const FloatContext& ctx, int j2, Spinor s) {
  const BigFloat gap = ctx.pow(HalfInt::from_int(-1)) - ctx.q();
  if (s == Spinor::Up) return (ctx.pow(HalfInt::from_twice(2 - 2 * j2)) - BigFloat(1L, ctx.precision())) / gap;
  return (BigFloat(1L, ctx.precision()) - ctx.pow(HalfInt::from_twice(-2 - 2 * j2))) / gap;
}

BigFloat dirac_offdiagonal(const FloatContext& ctx, int l2, int j2, Spinor s) {
  // Down -> Up raises j: q^{-1/2} q^{-j} sqrt([l+1/2]^2 - [j+1/2]^2)
  // Up -> Down lowers j: q^{1/2} q^{-j} sqrt([l+1/2]^2 - [j-1/2]^2)
  const int shifted = s == Spinor::Down ? j2 + 1 : j2 - 1;
  if (std::abs(shifted) >= l2 + 1) return BigFloat(0L, ctx.precision());
  const BigFloat top = ctx.q_number(HalfInt::from_twice(l2 + 1));
  const BigFloat mid = ctx.q_number(HalfInt::from_twice(shifted));
  const BigFloat root = sqrt(top * top - mid * mid);
  const int pref = s == Spinor::Down ? -1 : 1;
  return ctx.pow(HalfInt::from_twice(pref - j2)) * root;
}

BigFloat abs_dirac(const FloatContext& ctx, int l2, int j2, Spinor s) {
  const int pref = s == Spinor::Up ? 1 : -1;
  return ctx.pow(HalfInt::from_twice(pref - j2)) * ctx.q_number(HalfInt::from_twice(l2 + 1));
}

std::optional<RhoStep> rho_step(const FloatContext& ctx, char g, int l2, int i2, int j2, int l2_max) {
  // l + i is an integer, so all exponents below are integral
  const int li = (l2 + i2) / 2;
  const BigFloat one(1L, ctx.precision());
  RhoStep out{l2, i2, j2, BigFloat(ctx.precision())};
  switch (g) {
    case 'a':
      out = {l2 - 1, i2 - 1, j2 - 1, sqrt(one - ctx.pow(HalfInt::from_int(2 * li)))};
      break;
    case 'b':
      out = {l2 + 1, i2 - 1, j2 + 1, -ctx.pow(HalfInt::from_int(li + 1))};
      break;
    case 'c':
      out = {l2 - 1, i2 + 1, j2 - 1, ctx.pow(HalfInt::from_int(li))};
      break;
    case 'd':
      out = {l2 + 1, i2 + 1, j2 + 1, sqrt(one - ctx.pow(HalfInt::from_int(2 * li + 2)))};
      break;
    default:
      throw std::invalid_argument("rho_step: unknown generator");
  }
  if (out.l2 > l2_max || !Lattice::valid(out.l2, out.i2, out.j2)) return std::nullopt;
  return out;
}

std::optional<RhoStep> rho_monomial_step(const FloatContext& ctx, const Monomial& mono, int l2, int i2, int j2,
                                         int l2_max) {
  RhoStep cur{l2, i2, j2, BigFloat(1L, ctx.precision())};
  auto walk = [&](char g, int times) {
    for (int t = 0; t < times; ++t) {
      auto next = rho_step(ctx, g, cur.l2, cur.i2, cur.j2, l2_max);
      if (!next) return false;
      next->coeff *= cur.coeff;
      cur = std::move(*next);
    }
    return true;
  };
  if (!walk('c', mono.n) || !walk('b', mono.m) || !walk(mono.side == Side::A ? 'a' : 'd', mono.p)) return std::nullopt;
  return cur;
}

namespace {

template <class F>
TruncatedOperator diagonal_operator(const FloatContext& ctx, HalfInt l_max, F&& value) {
  Lattice lat(l_max);
  TruncatedOperator out(lat, l_max, ctx.precision());
  const auto n = static_cast<std::ptrdiff_t>(lat.num_sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    const SpinorSite s = lat.site(static_cast<std::size_t>(idx));
    out.column(static_cast<std::size_t>(idx)).push_back({static_cast<std::uint32_t>(idx), value(s)});
  }
  return out;
}

}  // namespace

TruncatedOperator op_modular_L(const FloatContext& ctx, HalfInt l_max) {
  return diagonal_operator(ctx, l_max, [&](const SpinorSite& s) {
    return real_entry(ctx.pow(HalfInt::from_twice(2 * s.point.j.twice)));
  });
}

TruncatedOperator op_modular_R(const FloatContext& ctx, HalfInt l_max) {
  return diagonal_operator(ctx, l_max, [&](const SpinorSite& s) {
    return real_entry(ctx.pow(HalfInt::from_twice(2 * s.point.i.twice)));
  });
}

TruncatedOperator op_casimir(const FloatContext& ctx, HalfInt l_max) {
  return diagonal_operator(ctx, l_max, [&](const SpinorSite& s) {
    const BigFloat x = ctx.q_number(HalfInt::from_twice(s.point.l.twice + 1));
    return real_entry(x * x);
  });
}

TruncatedOperator op_chi(const FloatContext& ctx, HalfInt l_max) {
  return diagonal_operator(ctx, l_max, [&](const SpinorSite& s) {
    return real_entry(ctx.pow(HalfInt::from_int(s.component == Spinor::Up ? -1 : 1)));
  });
}

TruncatedOperator build_dirac(const FloatContext& ctx, HalfInt l_max) {
  Lattice lat(l_max);
  TruncatedOperator out(lat, l_max, ctx.precision());
  const auto n = static_cast<std::ptrdiff_t>(lat.num_sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    const SpinorSite s = lat.site(static_cast<std::size_t>(idx));
    const int l2 = s.point.l.twice, i2 = s.point.i.twice, j2 = s.point.j.twice;
    auto& col = out.column(static_cast<std::size_t>(idx));
    col.push_back({static_cast<std::uint32_t>(idx), real_entry(dirac_diagonal(ctx, j2, s.component))});
    const int tj = s.component == Spinor::Down ? j2 + 2 : j2 - 2;
    const Spinor ts = s.component == Spinor::Down ? Spinor::Up : Spinor::Down;
    if (auto row = lat.find(l2, i2, tj, ts))
      col.push_back({static_cast<std::uint32_t>(*row), real_entry(dirac_offdiagonal(ctx, l2, j2, s.component))});
  }
  return out;
}

TruncatedOperator op_absD_power(const FloatContext& ctx, HalfInt l_max, const BigComplex& z) {
  const BigComplex minus_z = -z;
  return diagonal_operator(ctx, l_max, [&](const SpinorSite& s) {
    return pow(abs_dirac(ctx, s.point.l.twice, s.point.j.twice, s.component), minus_z);
  });
}

TruncatedOperator rho_apply(const FloatContext& ctx, const Monomial& mono, HalfInt l_max) {
  Lattice lat(l_max);
  TruncatedOperator out(lat, l_max - HalfInt::from_twice(mono.degree()), ctx.precision());
  const auto n = static_cast<std::ptrdiff_t>(lat.num_sites());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
    const SpinorSite s = lat.site(static_cast<std::size_t>(idx));
    auto step = rho_monomial_step(ctx, mono, s.point.l.twice, s.point.i.twice, s.point.j.twice, lat.l2_max());
    if (!step || step->coeff.is_zero()) continue;
    const std::size_t row = lat.site_index(step->l2, step->i2, step->j2, s.component);
    out.column(static_cast<std::size_t>(idx)).push_back({static_cast<std::uint32_t>(row), real_entry(step->coeff)});
  }
  return out;
}

TruncatedOperator rho_apply(const FloatContext& ctx, const AlgebraElement& x, HalfInt l_max) {
  Lattice lat(l_max);
  TruncatedOperator out(lat, l_max - HalfInt::from_twice(x.degree()), ctx.precision());
  for (const auto& [mono, c] : x.terms()) {
    const TruncatedOperator part = rho_apply(ctx, mono, l_max);
    out = out + scaled(part, BigComplex(c.to_bigfloat(ctx.precision())));
  }
  return out;
}

}  // namespace qsu2
