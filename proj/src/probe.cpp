#include "qsu2/probe.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qsu2/spectral.hpp"

namespace qsu2 {

CsrMatrix CsrMatrix::transpose() const {
  CsrMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.ptr.assign(cols + 1, 0);
  for (auto c : idx) ++t.ptr[c + 1];
  for (std::size_t k = 0; k < cols; ++k) t.ptr[k + 1] += t.ptr[k];
  t.idx.resize(idx.size());
  t.val.resize(val.size());
  std::vector<std::size_t> fill(t.ptr.begin(), t.ptr.end() - 1);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = ptr[r]; k < ptr[r + 1]; ++k) {
      const std::size_t dst = fill[idx[k]]++;
      t.idx[dst] = static_cast<std::uint32_t>(r);
      t.val[dst] = val[k];
    }
  return t;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : val) m = std::max(m, std::abs(v));
  return m;
}

void spmv(const CsrMatrix& A, const std::vector<double>& x, std::vector<double>& y, ExecPolicy policy) {
  y.assign(A.rows, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(A.rows);
#pragma omp parallel for schedule(static) if (policy == ExecPolicy::Parallel)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t k = A.ptr[static_cast<std::size_t>(r)]; k < A.ptr[static_cast<std::size_t>(r) + 1]; ++k)
      acc += A.val[k] * x[A.idx[k]];
    y[static_cast<std::size_t>(r)] = acc;
  }
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

PowerResult power_iteration(const CsrMatrix& A, const CsrMatrix& At, int max_iter, double rel_tol,
                            ExecPolicy policy) {
  PowerResult out;
  if (A.cols == 0 || A.nnz() == 0) {
    out.converged = true;
    return out;
  }
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> x(A.cols), y, z;
  for (auto& v : x) v = u(rng);
  double nx = norm2(x);
  for (auto& v : x) v /= nx;
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    spmv(A, x, y, policy);
    const double sigma = norm2(y);
    out.sigma = sigma;
    out.iterations = it;
    if (sigma == 0.0) {
      out.converged = true;
      return out;
    }
    if (it > 1 && std::abs(sigma - prev) <= rel_tol * sigma) {
      out.converged = true;
      return out;
    }
    prev = sigma;
    spmv(At, y, z, policy);
    nx = norm2(z);
    if (nx == 0.0) {
      out.converged = true;
      return out;
    }
    for (std::size_t k = 0; k < z.size(); ++k) x[k] = z[k] / nx;
  }
  return out;
}

Precision probe_precision(const mpq_class& q, HalfInt l_max, Precision prec) {
  const double bits_per_l = -std::log2(q.get_d());
  return prec + static_cast<Precision>(std::ceil(4.0 * l_max.to_double() * bits_per_l)) + 64;
}

namespace {

using Col = std::vector<std::pair<std::size_t, BigFloat>>;

void col_add(Col& col, std::size_t row, BigFloat v) {
  for (auto& [r, x] : col)
    if (r == row) {
      x += v;
      return;
    }
  col.emplace_back(row, std::move(v));
}

// Per-site coefficients tabulated over (spinor, L, j) and (generator, L, i).
class ProbeTables {
 public:
  ProbeTables(const FloatContext& ctx, const Lattice& lat) : ctx_(ctx), lat_(lat), L2_(lat.l2_max()) {
    const std::size_t stride = static_cast<std::size_t>(2 * L2_ + 1);
    const std::size_t n = static_cast<std::size_t>(L2_ + 1) * stride;
    for (int s = 0; s < 2; ++s) {
      ddiag_[s].resize(stride, BigFloat(ctx.precision()));
      doff_[s].resize(n, BigFloat(ctx.precision()));
      absd_[s].resize(n, BigFloat(ctx.precision()));
    }
    for (int g = 0; g < 4; ++g) rho_[g].resize(n, BigFloat(ctx.precision()));
    const auto total = static_cast<std::ptrdiff_t>(L2_ + 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t Lp = 0; Lp < total; ++Lp) {
      const int L = static_cast<int>(Lp);
      for (int k2 = -L; k2 <= L; k2 += 2) {
        const std::size_t at = slot(L, k2);
        for (int s = 0; s < 2; ++s) {
          const auto sp = static_cast<Spinor>(s);
          doff_[s][at] = dirac_offdiagonal(ctx, L, k2, sp);
          absd_[s][at] = abs_dirac(ctx, L, k2, sp);
        }
        const char gens[] = {'a', 'b', 'c', 'd'};
        // rho coefficients depend on (l, i) only
        for (int g = 0; g < 4; ++g) rho_[g][at] = rho_coefficient(gens[g], L, k2);
      }
    }
    for (int j2 = -L2_; j2 <= L2_; ++j2)
      for (int s = 0; s < 2; ++s) ddiag_[s][static_cast<std::size_t>(j2 + L2_)] = dirac_diagonal(ctx, j2, static_cast<Spinor>(s));
  }

  std::size_t slot(int L, int k2) const {
    return static_cast<std::size_t>(L) * static_cast<std::size_t>(2 * L2_ + 1) + static_cast<std::size_t>(k2 + L2_);
  }

  /// |D|^t tabulated on the same layout.
  std::array<std::vector<BigFloat>, 2> abs_power(double t) const {
    std::array<std::vector<BigFloat>, 2> out;
    const BigFloat te(t, ctx_.precision());
    for (int s = 0; s < 2; ++s) {
      out[s].resize(absd_[s].size(), BigFloat(ctx_.precision()));
      const auto n = static_cast<std::ptrdiff_t>(absd_[s].size());
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t k = 0; k < n; ++k)
        if (!absd_[s][static_cast<std::size_t>(k)].is_zero())
          out[s][static_cast<std::size_t>(k)] = pow(absd_[s][static_cast<std::size_t>(k)], te);
    }
    return out;
  }

  Col apply_dirac(const Col& in) const {
    Col out;
    for (const auto& [u, v] : in) {
      const SpinorSite s = lat_.site(u);
      const int L = s.point.l.twice, i2 = s.point.i.twice, j2 = s.point.j.twice;
      const int sp = static_cast<int>(s.component);
      col_add(out, u, v * ddiag_[sp][static_cast<std::size_t>(j2 + L2_)]);
      const int tj = s.component == Spinor::Down ? j2 + 2 : j2 - 2;
      const Spinor ts = s.component == Spinor::Down ? Spinor::Up : Spinor::Down;
      if (auto row = lat_.find(L, i2, tj, ts)) col_add(out, *row, v * doff_[sp][slot(L, j2)]);
    }
    return out;
  }

  Col apply_diag(const Col& in, const std::array<std::vector<BigFloat>, 2>& table) const {
    Col out;
    for (const auto& [u, v] : in) {
      const SpinorSite s = lat_.site(u);
      col_add(out, u, v * table[static_cast<int>(s.component)][slot(s.point.l.twice, s.point.j.twice)]);
    }
    return out;
  }

  Col apply_rho(const Col& in, const Monomial& mono, const BigFloat& scale) const {
    Col out;
    for (const auto& [u, v] : in) {
      const SpinorSite s = lat_.site(u);
      int L = s.point.l.twice, i2 = s.point.i.twice, j2 = s.point.j.twice;
      BigFloat c = v * scale;
      bool alive = true;
      auto walk = [&](int g, int times) {
        static const int dl[] = {-1, 1, -1, 1}, di[] = {-1, -1, 1, 1};
        for (int t = 0; t < times && alive; ++t) {
          const BigFloat& k = rho_[g][slot(L, i2)];
          L += dl[g];
          i2 += di[g];
          j2 += dl[g];
          if (L > L2_ || !Lattice::valid(L, i2, j2)) {
            alive = false;
            return;
          }
          c *= k;
        }
      };
      walk(2, mono.n);
      walk(1, mono.m);
      walk(mono.side == Side::A ? 0 : 3, mono.p);
      if (alive && !c.is_zero()) col_add(out, lat_.site_index(L, i2, j2, s.component), std::move(c));
    }
    return out;
  }

 private:
  BigFloat rho_coefficient(char g, int L, int i2) const {
    const int li = (L + i2) / 2;
    const BigFloat one(1L, ctx_.precision());
    switch (g) {
      case 'a':
        return sqrt(one - ctx_.pow(HalfInt::from_int(2 * li)));
      case 'b':
        return -ctx_.pow(HalfInt::from_int(li + 1));
      case 'c':
        return ctx_.pow(HalfInt::from_int(li));
      default:
        return sqrt(one - ctx_.pow(HalfInt::from_int(2 * li + 2)));
    }
  }

  const FloatContext& ctx_;
  const Lattice& lat_;
  int L2_;
  std::array<std::vector<BigFloat>, 2> ddiag_, doff_, absd_;
  std::array<std::vector<BigFloat>, 4> rho_;
};

Col subtract(Col a, const Col& b) {
  for (const auto& [r, v] : b) col_add(a, r, -v);
  return a;
}

}  // namespace

CsrMatrix assemble_probe(const ProbeSpec& spec, const DeformationParameter& dp, HalfInt l_max, Precision prec,
                         ExecPolicy policy) {
  const Lattice lat(l_max);
  const int interior_l2 = l_max.twice - spec.x.degree();
  const std::size_t ncols = interior_l2 < 0 ? 0 : Lattice(HalfInt::from_twice(interior_l2)).num_sites();
  const FloatContext ctx(dp, probe_precision(dp.q(), l_max, prec));
  const ProbeTables tables(ctx, lat);

  // sigma_L^t scales a monomial by q^{t (signed_p - m + n)}
  const double e = spec.x.signed_p() - spec.x.m + spec.x.n;
  const double twist = spec.kind == ProbeKind::LemmaRegularity ? spec.s : 1.0;
  const BigFloat sigma = ctx.pow(BigFloat(twist * e, ctx.precision()));
  const BigFloat one(1L, ctx.precision());

  std::array<std::vector<BigFloat>, 2> pw_abs, pw_s, pw_ms, pw_r;
  if (spec.kind == ProbeKind::Lipschitz) pw_abs = tables.abs_power(1.0);
  if (spec.kind == ProbeKind::LemmaRegularity) {
    pw_s = tables.abs_power(spec.s);
    pw_ms = tables.abs_power(-spec.s);
    pw_r = tables.abs_power(spec.r);
  }

  std::vector<std::vector<std::pair<std::uint32_t, double>>> cols(ncols);
  const auto n = static_cast<std::ptrdiff_t>(ncols);
#pragma omp parallel for schedule(dynamic, 512) if (policy == ExecPolicy::Parallel)
  for (std::ptrdiff_t cp = 0; cp < n; ++cp) {
    const auto c = static_cast<std::size_t>(cp);
    const Col unit{{c, one}};
    Col col;
    switch (spec.kind) {
      case ProbeKind::TwistedCommutator:
        col = subtract(tables.apply_dirac(tables.apply_rho(unit, spec.x, one)),
                       tables.apply_rho(tables.apply_dirac(unit), spec.x, sigma));
        break;
      case ProbeKind::Lipschitz:
        col = subtract(tables.apply_diag(tables.apply_rho(unit, spec.x, one), pw_abs),
                       tables.apply_rho(tables.apply_diag(unit, pw_abs), spec.x, sigma));
        break;
      case ProbeKind::LemmaRegularity: {
        const Col t = tables.apply_diag(unit, pw_ms);
        col = tables.apply_diag(subtract(tables.apply_diag(tables.apply_rho(t, spec.x, one), pw_s),
                                         tables.apply_rho(tables.apply_diag(t, pw_s), spec.x, sigma)),
                                pw_r);
        break;
      }
    }
    auto& dst = cols[c];
    for (const auto& [r, v] : col) {
      const double d = v.to_double();
      if (d != 0.0) dst.emplace_back(static_cast<std::uint32_t>(r), d);
    }
    std::sort(dst.begin(), dst.end());
  }

  // cols[c] is row c of A^T
  CsrMatrix At;
  At.rows = ncols;
  At.cols = lat.num_sites();
  At.ptr.reserve(ncols + 1);
  for (const auto& col : cols) {
    for (const auto& [r, v] : col) {
      At.idx.push_back(r);
      At.val.push_back(v);
    }
    At.ptr.push_back(At.idx.size());
  }
  return At.transpose();
}

std::vector<ProbeResult> norm_probe(const ProbeSpec& spec, const DeformationParameter& dp,
                                    const std::vector<HalfInt>& schedule, Precision prec, ExecPolicy policy) {
  std::vector<ProbeResult> out;
  for (HalfInt l_max : schedule) {
    const CsrMatrix A = assemble_probe(spec, dp, l_max, prec, policy);
    const CsrMatrix At = A.transpose();
    const PowerResult p = power_iteration(A, At, 200, 1e-6, policy);
    out.push_back({l_max, p.sigma, p.iterations, p.converged, A.cols, A.nnz()});
  }
  return out;
}

}  // namespace qsu2
