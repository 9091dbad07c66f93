#include "fibermetric/spectral.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "fibermetric/fft.hpp"

namespace fm {

cplx mult_dz(const TorusGrid& g, long j, long k) {
  const double t2 = g.tau.imag();
  return kPi * (cplx(double(k), 0.0) - double(j) * std::conj(g.tau)) / t2;
}

cplx mult_dzbar(const TorusGrid& g, long j, long k) {
  const double t2 = g.tau.imag();
  return kPi * (double(j) * g.tau - cplx(double(k), 0.0)) / t2;
}

double mult_laplacian(const TorusGrid& g, long j, long k) {
  const double t2 = g.tau.imag();
  const double a = double(j);
  const double b = (double(k) - double(j) * g.tau.real()) / t2;
  return -4.0 * kPi * kPi * (a * a + b * b);
}

namespace {

// apply symbol s(j, k) in Fourier space; spectrum index [k_row][j_col]
CField apply_symbol(const CField& f,
                    const std::function<cplx(long, long)>& sym) {
  const std::size_t n = f.n();
  std::vector<cplx> a = f.v;
  fft2(a, n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const long k = signed_freq(r, n);
    for (std::size_t c = 0; c < n; ++c) {
      const long j = signed_freq(c, n);
      a[r * n + c] *= sym(j, k);
    }
  }
  fft2(a, n, true);
  CField out(f.grid, f.kind);
  out.v = std::move(a);
  return out;
}

Field real_apply(const Field& f, const std::function<cplx(long, long)>& sym) {
  return to_real(apply_symbol(to_complex(f), sym));
}

}  // namespace

CField dz(const CField& f) {
  const TorusGrid g = f.grid;
  return apply_symbol(f, [&g](long j, long k) { return mult_dz(g, j, k); });
}

CField dzbar(const CField& f) {
  const TorusGrid g = f.grid;
  return apply_symbol(f, [&g](long j, long k) { return mult_dzbar(g, j, k); });
}

CField dz(const Field& f) { return dz(to_complex(f)); }
CField dzbar(const Field& f) { return dzbar(to_complex(f)); }

Field laplacian(const Field& f) {
  const TorusGrid g = f.grid;
  return real_apply(
      f, [&g](long j, long k) { return cplx(mult_laplacian(g, j, k), 0.0); });
}

Field poisson_solve(const Field& source, double compat_tol) {
  const double scale = std::max(1.0, field_max_abs(source));
  if (std::abs(field_mean(source)) > compat_tol * scale)
    throw std::invalid_argument("poisson_solve: source is not mean-free");
  const TorusGrid g = source.grid;
  Field out = real_apply(source, [&g](long j, long k) {
    if (j == 0 && k == 0) return cplx(0.0, 0.0);
    return cplx(1.0 / mult_laplacian(g, j, k), 0.0);
  });
  out.kind = FieldKind::potential;
  // enforce exact zero mean (the (0,0) mode was dropped; kill roundoff drift)
  const double m = field_mean(out);
  for (double& x : out.v) x -= m;
  return out;
}

Field invert_shifted(const Field& f, double cbar) {
  if (cbar <= 0.0) throw std::invalid_argument("invert_shifted: cbar must be > 0");
  const TorusGrid g = f.grid;
  return real_apply(f, [&g, cbar](long j, long k) {
    return cplx(1.0 / (-0.5 * mult_laplacian(g, j, k) + cbar), 0.0);
  });
}

Field band_limit(const Field& f, std::size_t cutoff) {
  const long cut = long(cutoff);
  return real_apply(f, [cut](long j, long k) {
    return (std::labs(j) > cut || std::labs(k) > cut) ? cplx(0.0, 0.0)
                                                      : cplx(1.0, 0.0);
  });
}

}  // namespace fm
