#include <cmath>
#include <random>

#include "doctest.h"
#include "fibermetric/spectral.hpp"

using namespace fm;

namespace {

Field random_smooth(const TorusGrid& g, unsigned seed, bool zero_mean) {
  // a handful of low Fourier modes with decaying amplitudes
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Field f(g, FieldKind::potential);
  for (int j = -4; j <= 4; ++j)
    for (int k = -4; k <= 4; ++k) {
      if (zero_mean && j == 0 && k == 0) continue;
      const double a = U(rng) / (1.0 + j * j + k * k);
      const double b = U(rng) / (1.0 + j * j + k * k);
      for (std::size_t r = 0; r < g.n_side; ++r)
        for (std::size_t c = 0; c < g.n_side; ++c) {
          const double ph = 2.0 * kPi * (j * g.x(c) + k * g.y(r));
          f.at(c, r) += a * std::cos(ph) + b * std::sin(ph);
        }
    }
  return f;
}

}  // namespace

TEST_CASE("laplacian on zero field and a single mode, tau = i") {
  TorusGrid g(64, cplx(0.0, 1.0));
  Field zero(g, FieldKind::potential, 0.0);
  CHECK(field_max_abs(laplacian(zero)) == 0.0);

  Field f(g, FieldKind::potential);
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t c = 0; c < g.n_side; ++c)
      f.at(c, r) = std::cos(2.0 * kPi * g.x(c));
  Field lf = laplacian(f);
  double err = 0.0;
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t c = 0; c < g.n_side; ++c)
      err = std::max(err, std::abs(lf.at(c, r) +
                                   4.0 * kPi * kPi * std::cos(2.0 * kPi * g.x(c))));
  CHECK(err < 1e-10);
}

TEST_CASE("laplacian output has zero mean; poisson round trip") {
  for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 0.8), cplx(-0.4, 2.1)}) {
    TorusGrid g(64, tau);
    Field f = random_smooth(g, 7, false);
    Field lf = laplacian(f);
    CHECK(std::abs(field_mean(lf)) < 1e-12 * (1.0 + field_max_abs(lf)));

    Field src = random_smooth(g, 11, true);
    Field phi = poisson_solve(src);
    CHECK(std::abs(field_mean(phi)) < 1e-14);
    Field back = laplacian(phi);
    double err = 0.0;
    for (std::size_t k = 0; k < back.v.size(); ++k)
      err = std::max(err, std::abs(back.v[k] - src.v[k]));
    CHECK(err < 1e-10 * field_max_abs(src));
  }
}

TEST_CASE("poisson_solve single mode closed form and compatibility error") {
  TorusGrid g(64, cplx(0.0, 1.0));
  Field gsrc(g, FieldKind::generic);
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t c = 0; c < g.n_side; ++c)
      gsrc.at(c, r) = std::cos(2.0 * kPi * g.x(c));
  Field phi = poisson_solve(gsrc);
  double err = 0.0;
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t c = 0; c < g.n_side; ++c)
      err = std::max(err, std::abs(phi.at(c, r) +
                                   std::cos(2.0 * kPi * g.x(c)) / (4.0 * kPi * kPi)));
  CHECK(err < 1e-12);

  Field bad(g, FieldKind::generic, 1.0);
  CHECK_THROWS(poisson_solve(bad));
}

TEST_CASE("dz/dzbar multipliers compose to the Laplacian symbol") {
  TorusGrid g(32, cplx(0.25, 1.3));
  for (long j : {-5L, 0L, 3L})
    for (long k : {-2L, 1L, 7L}) {
      cplx prod = 4.0 * mult_dz(g, j, k) * mult_dzbar(g, j, k);
      CHECK(std::abs(prod - cplx(mult_laplacian(g, j, k), 0.0)) < 1e-9);
    }
}

TEST_CASE("dz of a holomorphic exponential mode, generic tau") {
  // e^{2 pi i z} = e^{2 pi i (x + tau y)} is the (j,k) = (1, tau) direction:
  // restricted to the lattice it is the smooth periodic function
  // e^{2 pi i x} e^{2 pi i tau y}... not periodic in y, so instead test on a
  // doubly periodic product: f = sin(2 pi x) with dz f = pi cos(2 pi x) * dz(x).
  // dz x for mode (1,0) gives mult_dz/(2 pi i) = (1 - tau/(tau - taubar)) ... we
  // simply check against the defining multiplier on the mode itself.
  TorusGrid g(64, cplx(0.2, 0.9));
  Field f(g, FieldKind::generic);
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t c = 0; c < g.n_side; ++c)
      f.at(c, r) = std::sin(2.0 * kPi * g.x(c));
  CField d = dz(f);
  // sin(2 pi x) = (e^{2 pi i x} - e^{-2 pi i x})/(2i): multiplier m(1,0) on the
  // first term, m(-1,0) = -conj acts... assemble expected directly:
  const cplx m = mult_dz(g, 1, 0);
  double err = 0.0;
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t c = 0; c < g.n_side; ++c) {
      const cplx e1 = std::exp(cplx(0.0, 2.0 * kPi * g.x(c)));
      const cplx expected = (m * e1 - mult_dz(g, -1, 0) * std::conj(e1)) / cplx(0.0, 2.0);
      err = std::max(err, std::abs(d.at(c, r) - expected));
    }
  CHECK(err < 1e-12);
}

TEST_CASE("band_limit removes high modes only") {
  TorusGrid g(64, cplx(0.0, 1.0));
  Field f(g, FieldKind::generic);
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t c = 0; c < g.n_side; ++c)
      f.at(c, r) = std::cos(2.0 * kPi * 3.0 * g.x(c)) +
                   std::cos(2.0 * kPi * 20.0 * g.y(r));
  Field lo = band_limit(f, 8);
  double err = 0.0;
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t c = 0; c < g.n_side; ++c)
      err = std::max(err, std::abs(lo.at(c, r) - std::cos(2.0 * kPi * 3.0 * g.x(c))));
  CHECK(err < 1e-12);
}
