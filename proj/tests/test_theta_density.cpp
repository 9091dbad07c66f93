#include <cmath>

#include "doctest.h"
#include "fibermetric/density.hpp"
#include "fibermetric/theta.hpp"

using namespace fm;

TEST_CASE("theta norm vanishes at the marked point and is doubly periodic") {
  const cplx tau(0.15, 1.1);
  const double ax = 0.25, ay = 0.5;
  CHECK(theta_norm_offset(0.0, 0.0, tau) == 0.0);

  // periodicity: the same offset shifted by full lattice vectors
  for (double dx : {0.07, 0.33, -0.41})
    for (double dy : {0.11, -0.28}) {
      const double h0 = theta_norm_offset(dx, dy, tau);
      CHECK(std::abs(theta_norm_offset(dx + 1.0, dy, tau) - h0) < 1e-12 * h0);
      CHECK(std::abs(theta_norm_offset(dx, dy + 1.0, tau) - h0) < 1e-12 * h0);
      CHECK(std::abs(theta_norm_offset(dx - 2.0, dy + 3.0, tau) - h0) < 1e-12 * h0);
    }

  TorusGrid g(64, tau);
  Field h = theta_section_norm(ax, ay, g);
  CHECK(field_min(h) >= 0.0);
  CHECK(h.at(16, 32) == 0.0);  // (0.25, 0.5) is a grid point at n = 64
}

TEST_CASE("theta norm vanishes to exact order 2") {
  const cplx tau(0.0, 1.0);
  for (double r : {1e-2, 1e-3}) {
    const double h1 = theta_norm_offset(r, 0.0, tau);
    const double h2 = theta_norm_offset(r / 2.0, 0.0, tau);
    const double ratio1 = h1 / (r * r);
    const double ratio2 = h2 / (r * r / 4.0);
    CHECK(std::abs(ratio1 / ratio2 - 1.0) < 0.05);
    CHECK(ratio1 > 0.0);
    // also along the tau direction
    const double g1 = theta_norm_offset(0.0, r, tau) / (std::abs(tau) * std::abs(tau) * r * r);
    CHECK(std::abs(g1 / ratio2 - 1.0) < 0.05);
  }
}

TEST_CASE("large Im(tau) leading-term formula matches the series") {
  // just below the switch, the correction terms are ~e^{-2 pi Im tau}, so the
  // series value and the leading-term log-domain formula must coincide
  const cplx tau(0.1, 49.9);
  for (double dx : {0.1, 0.37})
    for (double dy : {0.0, 0.2}) {
      const double series = theta_norm_offset(dx, dy, tau);
      const cplx u = kPi * (cplx(dx, 0.0) + tau * dy);
      const double s = std::sin(u.real()), sh = std::sinh(u.imag());
      const double lead =
          std::exp(std::log(4.0) - 0.5 * kPi * tau.imag() +
                   std::log(s * s + sh * sh) -
                   2.0 * kPi * std::pow(tau.imag() * dy, 2) / tau.imag());
      if (series > 0.0) CHECK(std::abs(lead / series - 1.0) < 1e-10);
    }
}

TEST_CASE("evaluate_density: trivial, scalar spot checks, q scaling") {
  TorusGrid g(64, cplx(0.0, 1.0));
  RegularizedDensity d;
  Field one = evaluate_density(d, g);
  CHECK(field_min(one) == 1.0);
  CHECK(field_max(one) == 1.0);

  // single B-point, b = 1/2, eps = 1: density = 1/(1 + h)^{1/2}
  d.divisor.points_B.push_back({0.5, 0.5, 0.5});
  d.epsilon = 1.0;
  Field f = evaluate_density(d, g);
  Field h = theta_section_norm(0.5, 0.5, g);
  for (auto [i, j] : {std::pair<std::size_t, std::size_t>{3, 7}, {20, 41}, {60, 5}}) {
    const double expect = 1.0 / std::sqrt(1.0 + h.at(i, j));
    CHECK(std::abs(f.at(i, j) - expect) < 1e-14);
  }

  // E-point with q scaled by (1 - p/2) at p = 1: exponent q/2
  RegularizedDensity e;
  e.divisor.points_E.push_back({0.25, 0.25, 1.0});
  e.epsilon = 0.5;
  RegularizedDensity e_half = e;
  e_half.q = {0.5};
  Field fe = evaluate_density(e, g);
  Field fh = evaluate_density(e_half, g);
  for (std::size_t k = 0; k < fe.v.size(); ++k)
    CHECK(std::abs(fh.v[k] - std::sqrt(fe.v[k])) < 1e-13);
}

TEST_CASE("density monotonicity in epsilon and positivity") {
  TorusGrid g(64, cplx(0.0, 1.0));
  RegularizedDensity b;
  b.divisor.points_B.push_back({0.3, 0.6, 0.7});
  RegularizedDensity e;
  e.divisor.points_E.push_back({0.3, 0.6, 1.0});
  for (double eps1 : {0.5, 0.1}) {
    b.epsilon = eps1;
    e.epsilon = eps1;
    Field fb1 = evaluate_density(b, g), fe1 = evaluate_density(e, g);
    b.epsilon = eps1 * 2.0;
    e.epsilon = eps1 * 2.0;
    Field fb2 = evaluate_density(b, g), fe2 = evaluate_density(e, g);
    CHECK(field_min(fb1) > 0.0);
    for (std::size_t k = 0; k < fb1.v.size(); ++k) {
      CHECK(fb2.v[k] <= fb1.v[k] + 1e-15);  // B: nonincreasing in eps
      CHECK(fe2.v[k] >= fe1.v[k] - 1e-15);  // E: nondecreasing in eps
    }
  }
}

TEST_CASE("conic integral: eps -> 0 monotone limit and integrability guard") {
  TorusGrid g(256, cplx(0.0, 1.0));
  RegularizedDensity d;
  d.divisor.points_B.push_back({0.41307, 0.59251, 0.5});  // generic, off-grid
  d.epsilon = 0.0;
  const double m0 = fiber_integral(evaluate_density(d, g));
  CHECK(std::isfinite(m0));
  double prev_diff = 1e30;
  double prev_mass = 0.0;
  bool first = true;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    d.epsilon = eps;
    const double m = fiber_integral(evaluate_density(d, g));
    CHECK(m <= m0 + 1e-12);
    if (!first) {
      const double diff = std::abs(m - prev_mass);
      CHECK(diff < prev_diff);
      prev_diff = diff;
    } else {
      prev_diff = std::abs(m0 - m);
    }
    prev_mass = m;
    first = false;
  }
  CHECK(std::abs(prev_mass - m0) < prev_diff * 10);

  RegularizedDensity bad;
  bad.divisor.points_B.push_back({0.5, 0.5, 0.5});
  bad.divisor.points_B[0].w = 1.0;  // b = 1 invalid
  bad.epsilon = 0.0;
  CHECK_THROWS(evaluate_density(bad, g));
}

TEST_CASE("fiber_integral exactness and normalization_constant") {
  TorusGrid g(64, cplx(0.0, 1.0));
  Field one(g, FieldKind::generic, 1.0);
  CHECK(fiber_integral(one, one) == doctest::Approx(1.0).epsilon(1e-14));

  Field c(g, FieldKind::generic);
  for (std::size_t r = 0; r < g.n_side; ++r)
    for (std::size_t cidx = 0; cidx < g.n_side; ++cidx)
      c.at(cidx, r) = std::cos(2.0 * kPi * g.x(cidx));
  CHECK(std::abs(fiber_integral(c, one)) < 1e-14);

  RegularizedDensity d;
  CHECK(normalization_constant(d, g) == doctest::Approx(0.0).epsilon(1e-14));
  d.background = Field(g, FieldKind::density, 2.0);
  CHECK(normalization_constant(d, g) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("normalization_constant refinement stability for a conic density") {
  RegularizedDensity d;
  d.divisor.points_B.push_back({0.41307, 0.59251, 0.5});
  d.epsilon = 0.0;
  const double c256 = normalization_constant(d, TorusGrid(256, cplx(0.0, 1.0)));
  const double c512 = normalization_constant(d, TorusGrid(512, cplx(0.0, 1.0)));
  CHECK(std::abs(c256 - c512) < 1e-3);
}

TEST_CASE("divisor validation rejects duplicates and bad exponents") {
  MarkedDivisor d;
  d.points_E.push_back({0.2, 0.2, 1.0});
  d.points_B.push_back({0.2, 0.2, 0.5});
  CHECK_THROWS(d.validate());
  MarkedDivisor d2;
  d2.points_B.push_back({0.2, 0.2, 1.5});
  CHECK_THROWS(d2.validate());
}
