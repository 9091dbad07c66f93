#include "fibermetric/theta.hpp"

#include <cmath>
#include <stdexcept>

namespace fm {

cplx theta1(cplx u, cplx tau) {
  if (tau.imag() <= 0.0) throw std::invalid_argument("theta1: Im(tau) <= 0");
  // theta1 = 2 q^{1/4} sum (-1)^n q^{n(n+1)} sin((2n+1)u)
  const cplx iq = cplx(0.0, kPi) * tau;      // log q
  cplx sum = 0.0;
  double max_mag = 0.0;
  for (int n = 0; n < 64; ++n) {
    const cplx term = std::exp(iq * double(n * (n + 1))) *
                      std::sin(double(2 * n + 1) * u) *
                      (n % 2 == 0 ? 1.0 : -1.0);
    sum += term;
    const double mag = std::abs(term);
    max_mag = std::max(max_mag, mag);
    if (n > 0 && mag < 1e-16 * max_mag) break;
  }
  return 2.0 * std::exp(iq * 0.25) * sum;
}

double theta_norm_offset(double dx, double dy, cplx tau) {
  const double t2 = tau.imag();
  if (t2 <= 0.0) throw std::invalid_argument("theta_norm_offset: Im(tau) <= 0");
  // reduce to the centered cell; h is periodic so this is exact
  dx -= std::floor(dx + 0.5);
  dy -= std::floor(dy + 0.5);
  const cplx w = cplx(dx, 0.0) + tau * dy;   // z - a
  const double imw = t2 * dy;                // Im(z - a)
  if (t2 > 50.0) {
    // leading term: |2 q^{1/4} sin(pi w)|^2 e^{-2 pi imw^2 / t2}; the next
    // series term is smaller by |q|^2 = e^{-2 pi t2} < 1e-136.  Work in logs.
    const cplx u = kPi * w;
    // log |sin u|: |sin(a+bi)|^2 = sin^2 a + sinh^2 b
    double log_abs_sin;
    const double b = u.imag();
    if (std::abs(b) > 20.0) {
      log_abs_sin = std::abs(b) - std::log(2.0);
    } else {
      const double s = std::sin(u.real()), sh = std::sinh(b);
      log_abs_sin = 0.5 * std::log(s * s + sh * sh);
    }
    const double logh = std::log(4.0) - 0.5 * kPi * t2 + 2.0 * log_abs_sin -
                        2.0 * kPi * imw * imw / t2;
    return std::exp(logh);
  }
  const double th = std::abs(theta1(kPi * w, tau));
  return th * th * std::exp(-2.0 * kPi * imw * imw / t2);
}

cplx theta1_prime(cplx u, cplx tau) {
  if (tau.imag() <= 0.0) throw std::invalid_argument("theta1_prime: Im(tau) <= 0");
  const cplx iq = cplx(0.0, kPi) * tau;  // log q
  cplx sum = 0.0;
  double max_mag = 0.0;
  for (int n = 0; n < 64; ++n) {
    const cplx term = std::exp(iq * double(n * (n + 1))) * double(2 * n + 1) *
                      std::cos(double(2 * n + 1) * u) *
                      (n % 2 == 0 ? 1.0 : -1.0);
    sum += term;
    const double mag = std::abs(term);
    max_mag = std::max(max_mag, mag);
    if (n > 0 && mag < 1e-16 * max_mag) break;
  }
  return 2.0 * std::exp(iq * 0.25) * sum;
}

cplx dz_log_theta_norm_offset(double dx, double dy, cplx tau) {
  const double t2 = tau.imag();
  if (t2 <= 0.0)
    throw std::invalid_argument("dz_log_theta_norm_offset: Im(tau) <= 0");
  dx -= std::floor(dx + 0.5);
  dy -= std::floor(dy + 0.5);
  const cplx w = cplx(dx, 0.0) + tau * dy;
  const double imw = t2 * dy;
  const cplx u = kPi * w;
  if (t2 > 50.0) {
    // leading term: theta1'/theta1 -> pi cot(pi w); saturate cot for large
    // |Im u| to avoid overflow (cot -> -i sign(Im u))
    cplx cot;
    if (std::abs(u.imag()) > 20.0) {
      cot = cplx(0.0, u.imag() > 0 ? -1.0 : 1.0);
    } else {
      cot = std::cos(u) / std::sin(u);
    }
    return kPi * cot + cplx(0.0, 2.0 * kPi) * imw / t2;
  }
  return kPi * theta1_prime(u, tau) / theta1(u, tau) +
         cplx(0.0, 2.0 * kPi) * imw / t2;
}

CField dz_log_theta_norm(double ax, double ay, const TorusGrid& grid) {
  CField out(grid, FieldKind::generic);
  const std::size_t n = grid.n_side;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      out.at(i, j) =
          dz_log_theta_norm_offset(grid.x(i) - ax, grid.y(j) - ay, grid.tau);
  return out;
}

Field theta_section_norm(double ax, double ay, const TorusGrid& grid) {
  Field out(grid, FieldKind::generic);
  const std::size_t n = grid.n_side;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      out.at(i, j) = theta_norm_offset(grid.x(i) - ax, grid.y(j) - ay, grid.tau);
  return out;
}

}  // namespace fm
