// Section norms on the torus fiber built from the Jacobi theta function
//
//   theta1(u, q) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1)u),  q = e^{i pi tau}
//
// The flat-metric norm of the canonical section vanishing at a is
//
//   h_a(z) = |theta1(pi (z - a); tau)|^2 * exp(-2 pi Im(z-a)^2 / Im tau).
//
// Quasi-periodicity of theta1 under z -> z+1 and z -> z+tau cancels against
// the Gaussian factor, so h_a is genuinely doubly periodic; it vanishes to
// exact order 2 (like |z-a|^2) at lattice translates of a and nowhere else.
// Series terms are truncated at 1e-16 relative size; for Im tau above 50 the
// n = 0 term dominates all others by a factor exp(-2 pi Im tau) < 1e-136 and
// the evaluation switches to a log-domain leading-term formula.

#pragma once

#include "fibermetric/field.hpp"

namespace fm {

cplx theta1(cplx u, cplx tau);

// h_a evaluated at lattice offset (dx, dy) = (x, y)-coords of z - a; the
// offset is reduced to the centered fundamental cell [-1/2,1/2)^2 first.
double theta_norm_offset(double dx, double dy, cplx tau);

// marked point a given in lattice coordinates (ax, ay) in [0,1)^2
Field theta_section_norm(double ax, double ay, const TorusGrid& grid);

cplx theta1_prime(cplx u, cplx tau);  // d theta1 / du

// Analytic holomorphic log-derivative of the section norm,
//     d_z log h_a = pi theta1'(u)/theta1(u) + 2 pi i Im(z-a)/Im(tau),
// u = pi (z-a).  Doubly periodic (the quasi-period shifts cancel).  Infinite
// at lattice translates of a; callers exclude a neighborhood of the point.
cplx dz_log_theta_norm_offset(double dx, double dy, cplx tau);
CField dz_log_theta_norm(double ax, double ay, const TorusGrid& grid);

}  // namespace fm
