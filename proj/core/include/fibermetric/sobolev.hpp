// Weak Sobolev / Poincare inequality ratios on one torus fiber.
//
// Measures.  For a marked divisor (E-points with exponents e_a, B-points
// with exponents b in [0,1)) and a regularization parameter eps, the
// reference volume elements are densities in the sense of field.hpp:
//     mu_q   :=  prod_E (eps^2 + h_a)^{q_a} / prod_B (eps^2 + h_b)^{b}  / tau2
//     mu_qp  :=  same with q_a scaled by (1 - p/2)   (B exponents unchanged)
// with h the normalized theta distance used everywhere else.  The gradient
// is measured in the eps-regularized conic model metric along B,
//     model  :=  1/tau2 * prod_B (eps^2 + h_b)^{-b},
//     |grad_eps f|^2 = 4 |f_z|^2 / model ,
// so with an empty divisor everything reduces to the flat torus.
//
// Ratios.  With n = 1 the Sobolev quotient of a test function f is
//     (int |f|^{2p/(2-p)} dmu_q)^{(2-p)/(2p)}
//       / (int |grad_eps f|^p dmu_qp + int |f|^p dmu_qp)^{1/p}
// and the Poincare quotient replaces f by f - VM(f) on the left and drops
// the zeroth-order term, where VM(f) is the mu_q-weighted MEAN of f (the
// weighted-average reading of the volume-mean functional: it must kill
// constants).  The public entry points return the max quotient over a
// seeded sample of test functions (a lower bound for the best constant).
//
// Sampler.  Band-limited Fourier synthesis (modes up to n_side/8) plus
// theta-norm bump atoms exp(-h_c / w^2) centered at distances
// {0.05, 0.1, 0.3} from each marked point in random directions; bump widths
// are drawn from [0.02, 0.08].  Deterministic given the seed.

#pragma once

#include <cstdint>
#include <random>

#include "fibermetric/density.hpp"
#include "fibermetric/field.hpp"

namespace fm {

// measure densities entering the quotients
Field sobolev_measure_q(const TorusGrid& g, const MarkedDivisor& div, double eps);
Field sobolev_measure_qp(const TorusGrid& g, const MarkedDivisor& div, double eps,
                         double p);
Field conic_model_density(const TorusGrid& g, const MarkedDivisor& div, double eps);

// |grad_eps f| pointwise in the model metric
Field model_gradient_norm(const Field& f, const MarkedDivisor& div, double eps);

// mu_q-weighted mean of f
double volume_mean(const Field& f, const Field& mu_q);

// quotients of a single test function (0 when the denominator vanishes)
double sobolev_ratio_of(const Field& f, const MarkedDivisor& div, double p,
                        double eps);
double poincare_ratio_of(const Field& f, const MarkedDivisor& div, double p,
                         double eps);

// one draw from the documented test-function ensemble
Field sample_test_function(const TorusGrid& g, const MarkedDivisor& div,
                           std::mt19937_64& rng);

// max quotient over n_samples seeded draws; requires 1 <= p < 2
double sobolev_ratio(const TorusGrid& g, const MarkedDivisor& div, double p,
                     double eps, int n_samples, std::uint64_t seed);
double poincare_ratio(const TorusGrid& g, const MarkedDivisor& div, double p,
                      double eps, int n_samples, std::uint64_t seed);

}  // namespace fm
