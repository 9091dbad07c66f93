// Marked divisors and regularized conic volume densities on a torus fiber:
//
//   mu(z) = background(z) * prod_E (eps^2 + h_a(z))^{q_a}
//                         / prod_B (eps^2 + h_a(z))^{b_a}
//
// E-points carry zeros (exponents e >= 0, numerator weights q default to e),
// B-points carry cone points with klt coefficients b in [0,1).  At eps = 0
// the B factors are non-integrable unless every b < 1.

#pragma once

#include <optional>
#include <vector>

#include "fibermetric/field.hpp"

namespace fm {

struct MarkedPoint {
  double x = 0.0, y = 0.0;  // lattice coordinates in [0,1)^2
  double w = 0.0;           // exponent: e for E-points, b for B-points
};

struct MarkedDivisor {
  std::vector<MarkedPoint> points_E;  // w = e >= 0
  std::vector<MarkedPoint> points_B;  // w = b in [0,1)

  void validate() const;
  bool empty() const { return points_E.empty() && points_B.empty(); }
};

struct RegularizedDensity {
  MarkedDivisor divisor;
  double epsilon = 0.0;
  // numerator weights, one per E-point; empty means q_a = e_a
  std::vector<double> q;
  // smooth positive factor; empty field (size 0) means identically 1
  Field background;

  void validate() const;
  std::vector<double> effective_q() const;
};

Field evaluate_density(const RegularizedDensity& d, const TorusGrid& grid);

// C with e^{-C} = \int evaluate_density dLebesgue
double normalization_constant(const RegularizedDensity& d, const TorusGrid& grid);

// distance (lattice units) from grid point to the nearest marked point;
// used for divisor-exclusion masks in residual reports
double divisor_distance(const MarkedDivisor& d, double x, double y);

}  // namespace fm
