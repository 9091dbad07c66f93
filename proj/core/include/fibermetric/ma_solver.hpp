// Fiberwise Monge-Ampere / twisted Kahler-Einstein solves on one torus fiber.
//
// Everything here works with *area densities*: a (1,1)-form a_{zzbar} i dz^dzbar
// is stored as the real field 2*a_{zzbar}, so that fiber_integral(field) is the
// form's total mass and the flat mass-1 reference on C/(Z+tau Z) is the
// constant 1/Im(tau).  Under dd^c = i d dbar the density contributed by dd^c phi
// is Delta(phi)/2, with Delta the flat torus Laplacian (spectral).
//
// At n = 1 the Monge-Ampere equation reduces to
//
//   omega + Delta(phi)/2 = e^{lambda_eff * phi} * mu            (lambda_eff > 0)
//   omega + Delta(phi)/2 = e^C * mu,  e^C = mass(omega)/mass(mu) (lambda_eff = 0)
//
// The first is solved by damped Newton with preconditioned CG on the
// linearization; the second is a single spectral Poisson solve plus a choice
// of mean normalization.

#pragma once

#include "fibermetric/density.hpp"
#include "fibermetric/field.hpp"

namespace fm {

enum class Normalization : unsigned char {
  omega_mean_zero = 0,    // \int phi * omega = 0
  density_mean_zero = 1,  // \int phi * (normalized mu) = 0
};

struct FiberProblem {
  TorusGrid grid;
  Field omega;                 // strictly positive density, total mass 1
  RegularizedDensity density;  // evaluated on grid when solving
  double lambda = 0.0;
  double epsilon_twist = 0.0;
  Normalization normalization = Normalization::density_mean_zero;

  double lambda_eff() const { return lambda + epsilon_twist; }
  void validate() const;

  // flat reference problem: omega = 1/Im(tau), empty divisor, background 1
  static FiberProblem flat(const TorusGrid& g);
};

struct FiberSolution {
  Field phi;
  double residual_inf = 0.0;
  int newton_iters = 0;
  double normalization_value = 0.0;
};

// density contributed by dd^c phi (= Delta phi / 2), two independent spectral
// assemblies; the second composes first-order derivatives and exists so that
// verify_solution shares no code with the solver's residual
Field ddc_density(const Field& phi);
Field ddc_density_alt(const Field& phi);

FiberSolution solve_ricci_flat(const FiberProblem& p);
FiberSolution solve_semilinear(const FiberProblem& p);
// dispatches on lambda_eff
FiberSolution solve_fiber(const FiberProblem& p);

// sup-norm equation residual recomputed through ddc_density_alt
double verify_solution(const FiberProblem& p, const FiberSolution& s);

}  // namespace fm
