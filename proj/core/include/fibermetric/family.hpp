// Families of torus fibers over a rectangle in the base disk.
//
// Coordinates and storage.  Every fiber field is sampled at fixed lattice
// coordinates (x, y) in [0,1)^2 with z = x + tau(t) y, so base derivatives at
// fixed lattice point ("D_t") are centered finite differences of per-fiber
// arrays, while the honest coordinate derivative at fixed z is
//     d/dt|_z = D_t - tau'(t) y d/dz .
// The total-space reference form is structured as
//     omega = omega_SF(tau(t)) + M i dt^dtbar + dd^c chi(z,t) + shear terms,
// where omega_SF is the semiflat extension of the flat fiber metrics.  All
// derived geometric quantities (geodesic curvature, lifts, identity terms)
// reduce to manifestly periodic combinations; the y-carrying components are
// kept only in the independent cross-check assemblies.
//
// Conventions.  Fiber densities follow ma_solver.hpp (mass = fiber_integral);
// honest metric coefficients are half the densities, g_{zzbar} = field/2.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fibermetric/ma_solver.hpp"

namespace fm {

struct TauRecipe {
  enum class Kind { constant, affine, log_degenerate } kind = Kind::constant;
  cplx tau0{0.0, 1.0};
  cplx kappa{0.0, 0.0};

  cplx tau(cplx t) const;
  cplx dtau(cplx t) const;  // tau'(t)
};

// chi is a sum of parts; each part is one of
//   theta :  amp * h_{a(t)}(z; tau(t)),  a(t) = a0 + shear-translation
//   mode  :  amp * Re(coef1 t + coef2 t^2) * cos(2 pi (kx x + ky y))
//   t_only:  amp * Re(coef1 t + coef2 t^2) + amp2 * |t|^2
struct ChiPart {
  enum class Kind { theta, mode, t_only } kind = Kind::mode;
  double amp = 0.0;
  double ax = 0.5, ay = 0.5;  // theta: center, lattice coords
  int kx = 1, ky = 0;         // mode: frequency
  cplx coef1{0.0, 0.0}, coef2{0.0, 0.0};
  double amp2 = 0.0;
};

struct OmegaRecipe {
  enum class Kind { product, sheared, user_table } kind = Kind::product;
  double M = 1.0;          // constant extra omega_{ttbar} component
  cplx shear{0.0, 0.0};    // sheared: pullback by z -> z - shear*t of a product
  std::vector<ChiPart> chi_parts;
  // user_table: caller-supplied periodic pieces, indexed by base sample
  std::function<Field(const TorusGrid&, cplx)> table_chi;
};

struct DensityRecipe {
  enum class Kind { matched, conic, modulated } kind = Kind::matched;
  // conic: flat background with the divisor below; points move with the
  // omega shear (pullback families) plus an explicit drift, both holomorphic
  // z-translation velocities (constant tau only)
  MarkedDivisor divisor;
  double epsilon = 0.1;
  cplx drift{0.0, 0.0};  // z-coordinate drift velocity of all marked points
  // modulated: mu = omega * exp(s), s = amp*(1 + Re(gamma t)) cos(2 pi x)
  double mod_amp = 0.0;
  cplx mod_gamma{0.0, 0.0};
};

struct FamilyConfig {
  BaseGrid base;
  std::size_t n_side = 64;
  TauRecipe tau;
  OmegaRecipe omega;
  DensityRecipe density;
  double lambda = 0.0;
  Normalization normalization = Normalization::omega_mean_zero;

  void validate() const;
  // lattice position of marked point p at base point t
  MarkedPoint moved_point(const MarkedPoint& p, cplx t) const;
};

// Solved state per base sample.  Only the potential is stored; every derived
// field (chi, reference density, solved density, twist f) is cheap to
// regenerate from the config, which keeps large refinement families within
// memory (see curvature.hpp's windowed caches).
struct FiberFrame {
  cplx t;
  TorusGrid grid;       // carries tau(t)
  cplx dtau;            // tau'(t)
  Field phi;            // solved potential
  double C = 0.0;       // lambda = 0 normalization constant, -log mass(mu)
  double residual = 0.0;
};

struct FamilySolution {
  FamilyConfig config;
  std::vector<FiberFrame> fibers;  // indexed by config.base.idx(a,b)

  const FiberFrame& at(std::size_t a, std::size_t b) const {
    return fibers[config.base.idx(a, b)];
  }
};

// chi evaluated from the recipe (not including user_table == nullptr case)
Field evaluate_chi(const FamilyConfig& cfg, const TorusGrid& grid, cplx t);
// reference fiber density 1/Im(tau) + laplacian(chi)/2
Field omega_fiber_density(const FamilyConfig& cfg, const TorusGrid& grid, cplx t,
                          const Field& chi);
Field density_field(const FamilyConfig& cfg, const TorusGrid& grid, cplx t);
RegularizedDensity density_recipe_at(const FamilyConfig& cfg, const TorusGrid& grid,
                                     cplx t);

// solve the single fiber over base sample (a, b)
FiberFrame solve_fiber_frame(const FamilyConfig& cfg, std::size_t a, std::size_t b);

// solves every fiber; deterministic order; optional worker fan-out does not
// change results (independent slots, no shared reductions)
FamilySolution solve_family(const FamilyConfig& cfg, int workers = 1);

}  // namespace fm
