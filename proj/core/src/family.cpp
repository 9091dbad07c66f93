#include "fibermetric/family.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "fibermetric/spectral.hpp"
#include "fibermetric/theta.hpp"

namespace fm {

cplx TauRecipe::tau(cplx t) const {
  switch (kind) {
    case Kind::constant: return tau0;
    case Kind::affine: return tau0 + kappa * t;
    case Kind::log_degenerate:
      return tau0 + kappa / cplx(0.0, 2.0 * kPi) * std::log(1.0 / t);
  }
  return tau0;
}

cplx TauRecipe::dtau(cplx t) const {
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::affine: return kappa;
    case Kind::log_degenerate: return -kappa / (cplx(0.0, 2.0 * kPi) * t);
  }
  return 0.0;
}

void FamilyConfig::validate() const {
  if (!is_pow2(n_side) || n_side < 16)
    throw std::invalid_argument("FamilyConfig: n_side must be a power of two >= 16");
  if (base.m_side < 9 || base.m_side % 2 == 0)
    throw std::invalid_argument("FamilyConfig: m_side must be odd and >= 9");
  // tau stays in the upper half plane over the whole closed base rectangle
  for (std::size_t b = 0; b < base.m_side; ++b)
    for (std::size_t a = 0; a < base.m_side; ++a)
      if (tau.tau(base.t(a, b)).imag() <= 0.0)
        throw std::invalid_argument("FamilyConfig: Im(tau(t)) <= 0 on the base");
  density.divisor.validate();
  // shear and drift are z-translation velocities; keeping them holomorphic
  // in z needs a t-independent lattice, so they require constant tau
  const bool moving = density.drift != cplx(0.0, 0.0) ||
                      (omega.kind == OmegaRecipe::Kind::sheared &&
                       omega.shear != cplx(0.0, 0.0));
  if (moving && tau.kind != TauRecipe::Kind::constant)
    throw std::invalid_argument(
        "FamilyConfig: shear/drift require a constant tau recipe");
}

MarkedPoint FamilyConfig::moved_point(const MarkedPoint& p, cplx t) const {
  MarkedPoint out = p;
  // marked points move holomorphically: a_z(t) = a_z(0) + (drift + shear) t
  cplx shift = density.drift * t;
  if (omega.kind == OmegaRecipe::Kind::sheared) shift += omega.shear * t;
  const cplx tv = tau.tau(t);
  const double sy = shift.imag() / tv.imag();
  const double sx = shift.real() - tv.real() * sy;
  out.x = p.x + sx;
  out.y = p.y + sy;
  out.x -= std::floor(out.x);
  out.y -= std::floor(out.y);
  return out;
}

namespace {

Field chi_part_field(const ChiPart& part, const FamilyConfig& cfg,
                     const TorusGrid& grid, cplx t) {
  Field out(grid, FieldKind::potential, 0.0);
  switch (part.kind) {
    case ChiPart::Kind::theta: {
      MarkedPoint a{part.ax, part.ay, 0.0};
      a = cfg.moved_point(a, t);
      out = theta_section_norm(a.x, a.y, grid);
      for (double& v : out.v) v *= part.amp;
      out.kind = FieldKind::potential;
      break;
    }
    case ChiPart::Kind::mode: {
      const double s =
          part.amp * (part.coef1 * t + part.coef2 * t * t).real();
      for (std::size_t j = 0; j < grid.n_side; ++j)
        for (std::size_t i = 0; i < grid.n_side; ++i)
          out.at(i, j) = s * std::cos(2.0 * kPi * (part.kx * grid.x(i) +
                                                   part.ky * grid.y(j)));
      break;
    }
    case ChiPart::Kind::t_only: {
      const double s = part.amp * (part.coef1 * t + part.coef2 * t * t).real() +
                       part.amp2 * std::norm(t);
      for (double& v : out.v) v = s;
      break;
    }
  }
  return out;
}

}  // namespace

Field evaluate_chi(const FamilyConfig& cfg, const TorusGrid& grid, cplx t) {
  Field chi(grid, FieldKind::potential, 0.0);
  for (const ChiPart& part : cfg.omega.chi_parts) {
    const Field f = chi_part_field(part, cfg, grid, t);
    for (std::size_t k = 0; k < chi.v.size(); ++k) chi.v[k] += f.v[k];
  }
  if (cfg.omega.kind == OmegaRecipe::Kind::user_table && cfg.omega.table_chi) {
    const Field f = cfg.omega.table_chi(grid, t);
    for (std::size_t k = 0; k < chi.v.size(); ++k) chi.v[k] += f.v[k];
  }
  return chi;
}

Field omega_fiber_density(const FamilyConfig&, const TorusGrid& grid, cplx,
                          const Field& chi) {
  Field out = laplacian(chi);
  const double flat = 1.0 / grid.tau.imag();
  for (double& v : out.v) v = flat + 0.5 * v;
  out.kind = FieldKind::density;
  if (field_min(out) <= 0.0)
    throw std::runtime_error("omega_fiber_density: fiber restriction not positive");
  return out;
}

RegularizedDensity density_recipe_at(const FamilyConfig& cfg, const TorusGrid& grid,
                                     cplx t) {
  RegularizedDensity d;
  switch (cfg.density.kind) {
    case DensityRecipe::Kind::matched: {
      const Field chi = evaluate_chi(cfg, grid, t);
      Field bg = omega_fiber_density(cfg, grid, t, chi);
      const double mass = fiber_integral(bg);
      for (double& v : bg.v) v /= mass;
      d.background = bg;
      break;
    }
    case DensityRecipe::Kind::conic: {
      d.background = Field(grid, FieldKind::density, 1.0 / grid.tau.imag());
      for (const MarkedPoint& p : cfg.density.divisor.points_E)
        d.divisor.points_E.push_back(cfg.moved_point(p, t));
      for (const MarkedPoint& p : cfg.density.divisor.points_B)
        d.divisor.points_B.push_back(cfg.moved_point(p, t));
      d.epsilon = cfg.density.epsilon;
      break;
    }
    case DensityRecipe::Kind::modulated: {
      const Field chi = evaluate_chi(cfg, grid, t);
      Field bg = omega_fiber_density(cfg, grid, t, chi);
      const double gain = 1.0 + (cfg.density.mod_gamma * t).real();
      for (std::size_t j = 0; j < grid.n_side; ++j)
        for (std::size_t i = 0; i < grid.n_side; ++i)
          bg.at(i, j) *= std::exp(cfg.density.mod_amp * gain *
                                  std::cos(2.0 * kPi * grid.x(i)));
      d.background = bg;
      break;
    }
  }
  return d;
}

Field density_field(const FamilyConfig& cfg, const TorusGrid& grid, cplx t) {
  return evaluate_density(density_recipe_at(cfg, grid, t), grid);
}

FiberFrame solve_fiber_frame(const FamilyConfig& cfg, std::size_t a, std::size_t b) {
  FiberFrame fr;
  fr.t = cfg.base.t(a, b);
  fr.grid = TorusGrid(cfg.n_side, cfg.tau.tau(fr.t));
  fr.dtau = cfg.tau.dtau(fr.t);
  const Field chi = evaluate_chi(cfg, fr.grid, fr.t);

  FiberProblem p;
  p.grid = fr.grid;
  p.omega = omega_fiber_density(cfg, fr.grid, fr.t, chi);
  p.density = density_recipe_at(cfg, fr.grid, fr.t);
  p.lambda = cfg.lambda;
  p.normalization = cfg.normalization;

  FiberSolution s;
  try {
    s = solve_fiber(p);
  } catch (const std::exception& e) {
    throw std::runtime_error("fiber solve failed at t = (" +
                             std::to_string(fr.t.real()) + ", " +
                             std::to_string(fr.t.imag()) + "): " + e.what());
  }
  fr.phi = s.phi;
  fr.residual = s.residual_inf;
  if (cfg.lambda == 0.0) {
    const Field mu = evaluate_density(p.density, fr.grid);
    fr.C = -std::log(fiber_integral(mu));
  }
  return fr;
}

FamilySolution solve_family(const FamilyConfig& cfg, int workers) {
  cfg.validate();
  FamilySolution sol;
  sol.config = cfg;
  sol.fibers.resize(cfg.base.size());
  const std::size_t total = cfg.base.size();
  if (workers <= 1) {
    for (std::size_t b = 0; b < cfg.base.m_side; ++b)
      for (std::size_t a = 0; a < cfg.base.m_side; ++a)
        sol.fibers[cfg.base.idx(a, b)] = solve_fiber_frame(cfg, a, b);
    return sol;
  }
  // static block partition: each index is written by exactly one worker and
  // the result is independent of the worker count
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t k = std::size_t(w); k < total; k += std::size_t(workers)) {
          const std::size_t a = k % cfg.base.m_side;
          const std::size_t b = k / cfg.base.m_side;
          sol.fibers[k] = solve_fiber_frame(cfg, a, b);
        }
      } catch (...) {
        errs[std::size_t(w)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return sol;
}

}  // namespace fm
