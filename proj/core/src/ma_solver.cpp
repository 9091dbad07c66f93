#include "fibermetric/ma_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fibermetric/spectral.hpp"

namespace fm {

void FiberProblem::validate() const {
  if (omega.v.size() != grid.size())
    throw std::invalid_argument("FiberProblem: omega grid mismatch");
  if (field_min(omega) <= 0.0)
    throw std::invalid_argument("FiberProblem: omega must be strictly positive");
  if (std::abs(fiber_integral(omega) - 1.0) > 1e-10)
    throw std::invalid_argument("FiberProblem: omega must have total mass 1");
  if (lambda < 0.0 || epsilon_twist < 0.0)
    throw std::invalid_argument("FiberProblem: lambda, epsilon_twist must be >= 0");
  density.validate();
}

FiberProblem FiberProblem::flat(const TorusGrid& g) {
  FiberProblem p;
  p.grid = g;
  p.omega = Field(g, FieldKind::density, 1.0 / g.tau.imag());
  p.density.background = p.omega;
  return p;
}

Field ddc_density(const Field& phi) {
  Field out = laplacian(phi);
  for (double& x : out.v) x *= 0.5;
  out.kind = FieldKind::density;
  return out;
}

Field ddc_density_alt(const Field& phi) {
  const CField mixed = dz(dzbar(phi));
  Field out(phi.grid, FieldKind::density);
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = 2.0 * mixed.v[k].real();
  return out;
}

namespace {

void apply_normalization(const FiberProblem& p, const Field& mu_normalized,
                         FiberSolution& s) {
  const Field& ref =
      p.normalization == Normalization::omega_mean_zero ? p.omega : mu_normalized;
  const double shift = fiber_integral(s.phi, ref);  // ref has mass 1
  for (double& x : s.phi.v) x -= shift;
  s.normalization_value = shift;
}

// diagonal-plus-Laplacian operator of the Newton linearization
Field apply_linearized(const Field& u, const Field& w) {
  Field out = laplacian(u);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = -0.5 * out.v[k] + w.v[k] * u.v[k];
  return out;
}

// preconditioned CG for (-Delta/2 + w) x = b, preconditioner (-Delta/2 + wbar)^{-1}
Field pcg_solve(const Field& b, const Field& w, double rel_tol, int max_iter) {
  const double wbar = std::max(field_mean(w), 1e-14);
  Field x(b.grid, FieldKind::potential, 0.0);
  Field r = b;
  Field z = invert_shifted(r, wbar);
  Field p = z;
  auto dot = [](const Field& a, const Field& c) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * c.v[k];
    return s;
  };
  double rz = dot(r, z);
  const double b_norm = std::max(field_max_abs(b), 1e-300);
  for (int it = 0; it < max_iter; ++it) {
    if (field_max_abs(r) <= rel_tol * b_norm) break;
    Field Ap = apply_linearized(p, w);
    const double alpha = rz / dot(p, Ap);
    for (std::size_t k = 0; k < x.v.size(); ++k) {
      x.v[k] += alpha * p.v[k];
      r.v[k] -= alpha * Ap.v[k];
    }
    z = invert_shifted(r, wbar);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < p.v.size(); ++k) p.v[k] = z.v[k] + beta * p.v[k];
  }
  return x;
}

}  // namespace

FiberSolution solve_ricci_flat(const FiberProblem& p) {
  p.validate();
  if (p.lambda_eff() != 0.0)
    throw std::invalid_argument("solve_ricci_flat: lambda_eff must be 0");
  const Field mu = evaluate_density(p.density, p.grid);
  const double mass = fiber_integral(mu);
  if (!(mass > 0.0)) throw std::runtime_error("solve_ricci_flat: zero density mass");
  Field target = mu;  // e^C mu, mass matched to omega (mass 1)
  for (double& x : target.v) x /= mass;
  if (field_min(target) <= 0.0)
    throw std::runtime_error("degenerate metric at sample");

  Field source(p.grid, FieldKind::generic);
  for (std::size_t k = 0; k < source.v.size(); ++k)
    source.v[k] = 2.0 * (target.v[k] - p.omega.v[k]);

  FiberSolution s;
  s.phi = poisson_solve(source);
  apply_normalization(p, target, s);
  const Field lhs = ddc_density(s.phi);
  double res = 0.0;
  for (std::size_t k = 0; k < lhs.v.size(); ++k)
    res = std::max(res, std::abs(p.omega.v[k] + lhs.v[k] - target.v[k]));
  s.residual_inf = res;
  return s;
}

FiberSolution solve_semilinear(const FiberProblem& p) {
  p.validate();
  const double lam = p.lambda_eff();
  if (lam <= 0.0)
    throw std::invalid_argument("solve_semilinear: lambda_eff must be > 0");
  const Field mu = evaluate_density(p.density, p.grid);
  const double mu_norm = field_max_abs(mu);
  const double tol = 1e-10 * mu_norm;

  FiberSolution s;
  s.phi = Field(p.grid, FieldKind::potential, 0.0);

  auto residual = [&](const Field& phi) {
    const Field lhs = ddc_density(phi);
    Field g(p.grid, FieldKind::generic);
    for (std::size_t k = 0; k < g.v.size(); ++k)
      g.v[k] = p.omega.v[k] + lhs.v[k] - std::exp(lam * phi.v[k]) * mu.v[k];
    return g;
  };
  auto metric_positive = [&](const Field& phi) {
    const Field lhs = ddc_density(phi);
    for (std::size_t k = 0; k < lhs.v.size(); ++k)
      if (p.omega.v[k] + lhs.v[k] <= 0.0) return false;
    return true;
  };

  Field g = residual(s.phi);
  for (int it = 0; it < 50; ++it) {
    const double gn = field_max_abs(g);
    if (gn <= tol) {
      s.residual_inf = gn;
      s.newton_iters = it;
      return s;
    }
    Field w(p.grid, FieldKind::generic);
    for (std::size_t k = 0; k < w.v.size(); ++k)
      w.v[k] = lam * std::exp(lam * s.phi.v[k]) * mu.v[k];
    const Field step = pcg_solve(g, w, 1e-13, 500);

    // damp: halve until the metric stays positive and the residual improves
    double alpha = 1.0;
    Field trial = s.phi;
    while (true) {
      for (std::size_t k = 0; k < trial.v.size(); ++k)
        trial.v[k] = s.phi.v[k] + alpha * step.v[k];
      if (metric_positive(trial)) {
        Field gt = residual(trial);
        if (field_max_abs(gt) < gn || alpha < 1e-3) {
          s.phi = trial;
          g = std::move(gt);
          break;
        }
      }
      alpha *= 0.5;
      if (alpha < std::ldexp(1.0, -20))
        throw std::runtime_error(
            "solve_semilinear: damping floor reached, metric positivity lost");
    }
  }
  throw std::runtime_error(
      "solve_semilinear: Newton failed to converge in 50 iterations, residual " +
      std::to_string(field_max_abs(g)));
}

FiberSolution solve_fiber(const FiberProblem& p) {
  return p.lambda_eff() > 0.0 ? solve_semilinear(p) : solve_ricci_flat(p);
}

double verify_solution(const FiberProblem& p, const FiberSolution& s) {
  const Field mu = evaluate_density(p.density, p.grid);
  const double lam = p.lambda_eff();
  Field target = mu;
  if (lam == 0.0) {
    const double mass = fiber_integral(mu);
    for (double& x : target.v) x /= mass;
  }
  const Field lhs = ddc_density_alt(s.phi);
  double res = 0.0;
  for (std::size_t k = 0; k < lhs.v.size(); ++k) {
    const double rhs = lam == 0.0 ? target.v[k]
                                  : std::exp(lam * s.phi.v[k]) * mu.v[k];
    res = std::max(res, std::abs(p.omega.v[k] + lhs.v[k] - rhs));
  }
  return res;
}

}  // namespace fm
