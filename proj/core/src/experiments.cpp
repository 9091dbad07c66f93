#include "fibermetric/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fibermetric/sobolev.hpp"
#include "fibermetric/spectral.hpp"

namespace fm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// max/min boundedness with an absolute floor: values below the floor count
// as zero at the working scale (boundedness statements assert existence of a
// constant, so uniformly negligible columns pass)
bool bounded_within(const std::vector<double>& vals, double factor,
                    double floor = 1e-12) {
  double lo = 1e300, hi = 0.0;
  for (double v : vals) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi <= floor) return true;
  return hi <= factor * std::max(lo, floor);
}

bool non_increasing(const std::vector<double>& vals, double slack = 1.0) {
  for (std::size_t k = 1; k < vals.size(); ++k)
    if (vals[k] > slack * vals[k - 1] + 1e-15) return false;
  return true;
}

double sup_family_diff(const FamilySolution& a, const FamilySolution& b) {
  double sup = 0.0;
  for (std::size_t k = 0; k < a.fibers.size(); ++k)
    for (std::size_t i = 0; i < a.fibers[k].phi.v.size(); ++i)
      sup = std::max(sup, std::abs(a.fibers[k].phi.v[i] - b.fibers[k].phi.v[i]));
  return sup;
}

double sup_family_norm(const FamilySolution& a) {
  double sup = 0.0;
  for (const auto& fr : a.fibers) sup = std::max(sup, field_max_abs(fr.phi));
  return sup;
}

// min of c over interior base samples inside a fixed t-rectangle, so
// refinement comparisons cover the same region regardless of how much extra
// interior a finer margin exposes
double restricted_min_c(const FamilySolution& sol, double half_tx,
                        double half_ty) {
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, LiftKind::horizontal);
  const BaseGrid& base = sol.config.base;
  double mn = 1e300;
  for (std::size_t a = kInteriorMargin; a + kInteriorMargin < base.m_side; ++a)
    for (std::size_t b = kInteriorMargin; b + kInteriorMargin < base.m_side;
         ++b) {
      const cplx t = base.t(a, b) - base.center;
      if (std::abs(t.real()) > half_tx + 1e-12 ||
          std::abs(t.imag()) > half_ty + 1e-12)
        continue;
      const auto c = geo.c_memo(a, b);
      const auto mask = geo.divisor_mask(a, b, kDivisorExclusion);
      for (std::size_t k = 0; k < c->v.size(); ++k)
        if (mask[k]) mn = std::min(mn, c->v[k]);
    }
  return mn;
}

}  // namespace

FiberProblem fiber_problem_at(const FamilyConfig& cfg, cplx t) {
  const TorusGrid grid(cfg.n_side, cfg.tau.tau(t));
  const Field chi = evaluate_chi(cfg, grid, t);
  FiberProblem p;
  p.grid = grid;
  p.omega = omega_fiber_density(cfg, grid, t, chi);
  p.density = density_recipe_at(cfg, grid, t);
  p.lambda = cfg.lambda;
  p.normalization = cfg.normalization;
  return p;
}

std::string schedule_param_name(ScheduleParam p) {
  switch (p) {
    case ScheduleParam::epsilon: return "epsilon";
    case ScheduleParam::delta: return "delta";
    case ScheduleParam::lambda_eff: return "lambda_eff";
    case ScheduleParam::base_degeneration: return "base_degeneration";
  }
  return "?";
}

void Schedule::validate() const {
  if (values.empty()) throw std::invalid_argument("Schedule: empty");
  double prev = 1e300;
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("Schedule: values must be positive");
    if (!(v < prev))
      throw std::invalid_argument("Schedule: values must be strictly decreasing");
    prev = v;
  }
}

Schedule Schedule::geometric(ScheduleParam p, double start, int count, double ratio) {
  if (count < 1 || !(start > 0.0) || !(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("Schedule::geometric: bad parameters");
  Schedule s;
  s.parameter = p;
  double v = start;
  for (int k = 0; k < count; ++k, v *= ratio) s.values.push_back(v);
  return s;
}

double fitted_order(const std::vector<TableRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (!(r.primary > 0.0) || !(r.parameter > 0.0)) continue;
    const double x = std::log(r.parameter), y = std::log(r.primary);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return 0.0;
  const double det = double(n) * sxx - sx * sx;
  return det != 0.0 ? (double(n) * sxy - sx * sy) / det : 0.0;
}

ConvergenceTable lemma_1_4_experiment(const FiberProblem& fiber,
                                      const Schedule& sched) {
  sched.validate();
  for (const auto& p : fiber.density.divisor.points_B)
    if (!(p.w < 1.0))
      throw std::invalid_argument("lemma_1_4_experiment: require all b < 1");

  FiberProblem base = fiber;
  base.normalization = Normalization::density_mean_zero;
  base.epsilon_twist = 0.0;
  // the reference measure is a probability measure; without this the twisted
  // solve absorbs -log(mass)/eps into the potential and diverges
  {
    const double mass =
        fiber_integral(evaluate_density(base.density, base.grid));
    if (base.density.background.v.empty())
      base.density.background =
          Field(base.grid, FieldKind::density, 1.0 / mass);
    else
      for (double& v : base.density.background.v) v /= mass;
  }
  const FiberSolution psi0 = solve_fiber(base);

  ConvergenceTable tab;
  tab.name = "lemma14";
  tab.primary_name = "sup|psi_eps - psi_0|";
  tab.secondary_names = {"solver_residual"};
  for (double eps : sched.values) {
    const auto t0 = Clock::now();
    FiberProblem p = base;
    p.epsilon_twist = eps;
    const FiberSolution s = solve_fiber(p);
    TableRow row;
    row.parameter = eps;
    double sup = 0.0;
    for (std::size_t k = 0; k < s.phi.v.size(); ++k)
      sup = std::max(sup, std::abs(s.phi.v[k] - psi0.phi.v[k]));
    row.primary = sup;
    row.secondary = {s.residual_inf};
    row.wall_time_s = seconds_since(t0);
    tab.rows.push_back(row);
  }
  tab.fitted_order = fitted_order(tab.rows);
  std::vector<double> prim;
  for (const auto& r : tab.rows) prim.push_back(r.primary);
  const bool trivially_zero = prim.empty() || prim.front() < 1e-13;
  tab.verdict = trivially_zero ||
                (non_increasing(prim) && tab.fitted_order >= 0.9);
  tab.summary["fitted_order"] = tab.fitted_order;
  return tab;
}

ConvergenceTable smoothing_convergence(const FamilyConfig& cfg,
                                       const Schedule& sched) {
  sched.validate();
  if (cfg.density.kind != DensityRecipe::Kind::conic)
    throw std::invalid_argument("smoothing_convergence: conic density required");

  ConvergenceTable tab;
  tab.name = "smoothing";
  tab.primary_name = "sup|u_delta - u_next|";
  tab.secondary_names = {"sup|u_delta|"};
  std::vector<double> sups;
  FamilySolution prev;
  for (std::size_t k = 0; k < sched.values.size(); ++k) {
    const auto t0 = Clock::now();
    FamilyConfig c = cfg;
    c.density.epsilon = sched.values[k];
    FamilySolution sol = solve_family(c);
    sups.push_back(sup_family_norm(sol));
    if (k > 0) {
      TableRow row;
      row.parameter = sched.values[k - 1];
      row.primary = sup_family_diff(prev, sol);
      row.secondary = {sups[k - 1]};
      row.wall_time_s = seconds_since(t0);
      tab.rows.push_back(row);
    }
    prev = std::move(sol);
  }
  tab.fitted_order = fitted_order(tab.rows);
  std::vector<double> prim;
  for (const auto& r : tab.rows) prim.push_back(r.primary);
  const bool cauchy = prim.empty() || prim.back() < 1e-13 || non_increasing(prim, 1.001);
  const bool bounded = bounded_within(sups, 1.5);
  tab.verdict = cauchy && bounded;
  tab.summary["sup_final"] = sups.back();
  tab.summary["sup_ratio"] = sups.empty() ? 0.0
      : *std::max_element(sups.begin(), sups.end()) /
            std::max(1e-12, *std::min_element(sups.begin(), sups.end()));
  return tab;
}

ConvergenceTable curvature_centering(const FamilyConfig& cfg,
                                     const Schedule& sched) {
  sched.validate();
  ConvergenceTable tab;
  tab.name = "centering";
  tab.primary_name = "sup|c - mean(c)|";
  tab.secondary_names = {"|mean(c)|", "sup|grad c|"};
  const std::size_t a0 = cfg.base.m_side / 2, b0 = cfg.base.m_side / 2;

  for (double delta : sched.values) {
    const auto t0 = Clock::now();
    FamilyConfig c = cfg;
    // delta indexes the regularization of the family: the cone parameter for
    // conic densities, the modulation amplitude otherwise
    if (c.density.kind == DensityRecipe::Kind::conic)
      c.density.epsilon = delta;
    else if (c.density.kind == DensityRecipe::Kind::modulated)
      c.density.mod_amp = delta;
    auto frames = std::make_shared<FamilyFrames>(c);
    FamilyGeometry geo(frames, LiftKind::horizontal);
    const auto cf = geo.c_memo(a0, b0);
    const auto g = geo.g_coeff(a0, b0);

    // fiber mean against the solved volume (mass-1 density 2 g)
    double mean = 0.0;
    for (std::size_t k = 0; k < cf->v.size(); ++k)
      mean += cf->v[k] * 2.0 * g->v[k];
    mean *= cf->grid.cell_area();

    const auto mask = geo.divisor_mask(a0, b0, kDivisorExclusion);
    const CField cz = dz(*cf);
    double sup_center = 0.0, sup_grad = 0.0;
    for (std::size_t k = 0; k < cf->v.size(); ++k) {
      if (!mask[k]) continue;
      sup_center = std::max(sup_center, std::abs(cf->v[k] - mean));
      sup_grad = std::max(sup_grad,
                          2.0 * std::abs(cz.v[k]) / std::sqrt(2.0 * g->v[k]));
    }
    TableRow row;
    row.parameter = delta;
    row.primary = sup_center;
    row.secondary = {std::abs(mean), sup_grad};
    row.wall_time_s = seconds_since(t0);
    tab.rows.push_back(row);
  }
  tab.fitted_order = fitted_order(tab.rows);
  std::vector<double> means, grads;
  for (const auto& r : tab.rows) {
    means.push_back(r.secondary[0]);
    grads.push_back(r.secondary[1]);
  }
  const double first = tab.rows.front().primary, last = tab.rows.back().primary;
  const bool center_drops = last < 1e-12 || last <= 0.2 * first;
  tab.verdict = center_drops && bounded_within(means, 2.0) &&
                non_increasing(grads, 1.05);
  tab.summary["center_initial"] = first;
  tab.summary["center_final"] = last;
  return tab;
}

ConvergenceTable transverse_diagnostics(const FamilyConfig& cfg,
                                        const Schedule& sched, int N_multiplier) {
  sched.validate();
  if (N_multiplier < 1)
    throw std::invalid_argument("transverse_diagnostics: N_multiplier >= 1");
  ConvergenceTable tab;
  tab.name = "transverse";
  tab.primary_name = "|mean tau|";
  tab.secondary_names = {"energy_ratio", "int|tau|^2 dmu_Nq", "sup|D_t phi|"};
  const std::size_t a0 = cfg.base.m_side / 2, b0 = cfg.base.m_side / 2;

  for (double eps : sched.values) {
    const auto t0 = Clock::now();
    FamilyConfig c = cfg;
    if (c.density.kind == DensityRecipe::Kind::conic) c.density.epsilon = eps;
    auto frames = std::make_shared<FamilyFrames>(c);
    FamilyGeometry geo(frames, LiftKind::log_tangent);
    const auto fr = geo.frame(a0, b0);
    const auto g = geo.g_coeff(a0, b0);
    const auto e = geo.lift_e(a0, b0);

    // tau := v(phi) = D_t phi + e dz(phi)
    const CField dtphi = geo.fd_Dt(
        [&geo](std::size_t a, std::size_t b) { return geo.phi(a, b); }, a0, b0);
    const CField dzphi = dz(*geo.phi(a0, b0));
    CField taub(fr->grid, FieldKind::generic);
    for (std::size_t k = 0; k < taub.v.size(); ++k)
      taub.v[k] = dtphi.v[k] + e->v[k] * dzphi.v[k];

    const double area = fr->grid.cell_area();
    cplx mean_tau = 0.0;
    double int_abs = 0.0;
    for (std::size_t k = 0; k < taub.v.size(); ++k) {
      mean_tau += taub.v[k] * 2.0 * g->v[k];
      int_abs += std::abs(taub.v[k]) * 2.0 * g->v[k];
    }
    mean_tau *= area;
    int_abs *= area;

    // model-metric energy of tau against the solved volume
    const RegularizedDensity drec = density_recipe_at(c, fr->grid, fr->t);
    const Field model = conic_model_density(fr->grid, drec.divisor, eps);
    const CField tz = dz(taub), tzb = dzbar(taub);
    double energy = 0.0;
    for (std::size_t k = 0; k < taub.v.size(); ++k)
      energy += 2.0 * (std::norm(tz.v[k]) + std::norm(tzb.v[k])) / model.v[k] *
                2.0 * g->v[k];
    energy *= area;

    // weighted square integral with the boosted E exponents
    RegularizedDensity dq = drec;
    dq.q.resize(dq.divisor.points_E.size());
    for (std::size_t i = 0; i < dq.q.size(); ++i)
      dq.q[i] = double(N_multiplier) * dq.divisor.points_E[i].w;
    const Field mu_nq = evaluate_density(dq, fr->grid);
    double int_sq = 0.0;
    for (std::size_t k = 0; k < taub.v.size(); ++k)
      int_sq += std::norm(taub.v[k]) * mu_nq.v[k];
    int_sq *= area;

    const auto mask = geo.divisor_mask(a0, b0, kDivisorExclusion);
    double sup_dt = 0.0;
    for (std::size_t k = 0; k < taub.v.size(); ++k)
      if (mask[k]) sup_dt = std::max(sup_dt, std::abs(dtphi.v[k]));

    TableRow row;
    row.parameter = eps;
    row.primary = std::abs(mean_tau);
    row.secondary = {energy / (1.0 + int_abs), int_sq, sup_dt};
    row.wall_time_s = seconds_since(t0);
    tab.rows.push_back(row);
  }
  tab.fitted_order = fitted_order(tab.rows);
  bool ok = true;
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> col;
    for (const auto& r : tab.rows) col.push_back(r.secondary[c]);
    ok = ok && bounded_within(col, 2.0);
  }
  // the mean-of-tau column is compared against an absolute floor tied to the
  // tau scale (sup |D_t phi|): values below 1% of it are zero at working
  // precision (the claim is |mean| <= C, not a decay rate)
  std::vector<double> prim;
  double tau_scale = 0.0;
  for (const auto& r : tab.rows) {
    prim.push_back(r.primary);
    tau_scale = std::max(tau_scale, r.secondary[2]);
  }
  tab.verdict = ok && bounded_within(prim, 2.0, 0.01 * tau_scale);
  return tab;
}

ConvergenceTable gradient_diagnostic(const FiberProblem& proto,
                                     const Schedule& sched) {
  sched.validate();
  ConvergenceTable tab;
  tab.name = "gradient";
  tab.primary_name = "sup|grad phi|_model";
  tab.secondary_names = {"sup(rho/model)", "osc(phi)"};
  for (double eps : sched.values) {
    const auto t0 = Clock::now();
    FiberProblem p = proto;
    p.density.epsilon = eps;
    const FiberSolution s = solve_fiber(p);
    const Field grad = model_gradient_norm(s.phi, p.density.divisor, eps);
    const Field model = conic_model_density(p.grid, p.density.divisor, eps);
    const Field ddc = ddc_density(s.phi);
    double sup_grad = 0.0, sup_ratio = 0.0;
    for (std::size_t j = 0; j < p.grid.n_side; ++j)
      for (std::size_t i = 0; i < p.grid.n_side; ++i) {
        const std::size_t k = p.grid.idx(i, j);
        if (divisor_distance(p.density.divisor, p.grid.x(i), p.grid.y(j)) <
            kDivisorExclusion)
          continue;
        sup_grad = std::max(sup_grad, grad.v[k]);
        sup_ratio = std::max(
            sup_ratio, (p.omega.v[k] + ddc.v[k]) / model.v[k]);
      }
    TableRow row;
    row.parameter = eps;
    row.primary = sup_grad;
    row.secondary = {sup_ratio, field_max(s.phi) - field_min(s.phi)};
    row.wall_time_s = seconds_since(t0);
    tab.rows.push_back(row);
  }
  tab.fitted_order = fitted_order(tab.rows);
  std::vector<double> grads, ratios, oscs;
  for (const auto& r : tab.rows) {
    grads.push_back(r.primary);
    ratios.push_back(r.secondary[0]);
    oscs.push_back(r.secondary[1]);
  }
  tab.verdict = bounded_within(grads, 1.5) && bounded_within(ratios, 1.5) &&
                bounded_within(oscs, 1.5);
  return tab;
}

CounterexampleResult counterexample_experiment(const FamilyConfig& cfg,
                                               const Schedule& a_sched,
                                               double control_tol) {
  a_sched.validate();
  if (cfg.tau.kind == TauRecipe::Kind::constant ||
      (cfg.tau.kappa == cplx(0.0, 0.0)))
    throw std::invalid_argument(
        "counterexample_experiment: non-isotrivial tau (kappa != 0) required");

  CounterexampleResult res;
  const FamilySolution coarse_sol = solve_family(cfg);
  res.coarse = semipositivity_report(coarse_sol);

  FamilyConfig fine_cfg = cfg;
  fine_cfg.n_side = cfg.n_side * 2;
  fine_cfg.base = BaseGrid(2 * (cfg.base.m_side - 1) + 1, cfg.base.center,
                           cfg.base.half_x, cfg.base.half_y);
  const FamilySolution fine_sol = solve_family(fine_cfg);
  res.fine = semipositivity_report(fine_sol);

  FamilyConfig control_cfg = cfg;
  control_cfg.tau.kappa = cplx(0.0, 0.0);
  res.control = semipositivity_report(solve_family(control_cfg));

  res.negative_interior = res.coarse.min_c < 0.0;
  // compare minima over the same physical base region: the finer grid's
  // interior margin exposes extra area near the rectangle edge, so restrict
  // both minima to the coarse margin-limited rectangle
  const double half_tx =
      cfg.base.half_x - double(kInteriorMargin) * cfg.base.step_x();
  const double half_ty =
      cfg.base.half_y - double(kInteriorMargin) * cfg.base.step_y();
  const double coarse_min = restricted_min_c(coarse_sol, half_tx, half_ty);
  const double fine_min = restricted_min_c(fine_sol, half_tx, half_ty);
  const double scale = std::max(std::abs(coarse_min), std::abs(fine_min));
  res.sign_stable = coarse_min < 0.0 && fine_min < 0.0 &&
                    std::abs(coarse_min - fine_min) <= 0.1 * scale;
  res.control_semipositive = res.control.min_c >= -control_tol;

  // reference-form perturbation: a fixed fiberwise bump scaled by eps_A
  ConvergenceTable tab;
  tab.name = "counterexample_perturbation";
  tab.primary_name = "sup|phi_epsA - phi_0|";
  for (double eps_a : a_sched.values) {
    const auto t0 = Clock::now();
    FamilyConfig c = cfg;
    ChiPart bump;
    bump.kind = ChiPart::Kind::theta;
    // the schedule parameter scales a fixed small-amplitude bump so the fiber
    // restriction of the perturbed reference form stays positive
    bump.amp = 0.05 * eps_a;
    bump.ax = 0.27;
    bump.ay = 0.33;
    c.omega.chi_parts.push_back(bump);
    const FamilySolution pert = solve_family(c);
    TableRow row;
    row.parameter = eps_a;
    row.primary = sup_family_diff(pert, coarse_sol);
    row.wall_time_s = seconds_since(t0);
    tab.rows.push_back(row);
  }
  tab.fitted_order = fitted_order(tab.rows);
  std::vector<double> prim;
  for (const auto& r : tab.rows) prim.push_back(r.primary);
  tab.verdict = non_increasing(prim) && tab.fitted_order >= 0.9;
  tab.summary["min_c_coarse"] = res.coarse.min_c;
  tab.summary["min_c_fine"] = res.fine.min_c;
  tab.summary["min_c_control"] = res.control.min_c;
  res.perturbation = std::move(tab);
  return res;
}

ConvergenceTable degeneration_experiment(const FamilyConfig& cfg,
                                         const Schedule& sched) {
  sched.validate();
  ConvergenceTable tab;
  tab.name = "degeneration";
  tab.primary_name = "sup phi";
  tab.secondary_names = {"-inf phi", "Im tau"};
  FamilyConfig c = cfg;
  c.normalization = Normalization::omega_mean_zero;
  for (double tk : sched.values) {
    const auto t0 = Clock::now();
    const cplx t(tk, 0.0);
    FiberProblem p = fiber_problem_at(c, t);
    p.normalization = Normalization::omega_mean_zero;
    const FiberSolution s = solve_fiber(p);
    TableRow row;
    row.parameter = tk;
    row.primary = field_max(s.phi);
    row.secondary = {-field_min(s.phi), p.grid.tau.imag()};
    row.wall_time_s = seconds_since(t0);
    tab.rows.push_back(row);
  }
  // one-sided boundedness signature on sup phi: increments shrink and the
  // variation accumulated over the final half of the schedule is <= 10% of
  // the overall movement-plus-magnitude scale (a convergent sequence passes
  // whether its limit is zero or not; steady or growing increments fail)
  std::vector<double> sups, incs;
  for (const auto& r : tab.rows) sups.push_back(r.primary);
  double scale = 0.0, total_var = 0.0;
  for (double s : sups) scale = std::max(scale, std::abs(s));
  for (std::size_t k = 1; k < sups.size(); ++k) {
    incs.push_back(std::abs(sups[k] - sups[k - 1]));
    total_var += incs.back();
  }
  double tail = 0.0;
  for (std::size_t k = incs.size() / 2; k < incs.size(); ++k) tail += incs[k];
  const bool incs_decreasing =
      incs.empty() || incs.back() <= incs.front() + 1e-15;
  tab.verdict = incs_decreasing &&
                tail <= 0.1 * std::max(total_var + scale, 1e-12);
  tab.summary["tail_variation"] = tail;
  tab.summary["total_variation"] = total_var;
  tab.summary["sup_scale"] = scale;
  tab.fitted_order = 0.0;  // not an order study
  return tab;
}

}  // namespace fm
