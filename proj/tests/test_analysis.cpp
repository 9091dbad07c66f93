#include <cmath>

#include "doctest.h"
#include "fibermetric/experiments.hpp"
#include "fibermetric/sequences.hpp"
#include "fibermetric/sobolev.hpp"
#include "fibermetric/spectral.hpp"

using namespace fm;

// ---------------------------------------------------------------------------
// iteration sequences

TEST_CASE("iteration sequences: recursion equals intermediate closed forms") {
  for (int n = 1; n <= 6; ++n) {
    const SequenceTable tab = iteration_sequences(n, n + 1);
    REQUIRE(tab.rows.size() == std::size_t(n + 1));
    for (const auto& row : tab.rows) {
      CHECK(row.p_match);
      CHECK(row.q_match);
    }
  }
  CHECK_THROWS(iteration_sequences(2, 4));  // k_max > n + 1
  CHECK_THROWS(iteration_sequences(0, 1));
}

TEST_CASE("iteration sequences: known values and the printed-final mismatch") {
  const SequenceTable t1 = iteration_sequences(1, 2);
  CHECK(t1.rows[0].p_recursion == Rational(1));
  CHECK(t1.rows[1].p_recursion == Rational(2));
  CHECK(t1.q_final_recursion == Rational(2));   // q_2/q = 2/(2-1)
  CHECK(t1.q_final_printed == Rational(1));     // (2n)!/(n! 2^n) at n = 1
  CHECK_FALSE(t1.q_final_matches_printed);

  const SequenceTable t2 = iteration_sequences(2, 3);
  CHECK(t2.rows[1].p_recursion == Rational(4, 3));
  CHECK(t2.rows[2].p_recursion == Rational(2));
  CHECK(t2.q_final_recursion == Rational(6));   // central binomial C(4,2)
  CHECK(t2.q_final_printed == Rational(3));
  CHECK_FALSE(t2.q_final_matches_printed);

  // general n: recursion lands on the central binomial coefficient
  for (int n = 1; n <= 6; ++n) {
    const SequenceTable t = iteration_sequences(n, 1);
    const Rational binom =
        factorial_ratio(2 * n, n) / factorial_ratio(n, 0);
    CHECK(t.q_final_recursion == binom);
  }
}

// ---------------------------------------------------------------------------
// Sobolev / Poincare ratios

namespace {

MarkedDivisor one_b_point(double b) {
  MarkedDivisor d;
  d.points_B.push_back({0.41307, 0.59251, b});
  return d;
}

}  // namespace

TEST_CASE("constant test function: Sobolev quotient matches direct quadrature") {
  const TorusGrid g(64, cplx(0.2, 1.1));
  MarkedDivisor div = one_b_point(0.5);
  div.points_E.push_back({0.15, 0.85, 1.0});
  const double p = 1.5, eps = 0.05;
  const Field f(g, FieldKind::generic, 1.0);

  const Field mu_q = sobolev_measure_q(g, div, eps);
  const Field mu_qp = sobolev_measure_qp(g, div, eps, p);
  const double lhs = std::pow(fiber_integral(mu_q), (2.0 - p) / (2.0 * p));
  const double rhs = std::pow(fiber_integral(mu_qp), 1.0 / p);
  CHECK(sobolev_ratio_of(f, div, p, eps) ==
        doctest::Approx(lhs / rhs).epsilon(1e-12));
}

TEST_CASE("Poincare: constants give zero; single mode matches closed form") {
  const TorusGrid g(64, cplx(0.2, 1.1));
  const MarkedDivisor empty;
  CHECK(poincare_ratio_of(Field(g, FieldKind::generic, 3.7), empty, 1.5, 0.1) ==
        0.0);

  // f = cos(2 pi x), p = 2, flat measures: ratio = tau2 / (4 pi^2 |tau|^2)
  Field f(g, FieldKind::generic);
  for (std::size_t j = 0; j < g.n_side; ++j)
    for (std::size_t i = 0; i < g.n_side; ++i)
      f.at(i, j) = std::cos(2.0 * kPi * g.x(i));
  const double tau2 = g.tau.imag();
  const double expected = tau2 / (4.0 * kPi * kPi * std::norm(g.tau));
  CHECK(poincare_ratio_of(f, empty, 2.0, 0.1) ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("trivial-weight ratios are seed-stable within 5% at 200 samples") {
  const TorusGrid g(64, cplx(0.0, 1.0));
  const MarkedDivisor empty;
  const double s1 = sobolev_ratio(g, empty, 1.0, 0.1, 200, 1);
  const double s2 = sobolev_ratio(g, empty, 1.0, 0.1, 200, 2);
  CHECK(std::abs(s1 - s2) <= 0.05 * std::max(s1, s2));
  const double p1 = poincare_ratio(g, empty, 1.5, 0.1, 200, 1);
  const double p2 = poincare_ratio(g, empty, 1.5, 0.1, 200, 2);
  CHECK(std::abs(p1 - p2) <= 0.05 * std::max(p1, p2));
}

// ---------------------------------------------------------------------------
// schedule experiments

TEST_CASE("schedule validation and geometric construction") {
  Schedule s = Schedule::geometric(ScheduleParam::epsilon, 0.1, 6);
  s.validate();
  CHECK(s.values.size() == 6);
  CHECK(s.values.back() == doctest::Approx(0.003125));
  Schedule bad = s;
  bad.values.push_back(0.01);  // not decreasing
  CHECK_THROWS(bad.validate());
}

TEST_CASE("twisted-solve limit: trivial and smooth cases") {
  const TorusGrid g(64, cplx(0.1, 1.0));
  const Schedule sched = Schedule::geometric(ScheduleParam::lambda_eff, 0.1, 6);

  // mu = omega: psi identically zero at every twist
  const FiberProblem flat = FiberProblem::flat(g);
  const ConvergenceTable triv = lemma_1_4_experiment(flat, sched);
  CHECK(triv.verdict);
  for (const auto& r : triv.rows) CHECK(r.primary < 1e-12);

  // smooth non-flat density: monotone decrease, near-linear order
  FiberProblem p = flat;
  Field bg(g, FieldKind::density);
  for (std::size_t j = 0; j < g.n_side; ++j)
    for (std::size_t i = 0; i < g.n_side; ++i)
      bg.at(i, j) = std::exp(0.4 * std::cos(2.0 * kPi * g.x(i))) / g.tau.imag();
  p.density.background = bg;
  const ConvergenceTable tab = lemma_1_4_experiment(p, sched);
  CHECK(tab.rows.front().primary > 1e-5);
  CHECK(tab.fitted_order >= 0.9);
  CHECK(tab.verdict);
}

TEST_CASE("smoothing convergence: empty divisor trivial, conic point Cauchy") {
  FamilyConfig cfg;
  cfg.base = BaseGrid(9, cplx(0.0, 0.0), 0.1, 0.1);
  cfg.n_side = 64;
  cfg.tau.tau0 = cplx(0.1, 1.0);
  cfg.density.kind = DensityRecipe::Kind::conic;
  const Schedule sched = Schedule::geometric(ScheduleParam::delta, 0.1, 4);

  const ConvergenceTable triv = smoothing_convergence(cfg, sched);
  CHECK(triv.verdict);
  for (const auto& r : triv.rows) CHECK(r.primary < 1e-12);

  cfg.density.divisor = one_b_point(0.5);
  const ConvergenceTable tab = smoothing_convergence(cfg, sched);
  CHECK(tab.rows.front().primary > 1e-6);
  CHECK(tab.verdict);
}

TEST_CASE("curvature centering under the delta schedule") {
  // the centering limit needs a family that straightens as delta -> 0 (lift
  // converging to a holomorphic field): modulated density with amplitude
  // delta, so c -> M fiber-constant and the deviation decays ~ delta^2
  FamilyConfig cfg;
  cfg.base = BaseGrid(9, cplx(0.0, 0.0), 0.1, 0.1);
  cfg.n_side = 64;
  cfg.tau.tau0 = cplx(0.0, 1.0);
  cfg.omega.M = 0.1;
  cfg.density.kind = DensityRecipe::Kind::modulated;
  cfg.density.mod_gamma = cplx(1.0, 0.5);
  const Schedule sched = Schedule::geometric(ScheduleParam::delta, 0.2, 4);
  const ConvergenceTable tab = curvature_centering(cfg, sched);
  CHECK(tab.rows.size() == 4);
  CHECK(tab.fitted_order > 1.5);
  CHECK(tab.verdict);
}

TEST_CASE("transverse diagnostics: product trivial, moving divisor bounded") {
  FamilyConfig cfg;
  cfg.base = BaseGrid(9, cplx(0.0, 0.0), 0.1, 0.1);
  cfg.n_side = 64;
  cfg.tau.tau0 = cplx(0.0, 1.0);
  cfg.density.kind = DensityRecipe::Kind::conic;
  const Schedule sched = Schedule::geometric(ScheduleParam::epsilon, 0.1, 3);

  const ConvergenceTable triv = transverse_diagnostics(cfg, sched, 2);
  CHECK(triv.verdict);
  for (const auto& r : triv.rows) CHECK(r.primary < 1e-12);

  cfg.density.divisor = one_b_point(0.5);
  cfg.density.drift = cplx(0.1, 0.05);
  const ConvergenceTable tab = transverse_diagnostics(cfg, sched, 2);
  CHECK(tab.verdict);
}

TEST_CASE("gradient diagnostic: smooth case exact, cone points bounded") {
  const TorusGrid g(64, cplx(0.1, 1.0));
  const Schedule sched = Schedule::geometric(ScheduleParam::epsilon, 0.05, 4);

  FiberProblem smooth = FiberProblem::flat(g);
  Field bg(g, FieldKind::density);
  for (std::size_t j = 0; j < g.n_side; ++j)
    for (std::size_t i = 0; i < g.n_side; ++i)
      bg.at(i, j) = std::exp(0.3 * std::cos(2.0 * kPi * g.y(j))) / g.tau.imag();
  smooth.density.background = bg;
  const ConvergenceTable triv = gradient_diagnostic(smooth, sched);
  CHECK(triv.verdict);
  double lo = 1e300, hi = 0.0;
  for (const auto& r : triv.rows) {
    lo = std::min(lo, r.primary);
    hi = std::max(hi, r.primary);
  }
  CHECK(hi - lo < 1e-10 * hi);  // epsilon-independent exactly

  FiberProblem conic = FiberProblem::flat(g);
  conic.density.divisor = one_b_point(0.7);
  CHECK(gradient_diagnostic(conic, sched).verdict);

  FiberProblem vanishing = FiberProblem::flat(g);
  vanishing.density.divisor.points_E.push_back({0.41307, 0.59251, 1.0});
  CHECK(gradient_diagnostic(vanishing, sched).verdict);
}

TEST_CASE("negative-curvature example: interior min below zero, stable sign") {
  FamilyConfig cfg;
  cfg.base = BaseGrid(9, cplx(0.0, 0.0), 0.2, 0.2);
  cfg.n_side = 32;
  cfg.tau.kind = TauRecipe::Kind::affine;
  cfg.tau.tau0 = cplx(0.1, 1.0);
  cfg.tau.kappa = cplx(2.0, 0.6);
  cfg.omega.M = 0.01;
  ChiPart p;
  p.kind = ChiPart::Kind::theta;
  p.amp = -0.02;
  p.ax = 0.41307;
  p.ay = 0.59251;
  cfg.omega.chi_parts.push_back(p);
  cfg.density.kind = DensityRecipe::Kind::conic;  // empty divisor: flat density

  const Schedule a_sched = Schedule::geometric(ScheduleParam::epsilon, 0.2, 4);
  const CounterexampleResult res = counterexample_experiment(cfg, a_sched);
  CHECK(res.negative_interior);
  CHECK(res.coarse.min_c < -1e-3);
  CHECK(res.sign_stable);
  CHECK(res.control_semipositive);
  CHECK(res.perturbation.verdict);
  CHECK(res.perturbation.fitted_order >= 0.9);
}

TEST_CASE("degeneration signature: constant tau flat; growing Im tau bounded") {
  FamilyConfig cfg;
  cfg.base = BaseGrid(9, cplx(0.5, 0.0), 0.2, 0.2);
  cfg.n_side = 32;
  cfg.tau.kind = TauRecipe::Kind::log_degenerate;
  cfg.tau.tau0 = cplx(0.0, 2.0);
  cfg.tau.kappa = cplx(-2.0 * kPi, 0.0);  // Im tau = 2 + log(1/t)
  cfg.density.kind = DensityRecipe::Kind::modulated;
  cfg.density.mod_amp = 0.3;

  // t_k placing Im tau at 2 * 2^{k/2}, k = 0..8 (2 up to 32)
  Schedule sched;
  sched.parameter = ScheduleParam::base_degeneration;
  for (int k = 0; k <= 8; ++k) {
    const double target = 2.0 * std::pow(2.0, 0.5 * double(k));
    sched.values.push_back(std::exp(-(target - 2.0)));
  }
  const ConvergenceTable tab = degeneration_experiment(cfg, sched);
  CHECK(tab.rows.size() == 9);
  CHECK(tab.rows.back().secondary[1] == doctest::Approx(32.0));
  CHECK(tab.verdict);

  // constant tau: sup phi constant along the schedule
  FamilyConfig flat = cfg;
  flat.tau.kind = TauRecipe::Kind::constant;
  flat.tau.tau0 = cplx(0.0, 2.0);
  const ConvergenceTable ft = degeneration_experiment(flat, sched);
  for (const auto& r : ft.rows)
    CHECK(r.primary == doctest::Approx(ft.rows.front().primary).epsilon(1e-12));
  CHECK(ft.verdict);
}
