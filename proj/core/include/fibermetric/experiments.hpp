// Parameter-schedule studies: limit/boundedness diagnostics for regularized
// conic families, the twisted-solve limit, the negative-curvature example,
// and the degeneration signature, each emitting a ConvergenceTable.
//
// "Bounded across the schedule" is operationalized as max/min ratio of the
// monitored quantity bounded by the stated factor (the underlying statements
// assert existence of constants, never values, so every such criterion is
// property-based); quantities indistinguishable from zero are compared with
// an absolute floor instead of a ratio.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fibermetric/curvature.hpp"
#include "fibermetric/family.hpp"
#include "fibermetric/ma_solver.hpp"

namespace fm {

enum class ScheduleParam { epsilon, delta, lambda_eff, base_degeneration };

std::string schedule_param_name(ScheduleParam p);

struct Schedule {
  ScheduleParam parameter = ScheduleParam::epsilon;
  std::vector<double> values;  // strictly decreasing, positive

  void validate() const;
  static Schedule geometric(ScheduleParam p, double start, int count,
                            double ratio = 0.5);
};

struct TableRow {
  double parameter = 0.0;
  double primary = 0.0;
  std::vector<double> secondary;
  double wall_time_s = 0.0;
};

struct ConvergenceTable {
  std::string name;
  std::string primary_name;
  std::vector<std::string> secondary_names;
  std::vector<TableRow> rows;  // schedule order
  double fitted_order = 0.0;   // log-log least squares of primary vs parameter
  bool verdict = false;
  std::map<std::string, double> summary;  // extra scalars for the JSON verdict
};

// least-squares slope of log(primary) vs log(parameter); rows with
// non-positive primary are ignored; 0 when fewer than two usable rows
double fitted_order(const std::vector<TableRow>& rows);

// single-fiber problem of a family config at an arbitrary base point
FiberProblem fiber_problem_at(const FamilyConfig& cfg, cplx t);

// Twisted-solve limit: solve with lambda_eff = eps (density-mean-zero
// reference) against the eps = 0 solve; primary sup|psi_eps - psi_0|.
// Verdict: monotone decreasing and fitted order >= 0.9.
ConvergenceTable lemma_1_4_experiment(const FiberProblem& fiber,
                                      const Schedule& sched);

// delta-regularized conic family: primary sup over fibers of
// ||u_delta - u_next||_inf between consecutive schedule entries (ratio-1/2
// schedules pair delta with delta/2); secondary sup_fibers ||u_delta||_inf.
// Verdict: Cauchy differences decreasing; sup-norm max/min <= 1.5.
ConvergenceTable smoothing_convergence(const FamilyConfig& cfg,
                                       const Schedule& sched);

// Fiberwise centering of the geodesic curvature at the base-rectangle
// center: primary sup over the divisor-exclusion region of |c - mean_rho(c)|
// (mean against the solved fiber volume); secondary |mean_rho(c)| and
// sup|grad c| in the solved fiber metric on the exclusion region.
// Verdict: final primary <= 0.2 x initial; |mean| max/min <= 2;
// sup|grad c| non-increasing.
ConvergenceTable curvature_centering(const FamilyConfig& cfg,
                                     const Schedule& sched);

// Transverse diagnostics at the base-rectangle center with the log-tangent
// lift, tau := v(phi_eps): primary |fiber mean of tau against the solved
// volume|; secondary: energy ratio int |grad_eps tau|^2 dvol_phi /
// (1 + int |tau| dvol_phi), the weighted square integral
// int |tau|^2 dmu_{Nq}, and the Lipschitz monitor sup |D_t phi| on the
// exclusion region.  Verdict: every column bounded across the schedule
// within factor 2.
ConvergenceTable transverse_diagnostics(const FamilyConfig& cfg,
                                        const Schedule& sched, int N_multiplier);

// Per-eps fiber solves of the prototype problem (its density epsilon is
// replaced by the schedule value): primary sup |grad phi_eps| in the
// regularized conic model metric on the exclusion region; secondary
// sup(solved density / model density) and osc(phi_eps).
// Verdict: all monitors bounded within factor 1.5 across the schedule.
ConvergenceTable gradient_diagnostic(const FiberProblem& proto,
                                     const Schedule& sched);

struct CounterexampleResult {
  CurvatureReport coarse;      // shipped-resolution semipositivity report
  CurvatureReport fine;        // 2x fiber and base resolution
  CurvatureReport control;     // isotrivial (kappa = 0) variant, coarse grid
  bool negative_interior = false;  // min c < 0 at an interior argmin
  bool sign_stable = false;        // min c same sign, within 10% across grids
  bool control_semipositive = false;
  ConvergenceTable perturbation;   // reference-form perturbation decay
};

// Negative-curvature example: non-isotrivial (affine tau, kappa != 0)
// family with a t-dependent fiberwise potential; runs the semipositivity
// report at two resolutions plus the isotrivial control, then the
// perturbation study: reference form + eps_A x (product-form bump),
// primary sup over fibers |phi_{eps_A} - phi_0|, verdict decreasing with
// fitted order >= 0.9.
CounterexampleResult counterexample_experiment(const FamilyConfig& cfg,
                                               const Schedule& a_sched,
                                               double control_tol = 1e-8);

// Degeneration signature: fibers along t_k (schedule values, taken as the
// positive real base coordinate) with a log-degenerate tau recipe; primary
// sup_z phi_{t_k} under omega-mean-zero normalization; secondary -inf phi
// (reported only; the claim is one-sided).  Verdict: sup-phi increments
// decrease and the variation over the last half of the schedule is <= 10%
// of the total variation plus the sup magnitude scale.
ConvergenceTable degeneration_experiment(const FamilyConfig& cfg,
                                         const Schedule& sched);

}  // namespace fm
