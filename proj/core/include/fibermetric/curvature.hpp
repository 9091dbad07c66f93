// Total-space geometry of a solved family: horizontal lifts, geodesic
// curvature, the fiberwise metric weight, and the master identity residuals.
//
// Assembly conventions.  With lattice coordinates (x, y), z = x + tau(t) y,
// and Omega := chi + phi, every total-space coefficient splits into a
// y-carrying semiflat part and a z-periodic part:
//     rho_{z zbar}  = g   := 1/(2 tau2) + Omega_{z zbar}
//     rho_{t zbar}  = -y tau' g + B,
//         B := dzbar(D_t Omega) - i tau' dz(Omega)/(2 tau2) + B_shear
//     rho_{t tbar}  = |tau'|^2 y^2 / (2 tau2) + M_eff + (periodic Omega part)
// where D_t is the centered base stencil at fixed lattice point and
// M_eff = M + |shear|^2/(2 tau2).  The geodesic curvature
//     c = rho_{t tbar} - |rho_{t zbar}|^2 / rho_{z zbar}
// is assembled from the manifestly periodic combination
//     c = M_eff + D_t D_tbar Omega - |B|^2 / g,
// and cross-checked against the full y-carrying wedge and pairing routes,
// whose agreement is exact in exact arithmetic (the y terms cancel
// identically given the shared composite stencil objects).
//
// Lifts.  v = d/dt + v^z d/dz with v^z = tau'(t) y + e(z,t), e periodic:
//     horizontal   e = -B / g      (rho-orthogonal to the fibers)
//     coordinate   e = 0           (the lattice lift; equals d/dt only
//                                   when tau is constant)
//     log_tangent  e = theta-norm-weighted blend matching the marked-point
//                      velocities, vanishing quadratically at the points
// and dbar v = (i tau'/(2 tau2) + dzbar(e)) dzbar.
//
// Memory model.  Large refinement runs cannot hold every derived field for
// every fiber; all quantities are produced by per-fiber generators memoized
// in small column-windowed caches (the base sweep is column-major, so a
// five-column FIFO window gives every radius-2 stencil a warm cache).

#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>

#include "fibermetric/family.hpp"

namespace fm {

enum class LiftKind { horizontal, coordinate, log_tangent };

std::string lift_name(LiftKind k);

// Column-windowed memo of per-base-sample values; FIFO eviction keeps at
// most `cap` entries alive.  Values are shared_ptr so evicted entries stay
// valid for holders.
template <class T>
class FamMemo {
 public:
  using Fn = std::function<T(std::size_t a, std::size_t b)>;

  FamMemo() = default;
  FamMemo(std::size_t m_side, std::size_t cap, Fn fn)
      : m_(m_side), cap_(cap), fn_(std::move(fn)) {}

  std::shared_ptr<const T> get(std::size_t a, std::size_t b) {
    const std::size_t key = b * m_ + a;
    auto it = store_.find(key);
    if (it != store_.end()) return it->second;
    auto val = std::make_shared<const T>(fn_(a, b));
    store_.emplace(key, val);
    order_.push_back(key);
    while (order_.size() > cap_) {
      store_.erase(order_.front());
      order_.pop_front();
    }
    return val;
  }

 private:
  std::size_t m_ = 0, cap_ = 0;
  Fn fn_;
  std::unordered_map<std::size_t, std::shared_ptr<const T>> store_;
  std::deque<std::size_t> order_;
};

// Lazy view of a solved family: either borrows a materialized FamilySolution
// or solves fibers on demand from a FamilyConfig (memory-bounded; intended
// for refinement studies whose full solution would not fit in memory).
class FamilyFrames {
 public:
  explicit FamilyFrames(const FamilySolution& sol);
  explicit FamilyFrames(const FamilyConfig& cfg);

  const FamilyConfig& config() const { return cfg_; }
  std::shared_ptr<const FiberFrame> frame(std::size_t a, std::size_t b);

 private:
  FamilyConfig cfg_;
  const FamilySolution* sol_ = nullptr;
  FamMemo<FiberFrame> memo_;
};

// Derived per-fiber geometry with column-windowed caching.  All complex
// per-fiber fields are the z-periodic parts described in the header comment.
class FamilyGeometry {
 public:
  // perturb_amp != 0 adds a deterministic off-shell potential perturbation
  // to every fiber (sensitivity probes)
  FamilyGeometry(std::shared_ptr<FamilyFrames> frames,
                 LiftKind lift = LiftKind::horizontal, double perturb_amp = 0.0);

  const FamilyConfig& config() const { return frames_->config(); }
  const BaseGrid& base() const { return frames_->config().base; }
  std::shared_ptr<const FiberFrame> frame(std::size_t a, std::size_t b) {
    return frames_->frame(a, b);
  }

  // valid at every base sample
  std::shared_ptr<const Field> phi(std::size_t a, std::size_t b);  // incl. perturbation
  std::shared_ptr<const Field> chi(std::size_t a, std::size_t b);
  std::shared_ptr<const Field> omega_coeff(std::size_t a, std::size_t b);  // omega_{z zbar}
  std::shared_ptr<const Field> f_field(std::size_t a, std::size_t b);      // twist f
  std::shared_ptr<const Field> Omega(std::size_t a, std::size_t b);
  std::shared_ptr<const Field> g_coeff(std::size_t a, std::size_t b);   // rho_{z zbar}
  std::shared_ptr<const Field> psi(std::size_t a, std::size_t b);       // log rho_{z zbar}
  std::shared_ptr<const CField> dzbar_psi(std::size_t a, std::size_t b);

  // valid at margin >= 1
  CField Dt_Omega(std::size_t a, std::size_t b);
  Field DtDtbar_Omega(std::size_t a, std::size_t b);
  CField B(std::size_t a, std::size_t b);        // periodic part of rho_{t zbar}
  std::shared_ptr<const CField> lift_e(std::size_t a, std::size_t b);
  CField lift_vz(std::size_t a, std::size_t b);  // tau' y + e (full)
  CField vz_conj_derivative(std::size_t a, std::size_t b);  // v(conj v^z)
  Field dbar_v_sq(std::size_t a, std::size_t b);
  Field c_schur(std::size_t a, std::size_t b);
  Field c_wedge(std::size_t a, std::size_t b);
  Field c_pairing(std::size_t a, std::size_t b);
  std::shared_ptr<const Field> c_memo(std::size_t a, std::size_t b);

  // constant extra omega_{t tbar} component incl. shear (tau2 from fiber)
  double M_eff(std::size_t a, std::size_t b);

  // mask of lattice samples at lattice distance >= radius from every marked
  // density point of the fiber at t(a,b); all-true when the divisor is empty
  std::vector<unsigned char> divisor_mask(std::size_t a, std::size_t b,
                                          double radius) const;

  // centered 2nd-order base stencils of per-sample generators, at margin >= 1
  CField fd_Dt(const std::function<std::shared_ptr<const Field>(std::size_t, std::size_t)>& F,
               std::size_t a, std::size_t b);
  CField fd_Dt(const std::function<std::shared_ptr<const CField>(std::size_t, std::size_t)>& F,
               std::size_t a, std::size_t b);
  CField fd_Dtbar(const std::function<std::shared_ptr<const Field>(std::size_t, std::size_t)>& F,
                  std::size_t a, std::size_t b);
  CField fd_Dtbar(const std::function<std::shared_ptr<const CField>(std::size_t, std::size_t)>& F,
                  std::size_t a, std::size_t b);
  Field fd_DtDtbar(const std::function<std::shared_ptr<const Field>(std::size_t, std::size_t)>& F,
                   std::size_t a, std::size_t b);

  LiftKind lift() const { return lift_; }

 private:
  std::shared_ptr<FamilyFrames> frames_;
  LiftKind lift_;
  double perturb_amp_;
  FamMemo<Field> phi_memo_, chi_memo_, wcoeff_memo_, f_memo_;
  FamMemo<Field> omega_memo_, g_memo_, psi_memo_, c_schur_memo_;
  FamMemo<CField> e_memo_, dzbar_psi_memo_;
};

// Hessian of a per-fiber scalar generator in the (v, vbar) direction:
//     hess = Re[ D_t S + e dz(S) - v(conj v^z) dzbar(G) ],
//     S    = D_tbar G + conj(e) dzbar(G),
// i.e. the complex Hessian dd^c-pairing i del dbar G (v, vbar) for the
// geometry's lift; needs base margin >= 2.
class HessVV {
 public:
  HessVV(FamilyGeometry& geo,
         std::function<std::shared_ptr<const Field>(std::size_t, std::size_t)> G);
  Field value(std::size_t a, std::size_t b);

 private:
  FamilyGeometry& geo_;
  std::function<std::shared_ptr<const Field>(std::size_t, std::size_t)> G_;
  FamMemo<CField> dzbarG_memo_;
  FamMemo<CField> S_memo_;
};

// ---------------------------------------------------------------------------
// Reports and identity residuals

struct ArgLocation {
  std::size_t a = 0, b = 0;  // base sample
  std::size_t i = 0, j = 0;  // lattice sample
  cplx t{};
  double x = 0.0, y = 0.0;   // lattice coordinates
};

struct CurvatureReport {
  // per-base-sample fields, indexed by base.idx(a, b); empty at margin and
  // non-interior samples (the not-computed marker)
  std::vector<Field> c;
  std::vector<CField> v;
  std::vector<Field> dbar_v_sq;
  std::vector<Field> theta_weight;
  double min_c = 0.0, max_c = 0.0;
  ArgLocation argmin_c, argmax_c;
  double min_fiber_coeff = 0.0;  // min of rho_{z zbar} over the same region
  double max_cross_check = 0.0;  // max three-route disagreement
  double max_dbar_v_sq = 0.0;
  bool positivity = false;       // min_c >= 0 and min_fiber_coeff > 0
  bool refinement_stable = false;  // set by refinement drivers, not here
  std::map<std::string, double> identity_residuals;
};

// Interior margin (base cells) for reported extrema and residual sups.
inline constexpr std::size_t kInteriorMargin = 2;
// Divisor exclusion radius in lattice coordinates for all residual sups.
inline constexpr double kDivisorExclusion = 0.15;

// v^z per base sample (empty CField marker outside margin-1 interior).
std::vector<CField> horizontal_lift(const FamilySolution& sol);

// Schur-complement geodesic curvature, cross-checked against the wedge and
// pairing assemblies; throws on disagreement beyond 1e-10 * (1 + |c|).
CurvatureReport geodesic_curvature(const FamilySolution& sol);

// |dbar v|^2 and the weight Psi = log rho_{z zbar} (adds to a report).
CurvatureReport dbar_v_and_theta(const FamilySolution& sol);

// Extrema of c and rho_{z zbar} over the margin-2 interior with the divisor
// exclusion; the semipositivity verdict is min_c >= 0 && min fiber coeff > 0.
CurvatureReport semipositivity_report(const FamilySolution& sol);

struct IdentityStats {
  double residual = 0.0;      // sup over admissible samples
  double lhs_scale = 0.0;     // sup |lhs| (for relative context)
  double vphi_scale = 0.0;    // sup |v(phi)| (2.48 probes)
  std::size_t samples = 0;
};

// Residual of  -(d_z d_zbar c)/rho_{z zbar} = |dbar v|^2 - hess_vv(Psi)
// with the horizontal lift; sup over margin-2 interior, divisor-excluded.
// Off-shell probes construct the geometry with perturb_amp != 0.
// `base_stride` thins the base samples to indices divisible by the stride
// (stencil neighbors are still evaluated at full resolution), so a refined
// grid with a doubled stride sups over the same physical base points.
IdentityStats identity_residual_1_29_stats(FamilyGeometry& geo,
                                           std::size_t base_stride = 1);
double identity_residual_1_29(const FamilySolution& sol);

// Residual of the fiberwise differentiated equation (lambda-twisted):
//     lap_phi v(phi) - tr_phi d(dbar v . phi) + Psi_{phi,v}
//         - lambda v(phi) - v(f) - Psi_v = 0,
// assembled for the chosen lift; `lambda_shift` evaluates with a wrong
// lambda (sensitivity probe).
IdentityStats lie_identity_residual_2_48_stats(FamilyGeometry& geo,
                                               double lambda_shift = 0.0,
                                               std::size_t base_stride = 1);
double lie_identity_residual_2_48(const FamilySolution& sol, LiftKind lift);

// Sup-norm mismatch between the spectral-stencil hess_vv(Psi) and its
// normalization-constant + background + divisor-term expansion for a
// delta-regularized conic family (delta must equal the config's epsilon).
IdentityStats curvature_decomposition_stats(FamilyGeometry& geo, double delta);
double curvature_decomposition_residual(const FamilySolution& sol, double delta);

}  // namespace fm
