#include "fibermetric/curvature.hpp"

#include <cmath>
#include <stdexcept>

#include "fibermetric/spectral.hpp"
#include "fibermetric/theta.hpp"

namespace fm {

namespace {

constexpr double kLogTangentWidth = 0.15;  // bump scale of the blended lift

CField conj_field(const CField& f) {
  CField out(f.grid, f.kind);
  for (std::size_t k = 0; k < f.v.size(); ++k) out.v[k] = std::conj(f.v[k]);
  return out;
}

using FGetter = std::function<std::shared_ptr<const Field>(std::size_t, std::size_t)>;
using CGetter = std::function<std::shared_ptr<const CField>(std::size_t, std::size_t)>;

template <class Getter>
CField fd_first(const BaseGrid& base, const TorusGrid& center_grid,
                const Getter& F, std::size_t a, std::size_t b, bool bar) {
  if (!base.interior(a, b, 1))
    throw std::out_of_range("base stencil: margin-1 interior required");
  const auto fpx = F(a + 1, b), fmx = F(a - 1, b);
  const auto fpy = F(a, b + 1), fmy = F(a, b - 1);
  const double ihx = 1.0 / (2.0 * base.step_x());
  const double ihy = 1.0 / (2.0 * base.step_y());
  const cplx iunit = bar ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
  CField out(center_grid, FieldKind::generic);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = 0.5 * (cplx(fpx->v[k] - fmx->v[k]) * ihx +
                      iunit * cplx(fpy->v[k] - fmy->v[k]) * ihy);
  return out;
}

template <class Getter>
Field fd_second(const BaseGrid& base, const TorusGrid& center_grid,
                const Getter& F, std::size_t a, std::size_t b) {
  if (!base.interior(a, b, 1))
    throw std::out_of_range("base stencil: margin-1 interior required");
  const auto f0 = F(a, b);
  const auto fpx = F(a + 1, b), fmx = F(a - 1, b);
  const auto fpy = F(a, b + 1), fmy = F(a, b - 1);
  const double ihx2 = 1.0 / (base.step_x() * base.step_x());
  const double ihy2 = 1.0 / (base.step_y() * base.step_y());
  Field out(center_grid, FieldKind::generic);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = 0.25 * ((fpx->v[k] + fmx->v[k] - 2.0 * f0->v[k]) * ihx2 +
                       (fpy->v[k] + fmy->v[k] - 2.0 * f0->v[k]) * ihy2);
  return out;
}

// D_t D_tbar of a per-fiber scalar (e.g. the normalization constant C)
template <class Getter>
double fd_second_scalar(const BaseGrid& base, const Getter& F, std::size_t a,
                        std::size_t b) {
  const double ihx2 = 1.0 / (base.step_x() * base.step_x());
  const double ihy2 = 1.0 / (base.step_y() * base.step_y());
  return 0.25 * ((F(a + 1, b) + F(a - 1, b) - 2.0 * F(a, b)) * ihx2 +
                 (F(a, b + 1) + F(a, b - 1) - 2.0 * F(a, b)) * ihy2);
}

}  // namespace

std::string lift_name(LiftKind k) {
  switch (k) {
    case LiftKind::horizontal: return "horizontal";
    case LiftKind::coordinate: return "coordinate";
    case LiftKind::log_tangent: return "log_tangent";
  }
  return "horizontal";
}

// ---------------------------------------------------------------------------
// FamilyFrames

FamilyFrames::FamilyFrames(const FamilySolution& sol)
    : cfg_(sol.config), sol_(&sol) {}

FamilyFrames::FamilyFrames(const FamilyConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const std::size_t m = cfg_.base.m_side;
  memo_ = FamMemo<FiberFrame>(m, 5 * m + 4, [this](std::size_t a, std::size_t b) {
    return solve_fiber_frame(cfg_, a, b);
  });
}

std::shared_ptr<const FiberFrame> FamilyFrames::frame(std::size_t a, std::size_t b) {
  if (sol_) {
    const FiberFrame& fr = sol_->fibers[cfg_.base.idx(a, b)];
    return std::shared_ptr<const FiberFrame>(&fr, [](const FiberFrame*) {});
  }
  return memo_.get(a, b);
}

// ---------------------------------------------------------------------------
// FamilyGeometry

FamilyGeometry::FamilyGeometry(std::shared_ptr<FamilyFrames> frames,
                               LiftKind lift, double perturb_amp)
    : frames_(std::move(frames)), lift_(lift), perturb_amp_(perturb_amp) {
  const BaseGrid& bg = frames_->config().base;
  const std::size_t m = bg.m_side;
  const std::size_t big = 5 * m + 4, mid = 3 * m + 4;

  phi_memo_ = FamMemo<Field>(m, big, [this](std::size_t a, std::size_t b) {
    const auto fr = frames_->frame(a, b);
    Field out = fr->phi;
    if (perturb_amp_ != 0.0) {
      const double gain =
          perturb_amp_ * (1.0 + 0.3 * fr->t.real() - 0.2 * fr->t.imag());
      const std::size_t n = out.n();
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
          out.at(i, j) +=
              gain * std::cos(2.0 * kPi * (2.0 * out.grid.x(i) + out.grid.y(j)));
    }
    return out;
  });
  chi_memo_ = FamMemo<Field>(m, big, [this](std::size_t a, std::size_t b) {
    const auto fr = frames_->frame(a, b);
    return evaluate_chi(frames_->config(), fr->grid, fr->t);
  });
  wcoeff_memo_ = FamMemo<Field>(m, mid, [this](std::size_t a, std::size_t b) {
    const auto fr = frames_->frame(a, b);
    Field w = omega_fiber_density(frames_->config(), fr->grid, fr->t,
                                  *chi(a, b));
    for (double& v : w.v) v *= 0.5;
    w.kind = FieldKind::metric_coeff;
    return w;
  });
  f_memo_ = FamMemo<Field>(m, mid, [this](std::size_t a, std::size_t b) {
    const auto fr = frames_->frame(a, b);
    const Field mu = density_field(frames_->config(), fr->grid, fr->t);
    const auto w = wcoeff_memo_.get(a, b);
    Field out(fr->grid, FieldKind::generic);
    const double C = frames_->config().lambda == 0.0 ? fr->C : 0.0;
    for (std::size_t k = 0; k < out.v.size(); ++k)
      out.v[k] = std::log(mu.v[k] / (2.0 * w->v[k])) + C;
    return out;
  });
  omega_memo_ = FamMemo<Field>(m, big, [this](std::size_t a, std::size_t b) {
    const auto c = chi(a, b);
    const auto p = phi(a, b);
    Field out = *c;
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += p->v[k];
    return out;
  });
  g_memo_ = FamMemo<Field>(m, mid, [this](std::size_t a, std::size_t b) {
    const auto om = Omega(a, b);
    Field out = laplacian(*om);
    const double flat = 0.5 / om->grid.tau.imag();
    for (double& v : out.v) v = flat + 0.25 * v;
    out.kind = FieldKind::metric_coeff;
    if (field_min(out) <= 0.0)
      throw std::runtime_error("FamilyGeometry: metric degenerate");
    return out;
  });
  psi_memo_ = FamMemo<Field>(m, big, [this](std::size_t a, std::size_t b) {
    Field out = *g_coeff(a, b);
    for (double& v : out.v) v = std::log(v);
    out.kind = FieldKind::generic;
    return out;
  });
  dzbar_psi_memo_ = FamMemo<CField>(m, mid, [this](std::size_t a, std::size_t b) {
    return dzbar(*psi(a, b));
  });
  e_memo_ = FamMemo<CField>(m, mid, [this](std::size_t a, std::size_t b) {
    const auto fr = frames_->frame(a, b);
    const FamilyConfig& cfg = frames_->config();
    CField out(fr->grid, FieldKind::generic);
    switch (lift_) {
      case LiftKind::coordinate:
        break;
      case LiftKind::horizontal: {
        const CField Bf = B(a, b);
        const auto g = g_coeff(a, b);
        for (std::size_t k = 0; k < out.v.size(); ++k)
          out.v[k] = -Bf.v[k] / g->v[k];
        break;
      }
      case LiftKind::log_tangent: {
        cplx w = cfg.density.drift;
        if (cfg.omega.kind == OmegaRecipe::Kind::sheared) w += cfg.omega.shear;
        auto add_point = [&](const MarkedPoint& p0) {
          const MarkedPoint p = cfg.moved_point(p0, fr->t);
          const Field h = theta_section_norm(p.x, p.y, fr->grid);
          const double s2 = 2.0 * kLogTangentWidth * kLogTangentWidth;
          for (std::size_t k = 0; k < out.v.size(); ++k)
            out.v[k] += w * std::exp(-h.v[k] / s2);
        };
        for (const MarkedPoint& p : cfg.density.divisor.points_E) add_point(p);
        for (const MarkedPoint& p : cfg.density.divisor.points_B) add_point(p);
        break;
      }
    }
    return out;
  });
  c_schur_memo_ = FamMemo<Field>(m, m + 2, [this](std::size_t a, std::size_t b) {
    const Field dttbar = DtDtbar_Omega(a, b);
    const CField Bf = B(a, b);
    const auto g = g_coeff(a, b);
    const double m_eff = M_eff(a, b);
    Field out(dttbar.grid, FieldKind::generic);
    for (std::size_t k = 0; k < out.v.size(); ++k)
      out.v[k] = m_eff + dttbar.v[k] - std::norm(Bf.v[k]) / g->v[k];
    return out;
  });
}

std::shared_ptr<const Field> FamilyGeometry::phi(std::size_t a, std::size_t b) {
  return phi_memo_.get(a, b);
}
std::shared_ptr<const Field> FamilyGeometry::chi(std::size_t a, std::size_t b) {
  return chi_memo_.get(a, b);
}
std::shared_ptr<const Field> FamilyGeometry::omega_coeff(std::size_t a,
                                                         std::size_t b) {
  return wcoeff_memo_.get(a, b);
}
std::shared_ptr<const Field> FamilyGeometry::f_field(std::size_t a, std::size_t b) {
  return f_memo_.get(a, b);
}
std::shared_ptr<const Field> FamilyGeometry::Omega(std::size_t a, std::size_t b) {
  return omega_memo_.get(a, b);
}
std::shared_ptr<const Field> FamilyGeometry::g_coeff(std::size_t a, std::size_t b) {
  return g_memo_.get(a, b);
}
std::shared_ptr<const Field> FamilyGeometry::psi(std::size_t a, std::size_t b) {
  return psi_memo_.get(a, b);
}
std::shared_ptr<const CField> FamilyGeometry::dzbar_psi(std::size_t a,
                                                        std::size_t b) {
  return dzbar_psi_memo_.get(a, b);
}
std::shared_ptr<const CField> FamilyGeometry::lift_e(std::size_t a, std::size_t b) {
  return e_memo_.get(a, b);
}
std::shared_ptr<const Field> FamilyGeometry::c_memo(std::size_t a, std::size_t b) {
  return c_schur_memo_.get(a, b);
}

CField FamilyGeometry::fd_Dt(const FGetter& F, std::size_t a, std::size_t b) {
  return fd_first(base(), frames_->frame(a, b)->grid, F, a, b, false);
}
CField FamilyGeometry::fd_Dt(const CGetter& F, std::size_t a, std::size_t b) {
  return fd_first(base(), frames_->frame(a, b)->grid, F, a, b, false);
}
CField FamilyGeometry::fd_Dtbar(const FGetter& F, std::size_t a, std::size_t b) {
  return fd_first(base(), frames_->frame(a, b)->grid, F, a, b, true);
}
CField FamilyGeometry::fd_Dtbar(const CGetter& F, std::size_t a, std::size_t b) {
  return fd_first(base(), frames_->frame(a, b)->grid, F, a, b, true);
}
Field FamilyGeometry::fd_DtDtbar(const FGetter& F, std::size_t a, std::size_t b) {
  return fd_second(base(), frames_->frame(a, b)->grid, F, a, b);
}

CField FamilyGeometry::Dt_Omega(std::size_t a, std::size_t b) {
  return fd_Dt(FGetter([this](std::size_t x, std::size_t y) { return Omega(x, y); }),
               a, b);
}

Field FamilyGeometry::DtDtbar_Omega(std::size_t a, std::size_t b) {
  return fd_DtDtbar(
      FGetter([this](std::size_t x, std::size_t y) { return Omega(x, y); }), a, b);
}

double FamilyGeometry::M_eff(std::size_t a, std::size_t b) {
  const FamilyConfig& cfg = frames_->config();
  double out = cfg.omega.M;
  if (cfg.omega.kind == OmegaRecipe::Kind::sheared)
    out += std::norm(cfg.omega.shear) /
           (2.0 * frames_->frame(a, b)->grid.tau.imag());
  return out;
}

CField FamilyGeometry::B(std::size_t a, std::size_t b) {
  const auto fr = frames_->frame(a, b);
  CField out = dzbar(Dt_Omega(a, b));
  const double tau2 = fr->grid.tau.imag();
  const cplx coef = cplx(0.0, -1.0) * fr->dtau / (2.0 * tau2);
  const CField dzo = dz(*Omega(a, b));
  cplx shear_term{0.0, 0.0};
  const FamilyConfig& cfg = frames_->config();
  if (cfg.omega.kind == OmegaRecipe::Kind::sheared)
    shear_term = -cfg.omega.shear / (2.0 * tau2);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] += coef * dzo.v[k] + shear_term;
  return out;
}

CField FamilyGeometry::lift_vz(std::size_t a, std::size_t b) {
  const auto fr = frames_->frame(a, b);
  CField out = *lift_e(a, b);
  const std::size_t n = out.n();
  for (std::size_t j = 0; j < n; ++j) {
    const cplx sf = fr->dtau * out.grid.y(j);
    for (std::size_t i = 0; i < n; ++i) out.at(i, j) += sf;
  }
  return out;
}

CField FamilyGeometry::vz_conj_derivative(std::size_t a, std::size_t b) {
  const auto fr = frames_->frame(a, b);
  const auto e = lift_e(a, b);
  CField out = fd_Dt(CGetter([this](std::size_t x, std::size_t y) {
                       return std::make_shared<const CField>(
                           conj_field(*lift_e(x, y)));
                     }),
                     a, b);
  const CField dzbar_e = dzbar(*e);  // dz(conj e) = conj(dzbar e)
  const cplx coef =
      cplx(0.0, -1.0) * std::conj(fr->dtau) / (2.0 * fr->grid.tau.imag());
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] += coef * e->v[k] + e->v[k] * std::conj(dzbar_e.v[k]);
  return out;
}

Field FamilyGeometry::dbar_v_sq(std::size_t a, std::size_t b) {
  const auto fr = frames_->frame(a, b);
  const CField dzbar_e = dzbar(*lift_e(a, b));
  const cplx sf = cplx(0.0, 1.0) * fr->dtau / (2.0 * fr->grid.tau.imag());
  Field out(fr->grid, FieldKind::generic);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = std::norm(sf + dzbar_e.v[k]);
  return out;
}

Field FamilyGeometry::c_schur(std::size_t a, std::size_t b) {
  return *c_schur_memo_.get(a, b);
}

namespace {

// shared y-carrying pieces of the wedge and pairing assemblies
struct FullComponents {
  CField g_tzbar;  // -y tau' g + B
  Field g_ttbar;   // full, real part
};

FullComponents full_components(FamilyGeometry& geo, std::size_t a, std::size_t b,
                               const CField& Bf, const Field& g) {
  const auto fr = geo.frame(a, b);
  const cplx tp = fr->dtau;
  const double tau2 = fr->grid.tau.imag();
  const auto om = geo.Omega(a, b);
  const Field dttbar = geo.DtDtbar_Omega(a, b);
  const CField dto = geo.Dt_Omega(a, b);
  const CField dzbar_dto = dzbar(dto);
  const CField dzo = dz(*om);
  const Field lap = laplacian(*om);
  const double m_eff = geo.M_eff(a, b);

  FullComponents out{CField(fr->grid, FieldKind::generic),
                     Field(fr->grid, FieldKind::generic)};
  const std::size_t n = fr->grid.n_side;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = fr->grid.y(j);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = fr->grid.idx(i, j);
      out.g_tzbar.v[k] = -y * tp * g.v[k] + Bf.v[k];
      const cplx mixed = -tp * y * std::conj(dzbar_dto.v[k]) -
                         std::conj(tp) * y * dzbar_dto.v[k] +
                         cplx(0.0, 1.0) * std::norm(tp) * y *
                             (dzo.v[k] - std::conj(dzo.v[k])) / (2.0 * tau2);
      out.g_ttbar.v[k] = std::norm(tp) * y * y / (2.0 * tau2) + m_eff +
                         dttbar.v[k] + mixed.real() +
                         std::norm(tp) * y * y * 0.25 * lap.v[k];
    }
  }
  return out;
}

}  // namespace

Field FamilyGeometry::c_wedge(std::size_t a, std::size_t b) {
  const CField Bf = B(a, b);
  const auto g = g_coeff(a, b);
  const FullComponents fc = full_components(*this, a, b, Bf, *g);
  Field out(frames_->frame(a, b)->grid, FieldKind::generic);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = fc.g_ttbar.v[k] - std::norm(fc.g_tzbar.v[k]) / g->v[k];
  return out;
}

Field FamilyGeometry::c_pairing(std::size_t a, std::size_t b) {
  const auto fr = frames_->frame(a, b);
  const CField Bf = B(a, b);
  const auto g = g_coeff(a, b);
  const FullComponents fc = full_components(*this, a, b, Bf, *g);
  Field out(fr->grid, FieldKind::generic);
  const std::size_t n = fr->grid.n_side;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = fr->grid.y(j);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = fr->grid.idx(i, j);
      // pairing uses the horizontal lift: v^z = tau' y - B/g
      const cplx vz = fr->dtau * y - Bf.v[k] / g->v[k];
      out.v[k] = fc.g_ttbar.v[k] +
                 2.0 * (fc.g_tzbar.v[k] * std::conj(vz)).real() +
                 g->v[k] * std::norm(vz);
    }
  }
  return out;
}

std::vector<unsigned char> FamilyGeometry::divisor_mask(std::size_t a,
                                                        std::size_t b,
                                                        double radius) const {
  const FamilyConfig& cfg = frames_->config();
  const TorusGrid grid(cfg.n_side, cfg.tau.tau(cfg.base.t(a, b)));
  std::vector<unsigned char> mask(grid.size(), 1);
  if (cfg.density.kind != DensityRecipe::Kind::conic) return mask;
  const cplx t = cfg.base.t(a, b);
  std::vector<MarkedPoint> pts;
  for (const MarkedPoint& p : cfg.density.divisor.points_E)
    pts.push_back(cfg.moved_point(p, t));
  for (const MarkedPoint& p : cfg.density.divisor.points_B)
    pts.push_back(cfg.moved_point(p, t));
  for (std::size_t j = 0; j < grid.n_side; ++j)
    for (std::size_t i = 0; i < grid.n_side; ++i)
      for (const MarkedPoint& p : pts)
        if (lattice_dist(grid.x(i), grid.y(j), p.x, p.y) < radius) {
          mask[grid.idx(i, j)] = 0;
          break;
        }
  return mask;
}

// ---------------------------------------------------------------------------
// HessVV

HessVV::HessVV(FamilyGeometry& geo, FGetter G) : geo_(geo), G_(std::move(G)) {
  const std::size_t m = geo_.base().m_side;
  dzbarG_memo_ = FamMemo<CField>(m, 3 * m + 4, [this](std::size_t a, std::size_t b) {
    return dzbar(*G_(a, b));
  });
  S_memo_ = FamMemo<CField>(m, 3 * m + 4, [this](std::size_t a, std::size_t b) {
    CField out = geo_.fd_Dtbar(G_, a, b);
    const auto e = geo_.lift_e(a, b);
    const auto dzg = dzbarG_memo_.get(a, b);
    for (std::size_t k = 0; k < out.v.size(); ++k)
      out.v[k] += std::conj(e->v[k]) * dzg->v[k];
    return out;
  });
}

Field HessVV::value(std::size_t a, std::size_t b) {
  CField T = geo_.fd_Dt(
      CGetter([this](std::size_t x, std::size_t y) { return S_memo_.get(x, y); }),
      a, b);
  const auto S = S_memo_.get(a, b);
  const CField dzS = dz(*S);
  const auto e = geo_.lift_e(a, b);
  const CField corr = geo_.vz_conj_derivative(a, b);
  const auto dzg = dzbarG_memo_.get(a, b);
  Field out(T.grid, FieldKind::generic);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] =
        (T.v[k] + e->v[k] * dzS.v[k] - corr.v[k] * dzg->v[k]).real();
  return out;
}

// ---------------------------------------------------------------------------
// Identity residuals

IdentityStats identity_residual_1_29_stats(FamilyGeometry& geo,
                                           std::size_t base_stride) {
  const BaseGrid& base = geo.base();
  HessVV hess(geo, [&geo](std::size_t a, std::size_t b) { return geo.psi(a, b); });
  IdentityStats st;
  for (std::size_t a = kInteriorMargin; a + kInteriorMargin < base.m_side; ++a) {
    if (a % base_stride != 0) continue;
    for (std::size_t b = kInteriorMargin; b + kInteriorMargin < base.m_side; ++b) {
      if (b % base_stride != 0) continue;
      const auto g = geo.g_coeff(a, b);
      const CField ddc = dz(dzbar(to_complex(*geo.c_memo(a, b))));
      const Field dvs = geo.dbar_v_sq(a, b);
      const Field hv = hess.value(a, b);
      const auto mask = geo.divisor_mask(a, b, kDivisorExclusion);
      for (std::size_t k = 0; k < mask.size(); ++k) {
        if (!mask[k]) continue;
        const double lhs = -ddc.v[k].real() / g->v[k];
        const double rhs = dvs.v[k] - hv.v[k];
        st.residual = std::max(st.residual, std::abs(lhs - rhs));
        st.lhs_scale = std::max(st.lhs_scale, std::abs(lhs));
        ++st.samples;
      }
    }
  }
  return st;
}

double identity_residual_1_29(const FamilySolution& sol) {
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, LiftKind::horizontal);
  return identity_residual_1_29_stats(geo).residual;
}

IdentityStats lie_identity_residual_2_48_stats(FamilyGeometry& geo,
                                               double lambda_shift,
                                               std::size_t base_stride) {
  const BaseGrid& base = geo.base();
  const FamilyConfig& cfg = geo.config();
  const double lambda_used = cfg.lambda + lambda_shift;
  IdentityStats st;
  FGetter phi_get = [&geo](std::size_t x, std::size_t y) { return geo.phi(x, y); };
  FGetter chi_get = [&geo](std::size_t x, std::size_t y) { return geo.chi(x, y); };
  FGetter f_get = [&geo](std::size_t x, std::size_t y) { return geo.f_field(x, y); };
  for (std::size_t a = kInteriorMargin; a + kInteriorMargin < base.m_side; ++a) {
    if (a % base_stride != 0) continue;
    for (std::size_t b = kInteriorMargin; b + kInteriorMargin < base.m_side; ++b) {
      if (b % base_stride != 0) continue;
      const auto fr = geo.frame(a, b);
      const double tau2 = fr->grid.tau.imag();
      const auto e = geo.lift_e(a, b);
      const auto gphi = geo.g_coeff(a, b);
      const auto wc = geo.omega_coeff(a, b);

      const CField dzphi = dz(*geo.phi(a, b));
      CField vphi = geo.fd_Dt(phi_get, a, b);
      for (std::size_t k = 0; k < vphi.v.size(); ++k)
        vphi.v[k] += e->v[k] * dzphi.v[k];
      const CField lap_vphi = dz(dzbar(vphi));

      const CField dzbar_e = dzbar(*e);
      const cplx sf = cplx(0.0, 1.0) * fr->dtau / (2.0 * tau2);
      CField tr_arg(fr->grid, FieldKind::generic);
      for (std::size_t k = 0; k < tr_arg.v.size(); ++k)
        tr_arg.v[k] = (sf + dzbar_e.v[k]) * dzphi.v[k];
      const CField tr_num = dz(tr_arg);

      // A = coefficient pairing of the reference form with the lift:
      // e * omega_{z zbar} + B_omega (chi + shear part only)
      CField A = dzbar(geo.fd_Dt(chi_get, a, b));
      const CField dzchi = dz(*geo.chi(a, b));
      const cplx coef = cplx(0.0, -1.0) * fr->dtau / (2.0 * tau2);
      cplx shear_term{0.0, 0.0};
      if (cfg.omega.kind == OmegaRecipe::Kind::sheared)
        shear_term = -cfg.omega.shear / (2.0 * tau2);
      for (std::size_t k = 0; k < A.v.size(); ++k)
        A.v[k] += coef * dzchi.v[k] + shear_term + e->v[k] * wc->v[k];
      const CField dzA = dz(A);

      const CField dzf = dz(*geo.f_field(a, b));
      CField vf = geo.fd_Dt(f_get, a, b);
      for (std::size_t k = 0; k < vf.v.size(); ++k)
        vf.v[k] += e->v[k] * dzf.v[k];

      const auto mask = geo.divisor_mask(a, b, kDivisorExclusion);
      for (std::size_t k = 0; k < mask.size(); ++k) {
        if (!mask[k]) continue;
        const cplx res = lap_vphi.v[k] / gphi->v[k] - tr_num.v[k] / gphi->v[k] +
                         dzA.v[k] / gphi->v[k] - lambda_used * vphi.v[k] -
                         vf.v[k] - dzA.v[k] / wc->v[k];
        st.residual = std::max(st.residual, std::abs(res));
        st.vphi_scale = std::max(st.vphi_scale, std::abs(vphi.v[k]));
        ++st.samples;
      }
    }
  }
  return st;
}

double lie_identity_residual_2_48(const FamilySolution& sol, LiftKind lift) {
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, lift);
  return lie_identity_residual_2_48_stats(geo).residual;
}

IdentityStats curvature_decomposition_stats(FamilyGeometry& geo, double delta) {
  const FamilyConfig& cfg = geo.config();
  if (cfg.density.kind != DensityRecipe::Kind::conic)
    throw std::invalid_argument(
        "curvature_decomposition: conic density family required");
  if (std::abs(cfg.density.epsilon - delta) > 1e-12)
    throw std::invalid_argument(
        "curvature_decomposition: delta must match the config epsilon");
  if (cfg.lambda != 0.0)
    throw std::invalid_argument("curvature_decomposition: lambda = 0 required");
  const BaseGrid& base = geo.base();
  const std::size_t m = base.m_side;
  const double d2 = delta * delta;

  struct PointData {
    MarkedPoint p0;
    double coef;
    FamMemo<Field> h;
    FamMemo<Field> logh;
    FamMemo<CField> P;
  };
  std::vector<std::unique_ptr<PointData>> pts;
  auto add_point = [&](const MarkedPoint& p0, double coef) {
    auto pd = std::make_unique<PointData>();
    pd->p0 = p0;
    pd->coef = coef;
    pd->h = FamMemo<Field>(m, 3 * m + 4, [&geo, &cfg, p0](std::size_t a, std::size_t b) {
      const auto fr = geo.frame(a, b);
      const MarkedPoint p = cfg.moved_point(p0, fr->t);
      return theta_section_norm(p.x, p.y, fr->grid);
    });
    auto* raw = pd.get();
    pd->logh = FamMemo<Field>(m, 3 * m + 4, [raw](std::size_t a, std::size_t b) {
      Field out = *raw->h.get(a, b);
      for (double& v : out.v) v = std::log(v);
      return out;
    });
    pd->P = FamMemo<CField>(m, 3 * m + 4, [&geo, &cfg, p0](std::size_t a, std::size_t b) {
      const auto fr = geo.frame(a, b);
      const MarkedPoint p = cfg.moved_point(p0, fr->t);
      return dz_log_theta_norm(p.x, p.y, fr->grid);
    });
    pts.push_back(std::move(pd));
  };
  for (const MarkedPoint& p : cfg.density.divisor.points_E) add_point(p, p.w);
  for (const MarkedPoint& p : cfg.density.divisor.points_B) add_point(p, -p.w);

  HessVV hess(geo, [&geo](std::size_t a, std::size_t b) { return geo.psi(a, b); });
  auto C_of = [&geo](std::size_t a, std::size_t b) { return geo.frame(a, b)->C; };
  auto neglog2tau2 = [&geo](std::size_t a, std::size_t b) {
    return -std::log(2.0 * geo.frame(a, b)->grid.tau.imag());
  };

  IdentityStats st;
  for (std::size_t a = kInteriorMargin; a + kInteriorMargin < base.m_side; ++a) {
    for (std::size_t b = kInteriorMargin; b + kInteriorMargin < base.m_side; ++b) {
      const auto fr = geo.frame(a, b);
      const double tau2 = fr->grid.tau.imag();
      const Field theta_spec = hess.value(a, b);

      const double scalar_part = fd_second_scalar(base, C_of, a, b) +
                                 fd_second_scalar(base, neglog2tau2, a, b);
      Field theta_dec(fr->grid, FieldKind::generic, scalar_part);

      const auto e = geo.lift_e(a, b);
      const CField corr = geo.vz_conj_derivative(a, b);
      const CField dzbar_e = dzbar(*e);  // dz(conj e) = conj(dzbar e)

      for (auto& pd : pts) {
        const auto h = pd->h.get(a, b);
        const auto P = pd->P.get(a, b);
        FGetter logh_get = [&pd](std::size_t x, std::size_t y) {
          return pd->logh.get(x, y);
        };
        CGetter P_get = [&pd](std::size_t x, std::size_t y) {
          return pd->P.get(x, y);
        };
        FGetter h_get = [&pd](std::size_t x, std::size_t y) {
          return pd->h.get(x, y);
        };
        const Field dttbar_logh = geo.fd_DtDtbar(logh_get, a, b);
        const CField dtbar_P = geo.fd_Dtbar(P_get, a, b);
        const CField dtbar_e = geo.fd_Dtbar(
            CGetter([&geo](std::size_t x, std::size_t y) { return geo.lift_e(x, y); }),
            a, b);
        const CField dt_h = geo.fd_Dt(h_get, a, b);
        for (std::size_t k = 0; k < theta_dec.v.size(); ++k) {
          const cplx Pb = std::conj(P->v[k]);
          const cplx ek = e->v[k], ebk = std::conj(ek);
          // hess_vv(log h) with analytic z-derivatives (P = dz log h,
          // dz dzbar log h = -pi/tau2 off the divisor)
          const cplx hess_logh_c =
              std::conj(dtbar_e.v[k]) * Pb + ebk * std::conj(dtbar_P.v[k]) +
              ek * dtbar_P.v[k] + ek * std::conj(dzbar_e.v[k]) * Pb +
              ek * ebk * (-kPi / tau2) - corr.v[k] * Pb;
          const double hess_logh = dttbar_logh.v[k] + hess_logh_c.real();
          const double hk = h->v[k];
          const cplx vh = dt_h.v[k] + ek * hk * P->v[k];
          theta_dec.v[k] +=
              pd->coef * ((hk / (hk + d2)) * hess_logh +
                          d2 * std::norm(vh) / (hk * (hk + d2) * (hk + d2)));
        }
      }

      const auto mask = geo.divisor_mask(a, b, kDivisorExclusion);
      for (std::size_t k = 0; k < mask.size(); ++k) {
        if (!mask[k]) continue;
        st.residual =
            std::max(st.residual, std::abs(theta_spec.v[k] - theta_dec.v[k]));
        st.lhs_scale = std::max(st.lhs_scale, std::abs(theta_spec.v[k]));
        ++st.samples;
      }
    }
  }
  return st;
}

double curvature_decomposition_residual(const FamilySolution& sol, double delta) {
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, LiftKind::horizontal);
  return curvature_decomposition_stats(geo, delta).residual;
}

// ---------------------------------------------------------------------------
// Reports

std::vector<CField> horizontal_lift(const FamilySolution& sol) {
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, LiftKind::horizontal);
  const BaseGrid& base = sol.config.base;
  std::vector<CField> out(base.size());
  for (std::size_t a = 1; a + 1 < base.m_side; ++a)
    for (std::size_t b = 1; b + 1 < base.m_side; ++b)
      out[base.idx(a, b)] = geo.lift_vz(a, b);
  return out;
}

namespace {

// fill extrema of c, fiber coefficient and the cross-check gap over the
// margin-2, divisor-excluded region
void fill_extrema(FamilyGeometry& geo, CurvatureReport& rep, bool cross_check) {
  const BaseGrid& base = geo.base();
  bool first = true;
  rep.min_fiber_coeff = 0.0;
  rep.max_cross_check = 0.0;
  for (std::size_t a = kInteriorMargin; a + kInteriorMargin < base.m_side; ++a) {
    for (std::size_t b = kInteriorMargin; b + kInteriorMargin < base.m_side; ++b) {
      const auto fr = geo.frame(a, b);
      const auto c = geo.c_memo(a, b);
      const auto g = geo.g_coeff(a, b);
      Field cw, cp;
      if (cross_check) {
        cw = geo.c_wedge(a, b);
        cp = geo.c_pairing(a, b);
      }
      const auto mask = geo.divisor_mask(a, b, kDivisorExclusion);
      const std::size_t n = fr->grid.n_side;
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t k = fr->grid.idx(i, j);
          if (!mask[k]) continue;
          if (cross_check) {
            const double tol_gap = std::max(std::abs(cw.v[k] - c->v[k]),
                                            std::abs(cp.v[k] - c->v[k]));
            rep.max_cross_check = std::max(rep.max_cross_check, tol_gap);
            if (tol_gap > 1e-10 * (1.0 + std::abs(c->v[k])))
              throw std::runtime_error(
                  "geodesic_curvature: Schur/wedge/pairing disagreement");
          }
          const ArgLocation loc{a, b, i, j, fr->t, fr->grid.x(i), fr->grid.y(j)};
          if (first || c->v[k] < rep.min_c) {
            rep.min_c = c->v[k];
            rep.argmin_c = loc;
          }
          if (first || c->v[k] > rep.max_c) {
            rep.max_c = c->v[k];
            rep.argmax_c = loc;
          }
          if (first || g->v[k] < rep.min_fiber_coeff) rep.min_fiber_coeff = g->v[k];
          first = false;
        }
      }
    }
  }
  rep.positivity = rep.min_c >= 0.0 && rep.min_fiber_coeff > 0.0;
}

}  // namespace

CurvatureReport geodesic_curvature(const FamilySolution& sol) {
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, LiftKind::horizontal);
  const BaseGrid& base = sol.config.base;
  CurvatureReport rep;
  rep.c.resize(base.size());
  for (std::size_t a = 1; a + 1 < base.m_side; ++a)
    for (std::size_t b = 1; b + 1 < base.m_side; ++b)
      rep.c[base.idx(a, b)] = *geo.c_memo(a, b);
  fill_extrema(geo, rep, /*cross_check=*/true);
  return rep;
}

CurvatureReport dbar_v_and_theta(const FamilySolution& sol) {
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, LiftKind::horizontal);
  const BaseGrid& base = sol.config.base;
  CurvatureReport rep;
  rep.v.resize(base.size());
  rep.dbar_v_sq.resize(base.size());
  rep.theta_weight.resize(base.size());
  rep.max_dbar_v_sq = 0.0;
  for (std::size_t a = 1; a + 1 < base.m_side; ++a) {
    for (std::size_t b = 1; b + 1 < base.m_side; ++b) {
      const std::size_t k = base.idx(a, b);
      rep.v[k] = geo.lift_vz(a, b);
      rep.dbar_v_sq[k] = geo.dbar_v_sq(a, b);
      rep.theta_weight[k] = *geo.psi(a, b);
      if (base.interior(a, b, kInteriorMargin)) {
        const auto mask = geo.divisor_mask(a, b, kDivisorExclusion);
        for (std::size_t s = 0; s < mask.size(); ++s)
          if (mask[s])
            rep.max_dbar_v_sq =
                std::max(rep.max_dbar_v_sq, rep.dbar_v_sq[k].v[s]);
      }
    }
  }
  fill_extrema(geo, rep, /*cross_check=*/false);
  return rep;
}

CurvatureReport semipositivity_report(const FamilySolution& sol) {
  auto frames = std::make_shared<FamilyFrames>(sol);
  FamilyGeometry geo(frames, LiftKind::horizontal);
  CurvatureReport rep;
  fill_extrema(geo, rep, /*cross_check=*/true);
  rep.identity_residuals["identity_1_29"] =
      identity_residual_1_29_stats(geo).residual;
  return rep;
}

}  // namespace fm
