#include "fibermetric/sobolev.hpp"

#include <cmath>
#include <stdexcept>

#include "fibermetric/spectral.hpp"
#include "fibermetric/theta.hpp"

namespace fm {

namespace {

Field flat_background(const TorusGrid& g) {
  return Field(g, FieldKind::density, 1.0 / g.tau.imag());
}

double integral_pow(const Field& f, double s, const Field& mu) {
  double acc = 0.0;
  for (std::size_t k = 0; k < f.v.size(); ++k)
    acc += std::pow(std::abs(f.v[k]), s) * mu.v[k];
  return acc * f.grid.cell_area();
}

}  // namespace

Field sobolev_measure_q(const TorusGrid& g, const MarkedDivisor& div, double eps) {
  RegularizedDensity d;
  d.divisor = div;
  d.epsilon = eps;
  d.background = flat_background(g);
  return evaluate_density(d, g);
}

Field sobolev_measure_qp(const TorusGrid& g, const MarkedDivisor& div, double eps,
                         double p) {
  RegularizedDensity d;
  d.divisor = div;
  d.epsilon = eps;
  d.background = flat_background(g);
  d.q.resize(div.points_E.size());
  for (std::size_t a = 0; a < div.points_E.size(); ++a)
    d.q[a] = (1.0 - p / 2.0) * div.points_E[a].w;
  return evaluate_density(d, g);
}

Field conic_model_density(const TorusGrid& g, const MarkedDivisor& div, double eps) {
  Field out = flat_background(g);
  const double e2 = eps * eps;
  for (const auto& pt : div.points_B) {
    const Field h = theta_section_norm(pt.x, pt.y, g);
    for (std::size_t k = 0; k < out.v.size(); ++k)
      out.v[k] *= std::pow(e2 + h.v[k], -pt.w);
  }
  return out;
}

Field model_gradient_norm(const Field& f, const MarkedDivisor& div, double eps) {
  const CField fz = dz(f);
  const Field m = conic_model_density(f.grid, div, eps);
  Field out(f.grid, FieldKind::generic);
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] = 2.0 * std::abs(fz.v[k]) / std::sqrt(m.v[k]);
  return out;
}

double volume_mean(const Field& f, const Field& mu_q) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < f.v.size(); ++k) {
    num += f.v[k] * mu_q.v[k];
    den += mu_q.v[k];
  }
  return num / den;
}

double sobolev_ratio_of(const Field& f, const MarkedDivisor& div, double p,
                        double eps) {
  if (!(p >= 1.0 && p < 2.0))
    throw std::invalid_argument("sobolev_ratio: require 1 <= p < 2");
  const TorusGrid& g = f.grid;
  const Field mu_q = sobolev_measure_q(g, div, eps);
  const Field mu_qp = sobolev_measure_qp(g, div, eps, p);
  const Field grad = model_gradient_norm(f, div, eps);
  const double s = 2.0 * p / (2.0 - p);  // Sobolev exponent at n = 1
  const double lhs = std::pow(integral_pow(f, s, mu_q), (2.0 - p) / (2.0 * p));
  const double rhs = std::pow(
      integral_pow(grad, p, mu_qp) + integral_pow(f, p, mu_qp), 1.0 / p);
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

double poincare_ratio_of(const Field& f, const MarkedDivisor& div, double p,
                         double eps) {
  if (!(p >= 1.0)) throw std::invalid_argument("poincare_ratio: require p >= 1");
  const TorusGrid& g = f.grid;
  const Field mu_q = sobolev_measure_q(g, div, eps);
  const Field mu_qp = sobolev_measure_qp(g, div, eps, p);
  const Field grad = model_gradient_norm(f, div, eps);
  Field centered = f;
  const double vm = volume_mean(f, mu_q);
  for (double& x : centered.v) x -= vm;
  const double num = integral_pow(centered, p, mu_q);
  const double den = integral_pow(grad, p, mu_qp);
  return den > 0.0 ? num / den : 0.0;
}

Field sample_test_function(const TorusGrid& g, const MarkedDivisor& div,
                           std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // band-limited synthesis: white noise cut at n/8
  Field f(g, FieldKind::generic);
  for (double& x : f.v) x = gauss(rng);
  f = band_limit(f, std::max<std::size_t>(2, g.n_side / 8));
  const double base_amp = field_max_abs(f);
  if (base_amp > 0.0)
    for (double& x : f.v) x /= base_amp;

  // bump atoms near each marked point
  auto add_atoms = [&](const MarkedPoint& pt) {
    for (const double dist : {0.05, 0.1, 0.3}) {
      const double ang = 2.0 * kPi * unif(rng);
      const double cx = pt.x + dist * std::cos(ang);
      const double cy = pt.y + dist * std::sin(ang);
      const double w = 0.02 + 0.06 * unif(rng);
      const double amp = 2.0 * unif(rng) - 1.0;
      for (std::size_t j = 0; j < g.n_side; ++j)
        for (std::size_t i = 0; i < g.n_side; ++i) {
          const double h =
              theta_norm_offset(g.x(i) - cx, g.y(j) - cy, g.tau);
          f.at(i, j) += amp * std::exp(-h / (w * w));
        }
    }
  };
  for (const auto& pt : div.points_E) add_atoms(pt);
  for (const auto& pt : div.points_B) add_atoms(pt);
  return f;
}

namespace {

double max_ratio(const TorusGrid& g, const MarkedDivisor& div, double p,
                 double eps, int n_samples, std::uint64_t seed,
                 double (*ratio_of)(const Field&, const MarkedDivisor&, double,
                                    double)) {
  if (n_samples < 1) throw std::invalid_argument("ratio: n_samples >= 1");
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const Field f = sample_test_function(g, div, rng);
    best = std::max(best, ratio_of(f, div, p, eps));
  }
  return best;
}

}  // namespace

double sobolev_ratio(const TorusGrid& g, const MarkedDivisor& div, double p,
                     double eps, int n_samples, std::uint64_t seed) {
  return max_ratio(g, div, p, eps, n_samples, seed, &sobolev_ratio_of);
}

double poincare_ratio(const TorusGrid& g, const MarkedDivisor& div, double p,
                      double eps, int n_samples, std::uint64_t seed) {
  return max_ratio(g, div, p, eps, n_samples, seed, &poincare_ratio_of);
}

}  // namespace fm
