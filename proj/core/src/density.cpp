#include "fibermetric/density.hpp"

#include <cmath>
#include <stdexcept>

#include "fibermetric/theta.hpp"

namespace fm {

void MarkedDivisor::validate() const {
  for (const auto& p : points_E)
    if (p.w < 0.0) throw std::invalid_argument("MarkedDivisor: e must be >= 0");
  for (const auto& p : points_B)
    if (p.w < 0.0 || p.w >= 1.0)
      throw std::invalid_argument("MarkedDivisor: b must lie in [0,1)");
  // pairwise distinct modulo the lattice, and no E/B overlap
  std::vector<MarkedPoint> all = points_E;
  all.insert(all.end(), points_B.begin(), points_B.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (lattice_dist(all[i].x, all[i].y, all[j].x, all[j].y) < 1e-12)
        throw std::invalid_argument("MarkedDivisor: marked points must be distinct");
}

void RegularizedDensity::validate() const {
  divisor.validate();
  if (epsilon < 0.0) throw std::invalid_argument("RegularizedDensity: epsilon < 0");
  if (epsilon == 0.0)
    for (const auto& p : divisor.points_B)
      if (p.w >= 1.0) throw std::invalid_argument("non-integrable cone");
  if (!q.empty() && q.size() != divisor.points_E.size())
    throw std::invalid_argument("RegularizedDensity: q size mismatch");
}

std::vector<double> RegularizedDensity::effective_q() const {
  if (!q.empty()) return q;
  std::vector<double> out;
  out.reserve(divisor.points_E.size());
  for (const auto& p : divisor.points_E) out.push_back(p.w);
  return out;
}

Field evaluate_density(const RegularizedDensity& d, const TorusGrid& grid) {
  d.validate();
  Field out(grid, FieldKind::density, 1.0);
  if (!d.background.v.empty()) {
    if (!d.background.grid.same_layout(grid))
      throw std::invalid_argument("evaluate_density: background grid mismatch");
    out.v = d.background.v;
    out.kind = FieldKind::density;
  }
  const double e2 = d.epsilon * d.epsilon;
  const std::vector<double> qs = d.effective_q();
  for (std::size_t a = 0; a < d.divisor.points_E.size(); ++a) {
    const Field h = theta_section_norm(d.divisor.points_E[a].x,
                                       d.divisor.points_E[a].y, grid);
    const double qa = qs[a];
    for (std::size_t k = 0; k < out.v.size(); ++k)
      out.v[k] *= std::pow(e2 + h.v[k], qa);
  }
  for (const auto& p : d.divisor.points_B) {
    const Field h = theta_section_norm(p.x, p.y, grid);
    // At eps = 0 a marked point sitting exactly on a grid node would make the
    // sample infinite even though the density is integrable; substitute the
    // half-cell-offset value there (the natural cell-scale regularization).
    const double h_floor =
        e2 == 0.0 ? theta_norm_offset(0.5 / double(grid.n_side),
                                      0.5 / double(grid.n_side), grid.tau)
                  : 0.0;
    for (std::size_t k = 0; k < out.v.size(); ++k) {
      const double hk = (e2 == 0.0 && h.v[k] == 0.0) ? h_floor : h.v[k];
      out.v[k] *= std::pow(e2 + hk, -p.w);
    }
  }
  for (double x : out.v)
    if (!std::isfinite(x)) throw std::runtime_error("evaluate_density: non-finite sample");
  return out;
}

double normalization_constant(const RegularizedDensity& d, const TorusGrid& grid) {
  const double mass = fiber_integral(evaluate_density(d, grid));
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw std::runtime_error("normalization_constant: degenerate density mass");
  return -std::log(mass);
}

double divisor_distance(const MarkedDivisor& d, double x, double y) {
  double best = 1e30;
  for (const auto& p : d.points_E)
    best = std::min(best, lattice_dist(p.x, p.y, x, y));
  for (const auto& p : d.points_B)
    best = std::min(best, lattice_dist(p.x, p.y, x, y));
  return best;
}

}  // namespace fm
