// Uniform grids on a torus fiber C/(Z + tau Z) and on a rectangle in the base
// disk.  Fiber points are stored in lattice coordinates (x, y) in [0,1)^2 with
// z = x + tau*y; the grid is periodic in both directions and its side length is
// a power of two so spectral differentiation is exact for band-limited data.

#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fm {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct TorusGrid {
  std::size_t n_side = 0;
  cplx tau{0.0, 1.0};

  TorusGrid() = default;
  TorusGrid(std::size_t n, cplx tau_) : n_side(n), tau(tau_) {
    if (!is_pow2(n) || n < 16)
      throw std::invalid_argument("TorusGrid: n_side must be a power of two >= 16");
    if (tau.imag() <= 0.0)
      throw std::invalid_argument("TorusGrid: Im(tau) must be positive");
  }

  std::size_t size() const { return n_side * n_side; }
  double x(std::size_t i) const { return double(i) / double(n_side); }
  double y(std::size_t j) const { return double(j) / double(n_side); }
  // lattice index -> point z = x + tau*y, row-major (row j = y, col i = x)
  cplx z(std::size_t i, std::size_t j) const { return cplx(x(i), 0.0) + tau * y(j); }
  std::size_t idx(std::size_t i, std::size_t j) const { return j * n_side + i; }
  // Lebesgue measure of one cell in the z-plane: the fundamental domain is a
  // parallelogram of area Im(tau).
  double cell_area() const { return tau.imag() / double(n_side * n_side); }

  bool same_layout(const TorusGrid& o) const {
    return n_side == o.n_side && tau == o.tau;
  }
};

// Distance in lattice coordinates between two points of [0,1)^2 on the torus.
inline double lattice_dist(double x0, double y0, double x1, double y1) {
  auto wrap = [](double d) {
    d = d - std::floor(d + 0.5);  // reduce to [-1/2, 1/2)
    return d;
  };
  double dx = wrap(x1 - x0), dy = wrap(y1 - y0);
  return std::sqrt(dx * dx + dy * dy);
}

// Regular m x m grid of base points t covering a rectangle centered at
// `center` with half-widths hx, hy (t = t1 + i t2).  Interior stencils are
// centered second-order finite differences in t1, t2.
struct BaseGrid {
  std::size_t m_side = 0;
  cplx center{0.0, 0.0};
  double half_x = 0.0, half_y = 0.0;

  BaseGrid() = default;
  BaseGrid(std::size_t m, cplx c, double hx, double hy)
      : m_side(m), center(c), half_x(hx), half_y(hy) {
    if (m < 3) throw std::invalid_argument("BaseGrid: m_side must be >= 3");
    if (hx <= 0 || hy <= 0) throw std::invalid_argument("BaseGrid: half-widths > 0");
  }

  std::size_t size() const { return m_side * m_side; }
  double step_x() const { return 2.0 * half_x / double(m_side - 1); }
  double step_y() const { return 2.0 * half_y / double(m_side - 1); }
  cplx t(std::size_t a, std::size_t b) const {
    return center + cplx(-half_x + double(a) * step_x(),
                         -half_y + double(b) * step_y());
  }
  std::size_t idx(std::size_t a, std::size_t b) const { return b * m_side + a; }
  // margin: number of rings excluded near the rectangle boundary (one-sided
  // stencils are never used; derived quantities are reported on the interior).
  bool interior(std::size_t a, std::size_t b, std::size_t margin) const {
    return a >= margin && b >= margin && a + margin < m_side && b + margin < m_side;
  }
};

}  // namespace fm
