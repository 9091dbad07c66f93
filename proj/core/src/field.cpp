#include "fibermetric/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fm {

std::string kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::potential: return "potential";
    case FieldKind::density: return "density";
    case FieldKind::metric_coeff: return "metric_coeff";
    case FieldKind::generic: return "generic";
  }
  return "generic";
}

FieldKind kind_from_name(const std::string& s) {
  if (s == "potential") return FieldKind::potential;
  if (s == "density") return FieldKind::density;
  if (s == "metric_coeff") return FieldKind::metric_coeff;
  if (s == "generic") return FieldKind::generic;
  throw std::invalid_argument("unknown field kind: " + s);
}

double field_min(const Field& f) {
  double m = f.v[0];
  for (double x : f.v) m = std::min(m, x);
  return m;
}

double field_max(const Field& f) {
  double m = f.v[0];
  for (double x : f.v) m = std::max(m, x);
  return m;
}

double field_sum(const Field& f) {
  double s = 0.0;
  for (double x : f.v) s += x;
  return s;
}

double field_max_abs(const Field& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double cfield_max_abs(const CField& f) {
  double m = 0.0;
  for (const cplx& x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double field_mean(const Field& f) { return field_sum(f) / double(f.v.size()); }

double fiber_integral(const Field& f, const Field& weight) {
  if (!f.grid.same_layout(weight.grid))
    throw std::invalid_argument("fiber_integral: grid mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < f.v.size(); ++k) s += f.v[k] * weight.v[k];
  return s * f.grid.cell_area();
}

double fiber_integral(const Field& f) {
  return field_sum(f) * f.grid.cell_area();
}

Field to_real(const CField& f) {
  Field out(f.grid, f.kind);
  for (std::size_t k = 0; k < f.v.size(); ++k) out.v[k] = f.v[k].real();
  return out;
}

CField to_complex(const Field& f) {
  CField out(f.grid, f.kind);
  for (std::size_t k = 0; k < f.v.size(); ++k) out.v[k] = f.v[k];
  return out;
}

}  // namespace fm
