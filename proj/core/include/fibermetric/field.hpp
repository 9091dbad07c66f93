// Field: scalar sample array on a TorusGrid, real or complex valued, with a
// semantic kind tag.  Row-major storage, row index = y, column index = x.

#pragma once

#include <string>
#include <vector>

#include "fibermetric/grid.hpp"

namespace fm {

enum class FieldKind : unsigned char {
  potential = 0,
  density = 1,
  metric_coeff = 2,
  generic = 3,
};

std::string kind_name(FieldKind k);
FieldKind kind_from_name(const std::string& s);

struct Field {
  TorusGrid grid;
  FieldKind kind = FieldKind::generic;
  std::vector<double> v;

  Field() = default;
  Field(const TorusGrid& g, FieldKind k = FieldKind::generic, double fill = 0.0)
      : grid(g), kind(k), v(g.size(), fill) {}

  double& at(std::size_t i, std::size_t j) { return v[grid.idx(i, j)]; }
  double at(std::size_t i, std::size_t j) const { return v[grid.idx(i, j)]; }
  std::size_t n() const { return grid.n_side; }
};

struct CField {
  TorusGrid grid;
  FieldKind kind = FieldKind::generic;
  std::vector<cplx> v;

  CField() = default;
  CField(const TorusGrid& g, FieldKind k = FieldKind::generic, cplx fill = {})
      : grid(g), kind(k), v(g.size(), fill) {}

  cplx& at(std::size_t i, std::size_t j) { return v[grid.idx(i, j)]; }
  cplx at(std::size_t i, std::size_t j) const { return v[grid.idx(i, j)]; }
  std::size_t n() const { return grid.n_side; }
};

// Deterministic (sequential, fixed-order) reductions.
double field_min(const Field& f);
double field_max(const Field& f);
double field_sum(const Field& f);
double field_max_abs(const Field& f);
double cfield_max_abs(const CField& f);
double field_mean(const Field& f);

// \int f * weight dLebesgue over the fundamental domain.  With f = weight = 1
// and tau = i this is 1 (the area of the fundamental domain is Im tau).
double fiber_integral(const Field& f, const Field& weight);
double fiber_integral(const Field& f);

Field to_real(const CField& f);          // drops imaginary parts
CField to_complex(const Field& f);

}  // namespace fm
