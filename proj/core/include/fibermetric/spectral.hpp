// Spectral calculus on a TorusGrid.  In lattice coordinates the Fourier mode
// e^{2 pi i (j x + k y)} is holomorphically differentiated by the exact
// multipliers
//     d/dz    ->  pi (k - j conj(tau)) / Im(tau)
//     d/dzbar ->  pi (j tau - k)       / Im(tau)
// whose product recovers the flat Laplacian symbol
//     Delta   -> -4 pi^2 |k - j tau|^2 / Im(tau)^2.
// All operators are diagonal in the same basis, so compositions are exact up
// to roundoff; this is what the identity cross-checks rely on.

#pragma once

#include "fibermetric/field.hpp"

namespace fm {

// signed frequency in [-n/2, n/2) from an array index in [0, n)
inline long signed_freq(std::size_t idx, std::size_t n) {
  return idx < n / 2 ? long(idx) : long(idx) - long(n);
}

cplx mult_dz(const TorusGrid& g, long j, long k);
cplx mult_dzbar(const TorusGrid& g, long j, long k);
double mult_laplacian(const TorusGrid& g, long j, long k);

CField dz(const CField& f);
CField dzbar(const CField& f);
CField dz(const Field& f);
CField dzbar(const Field& f);

Field laplacian(const Field& f);

// Mean-zero solution of Delta phi = source.  The source must be (numerically)
// mean-free; `compat_tol` bounds |mean(source)| relative to max|source|.
Field poisson_solve(const Field& source, double compat_tol = 1e-8);

// (-Delta/2 + cbar)^{-1} f, cbar > 0.  Used as the CG preconditioner in the
// semilinear solver.
Field invert_shifted(const Field& f, double cbar);

// Zero all modes with max(|j|,|k|) > cutoff (band-limiting for samplers).
Field band_limit(const Field& f, std::size_t cutoff);

}  // namespace fm
