#pragma once

#include "kbavg/resonance.hpp"

namespace kbavg {

// Integrand of the averaging integral: Phi_{Lambda t} P(Phi_{-Lambda t} a).
cvec interaction_field(const Field& P, const FrequencyVector& lambda, double t,
                       const cvec& a);

// Smallest Simpson panel count meeting the step bound |T|/panels <= pi/(4 max|lambda_j|).
long min_panels(const FrequencyVector& lambda, double T);

// (1/|T|) * integral over [0,T] (or [T,0] for T < 0) of the interaction field,
// by composite Simpson with `panels` panels (2*panels sub-intervals). Panel
// evaluations may be split across threads; the weighted sum is reduced
// pairwise in a fixed order, so results are bit-identical for any thread count.
cvec partial_average(const Field& P, const FrequencyVector& lambda,
                     const cvec& a, double T, long panels, int threads = 1);

// Time average of the interaction field at a. Polynomial fields dispatch to
// resonant_part and evaluate; generic fields run partial_average with T
// doubling from T0 = 64/min|lambda_j| until successive values differ by less
// than tol in max-norm. `oversample` multiplies the baseline panel count:
// spectral content of degree-d polynomials needs roughly 2.5*(d+1).
// Fails once T exceeds max_t_factor*T0 without stabilizing.
cvec average(const Field& P, const FrequencyVector& lambda, const cvec& a,
             double tol, int threads = 1, int oversample = 12,
             double max_t_factor = 1e6);

// The averaged field as a Field: polynomials become their resonant part,
// generic fields become a closure around average() with the same witness.
Field averaged_field(const Field& P, const FrequencyVector& lambda, double tol,
                     int threads = 1);

} // namespace kbavg
