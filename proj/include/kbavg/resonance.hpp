#pragma once

#include <span>
#include <vector>

#include "kbavg/field.hpp"
#include "kbavg/frequency.hpp"

namespace kbavg {

// Componentwise rotation z_j -> e^{i w_j} z_j.
cvec rotate(std::span<const double> w, const cvec& z);
// Rotation by angle lambda_j * t per component.
cvec rotate(const FrequencyVector& lambda, double t, const cvec& z);

// Classification of one monomial in one component: defect
// lambda_j - Lambda.alpha + Lambda.beta, resonant when it vanishes
// (exactly in rational mode, within tol otherwise).
struct ResonanceReport {
    int j = 0;
    MultiIndex alpha;
    MultiIndex beta;
    double defect = 0.0;
    bool resonant = false;
};

ResonanceReport is_resonant(const FrequencyVector& lambda, int j,
                            const MultiIndex& alpha, const MultiIndex& beta,
                            double tol);

// Keeps exactly the resonant monomials of each component.
PolynomialField resonant_part(const PolynomialField& P,
                              const FrequencyVector& lambda, double tol);

// One report per monomial of P, ordered by component then canonical term order.
std::vector<ResonanceReport> resonance_table(const PolynomialField& P,
                                             const FrequencyVector& lambda,
                                             double tol);

// Certificate that no integer vector s with 0 < max|s_j| <= bound satisfies
// Lambda.s = 0 (exact in rational mode, relative 1e-12 in float mode).
struct NonresonanceCheck {
    bool nonresonant = false;
    std::vector<int> witness;   // a violating s, empty when nonresonant
    int bound = 0;
};

NonresonanceCheck is_nonresonant(const FrequencyVector& lambda, int bound);

} // namespace kbavg
