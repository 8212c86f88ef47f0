#pragma once

#include "kbavg/dynamics.hpp"

namespace kbavg {

// Real-valued polynomial Hamiltonian sum m_{ab} z^a conj(z)^b with the
// Hermitian symmetry m_{ab} = conj(m_{ba}). Construction validates the
// symmetry (1e-12 relative) and then enforces it exactly, so evaluation is
// real up to rounding.
class HamiltonianPoly {
public:
    HamiltonianPoly(int dim, std::vector<Monomial> terms);
    explicit HamiltonianPoly(const Polynomial& p);

    int dim() const { return poly_.dim(); }
    const Polynomial& poly() const { return poly_; }
    double eval_real(const cvec& z) const;

    bool operator==(const HamiltonianPoly&) const = default;

private:
    Polynomial poly_;
};

// The vector field P_j = 2i * dh/dconj(z_j).
PolynomialField hamiltonian_field(const HamiltonianPoly& h);

// Keeps the terms with Lambda.alpha = Lambda.beta (exact in rational mode,
// within tol otherwise). Generates the averaged field.
HamiltonianPoly averaged_hamiltonian(const HamiltonianPoly& h,
                                     const FrequencyVector& lambda, double tol);

// Coefficient-level comparison of field-of-averaged-Hamiltonian against
// resonant-part-of-Hamiltonian-field. These agree identically; the report
// records the worst coefficient discrepancy actually observed.
struct HamEffReport {
    double max_discrepancy = 0.0;
    bool ok = false;
};

HamEffReport check_ham_eff(const HamiltonianPoly& h,
                           const FrequencyVector& lambda, double tol);

// Action-angle coordinates I_j = |z_j|^2 / 2, phi_j = arg z_j in (-pi, pi]
// (0 at the origin).
struct ActionAngle {
    std::vector<double> actions;
    std::vector<double> angles;
};

ActionAngle to_action_angle(const cvec& z);
cvec from_action_angle(const ActionAngle& aa);

// Per-component worst deviation of |z_j|^2 from its initial value.
std::vector<double> action_drift(const Trajectory& traj);

// Small-solution rescaling z = eps*w for a Hamiltonian whose field vanishes
// to order m >= 2 (every field monomial has degree >= m). The w-problem has
// perturbation parameter eps^(m-1) and field eps^(-m) * P(eps*w), i.e. each
// degree-d coefficient picks up eps^(d-m).
SimulationProblem rescale_small(const HamiltonianPoly& h,
                                const FrequencyVector& lambda, int m,
                                double eps, const cvec& w0);

} // namespace kbavg
