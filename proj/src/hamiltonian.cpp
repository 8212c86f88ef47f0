#include "kbavg/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace kbavg {

namespace {

// Validates m_{ab} = conj(m_{ba}) within 1e-12 relative, then replaces each
// pair by its Hermitian part so the symmetry holds exactly.
Polynomial symmetrized(const Polynomial& p) {
    std::map<std::pair<MultiIndex, MultiIndex>, cplx> coeff;
    for (const auto& m : p.terms()) coeff[{m.alpha, m.beta}] = m.coeff;

    std::vector<Monomial> out;
    out.reserve(p.terms().size());
    for (const auto& m : p.terms()) {
        auto it = coeff.find({m.beta, m.alpha});
        cplx mirror = (it == coeff.end()) ? cplx{0.0, 0.0} : it->second;
        if (std::abs(m.coeff - std::conj(mirror)) > 1e-12 * (1.0 + std::abs(m.coeff)))
            throw std::invalid_argument(
                "hamiltonian coefficients must satisfy m[a,b] = conj(m[b,a])");
        out.push_back({m.alpha, m.beta, 0.5 * (m.coeff + std::conj(mirror))});
    }
    return Polynomial(p.dim(), std::move(out));
}

} // namespace

HamiltonianPoly::HamiltonianPoly(int dim, std::vector<Monomial> terms)
    : poly_(symmetrized(Polynomial(dim, std::move(terms)))) {}

HamiltonianPoly::HamiltonianPoly(const Polynomial& p) : poly_(symmetrized(p)) {}

double HamiltonianPoly::eval_real(const cvec& z) const {
    return poly_.eval(z).real();
}

PolynomialField hamiltonian_field(const HamiltonianPoly& h) {
    const int n = h.dim();
    std::vector<Polynomial> comps;
    comps.reserve(n);
    for (int j = 0; j < n; ++j)
        comps.push_back(h.poly().dzbar(j).scaled(cplx{0.0, 2.0}));
    return PolynomialField(n, std::move(comps));
}

HamiltonianPoly averaged_hamiltonian(const HamiltonianPoly& h,
                                     const FrequencyVector& lambda, double tol) {
    if (h.dim() != lambda.dim())
        throw std::invalid_argument("averaged_hamiltonian: dimension mismatch");
    if (!(tol >= 0.0)) throw std::invalid_argument("averaged_hamiltonian: bad tolerance");
    std::vector<Monomial> kept;
    for (const auto& m : h.poly().terms()) {
        bool keep;
        if (lambda.exact()) {
            keep = lambda.exact_dot(m.alpha) == lambda.exact_dot(m.beta);
        } else {
            keep = std::abs(lambda.dot(m.alpha) - lambda.dot(m.beta)) <= tol;
        }
        if (keep) kept.push_back(m);
    }
    return HamiltonianPoly(h.dim(), std::move(kept));
}

HamEffReport check_ham_eff(const HamiltonianPoly& h,
                           const FrequencyVector& lambda, double tol) {
    PolynomialField lhs = hamiltonian_field(averaged_hamiltonian(h, lambda, tol));
    PolynomialField rhs = resonant_part(hamiltonian_field(h), lambda, tol);

    HamEffReport rep;
    for (int j = 0; j < h.dim(); ++j) {
        std::map<std::pair<MultiIndex, MultiIndex>, cplx> diff;
        for (const auto& m : lhs.component(j).terms()) diff[{m.alpha, m.beta}] += m.coeff;
        for (const auto& m : rhs.component(j).terms()) diff[{m.alpha, m.beta}] -= m.coeff;
        for (const auto& [key, c] : diff)
            rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(c));
    }
    rep.ok = rep.max_discrepancy <= 1e-12;
    return rep;
}

ActionAngle to_action_angle(const cvec& z) {
    ActionAngle aa;
    aa.actions.reserve(z.size());
    aa.angles.reserve(z.size());
    for (const auto& c : z) {
        aa.actions.push_back(0.5 * std::norm(c));
        double phi = (c == cplx{0.0, 0.0}) ? 0.0 : std::arg(c);
        if (phi <= -std::numbers::pi) phi = std::numbers::pi;   // convention (-pi, pi]
        aa.angles.push_back(phi);
    }
    return aa;
}

cvec from_action_angle(const ActionAngle& aa) {
    if (aa.actions.size() != aa.angles.size())
        throw std::invalid_argument("from_action_angle: size mismatch");
    cvec z(aa.actions.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (!(aa.actions[j] >= 0.0))
            throw std::invalid_argument("from_action_angle: actions must be >= 0");
        z[j] = std::polar(std::sqrt(2.0 * aa.actions[j]), aa.angles[j]);
    }
    return z;
}

std::vector<double> action_drift(const Trajectory& traj) {
    if (traj.states.empty()) throw std::invalid_argument("action_drift: empty trajectory");
    std::vector<double> drift(traj.dim, 0.0);
    for (int j = 0; j < traj.dim; ++j) {
        double i0 = std::norm(traj.states.front()[j]);
        for (const auto& st : traj.states)
            drift[j] = std::max(drift[j], std::abs(std::norm(st[j]) - i0));
    }
    return drift;
}

SimulationProblem rescale_small(const HamiltonianPoly& h,
                                const FrequencyVector& lambda, int m,
                                double eps, const cvec& w0) {
    if (m < 2)
        throw std::invalid_argument("rescale_small: vanishing order must be >= 2");
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("rescale_small: epsilon must lie in (0,1]");

    PolynomialField P = hamiltonian_field(h);
    std::vector<Polynomial> comps;
    comps.reserve(P.dim());
    for (const auto& comp : P.components()) {
        std::vector<Monomial> terms;
        terms.reserve(comp.terms().size());
        for (const auto& mono : comp.terms()) {
            if (mono.degree() < m)
                throw std::invalid_argument(
                    "rescale_small: field has a monomial of degree below the stated order");
            terms.push_back({mono.alpha, mono.beta,
                             mono.coeff * std::pow(eps, mono.degree() - m)});
        }
        comps.emplace_back(P.dim(), std::move(terms));
    }
    PolynomialField scaled(P.dim(), std::move(comps));
    return make_problem(scaled, lambda, std::pow(eps, m - 1), w0);
}

} // namespace kbavg
