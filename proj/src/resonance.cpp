#include "kbavg/resonance.hpp"

#include <cmath>
#include <stdexcept>

namespace kbavg {

cvec rotate(std::span<const double> w, const cvec& z) {
    if (w.size() != z.size()) throw std::invalid_argument("rotate: dimension mismatch");
    cvec out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        out[j] = std::polar(1.0, w[j]) * z[j];
    return out;
}

cvec rotate(const FrequencyVector& lambda, double t, const cvec& z) {
    if (static_cast<std::size_t>(lambda.dim()) != z.size())
        throw std::invalid_argument("rotate: dimension mismatch");
    cvec out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j)
        out[j] = std::polar(1.0, lambda.value(j) * t) * z[j];
    return out;
}

ResonanceReport is_resonant(const FrequencyVector& lambda, int j,
                            const MultiIndex& alpha, const MultiIndex& beta,
                            double tol) {
    if (j < 0 || j >= lambda.dim())
        throw std::invalid_argument("is_resonant: component index out of range");
    if (alpha.size() != lambda.dim() || beta.size() != lambda.dim())
        throw std::invalid_argument("is_resonant: multi-index dimension mismatch");
    if (!(tol >= 0.0)) throw std::invalid_argument("is_resonant: tolerance must be >= 0");

    ResonanceReport rep;
    rep.j = j;
    rep.alpha = alpha;
    rep.beta = beta;
    if (lambda.exact()) {
        Rational d = lambda.rationals()[j] - lambda.exact_dot(alpha) + lambda.exact_dot(beta);
        rep.defect = rational_value(d);
        rep.resonant = (d == Rational(0));
    } else {
        rep.defect = lambda.value(j) - lambda.dot(alpha) + lambda.dot(beta);
        rep.resonant = std::abs(rep.defect) <= tol;
    }
    return rep;
}

PolynomialField resonant_part(const PolynomialField& P,
                              const FrequencyVector& lambda, double tol) {
    if (P.dim() != lambda.dim())
        throw std::invalid_argument("resonant_part: dimension mismatch");
    std::vector<Polynomial> comps;
    comps.reserve(P.dim());
    for (int j = 0; j < P.dim(); ++j) {
        std::vector<Monomial> kept;
        for (const auto& m : P.component(j).terms())
            if (is_resonant(lambda, j, m.alpha, m.beta, tol).resonant)
                kept.push_back(m);
        comps.emplace_back(P.dim(), std::move(kept));
    }
    return PolynomialField(P.dim(), std::move(comps));
}

std::vector<ResonanceReport> resonance_table(const PolynomialField& P,
                                             const FrequencyVector& lambda,
                                             double tol) {
    if (P.dim() != lambda.dim())
        throw std::invalid_argument("resonance_table: dimension mismatch");
    std::vector<ResonanceReport> rows;
    for (int j = 0; j < P.dim(); ++j)
        for (const auto& m : P.component(j).terms())
            rows.push_back(is_resonant(lambda, j, m.alpha, m.beta, tol));
    return rows;
}

NonresonanceCheck is_nonresonant(const FrequencyVector& lambda, int bound) {
    if (bound < 1) throw std::invalid_argument("is_nonresonant: bound must be >= 1");
    const int n = lambda.dim();
    NonresonanceCheck res;
    res.bound = bound;

    std::vector<int> s(n, -bound);
    auto advance = [&]() -> bool {
        for (int i = n - 1; i >= 0; --i) {
            if (s[i] < bound) {
                ++s[i];
                for (int k = i + 1; k < n; ++k) s[k] = -bound;
                return true;
            }
        }
        return false;
    };

    // Only s with a positive leading nonzero entry: s and -s are equivalent.
    do {
        int lead = 0;
        while (lead < n && s[lead] == 0) ++lead;
        if (lead == n || s[lead] < 0) continue;
        bool zero;
        if (lambda.exact()) {
            Rational acc(0);
            for (int i = 0; i < n; ++i) acc += lambda.rationals()[i] * Rational(s[i]);
            zero = (acc == Rational(0));
        } else {
            double acc = 0.0, scale = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += lambda.value(i) * s[i];
                scale += std::abs(lambda.value(i) * s[i]);
            }
            zero = std::abs(acc) <= 1e-12 * scale;
        }
        if (zero) {
            res.nonresonant = false;
            res.witness = s;
            return res;
        }
    } while (advance());

    res.nonresonant = true;
    return res;
}

} // namespace kbavg
