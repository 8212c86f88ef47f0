#include "kbavg/field.hpp"

#include <stdexcept>

namespace kbavg {

int field_dim(const Field& f) {
    if (const auto* p = std::get_if<PolynomialField>(&f)) return p->dim();
    return std::get<GenericField>(f).dim;
}

cvec field_eval(const Field& f, const cvec& z) {
    if (const auto* p = std::get_if<PolynomialField>(&f)) return p->eval(z);
    const auto& g = std::get<GenericField>(f);
    if (static_cast<int>(z.size()) != g.dim)
        throw std::invalid_argument("eval: point dimension mismatch");
    return g.eval(z);
}

double field_chi(const Field& f, double R) {
    if (const auto* p = std::get_if<PolynomialField>(&f)) return lipschitz_estimate(*p, R);
    const auto& g = std::get<GenericField>(f);
    if (!g.witness.chi) throw std::invalid_argument("generic field is missing its witness");
    return g.witness.chi(R);
}

bool field_is_polynomial(const Field& f) {
    return std::holds_alternative<PolynomialField>(f);
}

const PolynomialField& field_poly(const Field& f) {
    if (const auto* p = std::get_if<PolynomialField>(&f)) return *p;
    throw std::invalid_argument("field is not polynomial");
}

GenericField as_generic(const PolynomialField& P) {
    return GenericField{
        P.dim(),
        [P](const cvec& z) { return P.eval(z); },
        LipschitzWitness{[P](double R) { return lipschitz_estimate(P, R); }},
    };
}

} // namespace kbavg
