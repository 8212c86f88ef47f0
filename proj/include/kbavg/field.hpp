#pragma once

#include <functional>
#include <variant>

#include "kbavg/polynomial.hpp"

namespace kbavg {

// chi(R) bounds both sup|f| and Lip(f) on the closed ball of radius R.
// chi must be non-decreasing; callers may spot-check with sampling.
struct LipschitzWitness {
    std::function<double(double)> chi;
};

// Black-box vector field with a caller-supplied Lipschitz witness.
// eval must be total on C^n: any finite input yields a finite value.
struct GenericField {
    int dim = 0;
    std::function<cvec(const cvec&)> eval;
    LipschitzWitness witness;
};

using Field = std::variant<PolynomialField, GenericField>;

int field_dim(const Field& f);
cvec field_eval(const Field& f, const cvec& z);
double field_chi(const Field& f, double R);   // witness, or lipschitz_estimate
bool field_is_polynomial(const Field& f);
const PolynomialField& field_poly(const Field& f);   // throws if generic

// Wraps a polynomial field as a GenericField whose witness is the
// coefficient-based estimate. Mostly useful for exercising generic paths.
GenericField as_generic(const PolynomialField& P);

} // namespace kbavg
