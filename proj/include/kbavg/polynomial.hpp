#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "kbavg/types.hpp"

namespace kbavg {

// Exponent vector of a monomial z^alpha. Entries are non-negative ints.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exps);
    static MultiIndex zero(int dim);
    static MultiIndex unit(int dim, int j);

    int size() const { return static_cast<int>(exps_.size()); }
    int operator[](int i) const { return exps_[i]; }
    const std::vector<int>& exponents() const { return exps_; }
    int order() const;                 // |alpha| = sum of entries
    MultiIndex lowered(int j) const;   // alpha - e_j; requires alpha[j] > 0
    MultiIndex raised(int j) const;    // alpha + e_j
    std::string str() const;           // "2 0 1"

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

private:
    std::vector<int> exps_;
};

// One term C * z^alpha * conj(z)^beta.
struct Monomial {
    MultiIndex alpha;
    MultiIndex beta;
    cplx coeff{};

    int degree() const { return alpha.order() + beta.order(); }

    bool operator==(const Monomial&) const = default;
};

// Scalar polynomial in z and conj(z), kept in canonical form: terms sorted
// lexicographically on the concatenated (alpha, beta) exponents, like terms
// combined, coefficients below the pruning threshold dropped.
class Polynomial {
public:
    // Magnitudes at or below this are treated as zero after arithmetic.
    static constexpr double kCoeffPrune = 1e-14;

    explicit Polynomial(int dim);
    Polynomial(int dim, std::vector<Monomial> terms);

    int dim() const { return dim_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    int degree() const;       // max |alpha|+|beta| over terms, 0 if empty
    int min_degree() const;   // min |alpha|+|beta| over terms, 0 if empty

    cplx eval(std::span<const cplx> z) const;

    Polynomial dz(int j) const;      // Wirtinger d/dz_j
    Polynomial dzbar(int j) const;   // Wirtinger d/dconj(z_j)
    Polynomial conjugated() const;   // coefficients conjugated, alpha<->beta
    Polynomial scaled(cplx c) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    bool operator==(const Polynomial&) const = default;

private:
    int dim_ = 0;
    std::vector<Monomial> terms_;

    void normalize();
};

// Polynomial vector field: one scalar polynomial per component.
class PolynomialField {
public:
    PolynomialField() = default;         // zero field in dimension 0
    explicit PolynomialField(int dim);   // zero field
    PolynomialField(int dim, std::vector<Polynomial> components);

    int dim() const { return dim_; }
    const Polynomial& component(int j) const;
    const std::vector<Polynomial>& components() const { return comps_; }
    int degree() const;
    int min_degree() const;
    bool empty() const;

    cvec eval(const cvec& z) const;

    bool operator==(const PolynomialField&) const = default;

private:
    int dim_ = 0;
    std::vector<Polynomial> comps_;
};

// Upper bound for both sup|P| and the Lipschitz constant of P on the closed
// ball of radius R, from coefficient magnitudes.
double lipschitz_estimate(const PolynomialField& P, double R);

} // namespace kbavg
