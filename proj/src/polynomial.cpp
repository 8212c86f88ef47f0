#include "kbavg/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kbavg {

namespace {

cplx ipow(cplx base, int e) {
    cplx r{1.0, 0.0};
    for (int k = 0; k < e; ++k) r *= base;
    return r;
}

void require_dim(int dim) {
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
}

} // namespace

MultiIndex::MultiIndex(std::vector<int> exps) : exps_(std::move(exps)) {
    for (int e : exps_)
        if (e < 0) throw std::invalid_argument("multi-index entries must be non-negative");
}

MultiIndex MultiIndex::zero(int dim) {
    require_dim(dim);
    return MultiIndex(std::vector<int>(dim, 0));
}

MultiIndex MultiIndex::unit(int dim, int j) {
    require_dim(dim);
    if (j < 0 || j >= dim) throw std::invalid_argument("unit index out of range");
    std::vector<int> e(dim, 0);
    e[j] = 1;
    return MultiIndex(std::move(e));
}

int MultiIndex::order() const {
    int s = 0;
    for (int e : exps_) s += e;
    return s;
}

MultiIndex MultiIndex::lowered(int j) const {
    if (j < 0 || j >= size() || exps_[j] == 0)
        throw std::invalid_argument("cannot lower a zero exponent");
    std::vector<int> e = exps_;
    --e[j];
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::raised(int j) const {
    if (j < 0 || j >= size()) throw std::invalid_argument("raise index out of range");
    std::vector<int> e = exps_;
    ++e[j];
    return MultiIndex(std::move(e));
}

std::string MultiIndex::str() const {
    std::string s;
    for (int i = 0; i < size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(exps_[i]);
    }
    return s;
}

Polynomial::Polynomial(int dim) : dim_(dim) { require_dim(dim); }

Polynomial::Polynomial(int dim, std::vector<Monomial> terms)
    : dim_(dim), terms_(std::move(terms)) {
    require_dim(dim);
    normalize();
}

void Polynomial::normalize() {
    for (const auto& m : terms_) {
        if (m.alpha.size() != dim_ || m.beta.size() != dim_)
            throw std::invalid_argument("monomial multi-index dimension mismatch");
        if (!std::isfinite(m.coeff.real()) || !std::isfinite(m.coeff.imag()))
            throw std::invalid_argument("monomial coefficient must be finite");
    }
    std::sort(terms_.begin(), terms_.end(), [](const Monomial& a, const Monomial& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return a.beta < b.beta;
    });
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& m : terms_) {
        if (!out.empty() && out.back().alpha == m.alpha && out.back().beta == m.beta)
            out.back().coeff += m.coeff;
        else
            out.push_back(m);
    }
    std::erase_if(out, [](const Monomial& m) { return std::abs(m.coeff) < kCoeffPrune; });
    terms_ = std::move(out);
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& m : terms_) d = std::max(d, m.degree());
    return d;
}

int Polynomial::min_degree() const {
    if (terms_.empty()) return 0;
    int d = terms_.front().degree();
    for (const auto& m : terms_) d = std::min(d, m.degree());
    return d;
}

cplx Polynomial::eval(std::span<const cplx> z) const {
    if (static_cast<int>(z.size()) != dim_)
        throw std::invalid_argument("eval: point dimension mismatch");
    cplx acc{0.0, 0.0};
    for (const auto& m : terms_) {
        cplx t = m.coeff;
        for (int i = 0; i < dim_; ++i) {
            if (int a = m.alpha[i]; a > 0) t *= ipow(z[i], a);
            if (int b = m.beta[i]; b > 0) t *= ipow(std::conj(z[i]), b);
        }
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::dz(int j) const {
    if (j < 0 || j >= dim_) throw std::invalid_argument("dz: index out of range");
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        if (m.alpha[j] == 0) continue;
        out.push_back({m.alpha.lowered(j), m.beta, m.coeff * double(m.alpha[j])});
    }
    return Polynomial(dim_, std::move(out));
}

Polynomial Polynomial::dzbar(int j) const {
    if (j < 0 || j >= dim_) throw std::invalid_argument("dzbar: index out of range");
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        if (m.beta[j] == 0) continue;
        out.push_back({m.alpha, m.beta.lowered(j), m.coeff * double(m.beta[j])});
    }
    return Polynomial(dim_, std::move(out));
}

Polynomial Polynomial::conjugated() const {
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (const auto& m : terms_) out.push_back({m.beta, m.alpha, std::conj(m.coeff)});
    return Polynomial(dim_, std::move(out));
}

Polynomial Polynomial::scaled(cplx c) const {
    std::vector<Monomial> out = terms_;
    for (auto& m : out) m.coeff *= c;
    return Polynomial(dim_, std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("operator+: dimension mismatch");
    std::vector<Monomial> out = a.terms_;
    out.insert(out.end(), b.terms_.begin(), b.terms_.end());
    return Polynomial(a.dim_, std::move(out));
}

PolynomialField::PolynomialField(int dim) : dim_(dim) {
    require_dim(dim);
    comps_.assign(dim, Polynomial(dim));
}

PolynomialField::PolynomialField(int dim, std::vector<Polynomial> components)
    : dim_(dim), comps_(std::move(components)) {
    require_dim(dim);
    if (static_cast<int>(comps_.size()) != dim)
        throw std::invalid_argument("field must have one component per dimension");
    for (const auto& p : comps_)
        if (p.dim() != dim) throw std::invalid_argument("component dimension mismatch");
}

const Polynomial& PolynomialField::component(int j) const {
    if (j < 0 || j >= dim_) throw std::invalid_argument("component index out of range");
    return comps_[j];
}

int PolynomialField::degree() const {
    int d = 0;
    for (const auto& p : comps_) d = std::max(d, p.degree());
    return d;
}

int PolynomialField::min_degree() const {
    int d = -1;
    for (const auto& p : comps_) {
        if (p.empty()) continue;
        d = d < 0 ? p.min_degree() : std::min(d, p.min_degree());
    }
    return d < 0 ? 0 : d;
}

bool PolynomialField::empty() const {
    for (const auto& p : comps_)
        if (!p.empty()) return false;
    return true;
}

cvec PolynomialField::eval(const cvec& z) const {
    if (static_cast<int>(z.size()) != dim_)
        throw std::invalid_argument("eval: point dimension mismatch");
    cvec out(dim_);
    for (int j = 0; j < dim_; ++j) out[j] = comps_[j].eval(z);
    return out;
}

double lipschitz_estimate(const PolynomialField& P, double R) {
    if (!(R >= 0.0)) throw std::invalid_argument("radius must be non-negative");
    double s = 0.0;
    for (const auto& comp : P.components()) {
        for (const auto& m : comp.terms()) {
            int d = m.degree();
            double rpow = d >= 1 ? std::pow(R, d - 1) : 1.0;
            s += std::abs(m.coeff) * (d + 1) * rpow * std::max(R, 1.0);
        }
    }
    return s;
}

} // namespace kbavg
