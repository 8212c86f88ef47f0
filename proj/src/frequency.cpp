#include "kbavg/frequency.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kbavg {

Rational parse_rational(std::string_view s) {
    auto fail = [&] {
        throw std::invalid_argument("not a rational literal: '" + std::string(s) + "'");
    };
    if (s.empty()) fail();
    std::string text(s);
    std::size_t slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            std::size_t used = 0;
            long long p = std::stoll(text, &used);
            if (used != text.size()) fail();
            return Rational(p);
        }
        std::size_t used = 0;
        long long p = std::stoll(text.substr(0, slash), &used);
        if (used != slash) fail();
        std::string den = text.substr(slash + 1);
        long long q = std::stoll(den, &used);
        if (used != den.size() || q == 0) fail();
        return Rational(p, q);
    } catch (const std::invalid_argument&) {
        fail();
    } catch (const std::out_of_range&) {
        fail();
    }
    return Rational(0);   // unreachable
}

std::string rational_str(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double rational_value(const Rational& r) {
    return boost::rational_cast<double>(r);
}

namespace {

void check_values(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("frequency vector must be non-empty");
    for (double x : v)
        if (x == 0.0 || !std::isfinite(x))
            throw std::invalid_argument("frequency entries must be nonzero and finite");
}

} // namespace

FrequencyVector::FrequencyVector(std::vector<double> values)
    : values_(std::move(values)) {
    check_values(values_);
}

FrequencyVector::FrequencyVector(std::vector<double> values, std::vector<Rational> exact)
    : values_(std::move(values)), exact_(std::move(exact)) {
    check_values(values_);
    if (exact_->size() != values_.size())
        throw std::invalid_argument("rational annotations must match the frequency count");
    for (std::size_t j = 0; j < values_.size(); ++j) {
        double rv = rational_value((*exact_)[j]);
        // one-ulp agreement between the exact and float forms
        if (std::abs(rv - values_[j]) >
            std::abs(values_[j]) * std::numeric_limits<double>::epsilon())
            throw std::invalid_argument("rational annotation disagrees with float value");
    }
}

FrequencyVector FrequencyVector::from_rationals(const std::vector<Rational>& rs) {
    std::vector<double> vals;
    vals.reserve(rs.size());
    for (const auto& r : rs) vals.push_back(rational_value(r));
    return FrequencyVector(std::move(vals), rs);
}

const std::vector<Rational>& FrequencyVector::rationals() const {
    if (!exact_) throw std::logic_error("frequency vector has no exact form");
    return *exact_;
}

double FrequencyVector::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double FrequencyVector::min_abs() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::min(m, std::abs(v));
    return m;
}

double FrequencyVector::norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

double FrequencyVector::dot(const MultiIndex& a) const {
    if (a.size() != dim()) throw std::invalid_argument("dot: multi-index dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += values_[i] * a[i];
    return s;
}

Rational FrequencyVector::exact_dot(const MultiIndex& a) const {
    if (a.size() != dim()) throw std::invalid_argument("dot: multi-index dimension mismatch");
    const auto& rs = rationals();
    Rational s(0);
    for (int i = 0; i < dim(); ++i) s += rs[i] * Rational(a[i]);
    return s;
}

double default_tolerance(const FrequencyVector& lambda) {
    return 1e-9 * (1.0 + lambda.norm());
}

} // namespace kbavg
