#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

#include "kbavg/polynomial.hpp"

namespace kbavg {

using Rational = boost::rational<long long>;

Rational parse_rational(std::string_view s);   // "3/2", "-1/3", "2"
std::string rational_str(const Rational& r);   // inverse of parse_rational
double rational_value(const Rational& r);

// Frequency vector Lambda with nonzero (finite) entries. When all entries are
// known exactly as rationals, resonance questions are decided exactly; the
// float values are kept alongside and must agree to within one ulp.
class FrequencyVector {
public:
    FrequencyVector() = default;   // dimension 0
    explicit FrequencyVector(std::vector<double> values);
    FrequencyVector(std::vector<double> values, std::vector<Rational> exact);
    static FrequencyVector from_rationals(const std::vector<Rational>& rs);

    int dim() const { return static_cast<int>(values_.size()); }
    double value(int j) const { return values_[j]; }
    const std::vector<double>& values() const { return values_; }

    bool exact() const { return exact_.has_value(); }
    const std::vector<Rational>& rationals() const;   // requires exact()

    double max_abs() const;
    double min_abs() const;
    double norm() const;   // Euclidean

    double dot(const MultiIndex& a) const;     // sum lambda_i * a_i
    Rational exact_dot(const MultiIndex& a) const;   // requires exact()

    bool operator==(const FrequencyVector&) const = default;

private:
    std::vector<double> values_;
    std::optional<std::vector<Rational>> exact_;
};

// Default resonance tolerance: 1e-9 * (1 + |Lambda|).
double default_tolerance(const FrequencyVector& lambda);

} // namespace kbavg
