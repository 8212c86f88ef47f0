#include "kbavg/types.hpp"

#include <cmath>
#include <stdexcept>

namespace kbavg {

double norm2(const cvec& z) {
    double s = 0.0;
    for (const auto& c : z) s += std::norm(c);
    return std::sqrt(s);
}

double max_norm(const cvec& z) {
    double m = 0.0;
    for (const auto& c : z) m = std::max(m, std::abs(c));
    return m;
}

double distance2(const cvec& a, const cvec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("distance2: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

double max_distance(const cvec& a, const cvec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("max_distance: dimension mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool all_finite(const cvec& z) {
    for (const auto& c : z)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

} // namespace kbavg
