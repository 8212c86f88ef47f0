#pragma once

#include <complex>
#include <vector>

namespace kbavg {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

double norm2(const cvec& z);                      // Euclidean norm
double max_norm(const cvec& z);                   // max_j |z_j|
double distance2(const cvec& a, const cvec& b);   // Euclidean distance
double max_distance(const cvec& a, const cvec& b);
bool all_finite(const cvec& z);

} // namespace kbavg
