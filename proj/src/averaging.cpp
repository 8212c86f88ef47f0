#include "kbavg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "kbavg/errors.hpp"

namespace kbavg {

cvec interaction_field(const Field& P, const FrequencyVector& lambda, double t,
                       const cvec& a) {
    if (field_dim(P) != lambda.dim() ||
        static_cast<std::size_t>(lambda.dim()) != a.size())
        throw std::invalid_argument("interaction_field: dimension mismatch");
    return rotate(lambda, t, field_eval(P, rotate(lambda, -t, a)));
}

long min_panels(const FrequencyVector& lambda, double T) {
    double step_bound = std::numbers::pi / (4.0 * lambda.max_abs());
    return std::max<long>(1, static_cast<long>(std::ceil(std::abs(T) / step_bound)));
}

namespace {

// Deterministic pairwise reduction over rows [lo, hi) of an nnodes x n buffer.
cvec pairwise_rows(const std::vector<cplx>& buf, int n, long lo, long hi) {
    if (hi - lo <= 8) {
        cvec s(n, cplx{0.0, 0.0});
        for (long r = lo; r < hi; ++r)
            for (int k = 0; k < n; ++k) s[k] += buf[r * n + k];
        return s;
    }
    long mid = lo + (hi - lo) / 2;
    cvec left = pairwise_rows(buf, n, lo, mid);
    cvec right = pairwise_rows(buf, n, mid, hi);
    for (int k = 0; k < n; ++k) left[k] += right[k];
    return left;
}

void run_chunked(long count, int threads, const std::function<void(long, long)>& body) {
    if (threads <= 1 || count < 256) {
        body(0, count);
        return;
    }
    int nt = static_cast<int>(std::min<long>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    long chunk = (count + nt - 1) / nt;
    for (int k = 0; k < nt; ++k) {
        long lo = k * chunk;
        long hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

} // namespace

cvec partial_average(const Field& P, const FrequencyVector& lambda,
                     const cvec& a, double T, long panels, int threads) {
    const int n = field_dim(P);
    if (lambda.dim() != n || static_cast<std::size_t>(n) != a.size())
        throw std::invalid_argument("partial_average: dimension mismatch");
    if (T == 0.0 || !std::isfinite(T))
        throw std::invalid_argument("partial_average: T must be nonzero and finite");
    if (panels < 1) throw std::invalid_argument("partial_average: panels must be positive");
    if (panels < min_panels(lambda, T))
        throw QuadratureError("partial_average: step too coarse for max|lambda| over T=" +
                              std::to_string(T));

    const double lo = std::min(0.0, T);
    const double hi = std::max(0.0, T);
    const long nsub = 2 * panels;
    const long nnodes = nsub + 1;
    const double h = (hi - lo) / double(nsub);

    // Simpson node values, pre-weighted; reduced pairwise afterwards in an
    // order independent of the thread split.
    std::vector<cplx> nodes(static_cast<std::size_t>(nnodes) * n);
    run_chunked(nnodes, threads, [&](long i0, long i1) {
        for (long i = i0; i < i1; ++i) {
            double t = (i == nsub) ? hi : lo + h * double(i);
            double w = (i == 0 || i == nsub) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            cvec y = interaction_field(P, lambda, t, a);
            for (int k = 0; k < n; ++k) nodes[i * n + k] = w * y[k];
        }
    });

    cvec total = pairwise_rows(nodes, n, 0, nnodes);
    const double scale = h / (3.0 * (hi - lo));
    for (auto& c : total) c *= scale;
    return total;
}

cvec average(const Field& P, const FrequencyVector& lambda, const cvec& a,
             double tol, int threads, int oversample, double max_t_factor) {
    if (!(tol > 0.0)) throw std::invalid_argument("average: tol must be positive");
    if (oversample < 1) throw std::invalid_argument("average: oversample must be >= 1");

    if (field_is_polynomial(P))
        return resonant_part(field_poly(P), lambda, default_tolerance(lambda)).eval(a);

    const double T0 = 64.0 / lambda.min_abs();
    auto run = [&](double T) {
        return partial_average(P, lambda, a, T, min_panels(lambda, T) * oversample, threads);
    };

    double T = T0;
    cvec prev = run(T);
    while (T * 2.0 <= max_t_factor * T0) {
        T *= 2.0;
        cvec cur = run(T);
        double diff = 0.0;
        for (std::size_t k = 0; k < cur.size(); ++k)
            diff = std::max(diff, std::abs(cur[k] - prev[k]));
        if (diff < tol) return cur;
        prev = std::move(cur);
    }
    throw NonConvergenceError(
        "average: partial averages did not stabilize below tol=" + std::to_string(tol) +
        " by T=" + std::to_string(T) + "; slow resonance structure or tol too tight");
}

Field averaged_field(const Field& P, const FrequencyVector& lambda, double tol,
                     int threads) {
    if (field_is_polynomial(P))
        return resonant_part(field_poly(P), lambda, default_tolerance(lambda));
    const auto& g = std::get<GenericField>(P);
    GenericField avg;
    avg.dim = g.dim;
    avg.witness = g.witness;   // averaging does not enlarge the Lipschitz class
    avg.eval = [P, lambda, tol, threads](const cvec& z) {
        return average(P, lambda, z, tol, threads);
    };
    return avg;
}

} // namespace kbavg
