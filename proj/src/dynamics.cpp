#include "kbavg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kbavg/errors.hpp"

namespace kbavg {

std::string_view form_name(EquationForm f) {
    switch (f) {
        case EquationForm::fast: return "fast";
        case EquationForm::slow: return "slow";
        case EquationForm::interaction: return "interaction";
        case EquationForm::effective: return "effective";
    }
    return "?";
}

EquationForm form_from_name(std::string_view s) {
    if (s == "fast") return EquationForm::fast;
    if (s == "slow") return EquationForm::slow;
    if (s == "interaction") return EquationForm::interaction;
    if (s == "effective") return EquationForm::effective;
    throw std::invalid_argument("unknown equation form: '" + std::string(s) + "'");
}

double horizon_theta(double R, const std::function<double(double)>& chi) {
    if (!(R >= 0.0)) throw std::invalid_argument("horizon_theta: radius must be >= 0");
    if (R == 0.0) return 0.0;
    double x = chi(2.0 * R);
    if (!(x > 0.0))
        throw std::invalid_argument("horizon_theta: witness bound vanishes at 2R");
    return R / x;
}

double horizon_theta(double R, const Field& field) {
    return horizon_theta(R, [&field](double r) { return field_chi(field, r); });
}

SimulationProblem make_problem(Field field, FrequencyVector lambda, double eps,
                               cvec v0, std::optional<double> theta_override) {
    if (field_dim(field) != lambda.dim() ||
        static_cast<std::size_t>(lambda.dim()) != v0.size())
        throw std::invalid_argument("make_problem: dimension mismatch");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("make_problem: epsilon must lie in [0,1] (0 = unperturbed)");
    if (!all_finite(v0)) throw std::invalid_argument("make_problem: v0 must be finite");

    SimulationProblem prob;
    prob.R = norm2(v0);
    if (theta_override) {
        if (!(*theta_override > 0.0) || !std::isfinite(*theta_override))
            throw std::invalid_argument("make_problem: theta override must be positive and finite");
        prob.theta = *theta_override;
        prob.theta_overridden = true;
    } else {
        prob.theta = horizon_theta(prob.R, field);
    }
    prob.field = std::move(field);
    prob.lambda = std::move(lambda);
    prob.epsilon = eps;
    prob.v0 = std::move(v0);
    return prob;
}

namespace {

constexpr long kMaxSamples = 100000;
constexpr double kSlack = 1.0 + 1e-9;

using Rhs = std::function<void(double, const cvec&, cvec&)>;

cvec staged(const cvec& y, double a, const cvec& k) {
    cvec out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
    return out;
}

// Fixed-step RK4 over [0, span] with span > 0; preallocated stage vectors.
Trajectory rk4_forward(const Rhs& f, const cvec& y0, double span, double dt,
                       double guard, EquationForm form,
                       std::optional<double> eps, int dim) {
    long nsteps = std::max<long>(1, static_cast<long>(std::ceil(span / dt - 1e-9)));
    double h = span / double(nsteps);
    long stride = (nsteps + kMaxSamples - 1) / kMaxSamples;

    Trajectory traj;
    traj.form = form;
    traj.dim = dim;
    traj.epsilon = eps;
    traj.times.push_back(0.0);
    traj.states.push_back(y0);

    cvec y = y0, k1(dim), k2(dim), k3(dim), k4(dim);
    for (long k = 0; k < nsteps; ++k) {
        double t = h * double(k);
        f(t, y, k1);
        f(t + h / 2, staged(y, h / 2, k1), k2);
        f(t + h / 2, staged(y, h / 2, k2), k3);
        f(t + h, staged(y, h, k3), k4);
        for (int i = 0; i < dim; ++i)
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        double th = (k + 1 == nsteps) ? span : h * double(k + 1);
        if (!all_finite(y)) throw BlowUpError(th, std::numeric_limits<double>::quiet_NaN());
        if (double r = norm2(y); r > guard) throw BlowUpError(th, r);
        if ((k + 1) % stride == 0 || k + 1 == nsteps) {
            traj.times.push_back(th);
            traj.states.push_back(y);
        }
    }
    return traj;
}

// Negative spans run the negated field forward and flip the time axis, so
// stored times stay strictly increasing (from span up to 0).
Trajectory rk4_run(const Rhs& f, const cvec& y0, double span, double dt,
                   double guard, EquationForm form, std::optional<double> eps,
                   int dim) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("integration step must be positive and finite");
    if (!std::isfinite(span)) throw std::invalid_argument("final time must be finite");
    if (span == 0.0) {
        Trajectory traj;
        traj.form = form;
        traj.dim = dim;
        traj.epsilon = eps;
        traj.times.push_back(0.0);
        traj.states.push_back(y0);
        return traj;
    }
    if (span > 0.0) return rk4_forward(f, y0, span, dt, guard, form, eps, dim);

    Rhs neg = [&f](double s, const cvec& y, cvec& out) {
        f(-s, y, out);
        for (auto& c : out) c = -c;
    };
    Trajectory fwd = rk4_forward(neg, y0, -span, dt, guard, form, eps, dim);
    Trajectory traj;
    traj.form = form;
    traj.dim = dim;
    traj.epsilon = eps;
    traj.times.reserve(fwd.size());
    traj.states.reserve(fwd.size());
    for (std::size_t i = fwd.size(); i-- > 0;) {
        traj.times.push_back(-fwd.times[i]);
        traj.states.push_back(std::move(fwd.states[i]));
    }
    return traj;
}

double guard_radius(double R) { return 2.2 * R + 1e-12; }

void check_step(double dt, double bound, const char* what) {
    if (!(dt > 0.0)) throw std::invalid_argument("integration step must be positive");
    if (dt > bound * (1.0 + 1e-12))
        throw std::invalid_argument(std::string(what) +
                                    ": step too large for the fastest timescale (max " +
                                    std::to_string(bound) + ")");
}

} // namespace

double default_dt_fast(const SimulationProblem& prob) {
    double b = 0.05 / prob.lambda.max_abs();
    double chi = field_chi(prob.field, 2.0 * prob.R);
    if (prob.epsilon > 0.0 && chi > 0.0)
        b = std::min(b, 0.05 / (prob.epsilon * chi));
    return b;
}

double default_dt_slow(const SimulationProblem& prob) {
    if (!(prob.epsilon > 0.0))
        throw std::invalid_argument("slow form needs epsilon > 0");
    return 0.05 * prob.epsilon / prob.lambda.max_abs();
}

double default_dt_effective(const Field& avg_field, double R) {
    double chi = field_chi(avg_field, 2.0 * R);
    return chi > 0.0 ? 0.05 / chi : 1.0;
}

Trajectory integrate_fast(const SimulationProblem& prob, double dt,
                          std::optional<double> t_final) {
    const int n = field_dim(prob.field);
    double t_end;
    if (t_final) {
        t_end = *t_final;
        if (prob.epsilon > 0.0 && std::abs(t_end) > prob.theta / prob.epsilon * kSlack)
            throw std::invalid_argument("integrate_fast: final time exceeds the horizon");
    } else {
        if (!(prob.epsilon > 0.0))
            throw std::invalid_argument("integrate_fast: unperturbed runs need an explicit final time");
        t_end = prob.theta / prob.epsilon;
    }
    check_step(dt, default_dt_fast(prob), "integrate_fast");

    const double eps = prob.epsilon;
    Rhs f = [&prob, eps, n](double, const cvec& v, cvec& out) {
        cvec p = field_eval(prob.field, v);
        for (int j = 0; j < n; ++j)
            out[j] = cplx(0.0, -prob.lambda.value(j)) * v[j] + eps * p[j];
    };
    return rk4_run(f, prob.v0, t_end, dt, guard_radius(prob.R), EquationForm::fast,
                   prob.epsilon, n);
}

Trajectory integrate_slow(const SimulationProblem& prob, double dtau,
                          std::optional<double> tau_final) {
    const int n = field_dim(prob.field);
    if (!(prob.epsilon > 0.0))
        throw std::invalid_argument("integrate_slow: epsilon must be positive");
    double tau_end = tau_final.value_or(prob.theta);
    if (std::abs(tau_end) > prob.theta * kSlack)
        throw std::invalid_argument("integrate_slow: final time exceeds the horizon");
    check_step(dtau, default_dt_slow(prob), "integrate_slow");

    const double inv_eps = 1.0 / prob.epsilon;
    Rhs f = [&prob, inv_eps, n](double, const cvec& v, cvec& out) {
        cvec p = field_eval(prob.field, v);
        for (int j = 0; j < n; ++j)
            out[j] = cplx(0.0, -prob.lambda.value(j) * inv_eps) * v[j] + p[j];
    };
    return rk4_run(f, prob.v0, tau_end, dtau, guard_radius(prob.R),
                   EquationForm::slow, prob.epsilon, n);
}

Trajectory integrate_interaction(const SimulationProblem& prob, double dtau,
                                 std::optional<double> tau_final) {
    const int n = field_dim(prob.field);
    if (!(prob.epsilon > 0.0))
        throw std::invalid_argument("integrate_interaction: epsilon must be positive");
    double tau_end = tau_final.value_or(prob.theta);
    if (std::abs(tau_end) > prob.theta * kSlack)
        throw std::invalid_argument("integrate_interaction: final time exceeds the horizon");
    check_step(dtau, default_dt_slow(prob), "integrate_interaction");

    const double inv_eps = 1.0 / prob.epsilon;
    Rhs f = [&prob, inv_eps](double tau, const cvec& a, cvec& out) {
        out = interaction_field(prob.field, prob.lambda, tau * inv_eps, a);
    };
    return rk4_run(f, prob.v0, tau_end, dtau, guard_radius(prob.R),
                   EquationForm::interaction, prob.epsilon, n);
}

Trajectory integrate_effective(const Field& avg_field, const cvec& v0,
                               double theta, double dtau) {
    const int n = field_dim(avg_field);
    if (static_cast<std::size_t>(n) != v0.size())
        throw std::invalid_argument("integrate_effective: dimension mismatch");
    if (!std::isfinite(theta)) throw std::invalid_argument("integrate_effective: bad horizon");
    double R = norm2(v0);
    double chi = field_chi(avg_field, 2.0 * R);
    if (chi > 0.0) check_step(dtau, 0.05 / chi, "integrate_effective");
    else if (!(dtau > 0.0)) throw std::invalid_argument("integration step must be positive");

    Rhs f = [&avg_field](double, const cvec& a, cvec& out) {
        out = field_eval(avg_field, a);
    };
    return rk4_run(f, v0, theta, dtau, guard_radius(R), EquationForm::effective,
                   std::nullopt, n);
}

namespace {

Trajectory rotate_picture(const Trajectory& traj, const FrequencyVector& lambda,
                          double eps, double sign, EquationForm from,
                          EquationForm to) {
    if (traj.form != from)
        throw std::invalid_argument("change of picture: unexpected trajectory form");
    if (traj.dim != lambda.dim())
        throw std::invalid_argument("change of picture: dimension mismatch");
    if (!(eps > 0.0)) throw std::invalid_argument("change of picture: epsilon must be positive");
    Trajectory out;
    out.form = to;
    out.dim = traj.dim;
    out.epsilon = eps;
    out.times = traj.times;
    out.states.reserve(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
        out.states.push_back(rotate(lambda, sign * traj.times[i] / eps, traj.states[i]));
    return out;
}

} // namespace

Trajectory to_interaction(const Trajectory& slow_traj,
                          const FrequencyVector& lambda, double eps) {
    return rotate_picture(slow_traj, lambda, eps, +1.0, EquationForm::slow,
                          EquationForm::interaction);
}

Trajectory from_interaction(const Trajectory& inter_traj,
                            const FrequencyVector& lambda, double eps) {
    return rotate_picture(inter_traj, lambda, eps, -1.0, EquationForm::interaction,
                          EquationForm::slow);
}

cvec state_at(const Trajectory& traj, double t) {
    const auto& ts = traj.times;
    if (ts.empty()) throw std::invalid_argument("state_at: empty trajectory");
    if (t <= ts.front()) return traj.states.front();
    if (t >= ts.back()) return traj.states.back();
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    std::size_t lo = hi - 1;
    double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
    cvec out(traj.dim);
    for (int k = 0; k < traj.dim; ++k)
        out[k] = traj.states[lo][k] + w * (traj.states[hi][k] - traj.states[lo][k]);
    return out;
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
    if (a.dim != b.dim) throw std::invalid_argument("sup_distance: dimension mismatch");
    if (a.times.empty() || b.times.empty())
        throw std::invalid_argument("sup_distance: empty trajectory");
    double lo = std::max(a.times.front(), b.times.front());
    double hi = std::min(a.times.back(), b.times.back());
    if (hi < lo) throw std::invalid_argument("sup_distance: no shared time window");

    const Trajectory& coarse = a.size() <= b.size() ? a : b;
    const Trajectory& fine = (&coarse == &a) ? b : a;
    double worst = std::max(distance2(state_at(coarse, lo), state_at(fine, lo)),
                            distance2(state_at(coarse, hi), state_at(fine, hi)));
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        double t = coarse.times[i];
        if (t < lo || t > hi) continue;
        worst = std::max(worst, distance2(coarse.states[i], state_at(fine, t)));
    }
    return worst;
}

} // namespace kbavg
