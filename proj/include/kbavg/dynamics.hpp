#pragma once

#include <optional>
#include <string_view>

#include "kbavg/averaging.hpp"

namespace kbavg {

// Which equation a trajectory solves:
//   fast         dv/dt   = -i*diag(lambda)*v + eps*P(v)
//   slow         dv/dtau = -i*eps^-1*diag(lambda)*v + P(v)
//   interaction  da/dtau = Phi_{tau/eps*Lambda} P(Phi_{-tau/eps*Lambda} a)
//   effective    da/dtau = <<P>>(a)
enum class EquationForm { fast, slow, interaction, effective };

std::string_view form_name(EquationForm f);
EquationForm form_from_name(std::string_view s);

struct Trajectory {
    EquationForm form = EquationForm::fast;
    int dim = 0;
    std::vector<double> times;    // strictly increasing
    std::vector<cvec> states;     // one state per time, all finite
    std::optional<double> epsilon;

    std::size_t size() const { return times.size(); }
    const cvec& front() const { return states.front(); }
    const cvec& back() const { return states.back(); }
};

// Existence horizon in slow time: R / chi(2R). Zero radius gives zero; a
// vanishing bound with R > 0 is rejected.
double horizon_theta(double R, const std::function<double(double)>& chi);
double horizon_theta(double R, const Field& field);

struct SimulationProblem {
    Field field;
    FrequencyVector lambda;
    double epsilon = 0.0;   // 0 means the unperturbed flow (fast form only)
    cvec v0;
    double R = 0.0;         // |v0|
    double theta = 0.0;     // slow-time horizon
    bool theta_overridden = false;
};

// theta defaults to horizon_theta(R, field); an explicit override may exceed
// it (for systems known valid on longer horizons) and is flagged as such.
SimulationProblem make_problem(Field field, FrequencyVector lambda, double eps,
                               cvec v0,
                               std::optional<double> theta_override = {});

// Largest admissible RK4 steps for each form.
double default_dt_fast(const SimulationProblem& prob);
double default_dt_slow(const SimulationProblem& prob);
double default_dt_effective(const Field& avg_field, double R);

// Classical fixed-step RK4. Trajectories abort with BlowUpError when a state
// leaves the 2.2R ball or turns non-finite. Negative final times integrate
// the negated field forward and report times in increasing order. At most
// 100000 samples are stored (every k-th step, endpoints always included).
Trajectory integrate_fast(const SimulationProblem& prob, double dt,
                          std::optional<double> t_final = {});
Trajectory integrate_slow(const SimulationProblem& prob, double dtau,
                          std::optional<double> tau_final = {});
Trajectory integrate_interaction(const SimulationProblem& prob, double dtau,
                                 std::optional<double> tau_final = {});
Trajectory integrate_effective(const Field& avg_field, const cvec& v0,
                               double theta, double dtau);

// Pointwise change of variables a(tau) = Phi_{tau/eps*Lambda} v(tau) between
// the slow and interaction pictures.
Trajectory to_interaction(const Trajectory& slow_traj,
                          const FrequencyVector& lambda, double eps);
Trajectory from_interaction(const Trajectory& inter_traj,
                            const FrequencyVector& lambda, double eps);

// Linear interpolation of the stored states at time t, clamped to the range.
cvec state_at(const Trajectory& traj, double t);

// Max Euclidean distance over the shared time window, evaluated on the
// coarser trajectory's grid with linear interpolation of the other one.
double sup_distance(const Trajectory& a, const Trajectory& b);

} // namespace kbavg
