#include "kbavg/experiment.hpp"

#include <atomic>
#include <chrono>
#include <sstream>
#include <thread>

#include "kbavg/errors.hpp"

namespace kbavg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view study_name(StudyKind k) {
    switch (k) {
        case StudyKind::resonance_table: return "resonance-table";
        case StudyKind::average: return "average";
        case StudyKind::simulate: return "simulate";
        case StudyKind::convergence: return "convergence";
        case StudyKind::hamiltonian_drift: return "hamiltonian-drift";
    }
    return "?";
}

StudyKind study_from_name(std::string_view s) {
    if (s == "resonance-table") return StudyKind::resonance_table;
    if (s == "average") return StudyKind::average;
    if (s == "simulate") return StudyKind::simulate;
    if (s == "convergence") return StudyKind::convergence;
    if (s == "hamiltonian-drift") return StudyKind::hamiltonian_drift;
    throw ConfigError("unknown study kind: '" + std::string(s) + "'");
}

namespace {

FrequencyVector lambda_from_entries(const std::vector<json>& entries) {
    if (entries.empty()) throw ConfigError("lambda must be non-empty");
    bool exact = true;
    std::vector<Rational> rs;
    std::vector<double> vals;
    for (const auto& e : entries) {
        if (e.is_number_integer()) {
            long long v = e.get<long long>();
            rs.emplace_back(v);
            vals.push_back(static_cast<double>(v));
        } else if (e.is_string()) {
            Rational r = parse_rational(e.get<std::string>());
            rs.push_back(r);
            vals.push_back(rational_value(r));
        } else if (e.is_number()) {
            exact = false;
            vals.push_back(e.get<double>());
        } else {
            throw ConfigError("lambda entries must be numbers or rational strings");
        }
    }
    try {
        return exact ? FrequencyVector(std::move(vals), std::move(rs))
                     : FrequencyVector(std::move(vals));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("lambda: ") + e.what());
    }
}

cvec v0_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("v0 must be a non-empty array");
    cvec out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ConfigError("v0 entries must be [re, im] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

json v0_to_json(const cvec& v) {
    json arr = json::array();
    for (const auto& c : v) arr.push_back({c.real(), c.imag()});
    return arr;
}

json complex_list_json(const cvec& v) { return v0_to_json(v); }

} // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a json object");
    ExperimentConfig c;
    try {
        if (j.contains("study")) c.study = study_from_name(j.at("study").get<std::string>());
        if (j.contains("field")) {
            const auto& f = j.at("field");
            if (!f.is_object()) throw ConfigError("'field' must be an object");
            if (f.contains("builtin")) c.builtin = f.at("builtin").get<std::string>();
            if (f.contains("file")) c.field_file = f.at("file").get<std::string>();
            if (f.contains("inline")) c.inline_field = f.at("inline");
        }
        if (j.contains("hamiltonian")) {
            const auto& f = j.at("hamiltonian");
            if (!f.is_object()) throw ConfigError("'hamiltonian' must be an object");
            if (f.contains("file")) c.hamiltonian_file = f.at("file").get<std::string>();
            if (f.contains("inline")) c.inline_hamiltonian = f.at("inline");
        }
        if (j.contains("lambda")) {
            if (!j.at("lambda").is_array()) throw ConfigError("'lambda' must be an array");
            c.lambda = std::vector<json>(j.at("lambda").begin(), j.at("lambda").end());
        }
        if (j.contains("v0")) c.v0 = v0_from_json(j.at("v0"));
        if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
        if (j.contains("theta")) c.theta = j.at("theta").get<double>();
        if (j.contains("dt")) c.dt = j.at("dt").get<double>();
        if (j.contains("dtau")) c.dtau = j.at("dtau").get<double>();
        if (j.contains("t_final")) c.t_final = j.at("t_final").get<double>();
        if (j.contains("form")) c.form = form_from_name(j.at("form").get<std::string>());
        if (j.contains("tol")) c.tol = j.at("tol").get<double>();
        if (j.contains("resonance_tol")) c.resonance_tol = j.at("resonance_tol").get<double>();
        if (j.contains("nonresonance_bound"))
            c.nonresonance_bound = j.at("nonresonance_bound").get<int>();
        if (j.contains("accept_bounded_certificate"))
            c.accept_bounded_certificate = j.at("accept_bounded_certificate").get<bool>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
        if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (c.threads < 1) throw ConfigError("config: threads must be >= 1");
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j = json::object();
    if (c.study) j["study"] = std::string(study_name(*c.study));
    json field = json::object();
    if (!c.builtin.empty()) field["builtin"] = c.builtin;
    if (!c.field_file.empty()) field["file"] = c.field_file;
    if (c.inline_field) field["inline"] = *c.inline_field;
    if (!field.empty()) j["field"] = std::move(field);
    json ham = json::object();
    if (!c.hamiltonian_file.empty()) ham["file"] = c.hamiltonian_file;
    if (c.inline_hamiltonian) ham["inline"] = *c.inline_hamiltonian;
    if (!ham.empty()) j["hamiltonian"] = std::move(ham);
    if (c.lambda) j["lambda"] = *c.lambda;
    if (c.v0) j["v0"] = v0_to_json(*c.v0);
    if (!c.epsilons.empty()) j["epsilons"] = c.epsilons;
    if (c.theta) j["theta"] = *c.theta;
    if (c.dt) j["dt"] = *c.dt;
    if (c.dtau) j["dtau"] = *c.dtau;
    if (c.t_final) j["t_final"] = *c.t_final;
    j["form"] = std::string(form_name(c.form));
    j["tol"] = c.tol;
    if (c.resonance_tol) j["resonance_tol"] = *c.resonance_tol;
    j["nonresonance_bound"] = c.nonresonance_bound;
    j["accept_bounded_certificate"] = c.accept_bounded_certificate;
    j["seed"] = c.seed;
    j["out"] = c.out_dir;
    j["threads"] = c.threads;
    return j;
}

ExperimentConfig load_config(const fs::path& p) {
    return config_from_json(load_json_file(p));
}

bool is_builtin(std::string_view name) { return name == "example-2.4"; }

ResolvedProblem builtin_problem(std::string_view name) {
    if (name == "example-2.4") {
        // one oscillator, cubic perturbation with one resonant and one
        // non-resonant term
        std::vector<Monomial> terms = {
            {MultiIndex({2}), MultiIndex({1}), cplx{1.0, 0.0}},
            {MultiIndex({3}), MultiIndex({0}), cplx{1.0, 0.0}},
        };
        PolynomialField P(1, {Polynomial(1, std::move(terms))});
        return {P, FrequencyVector::from_rationals({Rational(1)}), cvec{cplx{1.0, 0.0}}};
    }
    throw ConfigError("unknown builtin system: '" + std::string(name) + "'");
}

ResolvedProblem resolve_field_problem(const ExperimentConfig& c) {
    int sources = (!c.builtin.empty()) + (!c.field_file.empty()) + c.inline_field.has_value();
    if (sources != 1)
        throw ConfigError("config needs exactly one field source (builtin, file, or inline)");

    if (!c.builtin.empty()) {
        ResolvedProblem rp = builtin_problem(c.builtin);
        if (c.lambda) rp.lambda = lambda_from_entries(*c.lambda);
        if (c.v0) rp.v0 = *c.v0;
        if (field_dim(rp.field) != rp.lambda.dim() ||
            rp.v0.size() != static_cast<std::size_t>(rp.lambda.dim()))
            throw ConfigError("lambda/v0 overrides disagree with the builtin dimension");
        return rp;
    }

    json doc = c.inline_field ? *c.inline_field : load_json_file(c.field_file);
    PolynomialField P = field_from_json(doc);
    if (!c.lambda) throw ConfigError("config needs 'lambda' for a file/inline field");
    if (!c.v0) throw ConfigError("config needs 'v0' for a file/inline field");
    FrequencyVector lambda = lambda_from_entries(*c.lambda);
    if (P.dim() != lambda.dim() || c.v0->size() != static_cast<std::size_t>(lambda.dim()))
        throw ConfigError("field, lambda, and v0 dimensions disagree");
    return {std::move(P), std::move(lambda), *c.v0};
}

HamiltonianPoly resolve_hamiltonian(const ExperimentConfig& c) {
    int sources = (!c.hamiltonian_file.empty()) + c.inline_hamiltonian.has_value();
    if (sources != 1)
        throw ConfigError("config needs exactly one hamiltonian source (file or inline)");
    json doc = c.inline_hamiltonian ? *c.inline_hamiltonian
                                    : load_json_file(c.hamiltonian_file);
    return hamiltonian_from_json(doc);
}

namespace {

void write_meta(const ExperimentConfig& c, std::string_view command, json extra) {
    json meta = {{"command", std::string(command)}, {"config", config_to_json(c)}};
    meta.update(extra);
    write_text_file(fs::path(c.out_dir) / "run_meta.json", meta.dump(2) + "\n");
}

void require_study(const ExperimentConfig& c, StudyKind expected) {
    if (c.study && *c.study != expected)
        throw ConfigError("config study '" + std::string(study_name(*c.study)) +
                          "' does not match this command");
}

double resolve_resonance_tol(const ExperimentConfig& c, const FrequencyVector& lambda) {
    return c.resonance_tol ? *c.resonance_tol : default_tolerance(lambda);
}

} // namespace

void cmd_resonant_part(const ExperimentConfig& c) {
    require_study(c, StudyKind::resonance_table);
    ResolvedProblem rp = resolve_field_problem(c);
    const PolynomialField& P = field_poly(rp.field);
    double tol = resolve_resonance_tol(c, rp.lambda);

    auto rows = resonance_table(P, rp.lambda, tol);
    std::ostringstream csv;
    write_resonance_csv(csv, rows);
    write_text_file(fs::path(c.out_dir) / "resonance_table.csv", csv.str());

    PolynomialField res = resonant_part(P, rp.lambda, tol);
    write_text_file(fs::path(c.out_dir) / "resonant_field.json",
                    field_to_json(res).dump(2) + "\n");

    write_meta(c, "resonant-part",
               {{"resonance_tol", tol},
                {"exact_arithmetic", rp.lambda.exact()},
                {"outputs", {"resonance_table.csv", "resonant_field.json"}}});
}

void cmd_average(const ExperimentConfig& c) {
    require_study(c, StudyKind::average);
    ResolvedProblem rp = resolve_field_problem(c);
    const PolynomialField& P = field_poly(rp.field);

    cvec symbolic = resonant_part(P, rp.lambda, resolve_resonance_tol(c, rp.lambda)).eval(rp.v0);
    cvec numeric = average(Field{as_generic(P)}, rp.lambda, rp.v0, c.tol, c.threads);

    json out = {{"v0", complex_list_json(rp.v0)},
                {"tol", c.tol},
                {"symbolic", complex_list_json(symbolic)},
                {"numeric", complex_list_json(numeric)}};
    write_text_file(fs::path(c.out_dir) / "average.json", out.dump(2) + "\n");
    write_meta(c, "average", {{"outputs", {"average.json"}}});
}

void cmd_simulate(const ExperimentConfig& c) {
    require_study(c, StudyKind::simulate);
    ResolvedProblem rp = resolve_field_problem(c);
    std::vector<std::string> outputs;
    json meta_runs = json::array();

    if (c.form == EquationForm::effective) {
        Field avg = averaged_field(rp.field, rp.lambda, c.tol, c.threads);
        SimulationProblem shape = make_problem(rp.field, rp.lambda, 1.0, rp.v0, c.theta);
        double dtau = c.dtau ? *c.dtau : default_dt_effective(avg, shape.R);
        Trajectory traj = integrate_effective(avg, rp.v0, shape.theta, dtau);
        std::ostringstream csv;
        write_trajectory_csv(csv, traj);
        std::string name = "trajectory_effective.csv";
        write_text_file(fs::path(c.out_dir) / name, csv.str());
        outputs.push_back(name);
        meta_runs.push_back({{"form", "effective"},
                             {"theta", shape.theta},
                             {"theta_overridden", shape.theta_overridden},
                             {"dtau", dtau}});
    } else {
        if (c.epsilons.empty())
            throw ConfigError("simulate needs at least one epsilon for this form");
        for (double eps : c.epsilons) {
            SimulationProblem prob = make_problem(rp.field, rp.lambda, eps, rp.v0, c.theta);
            Trajectory traj;
            json run = {{"form", std::string(form_name(c.form))},
                        {"epsilon", eps},
                        {"theta", prob.theta},
                        {"theta_overridden", prob.theta_overridden}};
            if (c.form == EquationForm::fast) {
                double dt = c.dt ? *c.dt : default_dt_fast(prob);
                if (eps == 0.0 && !c.t_final)
                    throw ConfigError("simulate: epsilon 0 needs an explicit t_final");
                traj = integrate_fast(prob, dt, c.t_final);
                run["dt"] = dt;
            } else {
                double dtau = c.dtau ? *c.dtau : default_dt_slow(prob);
                traj = (c.form == EquationForm::slow)
                           ? integrate_slow(prob, dtau)
                           : integrate_interaction(prob, dtau);
                run["dtau"] = dtau;
            }
            std::ostringstream csv;
            write_trajectory_csv(csv, traj);
            std::string name = "trajectory_" + std::string(form_name(c.form)) + "_eps" +
                               format_double(eps) + ".csv";
            write_text_file(fs::path(c.out_dir) / name, csv.str());
            outputs.push_back(name);
            meta_runs.push_back(std::move(run));
        }
    }
    write_meta(c, "simulate", {{"runs", meta_runs}, {"outputs", outputs}});
}

namespace {

struct ConvergenceRow {
    double epsilon = 0.0;
    bool ok = false;
    std::string status;
    double sup_dist = 0.0;
    std::vector<double> amp_err;
    std::vector<std::pair<double, double>> plot;   // (tau, distance)
    double wall_s = 0.0;
};

} // namespace

void cmd_convergence(const ExperimentConfig& c) {
    require_study(c, StudyKind::convergence);
    ResolvedProblem rp = resolve_field_problem(c);
    if (c.epsilons.size() < 2)
        throw ConfigError("convergence needs at least two epsilons to show a trend");
    for (double eps : c.epsilons)
        if (!(eps > 0.0 && eps <= 1.0))
            throw ConfigError("convergence epsilons must lie in (0,1]");

    std::vector<double> epsilons = c.epsilons;
    std::sort(epsilons.begin(), epsilons.end(), std::greater<>());

    const int n = rp.lambda.dim();
    Field avg = averaged_field(rp.field, rp.lambda, c.tol);
    SimulationProblem shape = make_problem(rp.field, rp.lambda, epsilons.front(), rp.v0, c.theta);
    const double theta = shape.theta;
    double dtau_eff = default_dt_effective(avg, shape.R);
    Trajectory a0 = integrate_effective(avg, rp.v0, theta, dtau_eff);

    std::vector<ConvergenceRow> rows(epsilons.size());
    std::atomic<std::size_t> next{0};
    auto run_row = [&](std::size_t i) {
        ConvergenceRow& row = rows[i];
        row.epsilon = epsilons[i];
        auto start = std::chrono::steady_clock::now();
        try {
            SimulationProblem prob = make_problem(rp.field, rp.lambda, row.epsilon, rp.v0, c.theta);
            double dtau = c.dtau ? *c.dtau : default_dt_slow(prob);
            Trajectory a_eps = integrate_interaction(prob, dtau);
            row.sup_dist = sup_distance(a_eps, a0);
            row.amp_err.assign(n, 0.0);
            for (std::size_t k = 0; k < a0.size(); ++k) {
                double tau = a0.times[k];
                cvec z = state_at(a_eps, tau);
                double d = distance2(z, a0.states[k]);
                row.plot.emplace_back(tau, d);
                for (int j = 0; j < n; ++j)
                    row.amp_err[j] = std::max(row.amp_err[j],
                                              std::abs(std::abs(z[j]) - std::abs(a0.states[k][j])));
            }
            row.ok = true;
            row.status = "ok";
        } catch (const NumericError& e) {
            row.ok = false;
            row.status = std::string("error: ") + e.what();
        }
        row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= rows.size()) break;
            run_row(i);
        }
    };
    int nt = std::min<int>(c.threads, static_cast<int>(rows.size()));
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < nt; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "epsilon,sup_distance";
    for (int j = 1; j <= n; ++j) csv << ",amp_err_" << j;
    csv << ",status\n";
    for (const auto& row : rows) {
        csv << format_double(row.epsilon) << ',';
        if (row.ok) {
            csv << format_double(row.sup_dist);
            for (int j = 0; j < n; ++j) csv << ',' << format_double(row.amp_err[j]);
        } else {
            for (int j = 0; j <= n; ++j) csv << ',';
        }
        // commas would break the single-line reason
        std::string status = row.status;
        std::replace(status.begin(), status.end(), ',', ';');
        csv << ',' << status << '\n';
    }
    write_text_file(fs::path(c.out_dir) / "convergence.csv", csv.str());

    std::ostringstream plot;
    plot << "epsilon,tau,distance\n";
    for (const auto& row : rows) {
        if (!row.ok) continue;
        for (const auto& [tau, d] : row.plot)
            plot << format_double(row.epsilon) << ',' << format_double(tau) << ','
                 << format_double(d) << '\n';
    }
    write_text_file(fs::path(c.out_dir) / "convergence_plot.csv", plot.str());

    std::ostringstream times;
    times << "epsilon,wall_time_s\n";
    for (const auto& row : rows)
        times << format_double(row.epsilon) << ',' << format_double(row.wall_s) << '\n';
    write_text_file(fs::path(c.out_dir) / "convergence_timings.csv", times.str());

    write_meta(c, "convergence",
               {{"theta", theta},
                {"theta_overridden", shape.theta_overridden},
                {"effective_dtau", dtau_eff},
                {"outputs", {"convergence.csv", "convergence_plot.csv",
                             "convergence_timings.csv"}}});

    if (std::none_of(rows.begin(), rows.end(), [](const auto& r) { return r.ok; }))
        throw NumericError("convergence: every epsilon row failed");
}

void cmd_hamiltonian_drift(const ExperimentConfig& c) {
    require_study(c, StudyKind::hamiltonian_drift);
    HamiltonianPoly h = resolve_hamiltonian(c);
    if (!c.lambda) throw ConfigError("hamiltonian-drift needs 'lambda'");
    if (!c.v0) throw ConfigError("hamiltonian-drift needs 'v0'");
    if (c.epsilons.empty()) throw ConfigError("hamiltonian-drift needs at least one epsilon");
    if (!c.accept_bounded_certificate)
        throw ConfigError("hamiltonian-drift requires accept_bounded_certificate=true: "
                          "the non-resonance check only covers |s| <= bound");
    if (c.nonresonance_bound < 20)
        throw ConfigError("hamiltonian-drift needs nonresonance_bound >= 20");

    FrequencyVector lambda = lambda_from_entries(*c.lambda);
    if (lambda.dim() != h.dim() || c.v0->size() != static_cast<std::size_t>(h.dim()))
        throw ConfigError("hamiltonian, lambda, and v0 dimensions disagree");

    NonresonanceCheck cert = is_nonresonant(lambda, c.nonresonance_bound);
    if (!cert.nonresonant) {
        std::string w;
        for (std::size_t i = 0; i < cert.witness.size(); ++i) {
            if (i) w += ' ';
            w += std::to_string(cert.witness[i]);
        }
        throw ConfigError("hamiltonian-drift: lambda is resonant, witness s = [" + w + "]");
    }

    PolynomialField P = hamiltonian_field(h);
    std::vector<std::tuple<int, double, double>> rows;
    double theta_used = 0.0;
    bool theta_overridden = false;
    for (double eps : c.epsilons) {
        if (!(eps > 0.0 && eps <= 1.0))
            throw ConfigError("hamiltonian-drift epsilons must lie in (0,1]");
        SimulationProblem prob = make_problem(P, lambda, eps, *c.v0, c.theta);
        theta_used = prob.theta;
        theta_overridden = prob.theta_overridden;
        double dt = c.dt ? *c.dt : default_dt_fast(prob);
        Trajectory fwd = integrate_fast(prob, dt);
        Trajectory bwd = integrate_fast(prob, dt, -prob.theta / eps);
        auto df = action_drift(fwd);
        auto db = action_drift(bwd);
        for (int j = 0; j < h.dim(); ++j)
            rows.emplace_back(j, std::max(df[j], db[j]), eps);
    }

    std::ostringstream csv;
    write_drift_csv(csv, rows);
    write_text_file(fs::path(c.out_dir) / "action_drift.csv", csv.str());
    write_meta(c, "hamiltonian-drift",
               {{"nonresonant", true},
                {"certificate_bound", c.nonresonance_bound},
                {"theta", theta_used},
                {"theta_overridden", theta_overridden},
                {"outputs", {"action_drift.csv"}}});
}

} // namespace kbavg
