#pragma once

#include <cstdint>
#include <optional>

#include "kbavg/io.hpp"

namespace kbavg {

enum class StudyKind { resonance_table, average, simulate, convergence, hamiltonian_drift };

std::string_view study_name(StudyKind k);
StudyKind study_from_name(std::string_view s);

// One experiment: a problem (field or Hamiltonian, frequencies, initial
// point, epsilon sweep) plus the knobs of the study being run. Parses from
// JSON; parse -> serialize -> parse is a fixed point.
struct ExperimentConfig {
    std::optional<StudyKind> study;

    std::string builtin;                          // e.g. "example-2.4"
    std::string field_file;
    std::optional<nlohmann::json> inline_field;   // field JSON document
    std::string hamiltonian_file;
    std::optional<nlohmann::json> inline_hamiltonian;

    std::optional<std::vector<nlohmann::json>> lambda;   // numbers or "p/q" strings
    std::optional<cvec> v0;
    std::vector<double> epsilons;

    std::optional<double> theta;     // horizon override
    std::optional<double> dt;
    std::optional<double> dtau;
    std::optional<double> t_final;   // fast-time range override for simulate
    EquationForm form = EquationForm::fast;
    double tol = 1e-4;
    std::optional<double> resonance_tol;
    int nonresonance_bound = 20;
    bool accept_bounded_certificate = false;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    int threads = 1;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& p);

// The problem pieces a config resolves to.
struct ResolvedProblem {
    Field field;
    FrequencyVector lambda;
    cvec v0;
};

ResolvedProblem resolve_field_problem(const ExperimentConfig& c);
HamiltonianPoly resolve_hamiltonian(const ExperimentConfig& c);

// Builtin systems addressable by name in configs.
bool is_builtin(std::string_view name);
ResolvedProblem builtin_problem(std::string_view name);

// Command bodies. Each writes its outputs under c.out_dir and throws
// ConfigError / NumericError on failure.
void cmd_resonant_part(const ExperimentConfig& c);
void cmd_average(const ExperimentConfig& c);
void cmd_simulate(const ExperimentConfig& c);
void cmd_convergence(const ExperimentConfig& c);
void cmd_hamiltonian_drift(const ExperimentConfig& c);

// Full CLI: subcommands resonant-part, average, simulate, convergence,
// hamiltonian-drift. Returns the process exit code (0 ok, 2 config error,
// 3 numeric failure).
int run_cli(int argc, const char* const* argv);

} // namespace kbavg
