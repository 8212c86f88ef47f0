#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "kbavg/hamiltonian.hpp"

namespace kbavg {

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

// Field JSON: {"dim": n, "components": [[{"alpha": [...], "beta": [...],
// "re": x, "im": y}, ...], ...]}. Round-trips are bit-exact.
nlohmann::json field_to_json(const PolynomialField& P);
PolynomialField field_from_json(const nlohmann::json& j);

// Hamiltonians share the field schema with a single component list and a
// required "hermitian": true marker.
nlohmann::json hamiltonian_to_json(const HamiltonianPoly& h);
HamiltonianPoly hamiltonian_from_json(const nlohmann::json& j);

// CSV writers. All output is UTF-8 with LF line endings.
void write_resonance_csv(std::ostream& os,
                         const std::vector<ResonanceReport>& rows);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_drift_csv(std::ostream& os,
                     const std::vector<std::tuple<int, double, double>>& rows);

nlohmann::json load_json_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& body);

} // namespace kbavg
