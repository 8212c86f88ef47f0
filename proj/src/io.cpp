#include "kbavg/io.hpp"

#include <charconv>
#include <fstream>

#include "kbavg/errors.hpp"

namespace kbavg {

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

nlohmann::json field_to_json(const PolynomialField& P) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& comp : P.components()) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& m : comp.terms()) {
            terms.push_back({{"alpha", m.alpha.exponents()},
                             {"beta", m.beta.exponents()},
                             {"re", m.coeff.real()},
                             {"im", m.coeff.imag()}});
        }
        comps.push_back(std::move(terms));
    }
    return {{"dim", P.dim()}, {"components", std::move(comps)}};
}

namespace {

std::vector<Polynomial> components_from_json(const nlohmann::json& j, int dim) {
    if (!j.is_array())
        throw ConfigError("field json: 'components' must be an array");
    std::vector<Polynomial> comps;
    comps.reserve(j.size());
    for (const auto& comp : j) {
        if (!comp.is_array())
            throw ConfigError("field json: each component must be an array of terms");
        std::vector<Monomial> terms;
        terms.reserve(comp.size());
        for (const auto& t : comp) {
            if (!t.contains("alpha") || !t.contains("beta") || !t.contains("re") ||
                !t.contains("im"))
                throw ConfigError("field json: term needs alpha, beta, re, im");
            Monomial m;
            m.alpha = MultiIndex(t.at("alpha").get<std::vector<int>>());
            m.beta = MultiIndex(t.at("beta").get<std::vector<int>>());
            m.coeff = cplx(t.at("re").get<double>(), t.at("im").get<double>());
            if (m.alpha.size() != dim || m.beta.size() != dim)
                throw ConfigError("field json: multi-index length disagrees with dim");
            terms.push_back(std::move(m));
        }
        comps.emplace_back(dim, std::move(terms));
    }
    return comps;
}

} // namespace

PolynomialField field_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("components"))
        throw ConfigError("field json: needs 'dim' and 'components'");
    int dim = j.at("dim").get<int>();
    if (dim < 1) throw ConfigError("field json: dim must be positive");
    auto comps = components_from_json(j.at("components"), dim);
    if (static_cast<int>(comps.size()) != dim)
        throw ConfigError("field json: expected one component list per dimension");
    return PolynomialField(dim, std::move(comps));
}

nlohmann::json hamiltonian_to_json(const HamiltonianPoly& h) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& m : h.poly().terms()) {
        terms.push_back({{"alpha", m.alpha.exponents()},
                         {"beta", m.beta.exponents()},
                         {"re", m.coeff.real()},
                         {"im", m.coeff.imag()}});
    }
    nlohmann::json comps = nlohmann::json::array();
    comps.push_back(std::move(terms));
    return {{"dim", h.dim()}, {"hermitian", true}, {"components", std::move(comps)}};
}

HamiltonianPoly hamiltonian_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("components"))
        throw ConfigError("hamiltonian json: needs 'dim' and 'components'");
    if (!j.contains("hermitian") || !j.at("hermitian").is_boolean() ||
        !j.at("hermitian").get<bool>())
        throw ConfigError("hamiltonian json: requires \"hermitian\": true");
    int dim = j.at("dim").get<int>();
    if (dim < 1) throw ConfigError("hamiltonian json: dim must be positive");
    auto comps = components_from_json(j.at("components"), dim);
    if (comps.size() != 1)
        throw ConfigError("hamiltonian json: expected a single component list of terms");
    try {
        return HamiltonianPoly(comps[0]);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("hamiltonian json: ") + e.what());
    }
}

void write_resonance_csv(std::ostream& os, const std::vector<ResonanceReport>& rows) {
    os << "j,alpha,beta,defect,resonant\n";
    for (const auto& r : rows) {
        os << r.j << ",\"" << r.alpha.str() << "\",\"" << r.beta.str() << "\","
           << format_double(r.defect) << ',' << (r.resonant ? "true" : "false") << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "# form=" << form_name(traj.form) << ",epsilon="
       << (traj.epsilon ? format_double(*traj.epsilon) : std::string("none"))
       << ",dim=" << traj.dim << '\n';
    os << "time";
    for (int j = 1; j <= traj.dim; ++j) os << ",re_z" << j << ",im_z" << j;
    for (int j = 1; j <= traj.dim; ++j) os << ",abs_z" << j;
    os << '\n';
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << format_double(traj.times[i]);
        for (int j = 0; j < traj.dim; ++j)
            os << ',' << format_double(traj.states[i][j].real()) << ','
               << format_double(traj.states[i][j].imag());
        for (int j = 0; j < traj.dim; ++j)
            os << ',' << format_double(std::abs(traj.states[i][j]));
        os << '\n';
    }
}

void write_drift_csv(std::ostream& os,
                     const std::vector<std::tuple<int, double, double>>& rows) {
    os << "j,drift,epsilon\n";
    for (const auto& [j, drift, eps] : rows)
        os << j << ',' << format_double(drift) << ',' << format_double(eps) << '\n';
}

nlohmann::json load_json_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + p.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("parse error in " + p.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& p, const std::string& body) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);   // binary keeps LF endings everywhere
    if (!out) throw ConfigError("cannot write file: " + p.string());
    out << body;
}

} // namespace kbavg
