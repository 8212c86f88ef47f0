#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kbavg/errors.hpp"
#include "kbavg/experiment.hpp"
#include "test_util.hpp"

using namespace kbavg;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::path("experiment_test_out") / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

double to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

fs::path write_config(const fs::path& dir, const json& j) {
    fs::path p = dir / "config.json";
    write_text_file(p, j.dump(2) + "\n");
    return p;
}

int run(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

json c6_hamiltonian_json() {
    HamiltonianPoly h(2, {{MultiIndex({2, 0}), MultiIndex({0, 2}), cplx{0.05, 0.0}},
                          {MultiIndex({0, 2}), MultiIndex({2, 0}), cplx{0.05, 0.0}},
                          {MultiIndex({2, 0}), MultiIndex({2, 0}), cplx{1.0, 0.0}}});
    return hamiltonian_to_json(h);
}

} // namespace

TEST_CASE("doubles are printed in their shortest faithful form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1e-3) == "0.001");

    testutil::Rng rng(71);
    for (int rep = 0; rep < 200; ++rep) {
        double x = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform_int(-12, 12));
        CHECK(to_double(format_double(x)) == x);
    }
}

TEST_CASE("hamiltonian json carries the hermitian marker") {
    testutil::Rng rng(73);
    for (int trial = 0; trial < 10; ++trial) {
        int n = rng.uniform_int(1, 3);
        HamiltonianPoly h(n, testutil::random_hermitian_terms(rng, n, 4, 3));
        CHECK(hamiltonian_from_json(hamiltonian_to_json(h)) == h);
    }

    json good = c6_hamiltonian_json();
    json j = good;
    j.erase("hermitian");
    CHECK_THROWS_AS((void)hamiltonian_from_json(j), ConfigError);
    j = good;
    j["hermitian"] = false;
    CHECK_THROWS_AS((void)hamiltonian_from_json(j), ConfigError);
    j = good;
    j["components"].push_back(json::array());
    CHECK_THROWS_AS((void)hamiltonian_from_json(j), ConfigError);
    j = good;
    j["components"][0][0]["im"] = 1.0;   // breaks the symmetry of a diagonal term
    CHECK_THROWS_AS((void)hamiltonian_from_json(j), ConfigError);
}

TEST_CASE("config parse then serialize is a fixed point") {
    json doc = {{"study", "simulate"},
                {"field", {{"builtin", "example-2.4"}}},
                {"lambda", {1, "3/2", 0.25}},
                {"v0", {{0.5, -0.25}}},
                {"epsilons", {0.1, 0.01}},
                {"theta", 0.2},
                {"dt", 0.05},
                {"dtau", 0.001},
                {"t_final", 100.0},
                {"form", "slow"},
                {"tol", 1e-4},
                {"resonance_tol", 1e-9},
                {"nonresonance_bound", 25},
                {"accept_bounded_certificate", true},
                {"seed", 42},
                {"out", "somewhere"},
                {"threads", 3}};
    ExperimentConfig c1 = config_from_json(doc);
    CHECK(c1.study == StudyKind::simulate);
    CHECK(c1.builtin == "example-2.4");
    CHECK(c1.form == EquationForm::slow);
    CHECK(c1.epsilons == std::vector<double>{0.1, 0.01});
    CHECK(c1.theta == 0.2);
    CHECK(c1.v0->at(0) == cplx{0.5, -0.25});
    CHECK(c1.threads == 3);

    json s1 = config_to_json(c1);
    json s2 = config_to_json(config_from_json(s1));
    CHECK(s1 == s2);
    // raw lambda spellings survive the round trip
    CHECK(s1.at("lambda") == doc.at("lambda"));
}

TEST_CASE("malformed configs are rejected") {
    CHECK_THROWS_AS((void)config_from_json(json::array()), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(json{{"threads", 0}}), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(json{{"study", "nope"}}), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(json{{"form", "nope"}}), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(json{{"v0", {1.0}}}), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(json{{"lambda", 5}}), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(json{{"tol", "tight"}}), ConfigError);
    CHECK_THROWS_AS((void)config_from_json(json{{"field", "builtin"}}), ConfigError);
}

TEST_CASE("builtin problems resolve and overrides are dimension-checked") {
    CHECK(is_builtin("example-2.4"));
    CHECK_FALSE(is_builtin("example-9.9"));
    CHECK_THROWS_AS((void)builtin_problem("example-9.9"), ConfigError);

    ResolvedProblem rp = builtin_problem("example-2.4");
    CHECK(field_dim(rp.field) == 1);
    CHECK(rp.lambda.exact());
    CHECK(rp.lambda.value(0) == 1.0);
    CHECK(rp.v0 == cvec{cplx{1.0, 0.0}});
    PolynomialField expected(
        1, {Polynomial(1, {{MultiIndex({2}), MultiIndex({1}), cplx{1.0, 0.0}},
                           {MultiIndex({3}), MultiIndex({0}), cplx{1.0, 0.0}}})});
    CHECK(field_poly(rp.field) == expected);

    ExperimentConfig c;
    CHECK_THROWS_AS((void)resolve_field_problem(c), ConfigError);   // no source

    c.builtin = "example-2.4";
    c.inline_field = field_to_json(expected);
    CHECK_THROWS_AS((void)resolve_field_problem(c), ConfigError);   // two sources

    c.inline_field.reset();
    c.lambda = std::vector<json>{json(2)};
    ResolvedProblem over = resolve_field_problem(c);
    CHECK(over.lambda.value(0) == 2.0);
    c.lambda = std::vector<json>{json(1), json(2)};
    CHECK_THROWS_AS((void)resolve_field_problem(c), ConfigError);   // wrong dim

    ExperimentConfig f;
    f.inline_field = field_to_json(expected);
    CHECK_THROWS_AS((void)resolve_field_problem(f), ConfigError);   // needs lambda
    f.lambda = std::vector<json>{json(1)};
    CHECK_THROWS_AS((void)resolve_field_problem(f), ConfigError);   // needs v0
    f.v0 = cvec{cplx{0.5, 0.0}};
    CHECK(field_poly(resolve_field_problem(f).field) == expected);
    f.lambda = std::vector<json>{json(1), json(1)};
    f.v0 = cvec{cplx{0.5, 0.0}, cplx{0.5, 0.0}};
    CHECK_THROWS_AS((void)resolve_field_problem(f), ConfigError);   // field is 1-dim

    ExperimentConfig hc;
    CHECK_THROWS_AS((void)resolve_hamiltonian(hc), ConfigError);
    hc.inline_hamiltonian = c6_hamiltonian_json();
    CHECK(resolve_hamiltonian(hc).dim() == 2);
    hc.hamiltonian_file = "also.json";
    CHECK_THROWS_AS((void)resolve_hamiltonian(hc), ConfigError);
}

TEST_CASE("resonant-part command writes the table and the resonant field") {
    fs::path dir = fresh_dir("respart");
    ExperimentConfig c;
    c.builtin = "example-2.4";
    c.out_dir = dir.string();
    cmd_resonant_part(c);

    std::string csv = slurp(dir / "resonance_table.csv");
    CHECK(csv ==
          "j,alpha,beta,defect,resonant\n"
          "0,\"2\",\"1\",0,true\n"
          "0,\"3\",\"0\",-2,false\n");
    CHECK(csv.find('\r') == std::string::npos);

    PolynomialField res = field_from_json(json::parse(slurp(dir / "resonant_field.json")));
    PolynomialField want(1, {Polynomial(1, {{MultiIndex({2}), MultiIndex({1}),
                                             cplx{1.0, 0.0}}})});
    CHECK(res == want);

    json meta = json::parse(slurp(dir / "run_meta.json"));
    CHECK(meta.at("command") == "resonant-part");
    CHECK(meta.at("exact_arithmetic") == true);
    CHECK(meta.at("config").at("form") == "fast");
}

TEST_CASE("average command reports matching symbolic and numeric values") {
    fs::path dir = fresh_dir("average");
    ExperimentConfig c;
    c.builtin = "example-2.4";
    c.out_dir = dir.string();
    cmd_average(c);

    json out = json::parse(slurp(dir / "average.json"));
    CHECK(out.at("tol") == 1e-4);
    CHECK(out.at("symbolic")[0][0].get<double>() == 1.0);
    CHECK(out.at("symbolic")[0][1].get<double>() == 0.0);
    cplx numeric{out.at("numeric")[0][0].get<double>(),
                 out.at("numeric")[0][1].get<double>()};
    CHECK(std::abs(numeric - cplx{1.0, 0.0}) < 1e-3);
}

TEST_CASE("simulate command writes one trajectory per epsilon") {
    fs::path dir = fresh_dir("simulate");
    ExperimentConfig c;
    c.study = StudyKind::simulate;
    c.builtin = "example-2.4";
    c.theta = 0.2;
    c.epsilons = {0.1, 0.01};
    c.out_dir = dir.string();
    cmd_simulate(c);

    for (const char* name : {"trajectory_fast_eps0.1.csv", "trajectory_fast_eps0.01.csv"}) {
        std::string body = slurp(dir / name);
        auto ls = lines_of(body);
        CHECK(ls[1] == "time,re_z1,im_z1,abs_z1");
        CHECK(body.find('\r') == std::string::npos);
    }
    CHECK(lines_of(slurp(dir / "trajectory_fast_eps0.1.csv"))[0] ==
          "# form=fast,epsilon=0.1,dim=1");

    json meta = json::parse(slurp(dir / "run_meta.json"));
    CHECK(meta.at("runs").size() == 2);
    CHECK(meta.at("runs")[0].at("theta") == 0.2);
    CHECK(meta.at("runs")[0].at("theta_overridden") == true);
    CHECK(meta.at("runs")[0].contains("dt"));

    // the effective equation is integrated once, without any epsilon
    fs::path dir2 = fresh_dir("simulate_eff");
    c.form = EquationForm::effective;
    c.out_dir = dir2.string();
    cmd_simulate(c);
    auto ls = lines_of(slurp(dir2 / "trajectory_effective.csv"));
    CHECK(ls[0] == "# form=effective,epsilon=none,dim=1");
    auto last = split_csv(ls.back());
    CHECK(to_double(last[0]) == 0.2);
    CHECK(to_double(last[3]) ==
          doctest::Approx(1.0 / std::sqrt(1.0 - 0.4)).epsilon(1e-4));

    // an unperturbed run needs to be told how long to go
    ExperimentConfig z = c;
    z.form = EquationForm::fast;
    z.epsilons = {0.0};
    z.out_dir = fresh_dir("simulate_eps0").string();
    CHECK_THROWS_AS(cmd_simulate(z), ConfigError);
    z.t_final = 5.0;
    cmd_simulate(z);
    CHECK(fs::exists(fs::path(z.out_dir) / "trajectory_fast_eps0.csv"));

    z.epsilons = {};
    CHECK_THROWS_AS(cmd_simulate(z), ConfigError);
}

TEST_CASE("convergence command orders rows by epsilon and runs deterministically") {
    ExperimentConfig c;
    c.study = StudyKind::convergence;
    c.builtin = "example-2.4";
    c.theta = 0.05;
    c.epsilons = {0.01, 0.1};   // deliberately unsorted
    c.threads = 2;

    fs::path dir_a = fresh_dir("conv_a");
    c.out_dir = dir_a.string();
    cmd_convergence(c);

    auto ls = lines_of(slurp(dir_a / "convergence.csv"));
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "epsilon,sup_distance,amp_err_1,status");
    auto row1 = split_csv(ls[1]);
    auto row2 = split_csv(ls[2]);
    CHECK(row1[0] == "0.1");
    CHECK(row2[0] == "0.01");
    CHECK(row1[3] == "ok");
    CHECK(row2[3] == "ok");
    double sup_big = to_double(row1[1]);
    double sup_small = to_double(row2[1]);
    CHECK(sup_big > 0.0);
    CHECK(sup_small < sup_big);

    auto plot = lines_of(slurp(dir_a / "convergence_plot.csv"));
    CHECK(plot[0] == "epsilon,tau,distance");
    CHECK(plot.size() > 3);
    CHECK(lines_of(slurp(dir_a / "convergence_timings.csv"))[0] == "epsilon,wall_time_s");

    json meta = json::parse(slurp(dir_a / "run_meta.json"));
    CHECK(meta.at("theta") == 0.05);
    CHECK(meta.at("theta_overridden") == true);

    // a rerun on a different thread count produces byte-identical results
    fs::path dir_b = fresh_dir("conv_b");
    c.out_dir = dir_b.string();
    c.threads = 1;
    cmd_convergence(c);
    CHECK(slurp(dir_a / "convergence.csv") == slurp(dir_b / "convergence.csv"));
    CHECK(slurp(dir_a / "convergence_plot.csv") == slurp(dir_b / "convergence_plot.csv"));

    c.epsilons = {0.1};
    CHECK_THROWS_AS(cmd_convergence(c), ConfigError);
    c.epsilons = {0.1, 1.5};
    CHECK_THROWS_AS(cmd_convergence(c), ConfigError);
    c.epsilons = {0.1, 0.0};
    CHECK_THROWS_AS(cmd_convergence(c), ConfigError);
}

TEST_CASE("hamiltonian drift command demands a non-resonance certificate") {
    ExperimentConfig c;
    c.study = StudyKind::hamiltonian_drift;
    c.inline_hamiltonian = c6_hamiltonian_json();
    c.lambda = std::vector<json>{json(1.0), json(1.4142135623730951)};
    c.v0 = cvec{cplx{0.8, 0.0}, cplx{0.6, 0.0}};
    c.epsilons = {0.1};
    c.accept_bounded_certificate = true;
    c.out_dir = fresh_dir("drift").string();
    cmd_hamiltonian_drift(c);

    auto ls = lines_of(slurp(fs::path(c.out_dir) / "action_drift.csv"));
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "j,drift,epsilon");
    auto r0 = split_csv(ls[1]);
    auto r1 = split_csv(ls[2]);
    CHECK(r0[0] == "0");
    CHECK(r1[0] == "1");
    CHECK(r0[2] == "0.1");
    CHECK(to_double(r0[1]) > 0.0);
    CHECK(to_double(r0[1]) < 0.5);

    json meta = json::parse(slurp(fs::path(c.out_dir) / "run_meta.json"));
    CHECK(meta.at("nonresonant") == true);
    CHECK(meta.at("certificate_bound") == 20);

    ExperimentConfig bad = c;
    bad.accept_bounded_certificate = false;
    CHECK_THROWS_AS(cmd_hamiltonian_drift(bad), ConfigError);
    bad = c;
    bad.nonresonance_bound = 19;
    CHECK_THROWS_AS(cmd_hamiltonian_drift(bad), ConfigError);
    bad = c;
    bad.lambda = std::vector<json>{json(1), json(2)};
    CHECK_THROWS_WITH_AS(cmd_hamiltonian_drift(bad),
                         "hamiltonian-drift: lambda is resonant, witness s = [2 -1]",
                         ConfigError);
    bad = c;
    bad.epsilons = {0.0};
    CHECK_THROWS_AS(cmd_hamiltonian_drift(bad), ConfigError);
    bad = c;
    bad.v0.reset();
    CHECK_THROWS_AS(cmd_hamiltonian_drift(bad), ConfigError);
    bad = c;
    bad.lambda.reset();
    CHECK_THROWS_AS(cmd_hamiltonian_drift(bad), ConfigError);
}

TEST_CASE("cli maps outcomes to exit codes") {
    fs::path dir = fresh_dir("cli");

    CHECK(run({"kbavg", "--help"}) == 0);
    CHECK(run({"kbavg"}) == 2);
    CHECK(run({"kbavg", "frobnicate"}) == 2);
    CHECK(run({"kbavg", "average"}) == 2);   // -c is required
    CHECK(run({"kbavg", "average", "-c", (dir / "no_such.json").string()}) == 2);

    fs::path broken = dir / "broken.json";
    write_text_file(broken, "{oops\n");
    CHECK(run({"kbavg", "average", "-c", broken.string()}) == 2);

    fs::path good = write_config(dir, json{{"field", {{"builtin", "example-2.4"}}}});
    fs::path out = dir / "ok";
    CHECK(run({"kbavg", "resonant-part", "-c", good.string(), "-o", out.string(),
               "--seed", "777", "--threads", "3"}) == 0);
    CHECK(fs::exists(out / "resonance_table.csv"));
    json meta = json::parse(slurp(out / "run_meta.json"));
    CHECK(meta.at("config").at("seed") == 777);
    CHECK(meta.at("config").at("threads") == 3);
    CHECK(meta.at("config").at("out") == out.string());

    CHECK(run({"kbavg", "resonant-part", "-c", good.string(), "--threads", "0"}) == 2);

    fs::path mismatched = dir / "mismatch.json";
    write_text_file(mismatched, json{{"study", "average"},
                                     {"field", {{"builtin", "example-2.4"}}}}
                                    .dump() +
                                    "\n");
    CHECK(run({"kbavg", "resonant-part", "-c", mismatched.string(), "-o",
               (dir / "m").string()}) == 2);

    // a genuine blow-up surfaces as a numeric failure: d|v|/dt = |v|^3 here,
    // so the safety ball is left near t = 0.4
    json cubic = field_to_json(PolynomialField(
        1, {Polynomial(1, {{MultiIndex({2}), MultiIndex({1}), cplx{1.0, 0.0}}})}));
    fs::path explode = dir / "explode.json";
    write_text_file(explode, json{{"study", "simulate"},
                                  {"field", {{"inline", cubic}}},
                                  {"lambda", {1}},
                                  {"v0", {{1.0, 0.0}}},
                                  {"theta", 0.5},
                                  {"epsilons", {1.0}}}
                                 .dump() +
                                 "\n");
    CHECK(run({"kbavg", "simulate", "-c", explode.string(), "-o",
               (dir / "x").string()}) == 3);
}
