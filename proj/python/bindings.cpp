#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kbavg/errors.hpp"
#include "kbavg/experiment.hpp"

namespace py = pybind11;
using namespace kbavg;

namespace {

// Same spellings the CLI config accepts: ints and "p/q" strings stay exact,
// any float entry drops the whole vector to float mode.
FrequencyVector frequencies_from_list(const py::list& entries) {
    std::vector<Rational> rs;
    std::vector<double> vals;
    bool exact = true;
    for (const auto& e : entries) {
        if (py::isinstance<py::str>(e)) {
            Rational r = parse_rational(e.cast<std::string>());
            rs.push_back(r);
            vals.push_back(rational_value(r));
        } else if (py::isinstance<py::int_>(e)) {
            long long v = e.cast<long long>();
            rs.emplace_back(v);
            vals.push_back(static_cast<double>(v));
        } else {
            exact = false;
            vals.push_back(e.cast<double>());
        }
    }
    return exact ? FrequencyVector(std::move(vals), std::move(rs))
                 : FrequencyVector(std::move(vals));
}

Trajectory simulate_py(const PolynomialField& P, const FrequencyVector& lambda,
                       double eps, const cvec& v0, const std::string& form,
                       std::optional<double> step, std::optional<double> theta,
                       std::optional<double> t_final, double tol, int threads) {
    EquationForm f = form_from_name(form);
    if (f == EquationForm::effective) {
        Field avg = averaged_field(Field{P}, lambda, tol, threads);
        SimulationProblem shape = make_problem(Field{P}, lambda, 1.0, v0, theta);
        double dtau = step ? *step : default_dt_effective(avg, shape.R);
        return integrate_effective(avg, v0, shape.theta, dtau);
    }
    SimulationProblem prob = make_problem(Field{P}, lambda, eps, v0, theta);
    if (f == EquationForm::fast) {
        double dt = step ? *step : default_dt_fast(prob);
        return integrate_fast(prob, dt, t_final);
    }
    double dtau = step ? *step : default_dt_slow(prob);
    return f == EquationForm::slow ? integrate_slow(prob, dtau, t_final)
                                   : integrate_interaction(prob, dtau, t_final);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Averaging of weakly perturbed linear oscillator systems";

    py::register_exception<BlowUpError>(m, "BlowUpError", PyExc_ArithmeticError);
    py::register_exception<NonConvergenceError>(m, "NonConvergenceError",
                                                PyExc_ArithmeticError);

    py::class_<MultiIndex>(m, "MultiIndex")
        .def(py::init<std::vector<int>>(), py::arg("exponents"))
        .def_property_readonly("exponents", &MultiIndex::exponents)
        .def("order", &MultiIndex::order)
        .def("__len__", &MultiIndex::size)
        .def("__getitem__",
             [](const MultiIndex& a, int i) {
                 if (i < 0 || i >= a.size()) throw py::index_error();
                 return a[i];
             })
        .def("__repr__", [](const MultiIndex& a) { return "MultiIndex(" + a.str() + ")"; })
        .def(py::self == py::self);

    py::class_<Monomial>(m, "Monomial")
        .def(py::init([](std::vector<int> alpha, std::vector<int> beta, cplx coeff) {
                 return Monomial{MultiIndex(std::move(alpha)),
                                 MultiIndex(std::move(beta)), coeff};
             }),
             py::arg("alpha"), py::arg("beta"), py::arg("coeff"))
        .def_readonly("alpha", &Monomial::alpha)
        .def_readonly("beta", &Monomial::beta)
        .def_readonly("coeff", &Monomial::coeff)
        .def("degree", &Monomial::degree);

    py::class_<Polynomial>(m, "Polynomial")
        .def(py::init<int, std::vector<Monomial>>(), py::arg("dim"), py::arg("terms"))
        .def_property_readonly("dim", &Polynomial::dim)
        .def_property_readonly("terms", &Polynomial::terms)
        .def("degree", &Polynomial::degree)
        .def("eval", [](const Polynomial& p, const cvec& z) { return p.eval(z); },
             py::arg("z"))
        .def("dz", &Polynomial::dz, py::arg("j"))
        .def("dzbar", &Polynomial::dzbar, py::arg("j"))
        .def(py::self == py::self);

    py::class_<PolynomialField>(m, "PolynomialField")
        .def(py::init<int, std::vector<Polynomial>>(), py::arg("dim"),
             py::arg("components"))
        .def_property_readonly("dim", &PolynomialField::dim)
        .def_property_readonly("components", &PolynomialField::components)
        .def("degree", &PolynomialField::degree)
        .def("eval", &PolynomialField::eval, py::arg("z"))
        .def("to_json",
             [](const PolynomialField& P) { return field_to_json(P).dump(); })
        .def_static("from_json",
                    [](const std::string& s) {
                        return field_from_json(nlohmann::json::parse(s));
                    })
        .def(py::self == py::self);

    py::class_<FrequencyVector>(m, "FrequencyVector")
        .def(py::init(&frequencies_from_list), py::arg("entries"),
             "Entries may be floats, ints, or exact rational strings like '3/2'.")
        .def_property_readonly("dim", &FrequencyVector::dim)
        .def_property_readonly("values", &FrequencyVector::values)
        .def_property_readonly("exact", &FrequencyVector::exact);

    m.def("default_tolerance", &default_tolerance, py::arg("frequencies"));
    m.def("lipschitz_estimate", &lipschitz_estimate, py::arg("field"), py::arg("radius"));

    py::class_<ResonanceReport>(m, "ResonanceReport")
        .def_readonly("j", &ResonanceReport::j)
        .def_readonly("alpha", &ResonanceReport::alpha)
        .def_readonly("beta", &ResonanceReport::beta)
        .def_readonly("defect", &ResonanceReport::defect)
        .def_readonly("resonant", &ResonanceReport::resonant);

    m.def("resonant_part", &resonant_part, py::arg("field"), py::arg("frequencies"),
          py::arg("tol"));
    m.def("resonance_table", &resonance_table, py::arg("field"),
          py::arg("frequencies"), py::arg("tol"));

    m.def("average_at",
          [](const PolynomialField& P, const FrequencyVector& lambda, const cvec& a,
             double tol, int threads, bool quadrature) {
              Field f = quadrature ? Field{as_generic(P)} : Field{P};
              return average(f, lambda, a, tol, threads);
          },
          py::arg("field"), py::arg("frequencies"), py::arg("a"),
          py::arg("tol") = 1e-4, py::arg("threads") = 1,
          py::arg("quadrature") = false,
          "Time average of the interaction field at a; quadrature=True forces "
          "the numerical path instead of the symbolic one.");

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("form",
                               [](const Trajectory& t) {
                                   return std::string(form_name(t.form));
                               })
        .def_readonly("dim", &Trajectory::dim)
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("epsilon", &Trajectory::epsilon)
        .def("__len__", &Trajectory::size);

    m.def("simulate", &simulate_py, py::arg("field"), py::arg("frequencies"),
          py::arg("epsilon"), py::arg("v0"), py::arg("form") = "fast",
          py::arg("step") = std::nullopt, py::arg("theta") = std::nullopt,
          py::arg("t_final") = std::nullopt, py::arg("tol") = 1e-4,
          py::arg("threads") = 1);
    m.def("horizon_theta",
          [](const PolynomialField& P, double R) { return horizon_theta(R, Field{P}); },
          py::arg("field"), py::arg("radius"));
    m.def("state_at", &state_at, py::arg("trajectory"), py::arg("t"));
    m.def("sup_distance", &sup_distance, py::arg("a"), py::arg("b"));

    py::class_<HamiltonianPoly>(m, "Hamiltonian")
        .def(py::init([](int dim, std::vector<Monomial> terms) {
                 return HamiltonianPoly(dim, std::move(terms));
             }),
             py::arg("dim"), py::arg("terms"))
        .def_property_readonly("dim", &HamiltonianPoly::dim)
        .def_property_readonly("poly", &HamiltonianPoly::poly)
        .def("eval_real", &HamiltonianPoly::eval_real, py::arg("z"));

    m.def("hamiltonian_field", &hamiltonian_field, py::arg("hamiltonian"));
    m.def("averaged_hamiltonian", &averaged_hamiltonian, py::arg("hamiltonian"),
          py::arg("frequencies"), py::arg("tol"));

    py::class_<HamEffReport>(m, "HamEffReport")
        .def_readonly("max_discrepancy", &HamEffReport::max_discrepancy)
        .def_readonly("ok", &HamEffReport::ok);

    m.def("check_ham_eff", &check_ham_eff, py::arg("hamiltonian"),
          py::arg("frequencies"), py::arg("tol"),
          "Checks that averaging the Hamiltonian commutes with taking its field.");
    m.def("action_drift", &action_drift, py::arg("trajectory"));

    py::class_<NonresonanceCheck>(m, "NonresonanceCheck")
        .def_readonly("nonresonant", &NonresonanceCheck::nonresonant)
        .def_readonly("witness", &NonresonanceCheck::witness)
        .def_readonly("bound", &NonresonanceCheck::bound);

    m.def("is_nonresonant", &is_nonresonant, py::arg("frequencies"), py::arg("bound"));
    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<const char*> argv;
        argv.push_back("kbavg");
        for (const auto& a : args) argv.push_back(a.c_str());
        return run_cli(static_cast<int>(argv.size()), argv.data());
    });
}
