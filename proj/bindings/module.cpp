#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kslie/serialize.hpp"
#include "kslie/verify.hpp"

namespace py = pybind11;
using namespace kslie;

namespace {

std::mt19937_64 rng_from(std::uint64_t seed) { return std::mt19937_64(seed); }

ZeroTestOptions zero_opts(int trials, double tol) {
    ZeroTestOptions z;
    z.trials = trials;
    z.tol = tol;
    return z;
}

py::object json_to_py(const nlohmann::json& j) {
    py::module_ json_mod = py::module_::import("json");
    return json_mod.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "symbolic-numeric toolkit for Lie systems Hamiltonian with respect to "
              "families of presymplectic forms";

    py::register_exception<Error>(m, "KslieError");

    // ---- expressions ----

    py::class_<Expr>(m, "Expr")
        .def("__str__", [](const Expr& e) { return to_string(e); })
        .def("__repr__", [](const Expr& e) { return "Expr(" + to_string(e) + ")"; })
        .def("__add__", [](const Expr& a, const Expr& b) { return simplify(a + b); })
        .def("__sub__", [](const Expr& a, const Expr& b) { return simplify(a - b); })
        .def("__mul__", [](const Expr& a, const Expr& b) { return simplify(a * b); })
        .def("__truediv__", [](const Expr& a, const Expr& b) { return simplify(a / b); })
        .def("__neg__", [](const Expr& a) { return simplify(-a); });

    m.def("parse", &parse, py::arg("text"), py::arg("symbols"),
          "Parse an expression over the given symbols ('t' is always allowed).");
    m.def("simplify", &simplify);
    m.def("differentiate", &differentiate, py::arg("expr"), py::arg("var"));
    m.def(
        "substitute",
        [](const Expr& e, const std::map<std::string, Expr>& bindings) { return substitute(e, bindings); },
        py::arg("expr"), py::arg("bindings"));
    m.def(
        "evaluate",
        [](const Expr& e, const std::map<std::string, double>& point) {
            return evaluate(e, Env(point.begin(), point.end()));
        },
        py::arg("expr"), py::arg("point"));

    py::class_<DomainBox>(m, "DomainBox")
        .def(py::init<>())
        .def("bind", &DomainBox::bind, py::return_value_policy::reference_internal)
        .def("exclude_zero_of", &DomainBox::exclude_zero_of, py::return_value_policy::reference_internal);

    m.def(
        "is_zero",
        [](const Expr& e, const DomainBox& box, std::uint64_t seed, int trials, double tol) {
            auto rng = rng_from(seed);
            return is_zero(e, box, zero_opts(trials, tol), rng);
        },
        py::arg("expr"), py::arg("box"), py::arg("seed") = 0, py::arg("trials") = 25,
        py::arg("tol") = 1e-9);

    // ---- geometry ----

    py::class_<Chart>(m, "Chart")
        .def(py::init<std::vector<std::string>, DomainBox>())
        .def_property_readonly("symbols", &Chart::symbols)
        .def_property_readonly("dim", &Chart::dim)
        .def("__eq__", [](const Chart& a, const Chart& b) { return a == b; });

    py::class_<VectorField>(m, "VectorField")
        .def(py::init<Chart, std::vector<Expr>>())
        .def_property_readonly("components", &VectorField::components)
        .def("apply", &VectorField::apply)
        .def_static("zero", &VectorField::zero);

    py::class_<OneForm>(m, "OneForm")
        .def(py::init<Chart, std::vector<Expr>>())
        .def_property_readonly("coefficients", &OneForm::coefficients);

    py::class_<TwoForm>(m, "TwoForm")
        .def(py::init<Chart>())
        .def("set", &TwoForm::set, py::return_value_policy::reference_internal)
        .def("upper", &TwoForm::upper)
        .def("entry", &TwoForm::entry);

    m.def("lie_bracket", &lie_bracket);
    m.def("d0", [](const Expr& f, const Chart& c) { return exterior_derivative(f, c); },
          "exterior derivative of a function");
    m.def("d1", [](const OneForm& a) { return exterior_derivative(a); },
          "exterior derivative of a one-form");
    m.def("interior_product", &interior_product);
    m.def("lie_derivative", &lie_derivative);
    m.def("wedge", &wedge);
    m.def(
        "is_closed",
        [](const TwoForm& w, std::uint64_t seed, int trials, double tol) {
            auto rng = rng_from(seed);
            return is_closed(w, zero_opts(trials, tol), rng);
        },
        py::arg("form"), py::arg("seed") = 0, py::arg("trials") = 25, py::arg("tol") = 1e-9);

    // ---- structures ----

    py::class_<KSymplecticStructure>(m, "KSymplecticStructure")
        .def_property_readonly("k", &KSymplecticStructure::k)
        .def_property_readonly("forms", &KSymplecticStructure::forms);

    m.def(
        "validate_structure",
        [](std::vector<TwoForm> forms, int samples, std::uint64_t seed) {
            StructureOptions opts;
            opts.samples = samples;
            auto rng = rng_from(seed);
            return validate_structure(std::move(forms), opts, rng);
        },
        py::arg("forms"), py::arg("samples") = 100, py::arg("seed") = 0);
    m.def("kernel_dimension_at", &kernel_dimension_at, py::arg("form"), py::arg("point"),
          py::arg("rank_threshold") = 1e-8);
    m.def(
        "check_hamiltonian",
        [](const VectorField& X, const TwoForm& w, const Expr& h, std::uint64_t seed, int trials,
           double tol) {
            auto rng = rng_from(seed);
            return check_hamiltonian(X, w, h, zero_opts(trials, tol), rng);
        },
        py::arg("field"), py::arg("form"), py::arg("h"), py::arg("seed") = 0, py::arg("trials") = 25,
        py::arg("tol") = 1e-9);
    m.def("bracket_theta", &bracket_theta, py::arg("f"), py::arg("g"), py::arg("field_of_g"));

    // ---- prolongation ----

    py::class_<ProductChart>(m, "ProductChart")
        .def(py::init<Chart, std::size_t, std::vector<Expr>>(), py::arg("base"), py::arg("copies"),
             py::arg("cross_exclusions") = std::vector<Expr>{})
        .def_property_readonly("chart", &ProductChart::chart)
        .def_property_readonly("copies", &ProductChart::copies)
        .def("copy_symbol", &ProductChart::copy_symbol);

    m.def("prolong_function", &prolong_function);
    m.def("prolong_field", &prolong_field);
    m.def("prolong_two_form", &prolong_two_form);

    // ---- integration ----

    py::class_<Trajectory>(m, "Trajectory")
        .def_property_readonly("times", &Trajectory::times)
        .def_property_readonly("states",
                               [](const Trajectory& t) {
                                   std::vector<std::vector<double>> out;
                                   out.reserve(t.size());
                                   for (std::size_t i = 0; i < t.size(); ++i) out.push_back(t.state(i));
                                   return out;
                               })
        .def_property_readonly("chart", &Trajectory::chart);

    py::class_<TDependentField>(m, "TDependentField")
        .def(py::init<std::vector<VectorField>, std::vector<Expr>>());

    m.def("integrate", &integrate, py::arg("field"), py::arg("x0"), py::arg("t0"), py::arg("t1"),
          py::arg("step"), py::arg("system_id") = "");
    m.def(
        "check_constant",
        [](const Expr& f, const Trajectory& traj, double tol, const std::string& label) {
            DriftReport r = check_constant(f, traj, tol, label);
            return json_to_py(to_json(r));
        },
        py::arg("f"), py::arg("trajectory"), py::arg("tol"), py::arg("label") = "");
    m.def("schwarzian_invariants", [](const ProductChart& pc) {
        std::vector<std::pair<std::string, Expr>> out;
        for (const NamedInvariant& inv : schwarzian_invariants(pc)) out.emplace_back(inv.label, inv.expr);
        return out;
    });

    // ---- registry and verification ----

    m.def("example_ids", [] {
        std::vector<std::string> ids;
        for (const ExampleRecord& r : examples()) ids.push_back(r.id);
        return ids;
    });

    py::class_<CompiledExample>(m, "Example")
        .def_property_readonly("chart", [](const CompiledExample& e) { return e.chart; })
        .def_property_readonly("fields", [](const CompiledExample& e) { return e.fields; })
        .def_property_readonly("forms", [](const CompiledExample& e) { return e.forms; })
        .def_property_readonly("hamiltonians", [](const CompiledExample& e) { return e.ham; })
        .def_property_readonly("id", [](const CompiledExample& e) { return e.record.id; })
        .def("default_field", &CompiledExample::default_field)
        .def("pair_chart", &CompiledExample::pair_chart);

    m.def("load_example", [](const std::string& id) { return compile_example(id); });

    m.def(
        "verify",
        [](const std::string& id, const std::string& suite, std::uint64_t seed, int trials, double tol) {
            VerifyOptions opts;
            opts.seed = seed;
            opts.zero = zero_opts(trials, tol);
            auto reports = run_suites(compile_example(id), suite_from_string(suite), opts);
            return json_to_py(to_json(reports));
        },
        py::arg("example_id"), py::arg("suite") = "all", py::arg("seed") = 12345, py::arg("trials") = 25,
        py::arg("tol") = 1e-9);
}
