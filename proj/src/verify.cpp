#include "kslie/verify.hpp"

#include <sstream>

namespace kslie {

namespace {

std::string combination_label(const ExampleRecord& r, std::size_t a, std::size_t b) {
    // "[X1,X2] = X3" style, from the expected-constant table
    std::ostringstream os;
    os << '[' << r.basis_labels[a] << ',' << r.basis_labels[b] << "] = ";
    bool any = false;
    for (const auto& e : r.expected_constants) {
        if (e.alpha != a || e.beta != b) continue;
        if (any) os << " + ";
        if (e.value != "1") os << e.value << '*';
        os << r.basis_labels[e.gamma];
        any = true;
    }
    if (!any) os << '0';
    return os.str();
}

std::vector<Rational> expected_row(const ExampleRecord& r, std::size_t a, std::size_t b) {
    std::vector<Rational> row(r.basis.size(), Rational(0));
    for (const auto& e : r.expected_constants)
        if (e.alpha == a && e.beta == b) row[e.gamma] = rational_from_string(e.value);
    return row;
}

SuiteReport structure_suite(const CompiledExample& ex, const VerifyOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    SuiteReport report{ex.record.id, "structure", {}};

    StructureOptions sopts;
    sopts.samples = opts.structure_samples;
    sopts.rank_threshold = opts.rank_threshold;
    sopts.zero = opts.zero;

    for (std::size_t i = 0; i < ex.forms.size(); ++i) {
        bool closed = is_closed(ex.forms[i], opts.zero, rng);
        report.checks.push_back({ex.record.forms[i].label + " is closed", closed, ""});
    }

    try {
        KSymplecticStructure s = validate_structure(ex.forms, sopts, rng);
        std::string detail;
        if (!s.validation().dimension_fits) detail = s.validation().dimension_note;
        report.checks.push_back({"joint kernel trivial at " + std::to_string(opts.structure_samples) +
                                     " sampled points (" + std::to_string(ex.k()) + "-symplectic)",
                                 true, detail});
    } catch (const Error& err) {
        report.checks.push_back({"joint kernel trivial (k-symplectic)", false, err.what()});
    }

    for (std::size_t i = 0; i < ex.kernels.size(); ++i) {
        for (std::size_t j = 0; j < ex.kernels[i].size(); ++j) {
            bool ok = all_zero(interior_product(ex.kernels[i][j], ex.forms[i]), opts.zero, rng);
            report.checks.push_back({"declared kernel field " + std::to_string(j + 1) + " annihilates " +
                                         ex.record.forms[i].label,
                                     ok, ""});
        }
        // kernel dimension at a generic sampled point
        long budget = 1000;
        Env p = ex.chart.box().sample(rng, budget);
        std::size_t dim = kernel_dimension_at(ex.forms[i], ex.chart.to_point(p), opts.rank_threshold);
        bool ok = dim == ex.kernels[i].size();
        report.checks.push_back({"kernel dimension of " + ex.record.forms[i].label + " equals " +
                                     std::to_string(ex.kernels[i].size()),
                                 ok, ok ? "" : "found " + std::to_string(dim)});
    }
    return report;
}

SuiteReport hamiltonian_suite(const CompiledExample& ex, const VerifyOptions& opts) {
    std::mt19937_64 rng(opts.seed + 1);
    SuiteReport report{ex.record.id, "hamiltonian", {}};

    for (std::size_t a = 0; a < ex.fields.size(); ++a)
        for (std::size_t i = 0; i < ex.forms.size(); ++i) {
            bool ok = check_hamiltonian(ex.fields[a], ex.forms[i], ex.ham[a][i], opts.zero, rng);
            std::string label = "i_{" + ex.record.basis_labels[a] + "} " + ex.record.forms[i].label +
                                " = d(" + ex.record.hamiltonians[a][i] + ")";
            report.checks.push_back({label, ok, ""});
        }

    // the tuples work simultaneously: one R^k-valued function per field
    StructureOptions sopts;
    sopts.samples = opts.structure_samples;
    sopts.rank_threshold = opts.rank_threshold;
    sopts.zero = opts.zero;
    try {
        KSymplecticStructure s = validate_structure(ex.forms, sopts, rng);
        for (std::size_t a = 0; a < ex.fields.size(); ++a) {
            bool ok = check_omega_hamiltonian(ex.fields[a], s, ex.omega_tuple(a), opts.zero, rng);
            report.checks.push_back(
                {ex.record.basis_labels[a] + " admits its R^" + std::to_string(ex.k()) + "-valued tuple", ok, ""});
        }
    } catch (const Error& err) {
        report.checks.push_back({"tuple checks need a valid structure", false, err.what()});
    }
    return report;
}

SuiteReport algebra_suite(const CompiledExample& ex, const VerifyOptions& opts) {
    std::mt19937_64 rng(opts.seed + 2);
    SuiteReport report{ex.record.id, "algebra", {}};

    StructureConstantOptions copts;
    copts.zero = opts.zero;
    try {
        LieAlgebraModel model = structure_constants(ex.fields, copts, rng);
        for (std::size_t a = 0; a < ex.fields.size(); ++a)
            for (std::size_t b = a + 1; b < ex.fields.size(); ++b) {
                std::vector<Rational> expect = expected_row(ex.record, a, b);
                bool ok = true;
                std::string detail;
                for (std::size_t g = 0; g < ex.fields.size(); ++g)
                    if (model.c(a, b, g) != expect[g]) {
                        ok = false;
                        detail = "recovered c^" + std::to_string(g + 1) + " = " +
                                 rational_to_string(model.c(a, b, g));
                    }
                report.checks.push_back({combination_label(ex.record, a, b), ok, detail});
            }
        report.checks.push_back({"Jacobi identity holds exactly on the constants", model.jacobi_holds(), ""});
    } catch (const Error& err) {
        report.checks.push_back({"structure constants recoverable", false, err.what()});
    }

    try {
        LieAlgebraModel closure = lie_closure(ex.generators(), 16, copts, rng);
        bool ok = closure.dim() == ex.fields.size();
        report.checks.push_back({"closure of the time slices has dimension " +
                                     std::to_string(ex.fields.size()) + " (Lie system)",
                                 ok, ok ? "" : "found " + std::to_string(closure.dim())});
    } catch (const Error& err) {
        report.checks.push_back({"closure of the time slices is finite", false, err.what()});
    }
    return report;
}

SuiteReport brackets_suite(const CompiledExample& ex, const VerifyOptions& opts) {
    std::mt19937_64 rng(opts.seed + 3);
    SuiteReport report{ex.record.id, "brackets", {}};
    if (ex.record.bracket_table.empty()) {
        report.checks.push_back({"no function bracket table registered", true, "skipped"});
        return report;
    }

    const DomainBox& box = ex.chart.box();
    for (const auto& entry : ex.record.bracket_table) {
        OmegaHamiltonian lhs = bracket_omega(ex.omega_tuple(entry.a), ex.omega_tuple(entry.b),
                                             ex.fields[entry.a], ex.fields[entry.b]);
        bool ok = true;
        for (std::size_t i = 0; i < ex.k(); ++i) {
            Expr expected = Expr::integer(0);
            for (std::size_t g = 0; g < entry.coefficients.size(); ++g)
                expected = expected +
                           Expr::constant(rational_from_string(entry.coefficients[g])) * ex.ham[g][i];
            if (!is_zero(lhs.component(i) - expected, box, opts.zero, rng)) ok = false;
        }
        std::ostringstream label;
        label << "{h^" << entry.a + 1 << ", h^" << entry.b + 1 << "} = ";
        bool any = false;
        for (std::size_t g = 0; g < entry.coefficients.size(); ++g) {
            if (entry.coefficients[g] == "0") continue;
            if (any) label << " + ";
            if (entry.coefficients[g] != "1") label << entry.coefficients[g] << '*';
            label << "h^" << g + 1;
            any = true;
        }
        if (!any) label << '0';
        label << " componentwise";
        report.checks.push_back({label.str(), ok, ""});
    }

    // the contraction with a fixed covector is a Lie-algebra morphism onto
    // the derived bracket
    std::vector<Covector> probes;
    {
        std::vector<double> e1(ex.k(), 0.0), e2(ex.k(), 0.0), ones(ex.k(), 1.0);
        e1[0] = 1.0;
        if (ex.k() > 1) e2[1] = 1.0;
        probes.emplace_back(e1);
        if (ex.k() > 1) probes.emplace_back(e2);
        probes.emplace_back(ones);
    }
    for (std::size_t p = 0; p < probes.size(); ++p) {
        bool ok = true;
        for (const auto& entry : ex.record.bracket_table) {
            OmegaHamiltonian hb = ex.omega_tuple(entry.a);
            OmegaHamiltonian gb = ex.omega_tuple(entry.b);
            Expr lhs = bracket_omega(hb, gb, ex.fields[entry.a], ex.fields[entry.b]).contract(probes[p]);
            Expr rhs = bracket_theta(hb.contract(probes[p]), gb.contract(probes[p]), ex.fields[entry.b]);
            if (!is_zero(lhs - rhs, box, opts.zero, rng)) ok = false;
        }
        report.checks.push_back(
            {"contraction with probe covector " + std::to_string(p + 1) + " is a bracket morphism", ok, ""});
    }

    // locally constant tuples bracket to zero
    {
        std::vector<Expr> ones(ex.k(), Expr::integer(1));
        OmegaHamiltonian constant(ex.chart, ones, VectorField::zero(ex.chart));
        OmegaHamiltonian result =
            bracket_omega(ex.omega_tuple(0), constant, ex.fields[0], VectorField::zero(ex.chart));
        bool ok = true;
        for (std::size_t i = 0; i < ex.k(); ++i)
            if (!is_zero(result.component(i), box, opts.zero, rng)) ok = false;
        report.checks.push_back({"brackets with constant tuples vanish", ok, ""});
    }
    return report;
}

SuiteReport stability_suite(const CompiledExample& ex, const VerifyOptions& opts) {
    std::mt19937_64 rng(opts.seed + 4);
    SuiteReport report{ex.record.id, "stability", {}};

    for (std::size_t i = 0; i < ex.forms.size(); ++i) {
        if (ex.kernels[i].empty()) {
            report.checks.push_back(
                {"kernel of " + ex.record.forms[i].label + " is trivial", true, "nothing to stabilise"});
            continue;
        }
        bool membership = true;
        for (const VectorField& X : ex.fields)
            for (const VectorField& Z : ex.kernels[i]) {
                OneForm contracted = interior_product(lie_bracket(X, Z), ex.forms[i]);
                if (!all_zero(contracted, opts.zero, rng)) membership = false;
            }
        report.checks.push_back({"brackets of the algebra with ker " + ex.record.forms[i].label +
                                     " stay in the kernel",
                                 membership, ""});

        StabilityOptions sopts;
        sopts.zero = opts.zero;
        bool stable = false;
        std::string detail;
        try {
            stable = is_stable_distribution(ex.fields, ex.kernels[i], sopts, rng);
        } catch (const Error& err) {
            detail = err.what();
        }
        report.checks.push_back(
            {"ker " + ex.record.forms[i].label + " is a stable distribution", stable, detail});
    }
    return report;
}

}  // namespace

Suite suite_from_string(const std::string& name) {
    if (name == "structure") return Suite::Structure;
    if (name == "hamiltonian") return Suite::Hamiltonian;
    if (name == "algebra") return Suite::Algebra;
    if (name == "brackets") return Suite::Brackets;
    if (name == "stability") return Suite::Stability;
    if (name == "all") return Suite::All;
    throw Error("unknown suite '" + name + "' (expected structure|hamiltonian|algebra|brackets|stability|all)");
}

std::string suite_name(Suite s) {
    switch (s) {
        case Suite::Structure: return "structure";
        case Suite::Hamiltonian: return "hamiltonian";
        case Suite::Algebra: return "algebra";
        case Suite::Brackets: return "brackets";
        case Suite::Stability: return "stability";
        case Suite::All: return "all";
    }
    return "?";
}

bool SuiteReport::all_pass() const {
    for (const CheckResult& c : checks)
        if (!c.pass) return false;
    return true;
}

std::vector<SuiteReport> run_suites(const CompiledExample& ex, Suite which, const VerifyOptions& opts) {
    std::vector<SuiteReport> out;
    auto want = [&](Suite s) { return which == Suite::All || which == s; };
    if (want(Suite::Structure)) out.push_back(structure_suite(ex, opts));
    if (want(Suite::Hamiltonian)) out.push_back(hamiltonian_suite(ex, opts));
    if (want(Suite::Algebra)) out.push_back(algebra_suite(ex, opts));
    if (want(Suite::Brackets)) out.push_back(brackets_suite(ex, opts));
    if (want(Suite::Stability)) out.push_back(stability_suite(ex, opts));
    return out;
}

}  // namespace kslie
