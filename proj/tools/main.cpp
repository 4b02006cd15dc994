#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kslie/serialize.hpp"

using namespace kslie;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::uint64_t seed = 12345;
    int trials = 25;
    double tol = 1e-9;
    std::string format = "text";
};

VerifyOptions verify_options(const CommonOptions& c) {
    VerifyOptions o;
    o.seed = c.seed;
    o.zero.trials = c.trials;
    o.zero.tol = c.tol;
    return o;
}

void print_suite_reports(const std::vector<SuiteReport>& reports, std::ostream& os) {
    for (const SuiteReport& r : reports) {
        os << "== " << r.example_id << " / " << r.suite << " ==\n";
        for (const CheckResult& c : r.checks) {
            os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.label;
            if (!c.detail.empty()) os << "  (" << c.detail << ")";
            os << "\n";
        }
    }
}

CompiledExample load_or_lookup(const std::string& id, const std::string& load_path) {
    if (!load_path.empty()) {
        std::ifstream in(load_path);
        if (!in) throw Error("cannot open system file '" + load_path + "'");
        json j = json::parse(in);
        return compile_example(record_from_json(j));
    }
    return compile_example(id);
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        out.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

json drift_json(const std::vector<DriftReport>& reports) {
    json arr = json::array();
    for (const DriftReport& r : reports) arr.push_back(to_json(r));
    return arr;
}

// ---- cached report aggregation ----

json load_cache(const std::string& path) {
    std::ifstream in(path);
    if (!in) return json::object();
    try {
        return json::parse(in);
    } catch (const json::exception&) {
        return json::object();
    }
}

void store_cache(const std::string& path, const json& cache) {
    std::ofstream out(path);
    out << cache.dump(2) << "\n";
}

void cache_verify_result(json& cache, const std::vector<SuiteReport>& reports) {
    for (const SuiteReport& r : reports) {
        json& slot = cache[r.example_id]["verify"][r.suite];
        std::size_t passed = 0;
        for (const CheckResult& c : r.checks)
            if (c.pass) ++passed;
        slot = {{"checks", r.checks.size()}, {"passed", passed}, {"pass", r.all_pass()}};
    }
}

void cache_drift_result(json& cache, const std::string& id, const std::vector<DriftReport>& reports) {
    json arr = json::array();
    for (const DriftReport& r : reports) arr.push_back(to_json(r));
    cache[id]["invariants"] = arr;
}

int run_verify(const std::string& id, const std::string& load_path, const std::string& suite_name_text,
               const CommonOptions& common, int samples, const std::string& cache_path) {
    Suite suite = suite_from_string(suite_name_text);
    CompiledExample ex = load_or_lookup(id, load_path);
    VerifyOptions opts = verify_options(common);
    opts.structure_samples = samples;
    std::vector<SuiteReport> reports = run_suites(ex, suite, opts);

    json cache = load_cache(cache_path);
    cache_verify_result(cache, reports);
    store_cache(cache_path, cache);

    bool pass = true;
    for (const SuiteReport& r : reports) pass = pass && r.all_pass();
    if (common.format == "json") {
        std::cout << to_json(reports).dump(2) << "\n";
    } else {
        print_suite_reports(reports, std::cout);
        std::cout << (pass ? "all checks passed" : "some checks FAILED") << "\n";
    }
    return pass ? kExitPass : kExitCheckFailed;
}

int run_integrate(const std::string& id, const CommonOptions& common, std::string x0_text,
                  std::string x0b_text, double t1, double step,
                  const std::vector<std::string>& coeff_overrides, std::size_t prolong_copies,
                  bool with_invariants, const std::string& out_prefix, const std::string& cache_path) {
    CompiledExample ex = compile_example(id);

    // assemble the coefficient tuple, with named overrides
    std::vector<std::string> coeff_text = ex.record.default_coefficients;
    for (const std::string& ov : coeff_overrides) {
        std::size_t eq = ov.find('=');
        if (eq == std::string::npos) throw Error("--coeff expects name=expr");
        std::string name = ov.substr(0, eq);
        bool found = false;
        for (std::size_t i = 0; i < ex.record.coefficient_names.size(); ++i)
            if (ex.record.coefficient_names[i] == name) {
                coeff_text[i] = ov.substr(eq + 1);
                found = true;
            }
        if (!found) throw Error("unknown coefficient '" + name + "' for " + id);
    }
    std::vector<Expr> coeffs;
    for (const std::string& c : coeff_text) coeffs.push_back(parse(c, {}));

    std::vector<double> x0 = parse_point(x0_text);
    std::size_t n = ex.chart.dim();

    Trajectory traj = [&] {
        if (prolong_copies <= 1) {
            if (x0.size() != n) throw Error("--x0 needs " + std::to_string(n) + " values");
            return integrate(TDependentField(ex.fields, coeffs), x0, 0.0, t1, step, id);
        }
        if (prolong_copies > 4) throw Error("--prolong supports at most 4 copies");
        ProductChart pc(ex.chart, prolong_copies,
                        prolong_copies == 2
                            ? [&] {
                                  std::vector<Expr> cross;
                                  ProductChart plain(ex.chart, 2);
                                  for (const std::string& e : ex.record.pair_exclusions)
                                      cross.push_back(parse(e, plain.chart().symbols()));
                                  return cross;
                              }()
                            : std::vector<Expr>{});
        std::vector<double> full = x0;
        if (!x0b_text.empty()) {
            std::vector<double> x0b = parse_point(x0b_text);
            full.insert(full.end(), x0b.begin(), x0b.end());
        }
        if (full.size() != n * prolong_copies)
            throw Error("--x0/--x0b must supply " + std::to_string(n * prolong_copies) + " values in total");
        std::vector<VectorField> lifted;
        for (const VectorField& X : ex.fields) lifted.push_back(prolong_field(X, pc));
        return integrate(TDependentField(std::move(lifted), coeffs), full, 0.0, t1, step, id);
    }();

    std::string csv_path = out_prefix + id + "_trajectory.csv";
    {
        std::ofstream csv(csv_path);
        write_csv(traj, csv);
    }

    std::vector<DriftReport> drift;
    if (with_invariants) {
        if (prolong_copies == 2 && ex.record.has_schwarzian_invariants) {
            ProductChart pc(ex.chart, 2);
            for (const NamedInvariant& inv : schwarzian_invariants(pc))
                drift.push_back(check_constant(inv.expr, traj, 1e-6, inv.label));
        }
        if (prolong_copies <= 1)
            for (const auto& inv : ex.record.invariants)
                drift.push_back(
                    check_constant(parse(inv.expr, ex.chart.symbols()), traj, 1e-6, inv.label));
    }

    std::string json_path = out_prefix + id + "_drift.json";
    json summary = {{"system", id},
                    {"samples", traj.size()},
                    {"t_final", traj.size() ? traj.time(traj.size() - 1) : 0.0},
                    {"step", step},
                    {"csv", csv_path},
                    {"invariants", drift_json(drift)}};
    {
        std::ofstream out(json_path);
        out << summary.dump(2) << "\n";
    }

    json cache = load_cache(cache_path);
    cache_drift_result(cache, id, drift);
    store_cache(cache_path, cache);

    if (common.format == "json") {
        std::cout << summary.dump(2) << "\n";
    } else {
        std::cout << "integrated " << id << ": " << traj.size() << " samples, wrote " << csv_path << " and "
                  << json_path << "\n";
        for (const DriftReport& r : drift)
            std::cout << "  [" << (r.pass ? "pass" : "FAIL") << "] " << r.label
                      << " max relative drift " << r.max_rel_deviation << "\n";
    }
    for (const DriftReport& r : drift)
        if (!r.pass) return kExitCheckFailed;
    return kExitPass;
}

int run_report(const CommonOptions& common, bool run_all, const std::string& cache_path) {
    json cache = load_cache(cache_path);

    if (run_all) {
        VerifyOptions opts = verify_options(common);
        for (const ExampleRecord& record : examples()) {
            CompiledExample ex = compile_example(record.id);
            cache_verify_result(cache, run_suites(ex, Suite::All, opts));
        }
        // invariant drift runs for the systems that register invariants
        {
            CompiledExample ks = compile_example("schwarz3ks");
            ProductChart pc = ks.pair_chart();
            std::vector<VectorField> lifted;
            for (const VectorField& X : ks.fields) lifted.push_back(prolong_field(X, pc));
            std::vector<Expr> coeffs;
            for (const std::string& c : ks.record.default_coefficients) coeffs.push_back(parse(c, {}));
            Trajectory traj = integrate(TDependentField(std::move(lifted), std::move(coeffs)),
                                        {0.0, 1.0, 0.0, 0.5, 2.0, 1.0}, 0.0, 1.0, 1e-3, ks.record.id);
            std::vector<DriftReport> drift;
            for (const NamedInvariant& inv : schwarzian_invariants(pc))
                drift.push_back(check_constant(inv.expr, traj, 1e-6, inv.label));
            cache_drift_result(cache, ks.record.id, drift);
        }
        {
            CompiledExample ric = compile_example("riccati4");
            Trajectory traj =
                integrate(ric.default_field(), {-1.0, -2.0, -3.0, -4.0}, 0.0, 1.0, 1e-3, ric.record.id);
            std::vector<DriftReport> drift;
            for (const auto& inv : ric.record.invariants)
                drift.push_back(check_constant(parse(inv.expr, ric.chart.symbols()), traj, 1e-6, inv.label));
            cache_drift_result(cache, ric.record.id, drift);
        }
        store_cache(cache_path, cache);
    }

    if (cache.empty()) {
        std::cout << "no results cached; run 'verify' or 'integrate' first, or pass --run-all\n";
        return kExitPass;
    }

    if (common.format == "json") {
        json out;
        out["version"] = 1;
        out["examples"] = cache;
        std::cout << out.dump(2) << "\n";
        return kExitPass;
    }

    for (const ExampleRecord& record : examples()) {
        if (!cache.contains(record.id)) continue;
        const json& entry = cache[record.id];
        std::cout << record.id << " (" << record.title << ")\n";
        if (entry.contains("verify"))
            for (auto it = entry["verify"].begin(); it != entry["verify"].end(); ++it)
                std::cout << "  " << it.key() << ": " << it.value()["passed"] << "/"
                          << it.value()["checks"] << " checks"
                          << (it.value()["pass"].get<bool>() ? "" : "  << FAILURES") << "\n";
        if (entry.contains("invariants"))
            for (const auto& inv : entry["invariants"])
                std::cout << "  drift " << inv["label"].get<std::string>() << ": "
                          << inv["max_rel_deviation"].get<double>() << "\n";
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for Lie systems compatible with families of presymplectic forms"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string cache_path = "kslie_report_cache.json";
    app.add_option("--seed", common.seed, "seed for all sampling");
    app.add_option("--trials", common.trials, "sample count per zero test");
    app.add_option("--tol", common.tol, "zero-test tolerance");
    app.add_option("--format", common.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--cache", cache_path, "report cache file");

    // verify
    auto* verify = app.add_subcommand("verify", "run identity suites on a registered system");
    verify->fallthrough();
    std::string verify_id, verify_suite = "all", load_path;
    int samples = 100;
    verify->add_option("id", verify_id, "example id (or '-' with --load)")->required();
    verify->add_option("suite", verify_suite,
                       "structure|hamiltonian|algebra|brackets|stability|all");
    verify->add_option("--load", load_path, "JSON file describing a user system");
    verify->add_option("--samples", samples, "sampling points for joint nondegeneracy");

    // integrate
    auto* integrate_cmd = app.add_subcommand("integrate", "integrate a system and track invariants");
    integrate_cmd->fallthrough();
    std::string int_id, x0_text, x0b_text, out_prefix;
    double t1 = 1.0, step = 1e-3;
    std::vector<std::string> coeff_overrides;
    std::size_t prolong_copies = 1;
    bool with_invariants = false;
    integrate_cmd->add_option("id", int_id, "example id")->required();
    integrate_cmd->add_option("--x0", x0_text, "initial point, comma separated")->required();
    integrate_cmd->add_option("--x0b", x0b_text, "second-copy initial point (with --prolong 2)");
    integrate_cmd->add_option("--t1", t1, "final time");
    integrate_cmd->add_option("--step", step, "integration step");
    integrate_cmd->add_option("--coeff", coeff_overrides, "override a coefficient, name=expr");
    integrate_cmd->add_option("--prolong", prolong_copies, "number of diagonal copies (max 4)");
    integrate_cmd->add_flag("--invariants", with_invariants, "evaluate registered invariants");
    integrate_cmd->add_option("--out", out_prefix, "output path prefix");

    // report
    auto* report = app.add_subcommand("report", "aggregate cached verification results");
    report->fallthrough();
    bool run_all = false;
    report->add_flag("--run-all", run_all, "run every suite on every example first");

    // list
    auto* list = app.add_subcommand("list", "list registered examples");
    list->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (verify->parsed()) return run_verify(verify_id, load_path, verify_suite, common, samples, cache_path);
        if (integrate_cmd->parsed())
            return run_integrate(int_id, common, x0_text, x0b_text, t1, step, coeff_overrides,
                                 prolong_copies, with_invariants, out_prefix, cache_path);
        if (report->parsed()) return run_report(common, run_all, cache_path);
        if (list->parsed()) {
            for (const ExampleRecord& r : examples())
                std::cout << r.id << "  " << r.title << "  (dim " << r.chart_symbols.size() << ", k="
                          << r.forms.size() << ")\n";
            return kExitPass;
        }
    } catch (const UnknownExampleError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitUsage;
    } catch (const LeftDomainError& err) {
        std::cerr << "error: " << err.what() << "; last valid state:";
        for (double v : err.last_state) std::cerr << ' ' << v;
        std::cerr << "\n";
        return kExitRuntime;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
