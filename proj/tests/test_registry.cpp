#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kslie/serialize.hpp"
#include "kslie/verify.hpp"

using namespace kslie;
using nlohmann::json;

TEST_CASE("all records compile and cross-reference consistently") {
    for (const ExampleRecord& record : examples()) {
        CAPTURE(record.id);
        CompiledExample ex = compile_example(record.id);
        CHECK(ex.fields.size() == record.basis.size());
        CHECK(ex.fields.size() == record.basis_labels.size());
        CHECK(ex.forms.size() == record.forms.size());
        CHECK(ex.kernels.size() == record.forms.size());
        REQUIRE(ex.ham.size() == ex.fields.size());
        for (const auto& row : ex.ham) CHECK(row.size() == ex.forms.size());
        CHECK(record.default_coefficients.size() == ex.fields.size());
        CHECK(record.coefficient_names.size() == ex.fields.size());
        for (std::size_t i : record.generator_indices) CHECK(i < ex.fields.size());
        for (const auto& e : record.expected_constants) {
            CHECK(e.alpha < ex.fields.size());
            CHECK(e.beta < ex.fields.size());
            CHECK(e.gamma < ex.fields.size());
        }
        // every embedded expression parses against the chart
        for (const auto& comps : record.basis)
            for (const std::string& c : comps) CHECK_NOTHROW(parse(c, record.chart_symbols));
        for (const auto& row : record.hamiltonians)
            for (const std::string& h : row) CHECK_NOTHROW(parse(h, record.chart_symbols));
        CHECK_NOTHROW(ex.default_field());
    }
    CHECK(examples().size() == 6);
    CHECK_THROWS_AS(example("nosuch"), UnknownExampleError);
}

TEST_CASE("records survive a JSON round trip") {
    std::mt19937_64 rng(1);
    const ExampleRecord& original = example("diffusion-rs");
    json j = record_to_json(original);
    ExampleRecord back = record_from_json(j);
    CHECK(back.id == original.id);
    CHECK(back.basis == original.basis);
    CHECK(back.exclusions == original.exclusions);
    CHECK(back.hamiltonians == original.hamiltonians);

    CompiledExample ex = compile_example(back);
    VerifyOptions opts;
    for (const SuiteReport& r : run_suites(ex, Suite::Structure, opts)) CHECK(r.all_pass());
}

TEST_CASE("a minimal user system loads from JSON") {
    json j = {
        {"id", "plane"},
        {"chart", {"q", "p"}},
        {"domain", {{"intervals", {{"q", {-2.0, 2.0}}, {"p", {-2.0, 2.0}}}}}},
        {"fields",
         {{{"label", "X1"}, {"components", {"1", "0"}}}, {{"label", "X2"}, {"components", {"0", "1"}}}}},
        {"forms", {{{"label", "w"}, {"entries", {{{"i", 0}, {"j", 1}, {"coeff", "1"}}}}}}},
        {"hamiltonians", {{"p"}, {"-q"}}},
    };
    CompiledExample ex = compile_example(record_from_json(j));
    CHECK(ex.chart.dim() == 2);
    VerifyOptions opts;
    for (const SuiteReport& r : run_suites(ex, Suite::Hamiltonian, opts)) CHECK(r.all_pass());
}

TEST_CASE("suite report JSON carries the summary block") {
    VerifyOptions opts;
    CompiledExample ex = compile_example("schwarz3ks");
    std::vector<SuiteReport> reports = run_suites(ex, Suite::Structure, opts);
    json j = to_json(reports);
    REQUIRE(j.contains("summary"));
    CHECK(j["summary"]["pass"].get<bool>());
    CHECK(j["summary"]["total_checks"].get<int>() > 0);
    CHECK(j["examples"].contains("schwarz3ks"));
}

TEST_CASE("algebra models serialise basis fields and rational constants") {
    std::mt19937_64 rng(3);
    CompiledExample lv = compile_example("lotka-volterra");
    LieAlgebraModel model = structure_constants(lv.fields, StructureConstantOptions{}, rng);
    json j = to_json(model, lv.record.basis_labels);
    REQUIRE(j["basis"].size() == 2);
    CHECK(j["basis"][0]["label"] == "X1");
    CHECK(j["structure_constants"][0][1][1].get<std::string>() == "1");
    CHECK(j["structure_constants"][1][0][1].get<std::string>() == "-1");
}

TEST_CASE("geometry serialises with expression text") {
    CompiledExample ks = compile_example("schwarz3ks");
    json field = to_json(ks.fields[0]);
    CHECK(field["chart"] == json({"x", "v", "a"}));
    CHECK(field["components"][2].get<std::string>() == "2*v");

    json form = to_json(ks.forms[0]);
    REQUIRE(form["entries"].size() == 1);
    CHECK(form["entries"][0]["i"] == 1);
    CHECK(form["entries"][0]["j"] == 2);

    std::mt19937_64 rng(2);
    StructureOptions sopts;
    json structure = to_json(validate_structure(ks.forms, sopts, rng));
    CHECK(structure["forms"].size() == 2);
    CHECK(structure["domain"]["nonzero"].size() == 1);
}
