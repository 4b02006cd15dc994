#include "kslie/registry.hpp"

namespace kslie {

namespace {

ExampleRecord schwarz3ks() {
    ExampleRecord r;
    r.id = "schwarz3ks";
    r.title = "Schwarzian equation in first-order form";
    r.chart_symbols = {"x", "v", "a"};
    for (const char* s : {"x", "v", "a"}) r.intervals.push_back({s, -12.0, 12.0});
    r.exclusions = {"v"};
    r.basis_labels = {"Y1", "Y2", "Y3"};
    r.basis = {{"0", "0", "2*v"}, {"0", "v", "2*a"}, {"v", "a", "3/2*a^2/v"}};
    r.generator_indices = {0, 2};
    r.forms = {{"w1", {{1, 2, "1/v^3"}}},
               {"w2", {{0, 1, "-2*a/v^3"}, {0, 2, "2/v^2"}, {1, 2, "-2*x/v^3"}}}};
    r.kernels = {{{"1", "0", "0"}}, {{"x", "v", "a"}}};
    r.hamiltonians = {{"2/v", "-4*x/v"},
                      {"a/v^2", "2 - 2*a*x/v^2"},
                      {"a^2/(2*v^3)", "2*a/v - a^2*x/v^3"}};
    r.expected_constants = {{0, 1, 0, "1"}, {0, 2, 1, "2"}, {1, 2, 2, "1"}};
    r.bracket_table = {{0, 1, {"-1", "0", "0"}}, {0, 2, {"0", "-2", "0"}}, {1, 2, {"0", "0", "-1"}}};
    r.coefficient_names = {"b1", "b2", "b3"};
    r.default_coefficients = {"sin(t)", "0", "1"};
    r.pair_exclusions = {"a_1*v_2 - v_1*a_2", "v_1", "v_2"};
    r.has_schwarzian_invariants = true;
    return r;
}

ExampleRecord riccati4() {
    ExampleRecord r;
    r.id = "riccati4";
    r.title = "Four coupled Riccati equations";
    r.chart_symbols = {"x1", "x2", "x3", "x4"};
    for (const char* s : {"x1", "x2", "x3", "x4"}) r.intervals.push_back({s, -6.0, 6.0});
    r.exclusions = {"x1-x2", "x1-x3", "x1-x4", "x2-x3", "x2-x4", "x3-x4"};
    r.basis_labels = {"X1", "X2", "X3"};
    r.basis = {{"1", "1", "1", "1"},
               {"x1", "x2", "x3", "x4"},
               {"x1^2", "x2^2", "x3^2", "x4^2"}};
    r.generator_indices = {0, 1, 2};
    r.forms = {{"w1", {{0, 1, "1/(x1-x2)^2"}, {2, 3, "1/(x3-x4)^2"}}},
               {"w2",
                {{0, 1, "1/(x1-x2)^2"},
                 {0, 2, "1/(x1-x3)^2"},
                 {0, 3, "1/(x1-x4)^2"},
                 {1, 2, "1/(x2-x3)^2"},
                 {1, 3, "1/(x2-x4)^2"},
                 {2, 3, "1/(x3-x4)^2"}}}};
    r.kernels = {{}, {}};
    r.hamiltonians = {
        {"1/(x1-x2) + 1/(x3-x4)",
         "1/(x1-x2) + 1/(x1-x3) + 1/(x1-x4) + 1/(x2-x3) + 1/(x2-x4) + 1/(x3-x4)"},
        {"1/2*((x1+x2)/(x1-x2) + (x3+x4)/(x3-x4))",
         "1/2*((x1+x2)/(x1-x2) + (x1+x3)/(x1-x3) + (x1+x4)/(x1-x4) + (x2+x3)/(x2-x3) + "
         "(x2+x4)/(x2-x4) + (x3+x4)/(x3-x4))"},
        {"x1*x2/(x1-x2) + x3*x4/(x3-x4)",
         "x1*x2/(x1-x2) + x1*x3/(x1-x3) + x1*x4/(x1-x4) + x2*x3/(x2-x3) + x2*x4/(x2-x4) + "
         "x3*x4/(x3-x4)"}};
    r.expected_constants = {{0, 1, 0, "1"}, {0, 2, 1, "2"}, {1, 2, 2, "1"}};
    r.bracket_table = {{0, 1, {"-1", "0", "0"}}, {0, 2, {"0", "-2", "0"}}, {1, 2, {"0", "0", "-1"}}};
    r.coefficient_names = {"a", "b", "c"};
    r.default_coefficients = {"sin(t)", "cos(t)", "1"};
    r.invariants = {{"cross_ratio", "(x1-x3)*(x2-x4)/((x1-x4)*(x2-x3))"}};
    return r;
}

ExampleRecord control1() {
    ExampleRecord r;
    r.id = "control1";
    r.title = "First control system on R^5";
    r.chart_symbols = {"x1", "x2", "x3", "x4", "x5"};
    for (const char* s : {"x1", "x2", "x3", "x4", "x5"}) r.intervals.push_back({s, -3.0, 3.0});
    r.basis_labels = {"X1", "X2", "X3", "X4", "X5"};
    r.basis = {{"1", "0", "0", "0", "0"},
               {"0", "1", "x1", "x1^2", "2*x1*x2"},
               {"0", "0", "1", "2*x1", "2*x2"},
               {"0", "0", "0", "1", "0"},
               {"0", "0", "0", "0", "1"}};
    r.generator_indices = {0, 1};
    r.forms = {{"w1", {{0, 1, "1"}}},
               {"w2", {{0, 2, "1"}}},
               {"w3", {{0, 3, "1"}}},
               {"w4", {{0, 1, "x2^2"}, {1, 4, "1"}}}};
    r.kernels = {{{"0", "0", "1", "0", "0"}, {"0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "1"}},
                 {{"0", "1", "0", "0", "0"}, {"0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "1"}},
                 {{"0", "1", "0", "0", "0"}, {"0", "0", "1", "0", "0"}, {"0", "0", "0", "0", "1"}},
                 {{"0", "0", "1", "0", "0"}, {"0", "0", "0", "1", "0"}, {"1", "0", "0", "0", "x2^2"}}};
    // i_{X3} w2 is -dx1; the printed table carries the opposite sign, which
    // does not contract correctly
    r.hamiltonians = {{"x2", "x3", "x4", "x2^3/3"},
                      {"-x1", "-(x1^2)/2", "-(x1^3)/3", "x5 - x1*x2^2"},
                      {"0", "-x1", "-(x1^2)", "-(x2^2)"},
                      {"0", "0", "-x1", "0"},
                      {"0", "0", "0", "-x2"}};
    r.expected_constants = {{0, 1, 2, "1"}, {0, 2, 3, "2"}, {1, 2, 4, "2"}};
    r.coefficient_names = {"b1", "b2", "b3", "b4", "b5"};
    r.default_coefficients = {"sin(t)", "cos(t)", "0", "0", "0"};
    return r;
}

ExampleRecord control2() {
    ExampleRecord r;
    r.id = "control2";
    r.title = "Second control system on R^5";
    r.chart_symbols = {"x1", "x2", "x3", "x4", "x5"};
    for (const char* s : {"x1", "x2", "x3", "x4", "x5"}) r.intervals.push_back({s, -3.0, 3.0});
    r.basis_labels = {"X1", "X2", "X3", "X4", "X5"};
    r.basis = {{"1", "0", "-x2", "0", "x2^2"},
               {"0", "1", "x1", "x1^2", "0"},
               {"0", "0", "1", "x1", "-x2"},
               {"0", "0", "0", "1", "0"},
               {"0", "0", "0", "0", "1"}};
    r.generator_indices = {0, 1};
    r.forms = {{"w1", {{0, 1, "1"}}},
               {"w2", {{1, 4, "1"}}},
               {"w3", {{0, 3, "1"}}},
               {"w4", {{0, 1, "x1"}, {0, 2, "1"}}}};
    r.kernels = {{{"0", "0", "1", "0", "0"}, {"0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "1"}},
                 {{"1", "0", "0", "0", "0"}, {"0", "0", "1", "0", "0"}, {"0", "0", "0", "1", "0"}},
                 {{"0", "1", "0", "0", "0"}, {"0", "0", "1", "0", "0"}, {"0", "0", "0", "0", "1"}},
                 {{"0", "0", "0", "1", "0"}, {"0", "0", "0", "0", "1"}, {"0", "1", "-x1", "0", "0"}}};
    r.hamiltonians = {{"x2", "-(x2^3)/3", "x4", "x1*x2 + x3"},
                      {"-x1", "x5", "-(x1^3)/3", "-(x1^2)"},
                      {"0", "x2^2/2", "-(x1^2)/2", "-x1"},
                      {"0", "0", "-x1", "0"},
                      {"0", "-x2", "0", "0"}};
    r.expected_constants = {{0, 1, 2, "2"}, {0, 2, 3, "1"}, {1, 2, 4, "-1"}};
    r.coefficient_names = {"b1", "b2", "b3", "b4", "b5"};
    r.default_coefficients = {"sin(t)", "cos(t)", "0", "0", "0"};
    return r;
}

ExampleRecord diffusion_rs() {
    ExampleRecord r;
    r.id = "diffusion-rs";
    r.title = "Reduced diffusion-equation system";
    r.chart_symbols = {"u", "v", "w"};
    for (const char* s : {"u", "v", "w"}) r.intervals.push_back({s, -2.0, 2.0});
    r.exclusions = {"v"};
    r.basis_labels = {"X1", "X2", "X3"};
    r.basis = {{"4*u^2", "4*u*v", "v^2"}, {"1", "0", "0"}, {"2*u", "v", "0"}};
    r.generator_indices = {0, 1, 2};
    r.forms = {{"w_RS-1", {{0, 1, "4*w^2/v^3"}, {0, 2, "-4*w/v^2"}, {1, 2, "1/v"}}},
               {"w_RS-2", {{0, 1, "8*w/v^3"}, {0, 2, "-4/v^2"}}}};
    r.kernels = {{{"v^2", "4*w*v", "4*w^2"}}, {{"0", "v", "2*w"}}};
    r.hamiltonians = {{"4*u*w - 8*u^2*w^2/v^2 - v^2/2", "4*u - 16*u^2*w/v^2"},
                      {"-2*w^2/v^2", "-4*w/v^2"},
                      {"w - 4*u*w^2/v^2", "-8*u*w/v^2"}};
    r.expected_constants = {{0, 1, 2, "-4"}, {0, 2, 0, "-2"}, {1, 2, 1, "2"}};
    // the registered flow multiplies X2 by -cos(t); 'b' names that multiplier
    r.coefficient_names = {"a", "b", "c"};
    r.default_coefficients = {"sin(t)", "-cos(t)", "1"};
    return r;
}

ExampleRecord lotka_volterra() {
    ExampleRecord r;
    r.id = "lotka-volterra";
    r.title = "Lotka-Volterra system with common coefficients";
    r.chart_symbols = {"x1", "x2", "x3", "x4", "x5"};
    for (const char* s : {"x1", "x2", "x3", "x4", "x5"}) r.intervals.push_back({s, -4.0, 4.0});
    r.exclusions = {"x1-x2", "x3-x4", "x3-x5", "x4-x5", "x1-x3"};
    r.basis_labels = {"X1", "X2"};
    r.basis = {{"x1", "x2", "x3", "x4", "x5"}, {"x1^2", "x2^2", "x3^2", "x4^2", "x5^2"}};
    r.generator_indices = {0, 1};
    r.forms = {{"w1", {{0, 1, "1/(x1-x2)^2"}, {2, 3, "1/(x3-x4)^2"}}},
               {"w2", {{0, 1, "1/(x1-x2)^2"}, {2, 4, "1/(x3-x5)^2"}}},
               {"w3", {{0, 1, "1/(x1-x2)^2"}, {3, 4, "1/(x4-x5)^2"}}},
               {"w4", {{0, 2, "1/(x1-x3)^2"}, {3, 4, "1/(x4-x5)^2"}}}};
    r.kernels = {{{"0", "0", "0", "0", "1"}},
                 {{"0", "0", "0", "1", "0"}},
                 {{"0", "0", "1", "0", "0"}},
                 {{"0", "1", "0", "0", "0"}}};
    r.hamiltonians = {{"1/2*((x1+x2)/(x1-x2) + (x3+x4)/(x3-x4))",
                       "1/2*((x1+x2)/(x1-x2) + (x3+x5)/(x3-x5))",
                       "1/2*((x1+x2)/(x1-x2) + (x4+x5)/(x4-x5))",
                       "1/2*((x1+x3)/(x1-x3) + (x4+x5)/(x4-x5))"},
                      {"x1*x2/(x1-x2) + x3*x4/(x3-x4)", "x1*x2/(x1-x2) + x3*x5/(x3-x5)",
                       "x1*x2/(x1-x2) + x4*x5/(x4-x5)", "x1*x3/(x1-x3) + x4*x5/(x4-x5)"}};
    r.expected_constants = {{0, 1, 1, "1"}};
    r.coefficient_names = {"a", "b"};
    r.default_coefficients = {"sin(t)", "cos(t)"};
    return r;
}

}  // namespace

const std::vector<ExampleRecord>& examples() {
    static const std::vector<ExampleRecord> all = {schwarz3ks(), riccati4(), control1(),
                                                   control2(),  diffusion_rs(), lotka_volterra()};
    return all;
}

const ExampleRecord& example(const std::string& id) {
    for (const ExampleRecord& r : examples())
        if (r.id == id) return r;
    throw UnknownExampleError(id);
}

CompiledExample compile_example(const std::string& id) {
    return compile_example(example(id));
}

CompiledExample compile_example(const ExampleRecord& record) {
    CompiledExample out;
    out.record = record;

    DomainBox box;
    for (const auto& iv : record.intervals) box.bind(iv.symbol, iv.lo, iv.hi);
    for (const std::string& ex : record.exclusions)
        box.exclude_zero_of(parse(ex, record.chart_symbols));
    out.chart = Chart(record.chart_symbols, std::move(box));

    for (const auto& comps : record.basis) {
        std::vector<Expr> es;
        es.reserve(comps.size());
        for (const std::string& c : comps) es.push_back(parse(c, record.chart_symbols));
        out.fields.emplace_back(out.chart, std::move(es));
    }

    for (const auto& spec : record.forms) {
        TwoForm w(out.chart);
        for (const auto& [l, m, coeff] : spec.entries) w.set(l, m, parse(coeff, record.chart_symbols));
        out.forms.push_back(std::move(w));
    }

    for (const auto& spanning : record.kernels) {
        std::vector<VectorField> fields;
        for (const auto& comps : spanning) {
            std::vector<Expr> es;
            for (const std::string& c : comps) es.push_back(parse(c, record.chart_symbols));
            fields.emplace_back(out.chart, std::move(es));
        }
        out.kernels.push_back(std::move(fields));
    }

    for (const auto& row : record.hamiltonians) {
        std::vector<Expr> hs;
        for (const std::string& h : row) hs.push_back(parse(h, record.chart_symbols));
        out.ham.push_back(std::move(hs));
    }
    return out;
}

OmegaHamiltonian CompiledExample::omega_tuple(std::size_t field_index) const {
    return OmegaHamiltonian(chart, ham.at(field_index), fields.at(field_index));
}

TDependentField CompiledExample::default_field() const {
    std::vector<Expr> coeffs;
    coeffs.reserve(record.default_coefficients.size());
    for (const std::string& b : record.default_coefficients) coeffs.push_back(parse(b, {}));
    return TDependentField(fields, std::move(coeffs));
}

std::vector<VectorField> CompiledExample::generators() const {
    std::vector<VectorField> out;
    for (std::size_t i : record.generator_indices) out.push_back(fields.at(i));
    return out;
}

ProductChart CompiledExample::pair_chart() const {
    std::vector<std::string> pair_symbols;
    for (std::size_t a = 1; a <= 2; ++a)
        for (const std::string& s : record.chart_symbols) pair_symbols.push_back(s + "_" + std::to_string(a));
    std::vector<Expr> cross;
    for (const std::string& ex : record.pair_exclusions) cross.push_back(parse(ex, pair_symbols));
    return ProductChart(chart, 2, std::move(cross));
}

ProductObstruction product_not_hamiltonian_witness(const ZeroTestOptions& opts, std::mt19937_64& rng) {
    CompiledExample rs = compile_example("diffusion-rs");
    // h is the tuple of X3, g the tuple of X2
    OmegaHamiltonian h = rs.omega_tuple(2);
    OmegaHamiltonian g = rs.omega_tuple(1);
    return product_hamiltonian_obstruction(h, g, rs.fields[2], rs.fields[1], opts, rng);
}

}  // namespace kslie
