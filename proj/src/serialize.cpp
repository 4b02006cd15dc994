#include "kslie/serialize.hpp"

namespace kslie {

using nlohmann::json;

json to_json(const VectorField& X) {
    json j;
    j["chart"] = X.chart().symbols();
    json comps = json::array();
    for (const Expr& c : X.components()) comps.push_back(to_string(c));
    j["components"] = comps;
    return j;
}

json to_json(const OneForm& a) {
    json j;
    j["chart"] = a.chart().symbols();
    json coeffs = json::array();
    for (const Expr& c : a.coefficients()) coeffs.push_back(to_string(c));
    j["coefficients"] = coeffs;
    return j;
}

json to_json(const TwoForm& w) {
    json j;
    j["chart"] = w.chart().symbols();
    json entries = json::array();
    std::size_t n = w.dim();
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m) {
            if (w.upper(l, m).is_zero_constant()) continue;
            entries.push_back({{"i", l}, {"j", m}, {"coeff", to_string(w.upper(l, m))}});
        }
    j["entries"] = entries;
    return j;
}

namespace {

json domain_to_json(const DomainBox& box) {
    json intervals = json::object();
    for (const auto& [sym, iv] : box.intervals()) intervals[sym] = {iv.lo, iv.hi};
    json exclusions = json::array();
    for (const Expr& e : box.exclusions()) exclusions.push_back(to_string(e));
    return {{"intervals", intervals}, {"nonzero", exclusions}};
}

}  // namespace

json to_json(const KSymplecticStructure& s) {
    json j;
    j["chart"] = s.chart().symbols();
    json forms = json::array();
    for (const TwoForm& w : s.forms()) {
        json entries = json::array();
        std::size_t n = w.dim();
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t m = l + 1; m < n; ++m) {
                if (w.upper(l, m).is_zero_constant()) continue;
                entries.push_back({{"i", l}, {"j", m}, {"coeff", to_string(w.upper(l, m))}});
            }
        forms.push_back(entries);
    }
    j["forms"] = forms;
    j["domain"] = domain_to_json(s.chart().box());
    j["validation"] = {{"samples", s.validation().samples},
                       {"dimension_fits", s.validation().dimension_fits},
                       {"dimension_note", s.validation().dimension_note}};
    return j;
}

json to_json(const LieAlgebraModel& model, const std::vector<std::string>& labels) {
    json j;
    json basis = json::array();
    for (std::size_t g = 0; g < model.dim(); ++g) {
        json field = to_json(model.basis()[g]);
        if (g < labels.size()) field["label"] = labels[g];
        basis.push_back(field);
    }
    j["basis"] = basis;
    json constants = json::array();
    for (std::size_t a = 0; a < model.dim(); ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < model.dim(); ++b) {
            json inner = json::array();
            for (std::size_t g = 0; g < model.dim(); ++g)
                inner.push_back(rational_to_string(model.c(a, b, g)));
            row.push_back(inner);
        }
        constants.push_back(row);
    }
    j["structure_constants"] = constants;
    return j;
}

json to_json(const DriftReport& report) {
    return {{"label", report.label},
            {"initial", report.initial},
            {"max_abs_deviation", report.max_abs_deviation},
            {"max_rel_deviation", report.max_rel_deviation},
            {"tol", report.tol},
            {"pass", report.pass}};
}

json to_json(const std::vector<SuiteReport>& reports) {
    json out;
    out["version"] = 1;
    json examples = json::object();
    std::size_t total = 0, failed = 0;
    for (const SuiteReport& r : reports) {
        json checks = json::array();
        for (const CheckResult& c : r.checks) {
            checks.push_back({{"label", c.label}, {"pass", c.pass}, {"detail", c.detail}});
            ++total;
            if (!c.pass) ++failed;
        }
        examples[r.example_id][r.suite] = {{"checks", checks}, {"pass", r.all_pass()}};
    }
    out["examples"] = examples;
    out["summary"] = {{"total_checks", total}, {"failed", failed}, {"pass", failed == 0}};
    return out;
}

ExampleRecord record_from_json(const json& j) {
    ExampleRecord r;
    r.id = j.at("id").get<std::string>();
    r.title = j.value("title", r.id);
    r.chart_symbols = j.at("chart").get<std::vector<std::string>>();

    if (j.contains("domain")) {
        const json& dom = j.at("domain");
        for (auto it = dom.at("intervals").begin(); it != dom.at("intervals").end(); ++it)
            r.intervals.push_back({it.key(), it.value().at(0).get<double>(), it.value().at(1).get<double>()});
        for (const auto& e : dom.value("nonzero", json::array())) r.exclusions.push_back(e.get<std::string>());
    } else {
        for (const std::string& s : r.chart_symbols) r.intervals.push_back({s, -2.0, 2.0});
    }

    for (const auto& f : j.value("fields", json::array())) {
        r.basis_labels.push_back(f.value("label", "X" + std::to_string(r.basis.size() + 1)));
        r.basis.push_back(f.at("components").get<std::vector<std::string>>());
    }
    if (j.contains("generators"))
        r.generator_indices = j.at("generators").get<std::vector<std::size_t>>();
    else
        for (std::size_t i = 0; i < r.basis.size(); ++i) r.generator_indices.push_back(i);

    std::size_t form_count = 0;
    for (const auto& f : j.value("forms", json::array())) {
        ExampleRecord::FormSpec spec;
        spec.label = f.value("label", "w" + std::to_string(++form_count));
        for (const auto& e : f.at("entries"))
            spec.entries.emplace_back(e.at("i").get<std::size_t>(), e.at("j").get<std::size_t>(),
                                      e.at("coeff").get<std::string>());
        r.forms.push_back(std::move(spec));
    }
    r.kernels.assign(r.forms.size(), {});
    if (j.contains("kernels"))
        for (std::size_t i = 0; i < r.forms.size() && i < j.at("kernels").size(); ++i)
            for (const auto& field : j.at("kernels")[i])
                r.kernels[i].push_back(field.get<std::vector<std::string>>());

    if (j.contains("hamiltonians"))
        for (const auto& row : j.at("hamiltonians"))
            r.hamiltonians.push_back(row.get<std::vector<std::string>>());

    for (const auto& e : j.value("expected_constants", json::array()))
        r.expected_constants.push_back({e.at("alpha").get<std::size_t>(), e.at("beta").get<std::size_t>(),
                                        e.at("gamma").get<std::size_t>(), e.at("value").get<std::string>()});

    if (j.contains("coefficients"))
        r.default_coefficients = j.at("coefficients").get<std::vector<std::string>>();
    else
        r.default_coefficients.assign(r.basis.size(), "1");

    for (const auto& inv : j.value("invariants", json::array()))
        r.invariants.push_back({inv.at("label").get<std::string>(), inv.at("expr").get<std::string>()});
    return r;
}

json record_to_json(const ExampleRecord& r) {
    json j;
    j["id"] = r.id;
    j["title"] = r.title;
    j["chart"] = r.chart_symbols;
    json intervals = json::object();
    for (const auto& iv : r.intervals) intervals[iv.symbol] = {iv.lo, iv.hi};
    j["domain"] = {{"intervals", intervals}, {"nonzero", r.exclusions}};
    json fields = json::array();
    for (std::size_t i = 0; i < r.basis.size(); ++i)
        fields.push_back({{"label", r.basis_labels[i]}, {"components", r.basis[i]}});
    j["fields"] = fields;
    j["generators"] = r.generator_indices;
    json forms = json::array();
    for (const auto& spec : r.forms) {
        json entries = json::array();
        for (const auto& [i, jdx, coeff] : spec.entries)
            entries.push_back({{"i", i}, {"j", jdx}, {"coeff", coeff}});
        forms.push_back({{"label", spec.label}, {"entries", entries}});
    }
    j["forms"] = forms;
    json kernels = json::array();
    for (const auto& spanning : r.kernels) {
        json fields_json = json::array();
        for (const auto& comps : spanning) fields_json.push_back(comps);
        kernels.push_back(fields_json);
    }
    j["kernels"] = kernels;
    j["hamiltonians"] = r.hamiltonians;
    json constants = json::array();
    for (const auto& e : r.expected_constants)
        constants.push_back({{"alpha", e.alpha}, {"beta", e.beta}, {"gamma", e.gamma}, {"value", e.value}});
    j["expected_constants"] = constants;
    j["coefficients"] = r.default_coefficients;
    json invariants = json::array();
    for (const auto& inv : r.invariants) invariants.push_back({{"label", inv.label}, {"expr", inv.expr}});
    j["invariants"] = invariants;
    return j;
}

}  // namespace kslie
