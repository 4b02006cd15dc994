#include "kslie/geom.hpp"

#include <algorithm>
#include <tuple>

namespace kslie {

Chart::Chart(std::vector<std::string> symbols, DomainBox box) {
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (symbols[i] == "t") throw Error("'t' is reserved for time and cannot be a chart coordinate");
        for (std::size_t j = i + 1; j < symbols.size(); ++j)
            if (symbols[i] == symbols[j]) throw Error("duplicate chart coordinate '" + symbols[i] + "'");
    }
    auto d = std::make_shared<Data>();
    d->symbols = std::move(symbols);
    d->box = std::move(box);
    data_ = std::move(d);
}

std::size_t Chart::index_of(const std::string& name) const {
    const auto& syms = data_->symbols;
    auto it = std::find(syms.begin(), syms.end(), name);
    if (it == syms.end()) throw UnknownSymbolError(name);
    return static_cast<std::size_t>(it - syms.begin());
}

Chart Chart::with_box(DomainBox box) const {
    return Chart(data_->symbols, std::move(box));
}

bool Chart::operator==(const Chart& other) const {
    return data_ == other.data_ || data_->symbols == other.data_->symbols;
}

std::vector<double> Chart::to_point(const Env& env) const {
    std::vector<double> out;
    out.reserve(dim());
    for (const std::string& s : symbols()) {
        auto it = env.find(s);
        if (it == env.end()) throw MissingBindingError(s);
        out.push_back(it->second);
    }
    return out;
}

Env Chart::to_env(const std::vector<double>& point) const {
    if (point.size() != dim()) throw Error("point dimension does not match chart");
    Env env;
    env.reserve(dim());
    for (std::size_t i = 0; i < dim(); ++i) env.emplace(symbols()[i], point[i]);
    return env;
}

void require_same_chart(const Chart& a, const Chart& b) {
    if (a != b) throw ChartMismatchError("operands live on different charts");
}

// ---- vector fields ----

VectorField::VectorField(Chart chart, std::vector<Expr> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
    if (components_.size() != chart_.dim())
        throw Error("vector field component count does not match chart dimension");
}

Expr VectorField::apply(const Expr& f) const {
    std::vector<Expr> terms;
    terms.reserve(chart_.dim());
    for (std::size_t l = 0; l < chart_.dim(); ++l)
        terms.push_back(components_[l] * differentiate(f, chart_.symbols()[l]));
    return simplify(Expr::sum(std::move(terms)));
}

std::vector<double> VectorField::evaluate_at(const Env& point) const {
    std::vector<double> out;
    out.reserve(components_.size());
    for (const Expr& c : components_) out.push_back(evaluate(c, point));
    return out;
}

VectorField VectorField::zero(const Chart& chart) {
    return VectorField(chart, std::vector<Expr>(chart.dim(), Expr::integer(0)));
}

VectorField VectorField::coordinate(const Chart& chart, std::size_t l) {
    std::vector<Expr> comps(chart.dim(), Expr::integer(0));
    comps.at(l) = Expr::integer(1);
    return VectorField(chart, std::move(comps));
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    require_same_chart(a.chart(), b.chart());
    std::vector<Expr> comps;
    comps.reserve(a.components().size());
    for (std::size_t l = 0; l < a.components().size(); ++l)
        comps.push_back(simplify(a.component(l) + b.component(l)));
    return VectorField(a.chart(), std::move(comps));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    require_same_chart(a.chart(), b.chart());
    std::vector<Expr> comps;
    comps.reserve(a.components().size());
    for (std::size_t l = 0; l < a.components().size(); ++l)
        comps.push_back(simplify(a.component(l) - b.component(l)));
    return VectorField(a.chart(), std::move(comps));
}

VectorField operator*(const Expr& f, const VectorField& X) {
    std::vector<Expr> comps;
    comps.reserve(X.components().size());
    for (const Expr& c : X.components()) comps.push_back(simplify(f * c));
    return VectorField(X.chart(), std::move(comps));
}

// ---- one-forms ----

OneForm::OneForm(Chart chart, std::vector<Expr> coefficients)
    : chart_(std::move(chart)), coefficients_(std::move(coefficients)) {
    if (coefficients_.size() != chart_.dim())
        throw Error("one-form coefficient count does not match chart dimension");
}

OneForm OneForm::zero(const Chart& chart) {
    return OneForm(chart, std::vector<Expr>(chart.dim(), Expr::integer(0)));
}

OneForm OneForm::coordinate(const Chart& chart, std::size_t l) {
    std::vector<Expr> coeffs(chart.dim(), Expr::integer(0));
    coeffs.at(l) = Expr::integer(1);
    return OneForm(chart, std::move(coeffs));
}

OneForm operator+(const OneForm& a, const OneForm& b) {
    require_same_chart(a.chart(), b.chart());
    std::vector<Expr> coeffs;
    for (std::size_t l = 0; l < a.coefficients().size(); ++l)
        coeffs.push_back(simplify(a.coefficient(l) + b.coefficient(l)));
    return OneForm(a.chart(), std::move(coeffs));
}

OneForm operator-(const OneForm& a, const OneForm& b) {
    require_same_chart(a.chart(), b.chart());
    std::vector<Expr> coeffs;
    for (std::size_t l = 0; l < a.coefficients().size(); ++l)
        coeffs.push_back(simplify(a.coefficient(l) - b.coefficient(l)));
    return OneForm(a.chart(), std::move(coeffs));
}

OneForm operator*(const Expr& f, const OneForm& a) {
    std::vector<Expr> coeffs;
    for (const Expr& c : a.coefficients()) coeffs.push_back(simplify(f * c));
    return OneForm(a.chart(), std::move(coeffs));
}

// ---- two-forms ----

TwoForm::TwoForm(Chart chart) : chart_(std::move(chart)) {
    std::size_t n = chart_.dim();
    upper_.assign(n * (n - 1) / 2, Expr::integer(0));
}

TwoForm::TwoForm(Chart chart, std::vector<Expr> upper) : chart_(std::move(chart)), upper_(std::move(upper)) {
    std::size_t n = chart_.dim();
    if (upper_.size() != n * (n - 1) / 2)
        throw Error("two-form table size does not match chart dimension");
}

std::size_t TwoForm::offset(std::size_t l, std::size_t m) const {
    std::size_t n = chart_.dim();
    if (!(l < m && m < n)) throw Error("two-form index out of range");
    // row-major upper triangle
    return l * n - l * (l + 1) / 2 + (m - l - 1);
}

const Expr& TwoForm::upper(std::size_t l, std::size_t m) const {
    return upper_[offset(l, m)];
}

TwoForm& TwoForm::set(std::size_t l, std::size_t m, Expr coeff) {
    if (l == m) throw Error("two-form diagonal entries are identically zero");
    if (l < m)
        upper_[offset(l, m)] = std::move(coeff);
    else
        upper_[offset(m, l)] = simplify(Expr::negate(std::move(coeff)));
    return *this;
}

Expr TwoForm::entry(std::size_t l, std::size_t m) const {
    if (l == m) return Expr::integer(0);
    if (l < m) return upper(l, m);
    return simplify(Expr::negate(upper(m, l)));
}

TwoForm operator+(const TwoForm& a, const TwoForm& b) {
    require_same_chart(a.chart(), b.chart());
    TwoForm out(a.chart());
    std::size_t n = a.dim();
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m)
            out.set(l, m, simplify(a.upper(l, m) + b.upper(l, m)));
    return out;
}

TwoForm operator-(const TwoForm& a, const TwoForm& b) {
    require_same_chart(a.chart(), b.chart());
    TwoForm out(a.chart());
    std::size_t n = a.dim();
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m)
            out.set(l, m, simplify(a.upper(l, m) - b.upper(l, m)));
    return out;
}

TwoForm operator*(const Expr& f, const TwoForm& w) {
    TwoForm out(w.chart());
    std::size_t n = w.dim();
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m)
            out.set(l, m, simplify(f * w.upper(l, m)));
    return out;
}

// ---- operations ----

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    require_same_chart(X.chart(), Y.chart());
    const Chart& chart = X.chart();
    std::size_t n = chart.dim();
    std::vector<Expr> comps;
    comps.reserve(n);
    for (std::size_t l = 0; l < n; ++l) {
        std::vector<Expr> terms;
        terms.reserve(2 * n);
        for (std::size_t m = 0; m < n; ++m) {
            const std::string& xm = chart.symbols()[m];
            terms.push_back(X.component(m) * differentiate(Y.component(l), xm));
            terms.push_back(Expr::negate(Y.component(m) * differentiate(X.component(l), xm)));
        }
        comps.push_back(simplify(Expr::sum(std::move(terms))));
    }
    return VectorField(chart, std::move(comps));
}

OneForm exterior_derivative(const Expr& f, const Chart& chart) {
    std::vector<Expr> coeffs;
    coeffs.reserve(chart.dim());
    for (const std::string& sym : chart.symbols()) coeffs.push_back(differentiate(f, sym));
    return OneForm(chart, std::move(coeffs));
}

TwoForm exterior_derivative(const OneForm& theta) {
    const Chart& chart = theta.chart();
    TwoForm out(chart);
    std::size_t n = chart.dim();
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m)
            out.set(l, m, simplify(differentiate(theta.coefficient(m), chart.symbols()[l]) -
                                   differentiate(theta.coefficient(l), chart.symbols()[m])));
    return out;
}

namespace {

// Degree-3 coefficients T_lmp for l<m<p; an internal detail of closedness
// and Cartan computations.
std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Expr>> d_of_two_form(const TwoForm& w) {
    const Chart& chart = w.chart();
    std::size_t n = chart.dim();
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Expr>> out;
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m)
            for (std::size_t p = m + 1; p < n; ++p) {
                Expr c = simplify(differentiate(w.upper(m, p), chart.symbols()[l]) -
                                  differentiate(w.upper(l, p), chart.symbols()[m]) +
                                  differentiate(w.upper(l, m), chart.symbols()[p]));
                out.emplace_back(l, m, p, std::move(c));
            }
    return out;
}

// Signed lookup into the totally antisymmetric degree-3 table.
Expr three_form_entry(const std::vector<std::tuple<std::size_t, std::size_t, std::size_t, Expr>>& T,
                      std::size_t a, std::size_t b, std::size_t c) {
    if (a == b || b == c || a == c) return Expr::integer(0);
    std::size_t i = a, j = b, k = c;
    int sign = 1;
    if (i > j) std::swap(i, j), sign = -sign;
    if (j > k) std::swap(j, k), sign = -sign;
    if (i > j) std::swap(i, j), sign = -sign;
    for (const auto& [l, m, p, coeff] : T)
        if (l == i && m == j && p == k) return sign > 0 ? coeff : Expr::negate(coeff);
    return Expr::integer(0);
}

}  // namespace

bool is_closed(const TwoForm& w, const ZeroTestOptions& opts, std::mt19937_64& rng) {
    for (const auto& [l, m, p, coeff] : d_of_two_form(w)) {
        (void)l;
        (void)m;
        (void)p;
        if (!is_zero(coeff, w.chart().box(), opts, rng)) return false;
    }
    return true;
}

OneForm interior_product(const VectorField& X, const TwoForm& w) {
    require_same_chart(X.chart(), w.chart());
    const Chart& chart = w.chart();
    std::size_t n = chart.dim();
    std::vector<Expr> coeffs;
    coeffs.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
        std::vector<Expr> terms;
        for (std::size_t l = 0; l < n; ++l) {
            if (l == m) continue;
            terms.push_back(X.component(l) * w.entry(l, m));
        }
        coeffs.push_back(simplify(Expr::sum(std::move(terms))));
    }
    return OneForm(chart, std::move(coeffs));
}

TwoForm lie_derivative(const VectorField& X, const TwoForm& w) {
    require_same_chart(X.chart(), w.chart());
    const Chart& chart = w.chart();
    std::size_t n = chart.dim();

    auto dw = d_of_two_form(w);
    TwoForm contraction(chart);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t p = m + 1; p < n; ++p) {
            std::vector<Expr> terms;
            for (std::size_t l = 0; l < n; ++l)
                terms.push_back(X.component(l) * three_form_entry(dw, l, m, p));
            contraction.set(m, p, simplify(Expr::sum(std::move(terms))));
        }

    return contraction + exterior_derivative(interior_product(X, w));
}

TwoForm wedge(const OneForm& a, const OneForm& b) {
    require_same_chart(a.chart(), b.chart());
    TwoForm out(a.chart());
    std::size_t n = a.chart().dim();
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m)
            out.set(l, m, simplify(a.coefficient(l) * b.coefficient(m) - a.coefficient(m) * b.coefficient(l)));
    return out;
}

bool all_zero(const VectorField& X, const ZeroTestOptions& opts, std::mt19937_64& rng) {
    for (const Expr& c : X.components())
        if (!is_zero(c, X.chart().box(), opts, rng)) return false;
    return true;
}

bool all_zero(const OneForm& a, const ZeroTestOptions& opts, std::mt19937_64& rng) {
    for (const Expr& c : a.coefficients())
        if (!is_zero(c, a.chart().box(), opts, rng)) return false;
    return true;
}

bool all_zero(const TwoForm& w, const ZeroTestOptions& opts, std::mt19937_64& rng) {
    for (const Expr& c : w.storage())
        if (!is_zero(c, w.chart().box(), opts, rng)) return false;
    return true;
}

}  // namespace kslie
