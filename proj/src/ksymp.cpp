#include "kslie/ksymp.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace kslie {

namespace {

Eigen::MatrixXd form_matrix_at(const TwoForm& w, const Env& point) {
    std::size_t n = w.dim();
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m) {
            double c = evaluate(w.upper(l, m), point);
            M(l, m) = c;
            M(m, l) = -c;
        }
    return M;
}

// Rows are normalized first: row scaling leaves the nullspace untouched but
// keeps the relative singular-value cutoff meaningful when coefficients like
// 1/(x_i - x_j)^2 differ by many orders of magnitude across rows.
std::size_t numeric_rank(Eigen::MatrixXd M, double rel_threshold) {
    if (M.size() == 0) return 0;
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        double norm = M.row(r).norm();
        if (norm > 0.0) M.row(r) /= norm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    double cutoff = rel_threshold * sv(0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

}  // namespace

Covector::Covector(std::vector<double> entries) : entries_(std::move(entries)) {
    for (double v : entries_)
        if (!std::isfinite(v)) throw Error("covector entries must be finite");
}

KSymplecticStructure::KSymplecticStructure(std::vector<TwoForm> forms, StructureValidation validation)
    : forms_(std::move(forms)), validation_(validation) {
    if (forms_.empty()) throw Error("a k-symplectic structure needs at least one form");
}

KSymplecticStructure validate_structure(std::vector<TwoForm> forms, const StructureOptions& opts,
                                        std::mt19937_64& rng) {
    if (forms.empty()) throw Error("a k-symplectic structure needs at least one form");
    const Chart& chart = forms.front().chart();
    for (const TwoForm& w : forms) require_same_chart(chart, w.chart());

    // closedness, symbolically
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const TwoForm& w = forms[i];
        std::size_t n = chart.dim();
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t m = l + 1; m < n; ++m)
                for (std::size_t p = m + 1; p < n; ++p) {
                    Expr cyc = differentiate(w.upper(m, p), chart.symbols()[l]) -
                               differentiate(w.upper(l, p), chart.symbols()[m]) +
                               differentiate(w.upper(l, m), chart.symbols()[p]);
                    if (!is_zero(cyc, chart.box(), opts.zero, rng)) throw NotClosedError(i, l, m, p);
                }
    }

    // joint kernel triviality, numerically
    std::size_t n = chart.dim();
    std::size_t k = forms.size();
    long budget = 100L * opts.samples;
    for (int s = 0; s < opts.samples; ++s) {
        Env point = chart.box().sample(rng, budget);
        Eigen::MatrixXd stacked(k * n, n);
        bool undefined = false;
        for (std::size_t i = 0; i < k && !undefined; ++i) {
            try {
                stacked.block(i * n, 0, n, n) = form_matrix_at(forms[i], point);
            } catch (const UndefinedAtPointError&) {
                undefined = true;
            }
        }
        if (undefined) {
            --s;  // resample
            continue;
        }
        if (numeric_rank(stacked, opts.rank_threshold) < n)
            throw DegenerateAtError(chart.to_point(point));
    }

    StructureValidation validation;
    validation.samples = opts.samples;
    // dim N = n0(k+1) for an integer n0
    if (n % (k + 1) != 0) {
        validation.dimension_fits = false;
        validation.dimension_note = "chart dimension " + std::to_string(n) +
                                    " is not an integer multiple of k+1 = " + std::to_string(k + 1);
    }
    return KSymplecticStructure(std::move(forms), validation);
}

std::size_t kernel_dimension_at(const TwoForm& w, const std::vector<double>& point,
                                double rank_threshold) {
    Env env = w.chart().to_env(point);
    Eigen::MatrixXd M;
    try {
        M = form_matrix_at(w, env);
    } catch (const UndefinedAtPointError&) {
        throw UndefinedAtPointError("two-form coefficients undefined at the given point");
    }
    return w.dim() - numeric_rank(M, rank_threshold);
}

OmegaHamiltonian::OmegaHamiltonian(Chart chart, std::vector<Expr> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
    if (components_.empty()) throw ComponentCountMismatchError("empty component tuple");
}

OmegaHamiltonian::OmegaHamiltonian(Chart chart, std::vector<Expr> components, VectorField field)
    : chart_(std::move(chart)), components_(std::move(components)), field_(std::move(field)) {
    if (components_.empty()) throw ComponentCountMismatchError("empty component tuple");
    require_same_chart(chart_, field_->chart());
}

Expr OmegaHamiltonian::contract(const Covector& theta) const {
    if (theta.size() != k()) throw ComponentCountMismatchError("covector length differs from k");
    std::vector<Expr> terms;
    terms.reserve(k());
    for (std::size_t i = 0; i < k(); ++i)
        terms.push_back(Expr::constant(Rational(theta[i])) * components_[i]);
    return simplify(Expr::sum(std::move(terms)));
}

bool check_hamiltonian(const VectorField& X, const TwoForm& w, const Expr& h,
                       const ZeroTestOptions& opts, std::mt19937_64& rng) {
    require_same_chart(X.chart(), w.chart());
    OneForm residual = interior_product(X, w) - exterior_derivative(h, w.chart());
    return all_zero(residual, opts, rng);
}

bool check_omega_hamiltonian(const VectorField& X, const KSymplecticStructure& S,
                             const OmegaHamiltonian& h, const ZeroTestOptions& opts,
                             std::mt19937_64& rng) {
    if (h.k() != S.k()) throw ComponentCountMismatchError("tuple length differs from structure k");
    require_same_chart(X.chart(), S.chart());
    for (std::size_t i = 0; i < S.k(); ++i)
        if (!check_hamiltonian(X, S.form(i), h.component(i), opts, rng)) return false;
    return true;
}

bool omega_hamiltonian_field_is_unique(const KSymplecticStructure& S, const VectorField& X,
                                       const VectorField& Y, const OmegaHamiltonian& h,
                                       const ZeroTestOptions& opts, std::mt19937_64& rng) {
    if (!check_omega_hamiltonian(X, S, h, opts, rng) || !check_omega_hamiltonian(Y, S, h, opts, rng))
        throw PreconditionFailedError("both fields must satisfy the component Hamiltonian identities");
    return all_zero(X - Y, opts, rng);
}

OmegaHamiltonian bracket_omega(const OmegaHamiltonian& h, const OmegaHamiltonian& g,
                               const VectorField& X_h, const VectorField& X_g) {
    if (h.k() != g.k()) throw PreconditionFailedError("tuples have different lengths");
    require_same_chart(h.chart(), g.chart());
    require_same_chart(h.chart(), X_h.chart());
    require_same_chart(h.chart(), X_g.chart());
    std::vector<Expr> comps;
    comps.reserve(h.k());
    for (std::size_t i = 0; i < h.k(); ++i) comps.push_back(X_g.apply(h.component(i)));
    return OmegaHamiltonian(h.chart(), std::move(comps), lie_bracket(X_g, X_h));
}

TwoForm contract_theta(const KSymplecticStructure& S, const Covector& theta) {
    if (theta.size() != S.k()) throw ComponentCountMismatchError("covector length differs from k");
    TwoForm out(S.chart());
    for (std::size_t i = 0; i < S.k(); ++i)
        out = out + Expr::constant(Rational(theta[i])) * S.form(i);
    return out;
}

Expr bracket_theta(const Expr& f, const Expr& g, const VectorField& X_g) {
    (void)g;  // the bracket only needs a Hamiltonian field of g
    return X_g.apply(f);
}

ProductObstruction product_hamiltonian_obstruction(const OmegaHamiltonian& h,
                                                   const OmegaHamiltonian& g,
                                                   const VectorField& X_h, const VectorField& X_g,
                                                   const ZeroTestOptions& opts,
                                                   std::mt19937_64& rng) {
    if (h.k() != 2 || g.k() != 2)
        throw ComponentCountMismatchError("product obstruction is computed for k = 2 tuples");
    require_same_chart(h.chart(), g.chart());
    const Chart& chart = h.chart();

    ProductObstruction out{
        {simplify(h.component(0) * g.component(0)), simplify(h.component(1) * g.component(1))},
        g.component(0) * X_h + h.component(0) * X_g,
        g.component(1) * X_h + h.component(1) * X_g,
        VectorField::zero(chart),
        false,
        {},
        {},
    };
    out.difference = out.candidate_first - out.candidate_second;
    out.fields_differ = !all_zero(out.difference, opts, rng);

    if (out.fields_differ) {
        // pick the sampled point with the largest gap as the certificate
        long budget = 100L * opts.trials;
        double best = -1.0;
        for (int s = 0; s < opts.trials; ++s) {
            Env point = chart.box().sample(rng, budget);
            try {
                std::vector<double> d = out.difference.evaluate_at(point);
                double norm = 0.0;
                for (double v : d) norm = std::max(norm, std::abs(v));
                if (norm > best) {
                    best = norm;
                    out.certificate_point = chart.to_point(point);
                    out.difference_at_certificate = std::move(d);
                }
            } catch (const UndefinedAtPointError&) {
                continue;
            }
        }
    }
    return out;
}

}  // namespace kslie
