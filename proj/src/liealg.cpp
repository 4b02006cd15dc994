#include "kslie/liealg.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace kslie {

namespace {

// Stacked evaluations of the fields at the sample points: column gamma holds
// X_gamma at every point, concatenated.
Eigen::MatrixXd field_matrix(const std::vector<VectorField>& fields, const std::vector<Env>& points) {
    std::size_t n = fields.front().chart().dim();
    Eigen::MatrixXd A(points.size() * n, fields.size());
    for (std::size_t g = 0; g < fields.size(); ++g)
        for (std::size_t s = 0; s < points.size(); ++s) {
            std::vector<double> v = fields[g].evaluate_at(points[s]);
            for (std::size_t l = 0; l < n; ++l) A(s * n + l, g) = v[l];
        }
    return A;
}

Eigen::VectorXd stacked_values(const VectorField& X, const std::vector<Env>& points) {
    std::size_t n = X.chart().dim();
    Eigen::VectorXd b(points.size() * n);
    for (std::size_t s = 0; s < points.size(); ++s) {
        std::vector<double> v = X.evaluate_at(points[s]);
        for (std::size_t l = 0; l < n; ++l) b(s * n + l) = v[l];
    }
    return b;
}

std::vector<Env> sample_points_where_defined(const std::vector<VectorField>& fields,
                                             std::size_t count, std::mt19937_64& rng) {
    const Chart& chart = fields.front().chart();
    std::vector<Env> points;
    points.reserve(count);
    long budget = 100L * static_cast<long>(count);
    while (points.size() < count) {
        Env p = chart.box().sample(rng, budget);
        bool ok = true;
        for (const VectorField& f : fields) {
            try {
                f.evaluate_at(p);
            } catch (const UndefinedAtPointError&) {
                ok = false;
                break;
            }
        }
        if (ok) points.push_back(std::move(p));
        if (--budget <= 0) throw DomainExhaustedError("could not sample points where all fields are defined");
    }
    return points;
}

std::size_t numeric_rank(const Eigen::MatrixXd& M, double rel_threshold = 1e-8) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_threshold * sv(0)) ++rank;
    return rank;
}

// Round a least-squares coefficient vector to exact rationals, then certify
// the residual field symbolically. Returns the constants on success.
std::optional<std::vector<Rational>> certify_combination(const VectorField& bracket,
                                                         const std::vector<VectorField>& basis,
                                                         const Eigen::VectorXd& coeffs,
                                                         long max_den, double round_tol,
                                                         const ZeroTestOptions& zero,
                                                         std::mt19937_64& rng) {
    std::vector<Rational> rounded;
    rounded.reserve(basis.size());
    for (std::size_t g = 0; g < basis.size(); ++g) {
        auto q = nearest_rational(coeffs(g), max_den, round_tol);
        if (!q) return std::nullopt;
        rounded.push_back(*q);
    }
    VectorField residual = bracket;
    for (std::size_t g = 0; g < basis.size(); ++g)
        residual = residual - Expr::constant(rounded[g]) * basis[g];
    if (!all_zero(residual, zero, rng)) return std::nullopt;
    return rounded;
}

}  // namespace

LieAlgebraModel::LieAlgebraModel(std::vector<VectorField> basis, std::vector<Rational> constants)
    : basis_(std::move(basis)), constants_(std::move(constants)) {
    std::size_t r = basis_.size();
    if (constants_.size() != r * r * r) throw Error("structure-constant tensor has the wrong size");
    if (!jacobi_holds()) throw Error("structure constants violate the Jacobi identity");
}

const Rational& LieAlgebraModel::c(std::size_t alpha, std::size_t beta, std::size_t gamma) const {
    std::size_t r = basis_.size();
    if (alpha >= r || beta >= r || gamma >= r) throw Error("structure-constant index out of range");
    return constants_[(alpha * r + beta) * r + gamma];
}

bool LieAlgebraModel::jacobi_holds() const {
    std::size_t r = basis_.size();
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b)
            for (std::size_t d = 0; d < r; ++d)
                for (std::size_t mu = 0; mu < r; ++mu) {
                    Rational total = 0;
                    for (std::size_t g = 0; g < r; ++g)
                        total += c(a, b, g) * c(g, d, mu) + c(b, d, g) * c(g, a, mu) +
                                 c(d, a, g) * c(g, b, mu);
                    if (sgn(total) != 0) return false;
                }
    return true;
}

LieAlgebraModel structure_constants(const std::vector<VectorField>& basis,
                                    const StructureConstantOptions& opts, std::mt19937_64& rng) {
    if (basis.empty()) throw Error("structure constants need a nonempty basis");
    const Chart& chart = basis.front().chart();
    for (const VectorField& X : basis) require_same_chart(chart, X.chart());
    std::size_t r = basis.size();
    std::size_t n = chart.dim();

    std::size_t M = r + static_cast<std::size_t>(opts.extra_sample_points);
    std::vector<Env> points = sample_points_where_defined(basis, M, rng);
    Eigen::MatrixXd A = field_matrix(basis, points);
    if (numeric_rank(A) < r)
        throw RankDeficientSamplesError("basis fields are linearly dependent at the sampled points");
    auto solver = A.colPivHouseholderQr();

    std::vector<Rational> tensor(r * r * r, Rational(0));
    auto at = [&](std::size_t a, std::size_t b, std::size_t g) -> Rational& {
        return tensor[(a * r + b) * r + g];
    };

    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b) {
            VectorField bracket = lie_bracket(basis[a], basis[b]);
            Eigen::VectorXd rhs(points.size() * n);
            try {
                rhs = stacked_values(bracket, points);
            } catch (const UndefinedAtPointError&) {
                throw RankDeficientSamplesError("bracket undefined at a sampled point");
            }
            Eigen::VectorXd coeffs = solver.solve(rhs);
            auto certified = certify_combination(bracket, basis, coeffs, opts.max_denominator,
                                                 opts.round_tolerance, opts.zero, rng);
            if (!certified)
                certified = certify_combination(bracket, basis, coeffs, opts.retry_denominator,
                                                opts.round_tolerance, opts.zero, rng);
            if (!certified) throw NotClosedPairError(a, b);
            for (std::size_t g = 0; g < r; ++g) {
                at(a, b, g) = (*certified)[g];
                at(b, a, g) = -(*certified)[g];
            }
        }

    return LieAlgebraModel(basis, std::move(tensor));
}

LieAlgebraModel lie_closure(const std::vector<VectorField>& generators, std::size_t max_dim,
                            const StructureConstantOptions& opts, std::mt19937_64& rng) {
    if (generators.empty()) throw Error("closure needs at least one generator");
    if (max_dim < generators.size()) throw Error("max_dim must be at least the generator count");
    const Chart& chart = generators.front().chart();
    for (const VectorField& X : generators) require_same_chart(chart, X.chart());
    std::size_t n = chart.dim();

    std::vector<Env> points = sample_points_where_defined(generators, max_dim + 4, rng);

    std::vector<VectorField> basis;
    Eigen::MatrixXd B(points.size() * n, 0);

    auto try_append = [&](const VectorField& W) -> bool {
        // Independence first decided numerically; a claimed dependence is
        // confirmed symbolically before the candidate is dropped.
        Eigen::VectorXd w;
        try {
            w = stacked_values(W, points);
        } catch (const UndefinedAtPointError&) {
            // resample and rebuild the numeric span on points where every
            // field involved so far is defined
            std::vector<VectorField> involved = basis;
            involved.push_back(W);
            points = sample_points_where_defined(involved, points.size(), rng);
            B = field_matrix(basis, points);
            w = stacked_values(W, points);
        }
        bool independent;
        Eigen::VectorXd coeffs;
        if (B.cols() == 0) {
            independent = w.norm() > 1e-10;
        } else {
            coeffs = B.colPivHouseholderQr().solve(w);
            double residual = (B * coeffs - w).norm();
            independent = residual > 1e-8 * (1.0 + w.norm());
        }
        if (!independent && B.cols() > 0) {
            // confirm: residual field must vanish symbolically
            VectorField residual_field = W;
            for (std::size_t g = 0; g < basis.size(); ++g) {
                Rational q = nearest_rational(coeffs(g), opts.retry_denominator, opts.round_tolerance)
                                 .value_or(Rational(coeffs(g)));
                residual_field = residual_field - Expr::constant(q) * basis[g];
            }
            if (!all_zero(residual_field, opts.zero, rng)) independent = true;
        }
        if (!independent) return false;
        if (basis.size() + 1 > max_dim) throw DimensionExceededError(max_dim);
        std::vector<Expr> comps;
        comps.reserve(n);
        for (const Expr& c : W.components()) comps.push_back(simplify(c));
        basis.push_back(VectorField(chart, std::move(comps)));
        B.conservativeResize(Eigen::NoChange, B.cols() + 1);
        B.col(B.cols() - 1) = w;
        return true;
    };

    // every pair (i, j) of basis indices is bracketed exactly once, including
    // pairs formed with directions appended along the way
    std::vector<std::pair<std::size_t, std::size_t>> pending;
    auto enqueue_with_new_last = [&] {
        std::size_t q = basis.size() - 1;
        for (std::size_t p = 0; p < q; ++p) pending.emplace_back(p, q);
    };

    for (const VectorField& g : generators)
        if (try_append(g)) enqueue_with_new_last();
    if (basis.empty()) {
        // all generators vanish; represent the trivial algebra by one zero field
        return LieAlgebraModel({VectorField::zero(chart)}, std::vector<Rational>(1, Rational(0)));
    }

    while (!pending.empty()) {
        auto [i, j] = pending.back();
        pending.pop_back();
        if (try_append(lie_bracket(basis[i], basis[j]))) enqueue_with_new_last();
    }

    return structure_constants(basis, opts, rng);
}

bool is_stable_distribution(const std::vector<VectorField>& V, const std::vector<VectorField>& D,
                            const StabilityOptions& opts, std::mt19937_64& rng) {
    if (V.empty() || D.empty()) throw Error("stability check needs nonempty field lists");
    const Chart& chart = D.front().chart();
    for (const VectorField& X : V) require_same_chart(chart, X.chart());
    for (const VectorField& Y : D) require_same_chart(chart, Y.chart());
    std::size_t n = chart.dim();
    std::size_t d = D.size();

    // monomials for coefficient reconstruction: 1, x_i, x_i x_j
    std::vector<Expr> monomials{Expr::integer(1)};
    if (opts.max_polynomial_degree >= 1)
        for (const std::string& s : chart.symbols()) monomials.push_back(Expr::symbol(s));
    if (opts.max_polynomial_degree >= 2)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j)
                monomials.push_back(Expr::symbol(chart.symbols()[i]) * Expr::symbol(chart.symbols()[j]));

    std::size_t S = std::max<std::size_t>(opts.sample_points, 3 * monomials.size());
    std::vector<VectorField> all = D;
    all.insert(all.end(), V.begin(), V.end());
    std::vector<Env> points = sample_points_where_defined(all, S, rng);

    // constant-rank precondition
    std::optional<std::size_t> rank;
    std::vector<Eigen::MatrixXd> Dmats;
    Dmats.reserve(points.size());
    for (const Env& p : points) {
        Eigen::MatrixXd Dp(n, d);
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> v = D[j].evaluate_at(p);
            for (std::size_t l = 0; l < n; ++l) Dp(l, j) = v[l];
        }
        std::size_t r = numeric_rank(Dp);
        if (rank && *rank != r) throw RankDropError(chart.to_point(p));
        rank = r;
        Dmats.push_back(std::move(Dp));
    }

    for (const VectorField& X : V) {
        for (const VectorField& Y : D) {
            VectorField W = lie_bracket(X, Y);
            if (all_zero(W, opts.zero, rng)) continue;

            // pointwise membership in the span of D
            Eigen::MatrixXd C(points.size(), d);  // coefficients per point
            bool pointwise_ok = true;
            for (std::size_t s = 0; s < points.size() && pointwise_ok; ++s) {
                Eigen::VectorXd w(n);
                std::vector<double> wv = W.evaluate_at(points[s]);
                for (std::size_t l = 0; l < n; ++l) w(l) = wv[l];
                Eigen::VectorXd c = Dmats[s].colPivHouseholderQr().solve(w);
                double residual = (Dmats[s] * c - w).norm();
                if (residual > opts.residual_tolerance * (1.0 + w.norm())) pointwise_ok = false;
                C.row(s) = c.transpose();
            }
            if (!pointwise_ok) return false;

            // reconstruct each coefficient as a low-degree polynomial and certify
            Eigen::MatrixXd Phi(points.size(), monomials.size());
            for (std::size_t s = 0; s < points.size(); ++s)
                for (std::size_t m = 0; m < monomials.size(); ++m)
                    Phi(s, m) = evaluate(monomials[m], points[s]);
            auto phi_solver = Phi.colPivHouseholderQr();

            bool reconstructed = true;
            std::vector<Expr> coeff_exprs;
            for (std::size_t j = 0; j < d && reconstructed; ++j) {
                Eigen::VectorXd target = C.col(j);
                Eigen::VectorXd poly = phi_solver.solve(target);
                double fit = (Phi * poly - target).norm();
                if (fit > 1e-6 * (1.0 + target.norm())) {
                    reconstructed = false;
                    break;
                }
                std::vector<Expr> terms;
                for (std::size_t m = 0; m < monomials.size(); ++m) {
                    if (std::abs(poly(m)) < 1e-8) continue;
                    auto q = nearest_rational(poly(m), 48, 1e-5);
                    if (!q) {
                        reconstructed = false;
                        break;
                    }
                    terms.push_back(Expr::constant(*q) * monomials[m]);
                }
                if (reconstructed) coeff_exprs.push_back(simplify(Expr::sum(std::move(terms))));
            }
            if (reconstructed) {
                VectorField residual = W;
                for (std::size_t j = 0; j < d; ++j) residual = residual - coeff_exprs[j] * D[j];
                if (all_zero(residual, opts.zero, rng)) continue;
            }

            // numeric fallback: a single constant-coefficient expansion over
            // all sampled points
            Eigen::MatrixXd A = field_matrix(D, points);
            Eigen::VectorXd b = stacked_values(W, points);
            Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
            double residual = (A * c - b).norm();
            if (residual > opts.residual_tolerance * (1.0 + b.norm())) return false;
        }
    }
    return true;
}

}  // namespace kslie
