#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "kslie/registry.hpp"

using namespace kslie;

namespace {

const StructureConstantOptions kCOpts{};

Rational q(const char* text) { return rational_from_string(text); }

}  // namespace

TEST_CASE("structure constants of the sl2 basis") {
    std::mt19937_64 rng(1);
    CompiledExample ks = compile_example("schwarz3ks");
    LieAlgebraModel model = structure_constants(ks.fields, kCOpts, rng);
    REQUIRE(model.dim() == 3);
    CHECK(model.c(0, 1, 0) == q("1"));
    CHECK(model.c(0, 2, 1) == q("2"));
    CHECK(model.c(1, 2, 2) == q("1"));
    CHECK(model.c(0, 1, 1) == q("0"));
    CHECK(model.c(1, 0, 0) == q("-1"));  // antisymmetry
    CHECK(model.jacobi_holds());
}

TEST_CASE("structure constants of the affine pair") {
    std::mt19937_64 rng(2);
    CompiledExample lv = compile_example("lotka-volterra");
    LieAlgebraModel model = structure_constants(lv.fields, kCOpts, rng);
    REQUIRE(model.dim() == 2);
    CHECK(model.c(0, 1, 1) == q("1"));
    CHECK(model.c(0, 1, 0) == q("0"));
}

TEST_CASE("a single field has all-zero constants") {
    std::mt19937_64 rng(3);
    CompiledExample ks = compile_example("schwarz3ks");
    LieAlgebraModel model = structure_constants({ks.fields[0]}, kCOpts, rng);
    CHECK(model.dim() == 1);
    CHECK(model.c(0, 0, 0) == q("0"));
}

TEST_CASE("every registered table is recovered exactly") {
    std::mt19937_64 rng(4);
    for (const ExampleRecord& record : examples()) {
        CAPTURE(record.id);
        CompiledExample ex = compile_example(record.id);
        LieAlgebraModel model = structure_constants(ex.fields, kCOpts, rng);
        std::size_t r = ex.fields.size();
        std::vector<Rational> expected(r * r * r, Rational(0));
        for (const auto& e : record.expected_constants) {
            expected[(e.alpha * r + e.beta) * r + e.gamma] = q(e.value.c_str());
            expected[(e.beta * r + e.alpha) * r + e.gamma] = -q(e.value.c_str());
        }
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b)
                for (std::size_t g = 0; g < r; ++g)
                    CHECK(model.c(a, b, g) == expected[(a * r + b) * r + g]);
        CHECK(model.jacobi_holds());
    }
}

TEST_CASE("property: constants transform as a tensor under unimodular basis changes") {
    std::mt19937_64 rng(11);
    CompiledExample ks = compile_example("schwarz3ks");
    LieAlgebraModel base = structure_constants(ks.fields, kCOpts, rng);
    std::size_t r = ks.fields.size();

    std::uniform_int_distribution<int> pick(0, 2), sign(0, 1);
    for (int trial = 0; trial < 5; ++trial) {
        // random product of elementary integer row operations: T is unimodular,
        // so T and T^{-1} are integer matrices
        std::vector<std::vector<long>> T(r, std::vector<long>(r, 0));
        for (std::size_t i = 0; i < r; ++i) T[i][i] = 1;
        for (int step = 0; step < 3; ++step) {
            std::size_t i = pick(rng), j = pick(rng);
            if (i == j) continue;
            long s = sign(rng) ? 1 : -1;
            for (std::size_t col = 0; col < r; ++col) T[i][col] += s * T[j][col];
        }

        std::vector<VectorField> transformed;
        for (std::size_t i = 0; i < r; ++i) {
            VectorField Y = VectorField::zero(ks.chart);
            for (std::size_t j = 0; j < r; ++j) Y = Y + Expr::integer(T[i][j]) * ks.fields[j];
            transformed.push_back(std::move(Y));
        }
        StructureConstantOptions opts = kCOpts;
        opts.retry_denominator = 96;  // transformed tables can leave the small-constant pool
        LieAlgebraModel model = structure_constants(transformed, opts, rng);

        // compare against the pushforward of the base tensor through T:
        // [Y_a, Y_b] = sum T_a^g T_b^d c^m_{gd} X_m must match
        // sum c'_ab^e (T_e^m X_m) componentwise
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b)
                for (std::size_t m = 0; m < r; ++m) {
                    Rational lhs = 0;
                    for (std::size_t g = 0; g < r; ++g)
                        for (std::size_t d = 0; d < r; ++d)
                            lhs += Rational(T[a][g]) * Rational(T[b][d]) * base.c(g, d, m);
                    Rational rhs = 0;
                    for (std::size_t e = 0; e < r; ++e) rhs += model.c(a, b, e) * Rational(T[e][m]);
                    CHECK(lhs == rhs);
                }
    }
}

TEST_CASE("dependent sample evaluations are rejected") {
    std::mt19937_64 rng(5);
    CompiledExample ks = compile_example("schwarz3ks");
    // two copies of the same field are linearly dependent at every point
    CHECK_THROWS_AS(structure_constants({ks.fields[0], ks.fields[0]}, kCOpts, rng),
                    RankDeficientSamplesError);
}

TEST_CASE("closure of the control-system generators") {
    std::mt19937_64 rng(6);
    for (const char* id : {"control1", "control2"}) {
        CAPTURE(id);
        CompiledExample ex = compile_example(id);
        LieAlgebraModel closure = lie_closure(ex.generators(), 16, kCOpts, rng);
        CHECK(closure.dim() == 5);

        // the closure spans the registered basis: every registered field
        // expands over the closure basis at sampled points
        std::vector<Env> points;
        long budget = 1000;
        for (int i = 0; i < 8; ++i) points.push_back(ex.chart.box().sample(rng, budget));
        std::size_t n = ex.chart.dim();
        Eigen::MatrixXd B(points.size() * n, closure.dim());
        for (std::size_t g = 0; g < closure.dim(); ++g)
            for (std::size_t s = 0; s < points.size(); ++s) {
                auto v = closure.basis()[g].evaluate_at(points[s]);
                for (std::size_t l = 0; l < n; ++l) B(s * n + l, g) = v[l];
            }
        for (const VectorField& X : ex.fields) {
            Eigen::VectorXd b(points.size() * n);
            for (std::size_t s = 0; s < points.size(); ++s) {
                auto v = X.evaluate_at(points[s]);
                for (std::size_t l = 0; l < n; ++l) b(s * n + l) = v[l];
            }
            Eigen::VectorXd c = B.colPivHouseholderQr().solve(b);
            CHECK((B * c - b).norm() <= 1e-8 * (1.0 + b.norm()));
        }
    }
}

TEST_CASE("closure is idempotent and handles single generators") {
    std::mt19937_64 rng(7);
    CompiledExample ks = compile_example("schwarz3ks");
    LieAlgebraModel once = lie_closure(ks.fields, 16, kCOpts, rng);
    CHECK(once.dim() == 3);
    LieAlgebraModel twice = lie_closure(once.basis(), 16, kCOpts, rng);
    CHECK(twice.dim() == 3);

    LieAlgebraModel single = lie_closure({ks.fields[0]}, 16, kCOpts, rng);
    CHECK(single.dim() == 1);
}

TEST_CASE("closure reports runaway dimension growth") {
    std::mt19937_64 rng(8);
    DomainBox box;
    box.bind("x", 0.5, 2.0);
    Chart c({"x"}, box);
    VectorField f2(c, {parse("x^2", c.symbols())});
    VectorField f3(c, {parse("x^3", c.symbols())});
    CHECK_THROWS_AS(lie_closure({f2, f3}, 6, kCOpts, rng), DimensionExceededError);
}

TEST_CASE("stability of the registered kernels") {
    std::mt19937_64 rng(9);
    StabilityOptions opts;
    CompiledExample ks = compile_example("schwarz3ks");
    CHECK(is_stable_distribution(ks.fields, ks.kernels[0], opts, rng));
    CHECK(is_stable_distribution(ks.fields, ks.kernels[1], opts, rng));

    // control1: bracket coefficients over the kernel of the fourth form are
    // polynomial, not constant
    CompiledExample c1 = compile_example("control1");
    CHECK(is_stable_distribution(c1.fields, c1.kernels[3], opts, rng));
}

TEST_CASE("an unstable distribution is detected") {
    std::mt19937_64 rng(10);
    DomainBox box;
    box.bind("x", -1.0, 1.0).bind("y", -1.0, 1.0);
    Chart c({"x", "y"}, box);
    VectorField ddx = VectorField::coordinate(c, 0);
    VectorField xddy(c, {Expr::integer(0), Expr::symbol("x")});
    // [d/dx, x d/dy] = d/dy leaves the span of x d/dy at x = 0
    StabilityOptions opts;
    CHECK_FALSE(is_stable_distribution({ddx}, {xddy}, opts, rng));
}
