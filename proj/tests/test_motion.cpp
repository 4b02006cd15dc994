#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kslie/registry.hpp"
#include "kslie/verify.hpp"

using namespace kslie;

namespace {

const ZeroTestOptions kOpts{};

TDependentField field_with(const CompiledExample& ex, const std::vector<std::string>& coeffs) {
    std::vector<Expr> parsed;
    for (const std::string& c : coeffs) parsed.push_back(parse(c, {}));
    return TDependentField(ex.fields, std::move(parsed));
}

TDependentField prolonged_default(const CompiledExample& ex, const ProductChart& pc) {
    std::vector<VectorField> basis;
    for (const VectorField& X : ex.fields) basis.push_back(prolong_field(X, pc));
    std::vector<Expr> coeffs;
    for (const std::string& c : ex.record.default_coefficients) coeffs.push_back(parse(c, {}));
    return TDependentField(std::move(basis), std::move(coeffs));
}

}  // namespace

TEST_CASE("autonomous special solution is reproduced to round-off") {
    CompiledExample ks = compile_example("schwarz3ks");
    TDependentField F = field_with(ks, {"0", "0", "1"});
    Trajectory traj = integrate(F, {0.0, 1.0, 0.0}, 0.0, 1.0, 1e-3);
    REQUIRE(traj.size() == 1001);
    for (std::size_t i = 0; i < traj.size(); i += 100) {
        double t = traj.time(i);
        CHECK(std::abs(traj.state(i)[0] - t) <= 1e-10);
        CHECK(std::abs(traj.state(i)[1] - 1.0) <= 1e-10);
        CHECK(std::abs(traj.state(i)[2]) <= 1e-10);
    }
}

TEST_CASE("zero fields give constant trajectories") {
    CompiledExample ks = compile_example("schwarz3ks");
    TDependentField F({VectorField::zero(ks.chart)}, {Expr::integer(1)});
    Trajectory traj = integrate(F, {0.5, 1.5, -0.5}, 0.0, 0.5, 1e-2);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.state(i)[0] == 0.5);
        CHECK(traj.state(i)[1] == 1.5);
        CHECK(traj.state(i)[2] == -0.5);
    }
}

TEST_CASE("the quadratic flow matches its closed form") {
    CompiledExample ric = compile_example("riccati4");
    TDependentField F = field_with(ric, {"0", "0", "1"});
    std::vector<double> x0{-1.0, -2.0, -3.0, -4.0};
    Trajectory traj = integrate(F, x0, 0.0, 1.0, 1e-3);
    // dx/dt = x^2 from x0 < 0 solves to x0/(1 - x0 t)
    for (std::size_t i = 0; i < traj.size(); i += 250) {
        double t = traj.time(i);
        for (std::size_t l = 0; l < 4; ++l) {
            double exact = x0[l] / (1.0 - x0[l] * t);
            CHECK(std::abs(traj.state(i)[l] - exact) <= 1e-8);
        }
    }
}

TEST_CASE("zero-length integration returns just the initial sample") {
    CompiledExample ks = compile_example("schwarz3ks");
    Trajectory traj = integrate(field_with(ks, {"0", "0", "1"}), {0.0, 1.0, 0.0}, 0.0, 0.0, 1e-3);
    CHECK(traj.size() == 1);
}

TEST_CASE("leaving the box aborts with the last valid state") {
    CompiledExample ric = compile_example("riccati4");
    TDependentField F = field_with(ric, {"0", "0", "1"});
    // x' = x^2 from x = 4 blows up at t = 1/4 and exits the box well before
    CHECK_THROWS_AS(integrate(F, {4.0, 1.0, 2.0, 3.0}, 0.0, 1.0, 1e-3), LeftDomainError);
    try {
        integrate(F, {4.0, 1.0, 2.0, 3.0}, 0.0, 1.0, 1e-3);
    } catch (const LeftDomainError& err) {
        CHECK(err.last_state.size() == 4);
        CHECK(err.t > 0.0);
        CHECK(err.t < 0.3);
    }
}

TEST_CASE("csv export carries the chart header") {
    CompiledExample ks = compile_example("schwarz3ks");
    Trajectory traj = integrate(field_with(ks, {"0", "0", "1"}), {0.0, 1.0, 0.0}, 0.0, 0.01, 1e-2);
    std::ostringstream os;
    write_csv(traj, os);
    CHECK(os.str().rfind("t,x,v,a\n", 0) == 0);
}

TEST_CASE("drift reports") {
    CompiledExample ks = compile_example("schwarz3ks");
    Trajectory traj = integrate(ks.default_field(), {0.0, 1.0, 0.0}, 0.0, 1.0, 1e-3);

    DriftReport constant = check_constant(Expr::integer(7), traj, 1e-12, "const");
    CHECK(constant.pass);
    CHECK(constant.max_abs_deviation == 0.0);

    // x is not conserved along the driven flow
    DriftReport moving = check_constant(Expr::symbol("x"), traj, 1e-6, "x");
    CHECK_FALSE(moving.pass);
    CHECK(moving.max_rel_deviation > 1e-2);
}

TEST_CASE("the six invariants of the doubled system") {
    std::mt19937_64 rng(1);
    CompiledExample ks = compile_example("schwarz3ks");
    ProductChart pc = ks.pair_chart();
    std::vector<NamedInvariant> invs = schwarzian_invariants(pc);
    REQUIRE(invs.size() == 6);

    Env p{{"x_1", 0.0}, {"v_1", 1.0}, {"a_1", 0.0}, {"x_2", 0.0}, {"v_2", 1.0}, {"a_2", 1.0}};
    CHECK(evaluate(invs[0].expr, p) == doctest::Approx(1.0));  // C_xi1

    // F4^2 = F3^2 - 4 F1 + 16/C_xi1 identically on the product domain
    const Expr& c1 = invs[0].expr;
    const Expr& f1 = invs[3].expr;
    const Expr& f3 = invs[4].expr;
    const Expr& f4 = invs[5].expr;
    Expr relation = f4 * f4 - (f3 * f3 - Expr::integer(4) * f1 + Expr::integer(16) / c1);
    CHECK(is_zero(relation, pc.chart().box(), kOpts, rng));

    // bilinear expansion in a symbolic covector (lam1, lam2)
    std::vector<std::string> extended = pc.chart().symbols();
    extended.push_back("lam1");
    extended.push_back("lam2");
    DomainBox box;
    for (const auto& [sym, iv] : pc.chart().box().intervals()) box.bind(sym, iv.lo, iv.hi);
    for (const Expr& e : pc.chart().box().exclusions()) box.exclude_zero_of(e);
    box.bind("lam1", -2.0, 2.0).bind("lam2", -2.0, 2.0);

    Expr lam1 = Expr::symbol("lam1"), lam2 = Expr::symbol("lam2");
    std::vector<Expr> htheta;
    for (std::size_t alpha = 0; alpha < 3; ++alpha) {
        Expr h1 = prolong_function(ks.ham[alpha][0], pc);
        Expr h2 = prolong_function(ks.ham[alpha][1], pc);
        htheta.push_back(simplify(lam1 * h1 + lam2 * h2));
    }
    Expr casimir = htheta[0] * htheta[2] - htheta[1] * htheta[1];
    Expr expansion = lam1 * lam1 * invs[0].expr + lam2 * lam2 * invs[1].expr + lam1 * lam2 * invs[2].expr;
    CHECK(is_zero(casimir - expansion, box, kOpts, rng));
}

TEST_CASE("casimir elements from the contracted tuples") {
    std::mt19937_64 rng(2);
    CompiledExample ks = compile_example("schwarz3ks");
    ProductChart pc = ks.pair_chart();
    std::vector<NamedInvariant> invs = schwarzian_invariants(pc);

    std::vector<VectorField> lifted;
    for (const VectorField& X : ks.fields) lifted.push_back(prolong_field(X, pc));
    std::vector<TwoForm> forms{prolong_two_form(ks.forms[0], pc), prolong_two_form(ks.forms[1], pc)};
    KSymplecticStructure s = validate_structure(forms, StructureOptions{}, rng);

    auto tuple_component = [&](std::size_t alpha, const Covector& theta) {
        Expr out = Expr::integer(0);
        for (std::size_t i = 0; i < 2; ++i)
            out = out + Expr::constant(Rational(theta[i])) * prolong_function(ks.ham[alpha][i], pc);
        return simplify(out);
    };

    SUBCASE("theta = (1,0) reproduces the first invariant") {
        Covector theta({1.0, 0.0});
        Expr c = casimir_constant(tuple_component(0, theta), tuple_component(1, theta),
                                  tuple_component(2, theta), lifted[0], lifted[1], lifted[2],
                                  contract_theta(s, theta), kOpts, rng);
        CHECK(is_zero(c - invs[0].expr, pc.chart().box(), kOpts, rng));
    }
    SUBCASE("theta = (0,1) reproduces the second invariant") {
        Covector theta({0.0, 1.0});
        Expr c = casimir_constant(tuple_component(0, theta), tuple_component(1, theta),
                                  tuple_component(2, theta), lifted[0], lifted[1], lifted[2],
                                  contract_theta(s, theta), kOpts, rng);
        CHECK(is_zero(c - invs[1].expr, pc.chart().box(), kOpts, rng));
    }
    SUBCASE("a shuffled tuple fails the table precondition") {
        Covector theta({1.0, 0.0});
        CHECK_THROWS_AS(casimir_constant(tuple_component(1, theta), tuple_component(0, theta),
                                         tuple_component(2, theta), lifted[1], lifted[0], lifted[2],
                                         contract_theta(s, theta), kOpts, rng),
                        BracketTableMismatchError);
    }
    SUBCASE("the zero tuple commutes trivially") {
        Covector theta({1.0, 0.0});
        Expr zero = Expr::integer(0);
        Expr c = casimir_constant(zero, zero, zero, VectorField::zero(pc.chart()),
                                  VectorField::zero(pc.chart()), VectorField::zero(pc.chart()),
                                  contract_theta(s, theta), kOpts, rng);
        CHECK(c.is_zero_constant());
    }
}

TEST_CASE("invariants hold along the driven doubled flow") {
    CompiledExample ks = compile_example("schwarz3ks");
    ProductChart pc = ks.pair_chart();
    TDependentField F = prolonged_default(ks, pc);
    Trajectory traj = integrate(F, {0.0, 1.0, 0.0, 0.5, 2.0, 1.0}, 0.0, 1.0, 1e-3);
    for (const NamedInvariant& inv : schwarzian_invariants(pc)) {
        DriftReport report = check_constant(inv.expr, traj, 1e-6, inv.label);
        CAPTURE(inv.label);
        CHECK(report.pass);
    }
}

TEST_CASE("drift shrinks at fourth order in the step") {
    CompiledExample ks = compile_example("schwarz3ks");
    ProductChart pc = ks.pair_chart();
    TDependentField F = prolonged_default(ks, pc);
    Expr c1 = schwarzian_invariants(pc)[0].expr;

    std::vector<double> drifts;
    for (double step : {4e-3, 2e-3, 1e-3}) {
        Trajectory traj = integrate(F, {0.0, 1.0, 0.0, 0.5, 2.0, 1.0}, 0.0, 1.0, step);
        drifts.push_back(check_constant(c1, traj, 1.0, "C_xi1").max_abs_deviation);
    }
    for (std::size_t i = 0; i + 1 < drifts.size(); ++i) {
        double ratio = drifts[i] / drifts[i + 1];
        CHECK(ratio > 8.0);
        CHECK(ratio < 32.0);
    }
}

TEST_CASE("every invariant Poisson-commutes with the algebra that drives the flow") {
    std::mt19937_64 rng(3);
    CompiledExample ks = compile_example("schwarz3ks");
    ProductChart pc = ks.pair_chart();
    // the invariants are annihilated by every prolonged basis field, so they
    // commute with h_t under every contraction, whatever the coefficients
    for (const NamedInvariant& inv : schwarzian_invariants(pc)) {
        CAPTURE(inv.label);
        for (const VectorField& X : ks.fields) {
            Expr derived = bracket_theta(inv.expr, Expr::integer(0), prolong_field(X, pc));
            CHECK(is_zero(derived, pc.chart().box(), kOpts, rng));
        }
    }

    CompiledExample ric = compile_example("riccati4");
    Expr k = parse(ric.record.invariants[0].expr, ric.chart.symbols());
    for (const VectorField& X : ric.fields)
        CHECK(is_zero(X.apply(k), ric.chart.box(), kOpts, rng));
}

TEST_CASE("the cross ratio is conserved along the coupled quadratic flow") {
    CompiledExample ric = compile_example("riccati4");
    Trajectory traj = integrate(ric.default_field(), {-1.0, -2.0, -3.0, -4.0}, 0.0, 1.0, 1e-3);
    Expr k = parse(ric.record.invariants[0].expr, ric.chart.symbols());
    DriftReport report = check_constant(k, traj, 1e-6, "cross_ratio");
    CHECK(report.pass);
}

TEST_CASE("superposition pairings hold the invariants constant") {
    CompiledExample ks = compile_example("schwarz3ks");
    ProductChart pc = ks.pair_chart();
    TDependentField pair_field = prolonged_default(ks, pc);
    TDependentField base_field = ks.default_field();

    Trajectory pair_traj = integrate(pair_field, {0.5, 2.0, 1.0, -0.3, 1.5, 0.8}, 0.0, 1.0, 1e-3);
    Trajectory probe = integrate(base_field, {0.0, 1.0, 0.0}, 0.0, 1.0, 1e-3);

    std::vector<Expr> indicators{parse("a_1*v_2 - v_1*a_2", pc.chart().symbols())};
    SuperpositionReport report =
        superposition_check(pair_traj, probe, schwarzian_invariants(pc), indicators, 1e-6);
    REQUIRE(report.results.size() == 12);
    CHECK(report.all_pass());
    std::size_t passes = 0;
    for (const auto& r : report.results)
        if (r.status == PairingStatus::Pass) ++passes;
    CHECK(passes == 12);
}

TEST_CASE("coincident probe and particular solutions are flagged degenerate") {
    CompiledExample ks = compile_example("schwarz3ks");
    ProductChart pc = ks.pair_chart();
    Trajectory pair_traj =
        integrate(prolonged_default(ks, pc), {0.0, 1.0, 0.0, 0.5, 2.0, 1.0}, 0.0, 1.0, 1e-3);
    Trajectory probe = integrate(ks.default_field(), {0.0, 1.0, 0.0}, 0.0, 1.0, 1e-3);

    std::vector<Expr> indicators{parse("a_1*v_2 - v_1*a_2", pc.chart().symbols())};
    SuperpositionReport report =
        superposition_check(pair_traj, probe, schwarzian_invariants(pc), indicators, 1e-6);
    bool saw_degenerate = false;
    for (const auto& r : report.results)
        if (r.particular == 1 && r.status == PairingStatus::Degenerate) saw_degenerate = true;
    CHECK(saw_degenerate);
    CHECK(report.all_pass());  // degenerate pairings do not count as failures
}

TEST_CASE("mismatched grids are rejected") {
    CompiledExample ks = compile_example("schwarz3ks");
    ProductChart pc = ks.pair_chart();
    Trajectory pair_traj =
        integrate(prolonged_default(ks, pc), {0.5, 2.0, 1.0, -0.3, 1.5, 0.8}, 0.0, 1.0, 1e-3);
    Trajectory probe = integrate(ks.default_field(), {0.0, 1.0, 0.0}, 0.0, 1.0, 2e-3);
    CHECK_THROWS_AS(
        superposition_check(pair_traj, probe, schwarzian_invariants(pc), {}, 1e-6),
        GridMismatchError);
}
