#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kslie/registry.hpp"

using namespace kslie;

namespace {

const ZeroTestOptions kOpts{};

StructureOptions structure_opts() {
    StructureOptions o;
    o.samples = 100;
    return o;
}

}  // namespace

TEST_CASE("validate_structure accepts the registered structures") {
    std::mt19937_64 rng(1);

    CompiledExample ks = compile_example("schwarz3ks");
    KSymplecticStructure s2 = validate_structure(ks.forms, structure_opts(), rng);
    CHECK(s2.k() == 2);
    CHECK(s2.validation().dimension_fits);  // dim 3 = 1 * (2+1)

    CompiledExample c1 = compile_example("control1");
    KSymplecticStructure s4 = validate_structure(c1.forms, structure_opts(), rng);
    CHECK(s4.k() == 4);
    CHECK(s4.validation().dimension_fits);  // dim 5 = 1 * (4+1)

    // a single symplectic form is the k = 1 case
    DomainBox box;
    box.bind("x", -2, 2).bind("y", -2, 2);
    Chart cxy({"x", "y"}, box);
    TwoForm dxdy(cxy);
    dxdy.set(0, 1, Expr::integer(1));
    KSymplecticStructure s1 = validate_structure({dxdy}, structure_opts(), rng);
    CHECK(s1.k() == 1);
}

TEST_CASE("validate_structure flags the dimension count without failing") {
    std::mt19937_64 rng(2);
    CompiledExample ric = compile_example("riccati4");
    KSymplecticStructure s = validate_structure(ric.forms, structure_opts(), rng);
    CHECK_FALSE(s.validation().dimension_fits);  // dim 4, k = 2: 4 is not n*3
    CHECK(!s.validation().dimension_note.empty());
}

TEST_CASE("validate_structure rejects jointly degenerate families") {
    std::mt19937_64 rng(3);
    DomainBox box;
    box.bind("x", -2, 2).bind("y", -2, 2).bind("z", -2, 2);
    Chart c({"x", "y", "z"}, box);
    TwoForm w(c);
    w.set(0, 1, Expr::integer(1));  // dz direction is in every kernel
    CHECK_THROWS_AS(validate_structure({w, w}, structure_opts(), rng), DegenerateAtError);
}

TEST_CASE("validate_structure rejects non-closed forms") {
    std::mt19937_64 rng(4);
    DomainBox box;
    box.bind("x", -2, 2).bind("y", -2, 2).bind("z", -2, 2);
    Chart c({"x", "y", "z"}, box);
    TwoForm w(c);
    w.set(1, 2, Expr::symbol("x"));
    w.set(2, 0, Expr::symbol("y"));
    w.set(0, 1, Expr::symbol("z"));
    CHECK_THROWS_AS(validate_structure({w}, structure_opts(), rng), NotClosedError);
}

TEST_CASE("kernel dimensions at points") {
    CompiledExample ks = compile_example("schwarz3ks");
    CHECK(kernel_dimension_at(ks.forms[0], {1.0, 2.0, 3.0}) == 1);

    CompiledExample rs = compile_example("diffusion-rs");
    CHECK(kernel_dimension_at(rs.forms[1], {1.0, 1.0, 1.0}) == 1);

    DomainBox box;
    box.bind("x", -2, 2).bind("y", -2, 2);
    Chart cxy({"x", "y"}, box);
    TwoForm dxdy(cxy);
    dxdy.set(0, 1, Expr::integer(1));
    CHECK(kernel_dimension_at(dxdy, {0.3, -0.7}) == 0);
}

TEST_CASE("check_hamiltonian on the documented identities") {
    std::mt19937_64 rng(5);
    CompiledExample ks = compile_example("schwarz3ks");
    CHECK(check_hamiltonian(ks.fields[2], ks.forms[0], ks.ham[2][0], kOpts, rng));

    CompiledExample c1 = compile_example("control1");
    CHECK(check_hamiltonian(c1.fields[0], c1.forms[3], parse("x2^3/3", c1.chart.symbols()), kOpts, rng));

    // gauge fields are Hamiltonian for the zero function
    CHECK(check_hamiltonian(ks.kernels[0][0], ks.forms[0], Expr::integer(0), kOpts, rng));

    // and a wrong candidate fails
    CHECK_FALSE(check_hamiltonian(ks.fields[0], ks.forms[0], parse("x", ks.chart.symbols()), kOpts, rng));
}

TEST_CASE("check_omega_hamiltonian bundles the component identities") {
    std::mt19937_64 rng(6);
    CompiledExample rs = compile_example("diffusion-rs");
    KSymplecticStructure s = validate_structure(rs.forms, structure_opts(), rng);
    CHECK(check_omega_hamiltonian(rs.fields[1], s, rs.omega_tuple(1), kOpts, rng));

    OmegaHamiltonian zero_tuple(rs.chart, {Expr::integer(0), Expr::integer(0)});
    CHECK(check_omega_hamiltonian(VectorField::zero(rs.chart), s, zero_tuple, kOpts, rng));

    CompiledExample ks = compile_example("schwarz3ks");
    KSymplecticStructure sks = validate_structure(ks.forms, structure_opts(), rng);
    CHECK(check_omega_hamiltonian(ks.fields[0], sks, ks.omega_tuple(0), kOpts, rng));
}

TEST_CASE("the tuple determines its field uniquely") {
    std::mt19937_64 rng(7);
    CompiledExample ks = compile_example("schwarz3ks");
    KSymplecticStructure s = validate_structure(ks.forms, structure_opts(), rng);

    CHECK(omega_hamiltonian_field_is_unique(s, ks.fields[0], ks.fields[0], ks.omega_tuple(0), kOpts, rng));

    // perturbing by a kernel field of the first form breaks the second
    // component identity, so the precondition fails
    VectorField perturbed = ks.fields[0] + Expr::constant(rational_of(1, 10)) * ks.kernels[0][0];
    CHECK_THROWS_AS(
        omega_hamiltonian_field_is_unique(s, ks.fields[0], perturbed, ks.omega_tuple(0), kOpts, rng),
        PreconditionFailedError);

    CompiledExample rs = compile_example("diffusion-rs");
    KSymplecticStructure srs = validate_structure(rs.forms, structure_opts(), rng);
    CHECK(omega_hamiltonian_field_is_unique(srs, rs.fields[2], rs.fields[2], rs.omega_tuple(2), kOpts, rng));
}

TEST_CASE("bracket_omega reproduces the function tables") {
    std::mt19937_64 rng(8);
    CompiledExample ks = compile_example("schwarz3ks");
    const DomainBox& box = ks.chart.box();

    OmegaHamiltonian b12 = bracket_omega(ks.omega_tuple(0), ks.omega_tuple(1), ks.fields[0], ks.fields[1]);
    for (std::size_t i = 0; i < 2; ++i) CHECK(is_zero(b12.component(i) + ks.ham[0][i], box, kOpts, rng));

    OmegaHamiltonian b13 = bracket_omega(ks.omega_tuple(0), ks.omega_tuple(2), ks.fields[0], ks.fields[2]);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(is_zero(b13.component(i) + Expr::integer(2) * ks.ham[1][i], box, kOpts, rng));

    OmegaHamiltonian self = bracket_omega(ks.omega_tuple(0), ks.omega_tuple(0), ks.fields[0], ks.fields[0]);
    for (std::size_t i = 0; i < 2; ++i) CHECK(is_zero(self.component(i), box, kOpts, rng));

    // the carried field contracts onto d of the result components
    KSymplecticStructure s = validate_structure(ks.forms, structure_opts(), rng);
    REQUIRE(b12.field().has_value());
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(check_hamiltonian(*b12.field(), s.form(i), b12.component(i), kOpts, rng));
}

TEST_CASE("contract_theta forms linear combinations") {
    std::mt19937_64 rng(9);
    CompiledExample ks = compile_example("schwarz3ks");
    KSymplecticStructure s = validate_structure(ks.forms, structure_opts(), rng);

    CHECK(all_zero(contract_theta(s, Covector({1.0, 0.0})) - ks.forms[0], kOpts, rng));
    CHECK(all_zero(contract_theta(s, Covector({0.0, 0.0})), kOpts, rng));
    CHECK(all_zero(contract_theta(s, Covector({1.0, 1.0})) - (ks.forms[0] + ks.forms[1]), kOpts, rng));
    CHECK_THROWS_AS(contract_theta(s, Covector({1.0, 0.0, 0.0})), ComponentCountMismatchError);
}

TEST_CASE("bracket_theta is the directional derivative along the second field") {
    std::mt19937_64 rng(10);
    CompiledExample ks = compile_example("schwarz3ks");
    const DomainBox& box = ks.chart.box();
    Covector theta({1.0, 0.0});

    Expr h1 = ks.omega_tuple(0).contract(theta);
    Expr h2 = ks.omega_tuple(1).contract(theta);
    CHECK(is_zero(bracket_theta(h1, h2, ks.fields[1]) + h1, box, kOpts, rng));
    CHECK(is_zero(bracket_theta(h1, h2, VectorField::zero(ks.chart)), box, kOpts, rng));
    CHECK(is_zero(bracket_theta(Expr::integer(5), h2, ks.fields[1]), box, kOpts, rng));
}

TEST_CASE("property: theta brackets are antisymmetric and satisfy Jacobi and Leibniz") {
    std::mt19937_64 rng(11);
    CompiledExample ks = compile_example("schwarz3ks");
    const DomainBox& box = ks.chart.box();

    for (const Covector& theta : {Covector({1.0, 0.0}), Covector({0.0, 1.0}), Covector({1.0, 1.0})}) {
        Expr h[3];
        for (int a = 0; a < 3; ++a) h[a] = ks.omega_tuple(a).contract(theta);
        const VectorField* X[3] = {&ks.fields[0], &ks.fields[1], &ks.fields[2]};

        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                Expr lhs = bracket_theta(h[a], h[b], *X[b]);
                Expr rhs = bracket_theta(h[b], h[a], *X[a]);
                CHECK(is_zero(lhs + rhs, box, kOpts, rng));
            }

        // Jacobi: the inner bracket is a plain function, the outer bracket
        // only needs the Hamiltonian field of its second argument
        Expr j = bracket_theta(bracket_theta(h[0], h[1], *X[1]), h[2], *X[2]) +
                 bracket_theta(bracket_theta(h[1], h[2], *X[2]), h[0], *X[0]) +
                 bracket_theta(bracket_theta(h[2], h[0], *X[0]), h[1], *X[1]);
        CHECK(is_zero(j, box, kOpts, rng));

        Expr fg = simplify(h[0] * h[1]);
        Expr lhs = bracket_theta(fg, h[2], *X[2]);
        Expr rhs = h[0] * bracket_theta(h[1], h[2], *X[2]) + h[1] * bracket_theta(h[0], h[2], *X[2]);
        CHECK(is_zero(lhs - rhs, box, kOpts, rng));
    }
}

TEST_CASE("property: contraction is a bracket morphism on the example algebra") {
    std::mt19937_64 rng(12);
    for (const char* id : {"schwarz3ks", "riccati4"}) {
        CompiledExample ex = compile_example(id);
        const DomainBox& box = ex.chart.box();
        for (const Covector& theta : {Covector({1.0, 0.0}), Covector({0.0, 1.0}), Covector({1.0, 1.0})}) {
            for (const auto& entry : ex.record.bracket_table) {
                OmegaHamiltonian h = ex.omega_tuple(entry.a);
                OmegaHamiltonian g = ex.omega_tuple(entry.b);
                Expr lhs = bracket_omega(h, g, ex.fields[entry.a], ex.fields[entry.b]).contract(theta);
                Expr rhs = bracket_theta(h.contract(theta), g.contract(theta), ex.fields[entry.b]);
                CHECK(is_zero(lhs - rhs, box, kOpts, rng));
            }
        }
    }
}

TEST_CASE("kernel fields stay in the kernel under the algebra action") {
    std::mt19937_64 rng(13);
    for (const ExampleRecord& record : examples()) {
        CompiledExample ex = compile_example(record.id);
        for (std::size_t i = 0; i < ex.forms.size(); ++i)
            for (const VectorField& Z : ex.kernels[i])
                for (const VectorField& X : ex.fields) {
                    OneForm contracted = interior_product(lie_bracket(X, Z), ex.forms[i]);
                    CHECK(all_zero(contracted, kOpts, rng));
                }
    }
}

TEST_CASE("the product of tuples admits no common Hamiltonian field") {
    std::mt19937_64 rng(14);
    ProductObstruction witness = product_not_hamiltonian_witness(kOpts, rng);
    CHECK(witness.fields_differ);
    REQUIRE(!witness.certificate_point.empty());

    // the difference of the two candidate fields at (u,v,w) = (1,1,1)
    CompiledExample rs = compile_example("diffusion-rs");
    Env p{{"u", 1.0}, {"v", 1.0}, {"w", 1.0}};
    std::vector<double> d = witness.difference.evaluate_at(p);
    CHECK(d[0] == doctest::Approx(9.0));
    CHECK(d[1] == doctest::Approx(2.0));
    CHECK(d[2] == doctest::Approx(0.0));

    // a constant tuple degenerates: both candidates collapse to the same field
    OmegaHamiltonian constant(rs.chart, {Expr::integer(3), Expr::integer(3)});
    ProductObstruction degenerate = product_hamiltonian_obstruction(
        rs.omega_tuple(2), constant, rs.fields[2], VectorField::zero(rs.chart), kOpts, rng);
    CHECK_FALSE(degenerate.fields_differ);
}
