#ifndef KSLIE_REGISTRY_HPP
#define KSLIE_REGISTRY_HPP

#include "kslie/ksymp.hpp"
#include "kslie/liealg.hpp"
#include "kslie/motion.hpp"

namespace kslie {

/// Built-in system description; every expression is stored as text in the
/// expression grammar and compiled on demand.
struct ExampleRecord {
    std::string id;
    std::string title;

    std::vector<std::string> chart_symbols;
    struct IntervalSpec {
        std::string symbol;
        double lo, hi;
    };
    std::vector<IntervalSpec> intervals;
    std::vector<std::string> exclusions;  // expressions that must stay nonzero

    std::vector<std::string> basis_labels;
    std::vector<std::vector<std::string>> basis;   // field components
    std::vector<std::size_t> generator_indices;    // fields spanned by the time slices

    struct FormSpec {
        std::string label;
        // strictly-upper entries (l, m, coefficient)
        std::vector<std::tuple<std::size_t, std::size_t, std::string>> entries;
    };
    std::vector<FormSpec> forms;

    // spanning fields of each form's kernel (may be empty for symplectic forms)
    std::vector<std::vector<std::vector<std::string>>> kernels;

    // Hamiltonian function of basis field alpha for form i; "0" where the
    // contraction vanishes
    std::vector<std::vector<std::string>> hamiltonians;  // [field][form]

    // expected structure constants [X_a, X_b] = sum_g c^g_ab X_g, sparse over a < b
    struct CTableEntry {
        std::size_t alpha, beta, gamma;
        std::string value;  // rational text
    };
    std::vector<CTableEntry> expected_constants;

    // componentwise function bracket table {h^a, h^b} = sum_g coeff_g h^g
    struct FunctionBracket {
        std::size_t a, b;
        std::vector<std::string> coefficients;  // rational text per basis function
    };
    std::vector<FunctionBracket> bracket_table;

    std::vector<std::string> coefficient_names;     // CLI names, one per basis field
    std::vector<std::string> default_coefficients;  // b_alpha(t) per basis field

    struct InvariantSpec {
        std::string label;
        std::string expr;
    };
    std::vector<InvariantSpec> invariants;  // conserved along the default flow

    // extra exclusions on the two-fold product chart (denominators of the
    // prolonged invariants)
    std::vector<std::string> pair_exclusions;
    bool has_schwarzian_invariants = false;
};

const std::vector<ExampleRecord>& examples();
const ExampleRecord& example(const std::string& id);  // throws UnknownExampleError

/// Record compiled into live geometric objects.
struct CompiledExample {
    ExampleRecord record;
    Chart chart;
    std::vector<VectorField> fields;
    std::vector<TwoForm> forms;
    std::vector<std::vector<VectorField>> kernels;
    std::vector<std::vector<Expr>> ham;  // [field][form]

    std::size_t k() const { return forms.size(); }
    OmegaHamiltonian omega_tuple(std::size_t field_index) const;
    TDependentField default_field() const;
    std::vector<VectorField> generators() const;
    ProductChart pair_chart() const;  // two-fold product with the registered exclusions
};

CompiledExample compile_example(const std::string& id);
CompiledExample compile_example(const ExampleRecord& record);

// The counterexample data: the product of the two registered tuples on the
// diffusion system admits no single Hamiltonian field.
ProductObstruction product_not_hamiltonian_witness(const ZeroTestOptions& opts, std::mt19937_64& rng);

}  // namespace kslie

#endif
