#ifndef KSLIE_LIEALG_HPP
#define KSLIE_LIEALG_HPP

#include "kslie/geom.hpp"

namespace kslie {

/// Basis of vector fields together with exact rational structure constants
/// c^gamma_{alpha beta}, certified so that [X_a,X_b] - sum_g c^g_{ab} X_g
/// passes the zero test componentwise.
class LieAlgebraModel {
  public:
    LieAlgebraModel(std::vector<VectorField> basis, std::vector<Rational> constants);

    std::size_t dim() const { return basis_.size(); }
    const std::vector<VectorField>& basis() const { return basis_; }
    const Rational& c(std::size_t alpha, std::size_t beta, std::size_t gamma) const;

    // exact check of the quadratic Jacobi relations on the constants
    bool jacobi_holds() const;

  private:
    std::vector<VectorField> basis_;
    std::vector<Rational> constants_;  // dense r*r*r, antisymmetric in (alpha, beta)
};

struct StructureConstantOptions {
    int extra_sample_points = 3;   // M = r + extra
    long max_denominator = 12;     // first rounding pass
    long retry_denominator = 48;   // second pass when certification fails
    double round_tolerance = 1e-6;
    ZeroTestOptions zero;
};

// Least-squares recovery of the constants at sampled points, rational
// rounding, then symbolic certification of every pair.
LieAlgebraModel structure_constants(const std::vector<VectorField>& basis,
                                    const StructureConstantOptions& opts, std::mt19937_64& rng);

// Iterated bracketing of the generators until no numerically independent
// direction appears; claimed dependencies are confirmed symbolically.
LieAlgebraModel lie_closure(const std::vector<VectorField>& generators, std::size_t max_dim,
                            const StructureConstantOptions& opts, std::mt19937_64& rng);

struct StabilityOptions {
    int sample_points = 50;
    double residual_tolerance = 1e-8;
    long max_polynomial_degree = 2;  // coefficient reconstruction degree
    ZeroTestOptions zero;
};

// Does [X, Y] stay in the span of D for every X in V, Y in D? Membership is
// solved pointwise; coefficient functions are then reconstructed as
// polynomials and certified symbolically, with a constant-coefficient
// least-squares decision as the numeric fallback.
bool is_stable_distribution(const std::vector<VectorField>& V, const std::vector<VectorField>& D,
                            const StabilityOptions& opts, std::mt19937_64& rng);

}  // namespace kslie

#endif
