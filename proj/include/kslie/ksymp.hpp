#ifndef KSLIE_KSYMP_HPP
#define KSLIE_KSYMP_HPP

#include <optional>

#include "kslie/geom.hpp"

namespace kslie {

/// Constant element of (R^k)^*, stored by its values on the basis vectors.
class Covector {
  public:
    explicit Covector(std::vector<double> entries);
    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_.at(i); }
    const std::vector<double>& entries() const { return entries_; }

  private:
    std::vector<double> entries_;
};

struct StructureValidation {
    int samples = 0;
    bool dimension_fits = true;  // dim N = n(k+1) for an integer n
    std::string dimension_note;  // set when the count does not fit
};

/// Ordered list of k closed two-forms whose kernels were checked to meet
/// only in zero at every sampled point.
class KSymplecticStructure {
  public:
    KSymplecticStructure(std::vector<TwoForm> forms, StructureValidation validation);

    std::size_t k() const { return forms_.size(); }
    const Chart& chart() const { return forms_.front().chart(); }
    const std::vector<TwoForm>& forms() const { return forms_; }
    const TwoForm& form(std::size_t i) const { return forms_.at(i); }
    const StructureValidation& validation() const { return validation_; }

  private:
    std::vector<TwoForm> forms_;
    StructureValidation validation_;
};

struct StructureOptions {
    int samples = 100;             // joint-kernel sampling points
    double rank_threshold = 1e-8;  // relative singular-value cutoff
    ZeroTestOptions zero;
};

// Closedness is checked symbolically, joint nondegeneracy numerically: the
// stacked coefficient matrices must have full column rank at every sample.
// The dimension count dim N = n(k+1) is recorded, not enforced.
KSymplecticStructure validate_structure(std::vector<TwoForm> forms, const StructureOptions& opts,
                                        std::mt19937_64& rng);

// Pointwise kernel dimension of a single two-form.
std::size_t kernel_dimension_at(const TwoForm& w, const std::vector<double>& point,
                                double rank_threshold = 1e-8);

/// R^k-valued function h = sum h_i (x) e^i together with, when known, the
/// vector field contracting every structure form onto dh_i.
class OmegaHamiltonian {
  public:
    OmegaHamiltonian(Chart chart, std::vector<Expr> components);
    OmegaHamiltonian(Chart chart, std::vector<Expr> components, VectorField field);

    const Chart& chart() const { return chart_; }
    std::size_t k() const { return components_.size(); }
    const std::vector<Expr>& components() const { return components_; }
    const Expr& component(std::size_t i) const { return components_.at(i); }
    const std::optional<VectorField>& field() const { return field_; }

    // <h, theta> = sum theta_i h_i
    Expr contract(const Covector& theta) const;

  private:
    Chart chart_;
    std::vector<Expr> components_;
    std::optional<VectorField> field_;
};

// i_X w = dh up to the probabilistic zero test.
bool check_hamiltonian(const VectorField& X, const TwoForm& w, const Expr& h,
                       const ZeroTestOptions& opts, std::mt19937_64& rng);

// All k component identities i_X w_i = dh_i hold at once.
bool check_omega_hamiltonian(const VectorField& X, const KSymplecticStructure& S,
                             const OmegaHamiltonian& h, const ZeroTestOptions& opts,
                             std::mt19937_64& rng);

// Two fields passing check_omega_hamiltonian for the same h must coincide;
// exposed as a property check, with the Hamiltonian conditions as
// preconditions.
bool omega_hamiltonian_field_is_unique(const KSymplecticStructure& S, const VectorField& X,
                                       const VectorField& Y, const OmegaHamiltonian& h,
                                       const ZeroTestOptions& opts, std::mt19937_64& rng);

// Componentwise bracket {h,g}_i = X_g(h_i); the returned tuple carries
// [X_g, X_h] as its Hamiltonian field (the field whose contractions give
// d of the result components under the {f,g} = X_g f convention).
OmegaHamiltonian bracket_omega(const OmegaHamiltonian& h, const OmegaHamiltonian& g,
                               const VectorField& X_h, const VectorField& X_g);

// sum theta_i w_i, a presymplectic form by linearity.
TwoForm contract_theta(const KSymplecticStructure& S, const Covector& theta);

// {f,g}_theta = X_g f, where X_g is a Hamiltonian field of g for the
// contracted form; the caller is responsible for that precondition.
Expr bracket_theta(const Expr& f, const Expr& g, const VectorField& X_g);

/// Outcome of testing whether the componentwise product h*g admits a single
/// Hamiltonian vector field: the two per-component candidates and a point
/// where they differ.
struct ProductObstruction {
    std::vector<Expr> product_components;
    VectorField candidate_first;
    VectorField candidate_second;
    VectorField difference;
    bool fields_differ = false;
    std::vector<double> certificate_point;
    std::vector<double> difference_at_certificate;
};

// Builds g_i X_h + h_i X_g for i = 1,2 (k must be 2) and certifies whether
// they differ; when they do, samples a point witnessing a nonzero gap.
ProductObstruction product_hamiltonian_obstruction(const OmegaHamiltonian& h,
                                                   const OmegaHamiltonian& g,
                                                   const VectorField& X_h, const VectorField& X_g,
                                                   const ZeroTestOptions& opts,
                                                   std::mt19937_64& rng);

}  // namespace kslie

#endif
