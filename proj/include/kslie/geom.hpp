#ifndef KSLIE_GEOM_HPP
#define KSLIE_GEOM_HPP

#include <memory>
#include <string>
#include <vector>

#include "kslie/expr.hpp"

namespace kslie {

/// A single global coordinate patch: ordered coordinate symbols plus the
/// sampling box used by all probabilistic identity checks on it.
class Chart {
  public:
    Chart() = default;
    Chart(std::vector<std::string> symbols, DomainBox box);

    std::size_t dim() const { return data_->symbols.size(); }
    const std::vector<std::string>& symbols() const { return data_->symbols; }
    std::size_t index_of(const std::string& name) const;
    const DomainBox& box() const { return data_->box; }
    Chart with_box(DomainBox box) const;

    bool operator==(const Chart& other) const;
    bool operator!=(const Chart& other) const { return !(*this == other); }

    std::vector<double> to_point(const Env& env) const;
    Env to_env(const std::vector<double>& point) const;

  private:
    struct Data {
        std::vector<std::string> symbols;
        DomainBox box;
    };
    std::shared_ptr<const Data> data_;
};

void require_same_chart(const Chart& a, const Chart& b);

class VectorField {
  public:
    VectorField(Chart chart, std::vector<Expr> components);

    const Chart& chart() const { return chart_; }
    const std::vector<Expr>& components() const { return components_; }
    const Expr& component(std::size_t l) const { return components_.at(l); }

    // X acting on f as a derivation
    Expr apply(const Expr& f) const;

    std::vector<double> evaluate_at(const Env& point) const;

    static VectorField zero(const Chart& chart);
    static VectorField coordinate(const Chart& chart, std::size_t l);

  private:
    Chart chart_;
    std::vector<Expr> components_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(const Expr& f, const VectorField& X);

class OneForm {
  public:
    OneForm(Chart chart, std::vector<Expr> coefficients);

    const Chart& chart() const { return chart_; }
    const std::vector<Expr>& coefficients() const { return coefficients_; }
    const Expr& coefficient(std::size_t l) const { return coefficients_.at(l); }

    static OneForm zero(const Chart& chart);
    static OneForm coordinate(const Chart& chart, std::size_t l);  // dx^l

  private:
    Chart chart_;
    std::vector<Expr> coefficients_;
};

OneForm operator+(const OneForm& a, const OneForm& b);
OneForm operator-(const OneForm& a, const OneForm& b);
OneForm operator*(const Expr& f, const OneForm& a);

/// Antisymmetric coefficient table storing only the strictly upper triangle
/// of sum_{l<m} c_lm dx^l ^ dx^m.
class TwoForm {
  public:
    explicit TwoForm(Chart chart);
    TwoForm(Chart chart, std::vector<Expr> upper);

    const Chart& chart() const { return chart_; }
    std::size_t dim() const { return chart_.dim(); }

    const Expr& upper(std::size_t l, std::size_t m) const;  // requires l < m
    TwoForm& set(std::size_t l, std::size_t m, Expr coeff);  // antisymmetric write
    Expr entry(std::size_t l, std::size_t m) const;          // signed full-matrix entry

    const std::vector<Expr>& storage() const { return upper_; }

  private:
    std::size_t offset(std::size_t l, std::size_t m) const;
    Chart chart_;
    std::vector<Expr> upper_;
};

TwoForm operator+(const TwoForm& a, const TwoForm& b);
TwoForm operator-(const TwoForm& a, const TwoForm& b);
TwoForm operator*(const Expr& f, const TwoForm& w);

// ---- exterior calculus ----

VectorField lie_bracket(const VectorField& X, const VectorField& Y);

OneForm exterior_derivative(const Expr& f, const Chart& chart);
TwoForm exterior_derivative(const OneForm& theta);

bool is_closed(const TwoForm& w, const ZeroTestOptions& opts, std::mt19937_64& rng);

OneForm interior_product(const VectorField& X, const TwoForm& w);

// Cartan formula i_X dw + d(i_X w); degree-3 coefficients handled internally.
TwoForm lie_derivative(const VectorField& X, const TwoForm& w);

TwoForm wedge(const OneForm& a, const OneForm& b);

// ---- componentwise zero tests over the chart box ----

bool all_zero(const VectorField& X, const ZeroTestOptions& opts, std::mt19937_64& rng);
bool all_zero(const OneForm& a, const ZeroTestOptions& opts, std::mt19937_64& rng);
bool all_zero(const TwoForm& w, const ZeroTestOptions& opts, std::mt19937_64& rng);

}  // namespace kslie

#endif
