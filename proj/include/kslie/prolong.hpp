#ifndef KSLIE_PROLONG_HPP
#define KSLIE_PROLONG_HPP

#include <map>

#include "kslie/geom.hpp"

namespace kslie {

/// m-fold product of a base chart. Copy a of coordinate q is named q_a; the
/// product box repeats the base intervals and exclusions per copy, plus any
/// cross-copy exclusions supplied by the caller.
class ProductChart {
  public:
    ProductChart(Chart base, std::size_t copies, std::vector<Expr> cross_exclusions = {});

    const Chart& base() const { return base_; }
    const Chart& chart() const { return chart_; }
    std::size_t copies() const { return copies_; }

    std::string copy_symbol(const std::string& base_symbol, std::size_t copy) const;  // copy is 1-based
    std::map<std::string, Expr> renaming(std::size_t copy) const;
    Expr rename_to_copy(const Expr& f, std::size_t copy) const;

  private:
    Chart base_;
    std::size_t copies_;
    Chart chart_;
};

// f^(x_1,...,x_m) = f(x_1) + ... + f(x_m)
Expr prolong_function(const Expr& f, const ProductChart& pc);

// per-copy renamed components on the matching copy block
VectorField prolong_field(const VectorField& X, const ProductChart& pc);

// block-diagonal sum of per-copy renamed coefficient tables
TwoForm prolong_two_form(const TwoForm& w, const ProductChart& pc);

}  // namespace kslie

#endif
