#include "kslie/prolong.hpp"

#include <set>

namespace kslie {

ProductChart::ProductChart(Chart base, std::size_t copies, std::vector<Expr> cross_exclusions)
    : base_(std::move(base)), copies_(copies) {
    if (copies_ < 1) throw Error("a product chart needs at least one copy");

    std::vector<std::string> symbols;
    symbols.reserve(base_.dim() * copies_);
    std::set<std::string> seen;
    for (std::size_t a = 1; a <= copies_; ++a)
        for (const std::string& s : base_.symbols()) {
            std::string name = s + "_" + std::to_string(a);
            if (!seen.insert(name).second)
                throw Error("copy naming collides on generated symbol '" + name + "'");
            symbols.push_back(std::move(name));
        }

    DomainBox box;
    for (std::size_t a = 1; a <= copies_; ++a) {
        for (const auto& [sym, iv] : base_.box().intervals())
            box.bind(sym + "_" + std::to_string(a), iv.lo, iv.hi);
    }
    for (std::size_t a = 1; a <= copies_; ++a) {
        std::map<std::string, Expr> rename;
        for (const std::string& s : base_.symbols())
            rename.emplace(s, Expr::symbol(s + "_" + std::to_string(a)));
        for (const Expr& ex : base_.box().exclusions()) box.exclude_zero_of(substitute(ex, rename));
    }
    for (Expr& ex : cross_exclusions) box.exclude_zero_of(std::move(ex));

    chart_ = Chart(std::move(symbols), std::move(box));
}

std::string ProductChart::copy_symbol(const std::string& base_symbol, std::size_t copy) const {
    if (copy < 1 || copy > copies_) throw Error("copy index out of range");
    base_.index_of(base_symbol);  // validates the name
    return base_symbol + "_" + std::to_string(copy);
}

std::map<std::string, Expr> ProductChart::renaming(std::size_t copy) const {
    if (copy < 1 || copy > copies_) throw Error("copy index out of range");
    std::map<std::string, Expr> out;
    for (const std::string& s : base_.symbols())
        out.emplace(s, Expr::symbol(s + "_" + std::to_string(copy)));
    return out;
}

Expr ProductChart::rename_to_copy(const Expr& f, std::size_t copy) const {
    return substitute(f, renaming(copy));
}

Expr prolong_function(const Expr& f, const ProductChart& pc) {
    std::vector<Expr> terms;
    terms.reserve(pc.copies());
    for (std::size_t a = 1; a <= pc.copies(); ++a) terms.push_back(pc.rename_to_copy(f, a));
    return simplify(Expr::sum(std::move(terms)));
}

VectorField prolong_field(const VectorField& X, const ProductChart& pc) {
    require_same_chart(X.chart(), pc.base());
    std::size_t n = pc.base().dim();
    std::vector<Expr> comps;
    comps.reserve(n * pc.copies());
    for (std::size_t a = 1; a <= pc.copies(); ++a)
        for (std::size_t l = 0; l < n; ++l) comps.push_back(pc.rename_to_copy(X.component(l), a));
    return VectorField(pc.chart(), std::move(comps));
}

TwoForm prolong_two_form(const TwoForm& w, const ProductChart& pc) {
    require_same_chart(w.chart(), pc.base());
    std::size_t n = pc.base().dim();
    TwoForm out(pc.chart());
    for (std::size_t a = 0; a < pc.copies(); ++a)
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t m = l + 1; m < n; ++m)
                out.set(a * n + l, a * n + m, pc.rename_to_copy(w.upper(l, m), a + 1));
    return out;
}

}  // namespace kslie
