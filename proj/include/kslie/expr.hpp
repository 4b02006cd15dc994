#ifndef KSLIE_EXPR_HPP
#define KSLIE_EXPR_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "kslie/error.hpp"

namespace kslie {

using Rational = mpq_class;

Rational rational_of(long num, long den = 1);
Rational rational_from_string(const std::string& text);
std::string rational_to_string(const Rational& q);

// Best rational p/q with q <= max_den approximating x; empty when the
// closest candidate misses x by more than tol.
std::optional<Rational> nearest_rational(double x, long max_den, double tol);

enum class NodeKind : std::uint8_t {
    Constant,
    Symbol,
    Sum,       // n-ary
    Product,   // n-ary
    Quotient,  // binary
    Power,     // integer exponent
    Negate,
    Call,
};

enum class Builtin : std::uint8_t { Sin, Cos, Exp, Sqrt };

const char* builtin_name(Builtin fn);

class Expr;
struct ExprNode;

/// Immutable scalar symbolic expression over named symbols with exact
/// rational constants. Copies share structure and are cheap.
class Expr {
  public:
    Expr();  // zero

    static Expr constant(Rational value);
    static Expr integer(long value);
    static Expr symbol(std::string name);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr quotient(Expr num, Expr den);
    static Expr power(Expr base, long exponent);
    static Expr negate(Expr operand);
    static Expr call(Builtin fn, Expr argument);

    NodeKind kind() const;
    const Rational& value() const;            // Constant
    const std::string& symbol_name() const;   // Symbol
    const std::vector<Expr>& operands() const;
    long exponent() const;                    // Power
    Builtin builtin() const;                  // Call

    bool is_constant() const { return kind() == NodeKind::Constant; }
    bool is_zero_constant() const;
    bool is_one_constant() const;

    bool same(const Expr& other) const;  // structural equality
    std::size_t hash() const;

    const ExprNode* node() const { return node_.get(); }

  private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ExprNode> node_;
    friend struct ExprBuilder;
};

// Convenience arithmetic; builds raw nodes without simplification.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// Total order for deterministic operand arrangement; 0 iff structurally equal.
int compare(const Expr& a, const Expr& b);

std::string to_string(const Expr& e);
std::set<std::string> free_symbols(const Expr& e);

// ---- parsing ----

// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := base ('^' integer)?
// base   := number | ident | '(' expr ')' | '-' base | func '(' expr ')'
// func   := 'sin' | 'cos' | 'exp' | 'sqrt'
// number := integer ('/' integer)?
// Identifiers must appear in `allowed`; 't' is always allowed.
Expr parse(std::string_view src, const std::vector<std::string>& allowed);

// ---- calculus / rewriting ----

Expr simplify(const Expr& e);
Expr differentiate(const Expr& e, const std::string& var);
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

// ---- evaluation ----

using Env = std::unordered_map<std::string, double>;

double evaluate(const Expr& e, const Env& point);

// Value plus the largest absolute value attained by any subexpression;
// the latter scales the zero-test tolerance.
struct ScaledValue {
    double value;
    double scale;
};
ScaledValue evaluate_scaled(const Expr& e, const Env& point);

// ---- domain boxes ----

struct Interval {
    double lo;
    double hi;
};

/// Per-symbol sampling intervals plus expressions that must stay nonzero.
class DomainBox {
  public:
    DomainBox() = default;

    DomainBox& bind(std::string symbol, double lo, double hi);
    DomainBox& exclude_zero_of(Expr e);

    const std::vector<std::pair<std::string, Interval>>& intervals() const { return intervals_; }
    const std::vector<Expr>& exclusions() const { return exclusions_; }
    bool has_symbol(const std::string& name) const;
    const Interval& interval(const std::string& name) const;

    // Uniform sample satisfying every exclusion; counts failed attempts
    // against `budget` and throws DomainExhaustedError when it runs out.
    Env sample(std::mt19937_64& rng, long& budget) const;

    bool contains(const Env& point) const;
    bool excluded(const Env& point) const;

  private:
    std::vector<std::pair<std::string, Interval>> intervals_;
    std::vector<Expr> exclusions_;
};

// ---- probabilistic zero test ----

struct ZeroTestOptions {
    int trials = 25;
    double tol = 1e-9;
};

// True when e simplifies to the literal zero constant, or when |e| stays
// below tol*(1+scale) at every sampled point of the box.
bool is_zero(const Expr& e, const DomainBox& dom, const ZeroTestOptions& opts, std::mt19937_64& rng);
bool is_zero(const Expr& e, const DomainBox& dom, std::mt19937_64& rng);

}  // namespace kslie

#endif
