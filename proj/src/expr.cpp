#include "kslie/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kslie {

struct ExprNode {
    NodeKind kind;
    Rational value;
    std::string symbol;
    std::vector<Expr> operands;
    long exponent = 0;
    Builtin fn = Builtin::Sin;
    std::size_t hash = 0;
};

namespace {

std::size_t hash_mix(std::size_t h, std::size_t v) {
    // 64-bit splitmix-style combine
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::size_t hash_node(const ExprNode& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL;
    switch (n.kind) {
        case NodeKind::Constant: {
            h = hash_mix(h, std::hash<std::string>{}(rational_to_string(n.value)));
            break;
        }
        case NodeKind::Symbol:
            h = hash_mix(h, std::hash<std::string>{}(n.symbol));
            break;
        case NodeKind::Power:
            h = hash_mix(h, static_cast<std::size_t>(n.exponent));
            h = hash_mix(h, n.operands[0].hash());
            break;
        case NodeKind::Call:
            h = hash_mix(h, static_cast<std::size_t>(n.fn));
            h = hash_mix(h, n.operands[0].hash());
            break;
        default:
            for (const Expr& op : n.operands) h = hash_mix(h, op.hash());
            break;
    }
    return h;
}

std::shared_ptr<const ExprNode> make_node(ExprNode n) {
    n.hash = hash_node(n);
    return std::make_shared<const ExprNode>(std::move(n));
}

const Expr& zero_expr() {
    static const Expr e = Expr::integer(0);
    return e;
}

}  // namespace

Rational rational_of(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational rational_from_string(const std::string& text) {
    Rational q(text);
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) {
    return q.get_str();
}

std::optional<Rational> nearest_rational(double x, long max_den, double tol) {
    if (!std::isfinite(x)) return std::nullopt;
    // Stern-Brocot walk toward x, keeping the best bounded-denominator convergent.
    long best_num = std::lround(x);
    long best_den = 1;
    double best_err = std::abs(x - static_cast<double>(best_num));
    long lo_n = static_cast<long>(std::floor(x)), lo_d = 1;
    long hi_n = lo_n + 1, hi_d = 1;
    while (true) {
        long med_n = lo_n + hi_n;
        long med_d = lo_d + hi_d;
        if (med_d > max_den) break;
        double med = static_cast<double>(med_n) / static_cast<double>(med_d);
        double err = std::abs(x - med);
        if (err < best_err) {
            best_err = err;
            best_num = med_n;
            best_den = med_d;
        }
        if (med == x) break;
        if (med < x)
            lo_n = med_n, lo_d = med_d;
        else
            hi_n = med_n, hi_d = med_d;
    }
    if (best_err > tol) return std::nullopt;
    return rational_of(best_num, best_den);
}

const char* builtin_name(Builtin fn) {
    switch (fn) {
        case Builtin::Sin: return "sin";
        case Builtin::Cos: return "cos";
        case Builtin::Exp: return "exp";
        case Builtin::Sqrt: return "sqrt";
    }
    return "?";
}

Expr::Expr() : node_(zero_expr().node_) {}

Expr Expr::constant(Rational value) {
    ExprNode n;
    n.kind = NodeKind::Constant;
    n.value = std::move(value);
    n.value.canonicalize();
    return Expr(make_node(std::move(n)));
}

Expr Expr::integer(long value) {
    return constant(rational_of(value));
}

Expr Expr::symbol(std::string name) {
    ExprNode n;
    n.kind = NodeKind::Symbol;
    n.symbol = std::move(name);
    return Expr(make_node(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
    if (terms.empty()) return integer(0);
    if (terms.size() == 1) return terms.front();
    ExprNode n;
    n.kind = NodeKind::Sum;
    n.operands = std::move(terms);
    return Expr(make_node(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
    if (factors.empty()) return integer(1);
    if (factors.size() == 1) return factors.front();
    ExprNode n;
    n.kind = NodeKind::Product;
    n.operands = std::move(factors);
    return Expr(make_node(std::move(n)));
}

Expr Expr::quotient(Expr num, Expr den) {
    ExprNode n;
    n.kind = NodeKind::Quotient;
    n.operands = {std::move(num), std::move(den)};
    return Expr(make_node(std::move(n)));
}

Expr Expr::power(Expr base, long exponent) {
    ExprNode n;
    n.kind = NodeKind::Power;
    n.operands = {std::move(base)};
    n.exponent = exponent;
    return Expr(make_node(std::move(n)));
}

Expr Expr::negate(Expr operand) {
    ExprNode n;
    n.kind = NodeKind::Negate;
    n.operands = {std::move(operand)};
    return Expr(make_node(std::move(n)));
}

Expr Expr::call(Builtin fn, Expr argument) {
    ExprNode n;
    n.kind = NodeKind::Call;
    n.fn = fn;
    n.operands = {std::move(argument)};
    return Expr(make_node(std::move(n)));
}

NodeKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::symbol_name() const { return node_->symbol; }
const std::vector<Expr>& Expr::operands() const { return node_->operands; }
long Expr::exponent() const { return node_->exponent; }
Builtin Expr::builtin() const { return node_->fn; }
std::size_t Expr::hash() const { return node_->hash; }

bool Expr::is_zero_constant() const {
    return kind() == NodeKind::Constant && sgn(node_->value) == 0;
}

bool Expr::is_one_constant() const {
    return kind() == NodeKind::Constant && node_->value == 1;
}

bool Expr::same(const Expr& other) const {
    return compare(*this, other) == 0;
}

int compare(const Expr& a, const Expr& b) {
    if (a.node() == b.node()) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case NodeKind::Constant:
            return cmp(a.value(), b.value());
        case NodeKind::Symbol:
            return a.symbol_name().compare(b.symbol_name());
        case NodeKind::Power:
            if (int c = compare(a.operands()[0], b.operands()[0]); c != 0) return c;
            return a.exponent() < b.exponent() ? -1 : (a.exponent() > b.exponent() ? 1 : 0);
        case NodeKind::Call:
            if (a.builtin() != b.builtin()) return a.builtin() < b.builtin() ? -1 : 1;
            return compare(a.operands()[0], b.operands()[0]);
        default: {
            const auto& oa = a.operands();
            const auto& ob = b.operands();
            if (oa.size() != ob.size()) return oa.size() < ob.size() ? -1 : 1;
            for (std::size_t i = 0; i < oa.size(); ++i)
                if (int c = compare(oa[i], ob[i]); c != 0) return c;
            return 0;
        }
    }
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::negate(b)}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::quotient(a, b); }
Expr operator-(const Expr& a) { return Expr::negate(a); }

// ---- printing ----

namespace {

enum Prec { PrecSum = 0, PrecProduct = 1, PrecUnary = 2, PrecPower = 3, PrecAtom = 4 };

void print(std::ostream& os, const Expr& e, int parent_prec);

// Positive counterpart of a term whose sign can be stripped syntactically.
std::optional<Expr> strip_minus(const Expr& e) {
    switch (e.kind()) {
        case NodeKind::Constant:
            if (sgn(e.value()) < 0) return Expr::constant(-e.value());
            return std::nullopt;
        case NodeKind::Negate:
            return e.operands()[0];
        case NodeKind::Product: {
            const auto& fs = e.operands();
            if (fs.front().kind() == NodeKind::Constant && sgn(fs.front().value()) < 0) {
                std::vector<Expr> out = fs;
                Rational c = -fs.front().value();
                if (c == 1 && fs.size() > 1)
                    out.erase(out.begin());
                else
                    out.front() = Expr::constant(std::move(c));
                return Expr::product(std::move(out));
            }
            return std::nullopt;
        }
        case NodeKind::Quotient:
            if (auto num = strip_minus(e.operands()[0]))
                return Expr::quotient(*num, e.operands()[1]);
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

void print(std::ostream& os, const Expr& e, int parent_prec) {
    switch (e.kind()) {
        case NodeKind::Constant: {
            const Rational& q = e.value();
            bool frac = q.get_den() != 1;
            bool neg = sgn(q) < 0;
            if ((frac && parent_prec > PrecProduct) || (neg && parent_prec > PrecSum)) {
                os << '(' << rational_to_string(q) << ')';
            } else {
                os << rational_to_string(q);
            }
            break;
        }
        case NodeKind::Symbol:
            os << e.symbol_name();
            break;
        case NodeKind::Sum: {
            if (parent_prec > PrecSum) os << '(';
            bool first = true;
            for (const Expr& term : e.operands()) {
                if (!first) {
                    if (auto positive = strip_minus(term)) {
                        os << " - ";
                        print(os, *positive, PrecSum + 1);
                        first = false;
                        continue;
                    }
                    os << " + ";
                }
                print(os, term, PrecSum + 1);
                first = false;
            }
            if (parent_prec > PrecSum) os << ')';
            break;
        }
        case NodeKind::Product: {
            if (parent_prec > PrecProduct) os << '(';
            bool first = true;
            for (const Expr& f : e.operands()) {
                if (!first) os << '*';
                print(os, f, PrecProduct + 1);
                first = false;
            }
            if (parent_prec > PrecProduct) os << ')';
            break;
        }
        case NodeKind::Quotient: {
            if (parent_prec > PrecProduct) os << '(';
            print(os, e.operands()[0], PrecProduct + 1);
            os << '/';
            print(os, e.operands()[1], PrecUnary + 1);
            if (parent_prec > PrecProduct) os << ')';
            break;
        }
        case NodeKind::Power: {
            const Expr& b = e.operands()[0];
            bool plain = b.kind() == NodeKind::Symbol || b.kind() == NodeKind::Call ||
                         (b.kind() == NodeKind::Constant && sgn(b.value()) >= 0 && b.value().get_den() == 1);
            if (plain) {
                print(os, b, PrecAtom);
            } else {
                os << '(';
                print(os, b, PrecSum);
                os << ')';
            }
            // signed exponents parse bare: '^' consumes an optionally signed integer
            os << '^' << e.exponent();
            break;
        }
        case NodeKind::Negate: {
            // '-' binds tighter than '^' in the grammar, so any operand that
            // could absorb a following exponent gets explicit parentheses.
            if (parent_prec > PrecUnary) os << '(';
            os << '-';
            const Expr& u = e.operands()[0];
            if (u.kind() == NodeKind::Power) {
                os << '(';
                print(os, u, PrecSum);
                os << ')';
            } else {
                print(os, u, PrecUnary + 1);
            }
            if (parent_prec > PrecUnary) os << ')';
            break;
        }
        case NodeKind::Call:
            os << builtin_name(e.builtin()) << '(';
            print(os, e.operands()[0], PrecSum);
            os << ')';
            break;
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, PrecSum);
    return os.str();
}

void collect_symbols(const Expr& e, std::set<std::string>& out) {
    if (e.kind() == NodeKind::Symbol) {
        out.insert(e.symbol_name());
        return;
    }
    for (const Expr& op : e.operands()) collect_symbols(op, out);
}

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    collect_symbols(e, out);
    return out;
}

// ---- substitution ----

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    struct Walker {
        const std::map<std::string, Expr>& bindings;
        Expr walk(const Expr& e) {
            switch (e.kind()) {
                case NodeKind::Constant:
                    return e;
                case NodeKind::Symbol: {
                    auto it = bindings.find(e.symbol_name());
                    return it == bindings.end() ? e : it->second;
                }
                case NodeKind::Power:
                    return Expr::power(walk(e.operands()[0]), e.exponent());
                case NodeKind::Negate:
                    return Expr::negate(walk(e.operands()[0]));
                case NodeKind::Call:
                    return Expr::call(e.builtin(), walk(e.operands()[0]));
                case NodeKind::Quotient:
                    return Expr::quotient(walk(e.operands()[0]), walk(e.operands()[1]));
                case NodeKind::Sum:
                case NodeKind::Product: {
                    std::vector<Expr> ops;
                    ops.reserve(e.operands().size());
                    for (const Expr& op : e.operands()) ops.push_back(walk(op));
                    return e.kind() == NodeKind::Sum ? Expr::sum(std::move(ops))
                                                     : Expr::product(std::move(ops));
                }
            }
            return e;
        }
    };
    return simplify(Walker{bindings}.walk(e));
}

// ---- differentiation ----

namespace {

Expr diff_raw(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case NodeKind::Constant:
            return Expr::integer(0);
        case NodeKind::Symbol:
            return Expr::integer(e.symbol_name() == var ? 1 : 0);
        case NodeKind::Sum: {
            std::vector<Expr> terms;
            terms.reserve(e.operands().size());
            for (const Expr& op : e.operands()) terms.push_back(diff_raw(op, var));
            return Expr::sum(std::move(terms));
        }
        case NodeKind::Product: {
            const auto& fs = e.operands();
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                std::vector<Expr> factors = fs;
                factors[i] = diff_raw(fs[i], var);
                terms.push_back(Expr::product(std::move(factors)));
            }
            return Expr::sum(std::move(terms));
        }
        case NodeKind::Quotient: {
            const Expr& a = e.operands()[0];
            const Expr& b = e.operands()[1];
            Expr da = diff_raw(a, var);
            Expr db = diff_raw(b, var);
            return Expr::quotient(da * b - a * db, Expr::power(b, 2));
        }
        case NodeKind::Power: {
            const Expr& base = e.operands()[0];
            long n = e.exponent();
            if (n == 0) return Expr::integer(0);
            return Expr::integer(n) * Expr::power(base, n - 1) * diff_raw(base, var);
        }
        case NodeKind::Negate:
            return Expr::negate(diff_raw(e.operands()[0], var));
        case NodeKind::Call: {
            const Expr& u = e.operands()[0];
            Expr du = diff_raw(u, var);
            switch (e.builtin()) {
                case Builtin::Sin: return Expr::call(Builtin::Cos, u) * du;
                case Builtin::Cos: return Expr::negate(Expr::call(Builtin::Sin, u)) * du;
                case Builtin::Exp: return Expr::call(Builtin::Exp, u) * du;
                case Builtin::Sqrt:
                    return Expr::quotient(du, Expr::integer(2) * Expr::call(Builtin::Sqrt, u));
            }
        }
    }
    return Expr::integer(0);
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& var) {
    return simplify(diff_raw(e, var));
}

// ---- evaluation ----

namespace {

double eval_rec(const Expr& e, const Env& point, double& scale) {
    double v = 0.0;
    switch (e.kind()) {
        case NodeKind::Constant:
            v = e.value().get_d();
            break;
        case NodeKind::Symbol: {
            auto it = point.find(e.symbol_name());
            if (it == point.end()) throw MissingBindingError(e.symbol_name());
            v = it->second;
            break;
        }
        case NodeKind::Sum: {
            for (const Expr& op : e.operands()) v += eval_rec(op, point, scale);
            break;
        }
        case NodeKind::Product: {
            v = 1.0;
            for (const Expr& op : e.operands()) v *= eval_rec(op, point, scale);
            break;
        }
        case NodeKind::Quotient: {
            double num = eval_rec(e.operands()[0], point, scale);
            double den = eval_rec(e.operands()[1], point, scale);
            if (den == 0.0) throw UndefinedAtPointError("division by zero");
            v = num / den;
            break;
        }
        case NodeKind::Power: {
            double base = eval_rec(e.operands()[0], point, scale);
            if (base == 0.0 && e.exponent() < 0)
                throw UndefinedAtPointError("zero raised to a negative power");
            v = std::pow(base, static_cast<double>(e.exponent()));
            break;
        }
        case NodeKind::Negate:
            v = -eval_rec(e.operands()[0], point, scale);
            break;
        case NodeKind::Call: {
            double u = eval_rec(e.operands()[0], point, scale);
            switch (e.builtin()) {
                case Builtin::Sin: v = std::sin(u); break;
                case Builtin::Cos: v = std::cos(u); break;
                case Builtin::Exp: v = std::exp(u); break;
                case Builtin::Sqrt:
                    if (u < 0.0) throw UndefinedAtPointError("square root of a negative value");
                    v = std::sqrt(u);
                    break;
            }
            break;
        }
    }
    if (!std::isfinite(v)) throw UndefinedAtPointError("non-finite value");
    scale = std::max(scale, std::abs(v));
    return v;
}

}  // namespace

double evaluate(const Expr& e, const Env& point) {
    double scale = 0.0;
    return eval_rec(e, point, scale);
}

ScaledValue evaluate_scaled(const Expr& e, const Env& point) {
    double scale = 0.0;
    double v = eval_rec(e, point, scale);
    return {v, scale};
}

// ---- domain boxes ----

DomainBox& DomainBox::bind(std::string symbol, double lo, double hi) {
    if (!(hi > lo)) throw Error("domain interval for '" + symbol + "' must have positive length");
    for (auto& [name, iv] : intervals_) {
        if (name == symbol) {
            iv = {lo, hi};
            return *this;
        }
    }
    intervals_.emplace_back(std::move(symbol), Interval{lo, hi});
    return *this;
}

DomainBox& DomainBox::exclude_zero_of(Expr e) {
    exclusions_.push_back(std::move(e));
    return *this;
}

bool DomainBox::has_symbol(const std::string& name) const {
    for (const auto& [sym, iv] : intervals_)
        if (sym == name) return true;
    return false;
}

const Interval& DomainBox::interval(const std::string& name) const {
    for (const auto& [sym, iv] : intervals_)
        if (sym == name) return iv;
    throw Error("domain box has no interval for '" + name + "'");
}

Env DomainBox::sample(std::mt19937_64& rng, long& budget) const {
    while (budget > 0) {
        --budget;
        Env point;
        point.reserve(intervals_.size());
        for (const auto& [sym, iv] : intervals_) {
            std::uniform_real_distribution<double> dist(iv.lo, iv.hi);
            point.emplace(sym, dist(rng));
        }
        if (!excluded(point)) return point;
    }
    throw DomainExhaustedError("sampling budget exhausted while honouring domain exclusions");
}

bool DomainBox::contains(const Env& point) const {
    for (const auto& [sym, iv] : intervals_) {
        auto it = point.find(sym);
        if (it == point.end()) return false;
        if (it->second < iv.lo || it->second > iv.hi) return false;
    }
    return true;
}

bool DomainBox::excluded(const Env& point) const {
    for (const Expr& ex : exclusions_) {
        try {
            double v = evaluate(ex, point);
            if (std::abs(v) < 1e-12) return true;
        } catch (const UndefinedAtPointError&) {
            return true;
        }
    }
    return false;
}

// ---- zero test ----

bool is_zero(const Expr& e, const DomainBox& dom, const ZeroTestOptions& opts, std::mt19937_64& rng) {
    Expr s = simplify(e);
    if (s.is_zero_constant()) return true;
    if (s.kind() == NodeKind::Constant) return false;

    long budget = 100L * opts.trials;
    int done = 0;
    while (done < opts.trials) {
        Env point = dom.sample(rng, budget);
        ScaledValue sv;
        try {
            sv = evaluate_scaled(s, point);
        } catch (const UndefinedAtPointError&) {
            if (--budget <= 0)
                throw DomainExhaustedError("sampling budget exhausted: expression undefined everywhere tried");
            continue;
        }
        if (std::abs(sv.value) > opts.tol * (1.0 + sv.scale)) return false;
        ++done;
    }
    return true;
}

bool is_zero(const Expr& e, const DomainBox& dom, std::mt19937_64& rng) {
    return is_zero(e, dom, ZeroTestOptions{}, rng);
}

}  // namespace kslie
