#include <algorithm>
#include <unordered_map>
#include <utility>

#include "kslie/expr.hpp"

namespace kslie {

namespace {

Rational rational_pow(const Rational& c, long n) {
    if (n == 0) return rational_of(1);
    bool invert = n < 0;
    unsigned long e = static_cast<unsigned long>(invert ? -n : n);
    Rational r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(c.get_mpq_t()), e);
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(c.get_mpq_t()), e);
    r.canonicalize();
    if (invert) r = 1 / r;
    return r;
}

// Product/quotient intermediate form: exact coefficient times a ratio of
// base^exponent factor lists (exponents positive on both sides).
struct Factored {
    Rational coeff = rational_of(1);
    std::vector<std::pair<Expr, long>> num;
    std::vector<std::pair<Expr, long>> den;
    bool undefined = false;  // literal zero denominator; leave input untouched
};

void add_factor(std::vector<std::pair<Expr, long>>& side, const Expr& base, long exp) {
    for (auto& [b, e] : side) {
        if (b.same(base)) {
            e += exp;
            return;
        }
    }
    side.emplace_back(base, exp);
}

class Simplifier {
  public:
    Expr run(const Expr& e) {
        auto it = memo_.find(e.node());
        if (it != memo_.end()) return it->second.second;
        Expr result = dispatch(e);
        // the key expression is stored alongside the result so the node
        // address cannot be recycled and matched by an unrelated tree
        memo_.emplace(e.node(), std::make_pair(e, result));
        return result;
    }

  private:
    std::unordered_map<const ExprNode*, std::pair<Expr, Expr>> memo_;

    Expr dispatch(const Expr& e) {
        switch (e.kind()) {
            case NodeKind::Constant:
            case NodeKind::Symbol:
                return e;
            case NodeKind::Sum:
                return sum(e.operands());
            case NodeKind::Product:
                return product_like(e);
            case NodeKind::Quotient:
                return product_like(e);
            case NodeKind::Power:
                return power(run(e.operands()[0]), e.exponent());
            case NodeKind::Negate:
                return product_like(e);
            case NodeKind::Call:
                return call(e.builtin(), run(e.operands()[0]));
        }
        return e;
    }

    // ---- sums ----

    struct Term {
        Rational coeff;
        Expr key;  // simplified, coefficient-free
    };

    void split_term(const Expr& t, Rational& coeff, Expr& key) {
        switch (t.kind()) {
            case NodeKind::Constant:
                coeff = t.value();
                key = Expr::integer(1);
                return;
            case NodeKind::Product: {
                const auto& fs = t.operands();
                if (fs.front().is_constant()) {
                    coeff = fs.front().value();
                    std::vector<Expr> rest(fs.begin() + 1, fs.end());
                    key = Expr::product(std::move(rest));
                    return;
                }
                coeff = rational_of(1);
                key = t;
                return;
            }
            case NodeKind::Quotient: {
                Rational c;
                Expr num_key;
                split_term(t.operands()[0], c, num_key);
                coeff = c;
                key = Expr::quotient(num_key, t.operands()[1]);
                return;
            }
            case NodeKind::Negate: {
                // only reachable for subtrees simplification left untouched
                split_term(t.operands()[0], coeff, key);
                coeff = -coeff;
                return;
            }
            default:
                coeff = rational_of(1);
                key = t;
                return;
        }
    }

    Expr join_term(const Rational& coeff, const Expr& key) {
        if (key.is_one_constant()) return Expr::constant(coeff);
        if (coeff == 1) return key;
        if (key.kind() == NodeKind::Quotient)
            return Expr::quotient(join_term(coeff, key.operands()[0]), key.operands()[1]);
        std::vector<Expr> fs{Expr::constant(coeff)};
        if (key.kind() == NodeKind::Product)
            fs.insert(fs.end(), key.operands().begin(), key.operands().end());
        else
            fs.push_back(key);
        return Expr::product(std::move(fs));
    }

    Expr sum(const std::vector<Expr>& raw_terms) {
        std::vector<Term> terms;
        auto feed = [&](auto&& self, const Expr& raw) -> void {
            Expr s = run(raw);
            if (s.kind() == NodeKind::Sum) {
                for (const Expr& op : s.operands()) self(self, op);
                return;
            }
            if (s.is_zero_constant()) return;
            Rational c;
            Expr key;
            split_term(s, c, key);
            for (Term& t : terms) {
                if (t.key.same(key)) {
                    t.coeff += c;
                    return;
                }
            }
            terms.push_back(Term{std::move(c), std::move(key)});
        };
        for (const Expr& raw : raw_terms) feed(feed, raw);

        std::vector<Expr> out;
        out.reserve(terms.size());
        for (const Term& t : terms) {
            if (sgn(t.coeff) == 0) continue;
            out.push_back(join_term(t.coeff, t.key));
        }
        if (out.empty()) return Expr::integer(0);
        std::sort(out.begin(), out.end(), [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
        return Expr::sum(std::move(out));
    }

    // ---- products, quotients, negation ----

    // Destructures an already-simplified expression into the factored form.
    void gather_simplified(const Expr& s, bool denominator, Factored& f) {
        switch (s.kind()) {
            case NodeKind::Constant: {
                if (sgn(s.value()) == 0) {
                    if (denominator)
                        f.undefined = true;
                    else
                        f.coeff = rational_of(0);
                    return;
                }
                if (denominator)
                    f.coeff /= s.value();
                else
                    f.coeff *= s.value();
                return;
            }
            case NodeKind::Product:
                for (const Expr& op : s.operands()) gather_simplified(op, denominator, f);
                return;
            case NodeKind::Quotient:
                gather_simplified(s.operands()[0], denominator, f);
                gather_simplified(s.operands()[1], !denominator, f);
                return;
            case NodeKind::Power: {
                long n = s.exponent();
                if (n < 0)
                    add_factor(denominator ? f.num : f.den, s.operands()[0], -n);
                else
                    add_factor(denominator ? f.den : f.num, s.operands()[0], n);
                return;
            }
            case NodeKind::Negate:
                f.coeff = -f.coeff;
                gather_simplified(s.operands()[0], denominator, f);
                return;
            default:
                add_factor(denominator ? f.den : f.num, s, 1);
                return;
        }
    }

    // Walks the raw multiplicative structure, simplifying only at its leaves.
    void gather(const Expr& e, bool denominator, Factored& f) {
        switch (e.kind()) {
            case NodeKind::Product:
                for (const Expr& op : e.operands()) gather(op, denominator, f);
                return;
            case NodeKind::Quotient:
                gather(e.operands()[0], denominator, f);
                gather(e.operands()[1], !denominator, f);
                return;
            case NodeKind::Negate:
                f.coeff = -f.coeff;
                gather(e.operands()[0], denominator, f);
                return;
            default:
                gather_simplified(run(e), denominator, f);
                return;
        }
    }

    static Expr rebuild_side(const Rational* coeff, std::vector<std::pair<Expr, long>> side) {
        std::vector<Expr> fs;
        if (coeff && !(*coeff == 1)) fs.push_back(Expr::constant(*coeff));
        std::sort(side.begin(), side.end(),
                  [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
        for (auto& [b, e] : side) {
            if (e == 0) continue;
            fs.push_back(e == 1 ? b : Expr::power(b, e));
        }
        if (fs.empty()) return Expr::integer(1);
        return Expr::product(std::move(fs));
    }

    Expr product_like(const Expr& e) {
        Factored f;
        gather(e, false, f);
        if (f.undefined) return e;  // keep literal division by zero intact
        if (sgn(f.coeff) == 0) return Expr::integer(0);

        // cancel common structural factors
        for (auto& [nb, ne] : f.num) {
            for (auto& [db, de] : f.den) {
                if (ne > 0 && de > 0 && nb.same(db)) {
                    long c = std::min(ne, de);
                    ne -= c;
                    de -= c;
                }
            }
        }
        bool den_empty = std::all_of(f.den.begin(), f.den.end(), [](const auto& p) { return p.second == 0; });
        Expr num = rebuild_side(&f.coeff, std::move(f.num));
        if (den_empty) return num;
        Expr den = rebuild_side(nullptr, std::move(f.den));
        if (den.is_one_constant()) return num;
        return Expr::quotient(std::move(num), std::move(den));
    }

    // ---- integer powers ----

    Expr power(const Expr& base, long n) {
        if (n == 0) return Expr::integer(1);
        if (n == 1) return base;
        switch (base.kind()) {
            case NodeKind::Constant:
                if (sgn(base.value()) != 0 || n > 0) return Expr::constant(rational_pow(base.value(), n));
                return Expr::power(base, n);  // 0^negative stays literal
            case NodeKind::Power:
                return power(base.operands()[0], base.exponent() * n);
            case NodeKind::Product: {
                std::vector<Expr> fs;
                fs.reserve(base.operands().size());
                for (const Expr& op : base.operands()) fs.push_back(Expr::power(op, n));
                return run(Expr::product(std::move(fs)));
            }
            case NodeKind::Quotient: {
                const Expr& a = base.operands()[0];
                const Expr& b = base.operands()[1];
                if (n > 0) return run(Expr::quotient(Expr::power(a, n), Expr::power(b, n)));
                return run(Expr::quotient(Expr::power(b, -n), Expr::power(a, -n)));
            }
            default:
                if (n < 0)
                    return Expr::quotient(Expr::integer(1), -n == 1 ? base : Expr::power(base, -n));
                return Expr::power(base, n);
        }
    }

    // ---- unary functions ----

    static Expr call(Builtin fn, Expr arg) {
        if (arg.is_constant()) {
            const Rational& c = arg.value();
            if (sgn(c) == 0) {
                switch (fn) {
                    case Builtin::Sin: return Expr::integer(0);
                    case Builtin::Cos: return Expr::integer(1);
                    case Builtin::Exp: return Expr::integer(1);
                    case Builtin::Sqrt: return Expr::integer(0);
                }
            }
            if (fn == Builtin::Sqrt && sgn(c) > 0) {
                // exact square roots of perfect-square rationals
                if (mpz_perfect_square_p(mpq_numref(c.get_mpq_t())) &&
                    mpz_perfect_square_p(mpq_denref(c.get_mpq_t()))) {
                    Rational r;
                    mpz_sqrt(mpq_numref(r.get_mpq_t()), mpq_numref(c.get_mpq_t()));
                    mpz_sqrt(mpq_denref(r.get_mpq_t()), mpq_denref(c.get_mpq_t()));
                    r.canonicalize();
                    return Expr::constant(std::move(r));
                }
            }
        }
        return Expr::call(fn, std::move(arg));
    }
};

}  // namespace

Expr simplify(const Expr& e) {
    return Simplifier{}.run(e);
}

}  // namespace kslie
