#include <cctype>

#include "kslie/expr.hpp"

namespace kslie {

namespace {

class Parser {
  public:
    Parser(std::string_view src, const std::vector<std::string>& allowed)
        : src_(src), allowed_(allowed) {}

    Expr run() {
        Expr e = expr();
        skip_ws();
        if (pos_ != src_.size())
            throw SyntaxError(pos_, "unexpected trailing input");
        return e;
    }

  private:
    std::string_view src_;
    const std::vector<std::string>& allowed_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw SyntaxError(pos_, std::string("expected ") + what);
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + term();
            } else if (accept('-')) {
                lhs = lhs - term();
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = fold(lhs * factor());
            } else if (accept('/')) {
                lhs = fold(lhs / factor());
            } else {
                return lhs;
            }
        }
    }

    Expr factor() {
        Expr b = base();
        if (accept('^')) return Expr::power(std::move(b), integer_literal());
        return b;
    }

    Expr base() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')', "')'");
            return e;
        }
        if (c == '-') {
            ++pos_;
            return fold(Expr::negate(base()));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw SyntaxError(pos_, "expected a number, identifier, or '('");
    }

    // Division of literals folds immediately, so "3/2" yields the exact
    // rational whichever way the grammar groups it.
    static Expr fold(Expr e) {
        switch (e.kind()) {
            case NodeKind::Negate:
                if (e.operands()[0].is_constant()) {
                    Rational q = -e.operands()[0].value();
                    return Expr::constant(std::move(q));
                }
                break;
            case NodeKind::Quotient: {
                const Expr& a = e.operands()[0];
                const Expr& b = e.operands()[1];
                if (a.is_constant() && b.is_constant() && sgn(b.value()) != 0)
                    return Expr::constant(a.value() / b.value());
                break;
            }
            case NodeKind::Product: {
                const Expr& a = e.operands()[0];
                const Expr& b = e.operands()[1];
                if (a.is_constant() && b.is_constant())
                    return Expr::constant(a.value() * b.value());
                break;
            }
            default:
                break;
        }
        return e;
    }

    long integer_literal() {
        skip_ws();
        std::size_t start = pos_;
        bool neg = false;
        if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
            neg = src_[pos_] == '-';
            ++pos_;
        }
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            throw SyntaxError(pos_, "expected an integer exponent");
        long v = 0;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + (src_[pos_] - '0');
            if (v > 1'000'000) throw SyntaxError(start, "exponent too large");
            ++pos_;
        }
        return neg ? -v : v;
    }

    Expr number() {
        std::string digits;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
            digits += src_[pos_++];
        return Expr::constant(rational_from_string(digits));
    }

    Expr identifier() {
        std::size_t start = pos_;
        std::string name;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            name += src_[pos_++];

        if (name == "sin" || name == "cos" || name == "exp" || name == "sqrt") {
            Builtin fn = name == "sin"   ? Builtin::Sin
                         : name == "cos" ? Builtin::Cos
                         : name == "exp" ? Builtin::Exp
                                         : Builtin::Sqrt;
            expect('(', "'(' after function name");
            Expr arg = expr();
            expect(')', "')'");
            return Expr::call(fn, std::move(arg));
        }

        if (name == "t") return Expr::symbol(name);
        for (const std::string& sym : allowed_)
            if (sym == name) return Expr::symbol(name);
        throw UnknownSymbolError(name, start);
    }
};

}  // namespace

Expr parse(std::string_view src, const std::vector<std::string>& allowed) {
    return Parser(src, allowed).run();
}

}  // namespace kslie
