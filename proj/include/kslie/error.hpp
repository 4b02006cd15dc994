#ifndef KSLIE_ERROR_HPP
#define KSLIE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace kslie {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- expression layer ----

struct SyntaxError : Error {
    std::size_t offset;
    SyntaxError(std::size_t off, const std::string& what)
        : Error("syntax error at byte " + std::to_string(off) + ": " + what), offset(off) {}
};

struct UnknownSymbolError : Error {
    std::string symbol;
    explicit UnknownSymbolError(const std::string& sym, std::size_t off = 0)
        : Error("unknown symbol '" + sym + "' at byte " + std::to_string(off)), symbol(sym) {}
};

struct MissingBindingError : Error {
    std::string symbol;
    explicit MissingBindingError(const std::string& sym)
        : Error("no value bound for symbol '" + sym + "'"), symbol(sym) {}
};

struct UndefinedAtPointError : Error {
    using Error::Error;
};

struct DomainExhaustedError : Error {
    using Error::Error;
};

// ---- geometry layer ----

struct ChartMismatchError : Error {
    using Error::Error;
};

struct NotClosedError : Error {
    std::size_t form_index;
    std::size_t l, m, p;
    NotClosedError(std::size_t form, std::size_t l_, std::size_t m_, std::size_t p_)
        : Error("two-form " + std::to_string(form) + " is not closed (coordinate triple " +
                std::to_string(l_) + "," + std::to_string(m_) + "," + std::to_string(p_) + ")"),
          form_index(form), l(l_), m(m_), p(p_) {}
};

struct DegenerateAtError : Error {
    std::vector<double> point;
    explicit DegenerateAtError(std::vector<double> pt)
        : Error("joint kernel is nontrivial at a sampled point"), point(std::move(pt)) {}
};

struct ComponentCountMismatchError : Error {
    using Error::Error;
};

struct PreconditionFailedError : Error {
    using Error::Error;
};

// ---- Lie algebra layer ----

struct NotClosedPairError : Error {
    std::size_t alpha, beta;
    NotClosedPairError(std::size_t a, std::size_t b)
        : Error("bracket of basis fields " + std::to_string(a) + "," + std::to_string(b) +
                " does not certify as a constant-coefficient combination"),
          alpha(a), beta(b) {}
};

struct RankDeficientSamplesError : Error {
    using Error::Error;
};

struct DimensionExceededError : Error {
    std::size_t max_dim;
    explicit DimensionExceededError(std::size_t m)
        : Error("Lie closure exceeds dimension bound " + std::to_string(m)), max_dim(m) {}
};

struct RankDropError : Error {
    std::vector<double> point;
    explicit RankDropError(std::vector<double> pt)
        : Error("distribution rank is not constant over sampled points"), point(std::move(pt)) {}
};

// ---- integration layer ----

struct LeftDomainError : Error {
    double t;
    std::vector<double> last_state;
    LeftDomainError(double time, std::vector<double> state)
        : Error("trajectory left the domain box at t = " + std::to_string(time)),
          t(time), last_state(std::move(state)) {}
};

struct NonFiniteStateError : Error {
    double t;
    explicit NonFiniteStateError(double time)
        : Error("state became non-finite at t = " + std::to_string(time)), t(time) {}
};

struct GridMismatchError : Error {
    using Error::Error;
};

struct BracketTableMismatchError : Error {
    using Error::Error;
};

// ---- registry / CLI layer ----

struct UnknownExampleError : Error {
    std::string id;
    explicit UnknownExampleError(const std::string& id_)
        : Error("no registered example with id '" + id_ + "'"), id(id_) {}
};

}  // namespace kslie

#endif
