#include "kslie/motion.hpp"

#include <cmath>
#include <ostream>

namespace kslie {

namespace {

// Small postfix program for fast repeated evaluation inside the integrator.
struct Program {
    enum class Op : std::uint8_t { Const, Slot, Add, Mul, Div, Pow, Neg, Fun };
    struct Instr {
        Op op;
        double value = 0.0;      // Const
        std::size_t slot = 0;    // Slot
        std::size_t arity = 0;   // Add/Mul
        long exponent = 0;       // Pow
        Builtin fn = Builtin::Sin;
    };
    std::vector<Instr> code;

    double run(const std::vector<double>& slots, std::vector<double>& stack) const {
        stack.clear();
        for (const Instr& in : code) {
            switch (in.op) {
                case Op::Const:
                    stack.push_back(in.value);
                    break;
                case Op::Slot:
                    stack.push_back(slots[in.slot]);
                    break;
                case Op::Add: {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < in.arity; ++i) {
                        acc += stack.back();
                        stack.pop_back();
                    }
                    stack.push_back(acc);
                    break;
                }
                case Op::Mul: {
                    double acc = 1.0;
                    for (std::size_t i = 0; i < in.arity; ++i) {
                        acc *= stack.back();
                        stack.pop_back();
                    }
                    stack.push_back(acc);
                    break;
                }
                case Op::Div: {
                    double den = stack.back();
                    stack.pop_back();
                    stack.back() /= den;
                    break;
                }
                case Op::Pow:
                    stack.back() = std::pow(stack.back(), static_cast<double>(in.exponent));
                    break;
                case Op::Neg:
                    stack.back() = -stack.back();
                    break;
                case Op::Fun:
                    switch (in.fn) {
                        case Builtin::Sin: stack.back() = std::sin(stack.back()); break;
                        case Builtin::Cos: stack.back() = std::cos(stack.back()); break;
                        case Builtin::Exp: stack.back() = std::exp(stack.back()); break;
                        case Builtin::Sqrt: stack.back() = std::sqrt(stack.back()); break;
                    }
                    break;
            }
        }
        return stack.back();
    }
};

void compile_into(const Expr& e, const std::map<std::string, std::size_t>& slots, Program& prog) {
    switch (e.kind()) {
        case NodeKind::Constant:
            prog.code.push_back({Program::Op::Const, e.value().get_d()});
            break;
        case NodeKind::Symbol: {
            auto it = slots.find(e.symbol_name());
            if (it == slots.end()) throw MissingBindingError(e.symbol_name());
            Program::Instr in{Program::Op::Slot};
            in.slot = it->second;
            prog.code.push_back(in);
            break;
        }
        case NodeKind::Sum: {
            for (const Expr& op : e.operands()) compile_into(op, slots, prog);
            Program::Instr in{Program::Op::Add};
            in.arity = e.operands().size();
            prog.code.push_back(in);
            break;
        }
        case NodeKind::Product: {
            for (const Expr& op : e.operands()) compile_into(op, slots, prog);
            Program::Instr in{Program::Op::Mul};
            in.arity = e.operands().size();
            prog.code.push_back(in);
            break;
        }
        case NodeKind::Quotient:
            compile_into(e.operands()[0], slots, prog);
            compile_into(e.operands()[1], slots, prog);
            prog.code.push_back({Program::Op::Div});
            break;
        case NodeKind::Power: {
            compile_into(e.operands()[0], slots, prog);
            Program::Instr in{Program::Op::Pow};
            in.exponent = e.exponent();
            prog.code.push_back(in);
            break;
        }
        case NodeKind::Negate:
            compile_into(e.operands()[0], slots, prog);
            prog.code.push_back({Program::Op::Neg});
            break;
        case NodeKind::Call: {
            compile_into(e.operands()[0], slots, prog);
            Program::Instr in{Program::Op::Fun};
            in.fn = e.builtin();
            prog.code.push_back(in);
            break;
        }
    }
}

Program compile(const Expr& e, const std::map<std::string, std::size_t>& slots) {
    Program p;
    compile_into(simplify(e), slots, p);
    return p;
}

}  // namespace

struct TDependentField::Compiled {
    std::vector<Program> coefficient_programs;          // one per basis field, slot n = t
    std::vector<std::vector<Program>> component_programs;  // [alpha][l]
};

TDependentField::TDependentField(std::vector<VectorField> basis, std::vector<Expr> coefficients)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
    if (basis_.empty()) throw Error("a t-dependent field needs at least one basis field");
    if (basis_.size() != coefficients_.size())
        throw Error("coefficient count does not match basis size");
    const Chart& chart = basis_.front().chart();
    for (const VectorField& X : basis_) require_same_chart(chart, X.chart());
    for (const Expr& b : coefficients_)
        for (const std::string& sym : free_symbols(b))
            if (sym != "t") throw Error("time coefficients may only involve 't', found '" + sym + "'");

    std::map<std::string, std::size_t> slots;
    for (std::size_t l = 0; l < chart.dim(); ++l) slots.emplace(chart.symbols()[l], l);
    std::map<std::string, std::size_t> tslot{{"t", 0}};

    auto compiled = std::make_shared<Compiled>();
    for (std::size_t a = 0; a < basis_.size(); ++a) {
        compiled->coefficient_programs.push_back(compile(coefficients_[a], tslot));
        std::vector<Program> comps;
        for (const Expr& c : basis_[a].components()) comps.push_back(compile(c, slots));
        compiled->component_programs.push_back(std::move(comps));
    }
    compiled_ = std::move(compiled);
}

std::vector<double> TDependentField::velocity(double t, const std::vector<double>& state) const {
    std::size_t n = chart().dim();
    std::vector<double> out(n, 0.0);
    std::vector<double> tslot{t};
    thread_local std::vector<double> stack;
    for (std::size_t a = 0; a < basis_.size(); ++a) {
        double b = compiled_->coefficient_programs[a].run(tslot, stack);
        if (b == 0.0) continue;
        for (std::size_t l = 0; l < n; ++l)
            out[l] += b * compiled_->component_programs[a][l].run(state, stack);
    }
    return out;
}

VectorField TDependentField::at_time(double t) const {
    VectorField out = VectorField::zero(chart());
    for (std::size_t a = 0; a < basis_.size(); ++a) {
        Expr b = simplify(substitute(coefficients_[a], {{"t", Expr::constant(Rational(t))}}));
        out = out + b * basis_[a];
    }
    return out;
}

Trajectory::Trajectory(Chart chart, TrajectoryMeta meta) : chart_(std::move(chart)), meta_(std::move(meta)) {}

void Trajectory::append(double t, std::vector<double> state) {
    if (!times_.empty() && t <= times_.back()) throw Error("trajectory times must increase strictly");
    if (state.size() != chart_.dim()) throw Error("trajectory state dimension mismatch");
    times_.push_back(t);
    states_.push_back(std::move(state));
}

Env Trajectory::env_at(std::size_t i) const {
    return chart_.to_env(states_.at(i));
}

Trajectory integrate(const TDependentField& F, const std::vector<double>& x0, double t0, double t1,
                     double step, const std::string& system_id) {
    if (step <= 0.0) throw Error("step must be positive");
    if (t1 < t0) throw Error("t1 must not precede t0");
    const Chart& chart = F.chart();
    if (x0.size() != chart.dim()) throw Error("initial state dimension mismatch");

    TrajectoryMeta meta;
    meta.system_id = system_id;
    meta.step = step;
    Trajectory traj(chart, meta);

    auto check_state = [&](double t, const std::vector<double>& x, const std::vector<double>& last) {
        for (double v : x)
            if (!std::isfinite(v)) throw NonFiniteStateError(t);
        Env env = chart.to_env(x);
        if (!chart.box().contains(env) || chart.box().excluded(env)) throw LeftDomainError(t, last);
    };

    check_state(t0, x0, x0);
    traj.append(t0, x0);
    if (t1 <= t0) return traj;

    std::vector<double> x = x0;
    std::size_t full_steps = static_cast<std::size_t>(std::floor((t1 - t0) / step + 1e-9));
    double remainder = (t1 - t0) - static_cast<double>(full_steps) * step;
    if (remainder < 1e-12 * std::max(1.0, std::abs(t1))) remainder = 0.0;

    std::size_t n = chart.dim();
    std::vector<double> k1, k2, k3, k4, tmp(n);
    auto rk4_step = [&](double t, double h) {
        k1 = F.velocity(t, x);
        for (std::size_t l = 0; l < n; ++l) tmp[l] = x[l] + 0.5 * h * k1[l];
        k2 = F.velocity(t + 0.5 * h, tmp);
        for (std::size_t l = 0; l < n; ++l) tmp[l] = x[l] + 0.5 * h * k2[l];
        k3 = F.velocity(t + 0.5 * h, tmp);
        for (std::size_t l = 0; l < n; ++l) tmp[l] = x[l] + h * k3[l];
        k4 = F.velocity(t + h, tmp);
        for (std::size_t l = 0; l < n; ++l)
            x[l] += h / 6.0 * (k1[l] + 2.0 * (k2[l] + k3[l]) + k4[l]);
    };

    std::vector<double> last = x;
    for (std::size_t i = 0; i < full_steps; ++i) {
        double t = t0 + static_cast<double>(i) * step;
        rk4_step(t, step);
        double t_next = t0 + static_cast<double>(i + 1) * step;
        check_state(t_next, x, last);
        traj.append(t_next, x);
        last = x;
    }
    if (remainder > 0.0) {
        rk4_step(t0 + static_cast<double>(full_steps) * step, remainder);
        check_state(t1, x, last);
        traj.append(t1, x);
    }
    return traj;
}

void write_csv(const Trajectory& traj, std::ostream& os) {
    os << "t";
    for (const std::string& s : traj.chart().symbols()) os << ',' << s;
    os << '\n';
    os.precision(17);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << traj.time(i);
        for (double v : traj.state(i)) os << ',' << v;
        os << '\n';
    }
}

DriftReport check_constant(const Expr& f, const Trajectory& traj, double tol, const std::string& label) {
    if (traj.size() == 0) throw Error("empty trajectory");
    DriftReport report;
    report.label = label.empty() ? to_string(f) : label;
    report.tol = tol;
    report.initial = evaluate(f, traj.env_at(0));
    for (std::size_t i = 1; i < traj.size(); ++i) {
        double v = evaluate(f, traj.env_at(i));
        report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(v - report.initial));
    }
    report.max_rel_deviation = report.max_abs_deviation / std::max(1.0, std::abs(report.initial));
    report.pass = report.max_rel_deviation <= tol;
    return report;
}

std::vector<NamedInvariant> schwarzian_invariants(const ProductChart& pc) {
    if (pc.copies() != 2) throw Error("the Schwarzian invariants live on the two-fold product");
    const auto& allowed = pc.chart().symbols();
    auto E = [&](const char* text) { return parse(text, allowed); };

    std::vector<NamedInvariant> out;
    Expr c1 = E("(a_2*v_1 - a_1*v_2)^2 / (v_1^3*v_2^3)");
    out.push_back({"C_xi1", c1});
    out.push_back({"C_xi2",
                   simplify(Expr::integer(-4) *
                                E("(-(x_1*x_2) + 2*v_1*v_2*(v_1*x_2 - v_2*x_1)/(a_1*v_2 - v_1*a_2))") * c1 -
                            Expr::integer(16))});
    out.push_back({"F_xi1xi2",
                   simplify(Expr::integer(-2) * c1 *
                            E("x_1 + x_2 - 2*v_1*v_2*(v_1 - v_2)/(a_1*v_2 - v_1*a_2)"))});
    out.push_back({"F1", E("x_1*x_2 - 2*v_1*v_2*(v_1*x_2 - v_2*x_1)/(a_1*v_2 - v_1*a_2)")});
    out.push_back({"F3", E("x_1 + x_2 - 2*v_1*v_2*(v_1 - v_2)/(a_1*v_2 - v_1*a_2)")});
    out.push_back({"F4", E("x_1 - x_2 - 2*v_1*v_2*(v_1 + v_2)/(a_1*v_2 - v_1*a_2)")});
    return out;
}

Expr casimir_constant(const Expr& h1, const Expr& h2, const Expr& h3, const VectorField& X1,
                      const VectorField& X2, const VectorField& X3, const TwoForm& omega_theta,
                      const ZeroTestOptions& opts, std::mt19937_64& rng) {
    const Chart& chart = omega_theta.chart();
    const DomainBox& box = chart.box();

    // the fields must be Hamiltonian for the tuple with respect to the
    // contracted form, and the tuple must close the expected table
    auto ham = [&](const VectorField& X, const Expr& h) {
        OneForm residual = interior_product(X, omega_theta) - exterior_derivative(h, chart);
        return all_zero(residual, opts, rng);
    };
    if (!ham(X1, h1) || !ham(X2, h2) || !ham(X3, h3))
        throw BracketTableMismatchError("fields are not Hamiltonian for the supplied tuple");

    bool table_ok = is_zero(X2.apply(h1) + h1, box, opts, rng) &&
                    is_zero(X3.apply(h1) + Expr::integer(2) * h2, box, opts, rng) &&
                    is_zero(X3.apply(h2) + h3, box, opts, rng);
    if (!table_ok) throw BracketTableMismatchError("tuple does not close the expected bracket table");

    Expr casimir = simplify(h1 * h3 - h2 * h2);
    for (const VectorField* X : {&X1, &X2, &X3})
        if (!is_zero(X->apply(casimir), box, opts, rng))
            throw BracketTableMismatchError("candidate does not commute with the tuple");
    return casimir;
}

bool SuperpositionReport::all_pass() const {
    for (const PairingResult& r : results)
        if (r.status == PairingStatus::Fail) return false;
    return true;
}

SuperpositionReport superposition_check(const Trajectory& pair_traj, const Trajectory& probe_traj,
                                        const std::vector<NamedInvariant>& invariants,
                                        const std::vector<Expr>& degeneracy_indicators, double tol) {
    if (pair_traj.size() != probe_traj.size()) throw GridMismatchError("trajectories have different lengths");
    for (std::size_t i = 0; i < pair_traj.size(); ++i)
        if (std::abs(pair_traj.time(i) - probe_traj.time(i)) > 1e-12)
            throw GridMismatchError("trajectories use different time grids");
    std::size_t n = probe_traj.chart().dim();
    if (pair_traj.chart().dim() != 2 * n)
        throw GridMismatchError("pair trajectory is not on the doubled chart");

    const auto& product_symbols = pair_traj.chart().symbols();
    SuperpositionReport report;

    for (std::size_t particular = 1; particular <= 2; ++particular) {
        // probe occupies copy 1, the chosen particular solution copy 2
        auto combined_env = [&](std::size_t i) {
            Env env;
            const auto& probe_state = probe_traj.state(i);
            const auto& pair_state = pair_traj.state(i);
            for (std::size_t l = 0; l < n; ++l) {
                env.emplace(product_symbols[l], probe_state[l]);
                env.emplace(product_symbols[n + l], pair_state[(particular - 1) * n + l]);
            }
            return env;
        };

        bool degenerate = false;
        for (std::size_t i = 0; i < pair_traj.size() && !degenerate; ++i) {
            Env env = combined_env(i);
            for (const Expr& ind : degeneracy_indicators) {
                double v;
                try {
                    v = evaluate(ind, env);
                } catch (const UndefinedAtPointError&) {
                    degenerate = true;
                    break;
                }
                if (std::abs(v) < 1e-10) {
                    degenerate = true;
                    break;
                }
            }
        }

        for (const NamedInvariant& inv : invariants) {
            PairingResult result;
            result.invariant = inv.label;
            result.particular = particular;
            if (degenerate) {
                result.status = PairingStatus::Degenerate;
                report.results.push_back(std::move(result));
                continue;
            }
            DriftReport drift;
            drift.label = inv.label;
            drift.tol = tol;
            bool undefined = false;
            try {
                drift.initial = evaluate(inv.expr, combined_env(0));
                for (std::size_t i = 1; i < pair_traj.size(); ++i) {
                    double v = evaluate(inv.expr, combined_env(i));
                    drift.max_abs_deviation = std::max(drift.max_abs_deviation, std::abs(v - drift.initial));
                }
            } catch (const UndefinedAtPointError&) {
                undefined = true;
            }
            if (undefined) {
                result.status = PairingStatus::Degenerate;
            } else {
                drift.max_rel_deviation = drift.max_abs_deviation / std::max(1.0, std::abs(drift.initial));
                drift.pass = drift.max_rel_deviation <= tol;
                result.status = drift.pass ? PairingStatus::Pass : PairingStatus::Fail;
                result.drift = drift;
            }
            report.results.push_back(std::move(result));
        }
    }
    return report;
}

}  // namespace kslie
