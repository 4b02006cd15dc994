#ifndef KSLIE_MOTION_HPP
#define KSLIE_MOTION_HPP

#include <cstdint>
#include <iosfwd>

#include "kslie/prolong.hpp"

namespace kslie {

/// X_t = sum_alpha b_alpha(t) X_alpha with coefficient expressions in the
/// single symbol t. Compiled once for fast right-hand-side evaluation.
class TDependentField {
  public:
    TDependentField(std::vector<VectorField> basis, std::vector<Expr> coefficients);

    const Chart& chart() const { return basis_.front().chart(); }
    const std::vector<VectorField>& basis() const { return basis_; }
    const std::vector<Expr>& coefficients() const { return coefficients_; }

    std::vector<double> velocity(double t, const std::vector<double>& state) const;

    // the slice X_t for a fixed time value, as a plain vector field
    VectorField at_time(double t) const;

  private:
    std::vector<VectorField> basis_;
    std::vector<Expr> coefficients_;
    struct Compiled;
    std::shared_ptr<const Compiled> compiled_;
};

struct TrajectoryMeta {
    std::string system_id;
    std::string method = "rk4";
    double step = 0.0;
    std::uint64_t seed = 0;
};

class Trajectory {
  public:
    Trajectory(Chart chart, TrajectoryMeta meta);

    void append(double t, std::vector<double> state);

    const Chart& chart() const { return chart_; }
    const TrajectoryMeta& meta() const { return meta_; }
    std::size_t size() const { return times_.size(); }
    double time(std::size_t i) const { return times_.at(i); }
    const std::vector<double>& state(std::size_t i) const { return states_.at(i); }
    const std::vector<double>& times() const { return times_; }

    Env env_at(std::size_t i) const;

  private:
    Chart chart_;
    TrajectoryMeta meta_;
    std::vector<double> times_;
    std::vector<std::vector<double>> states_;
};

// Classic fixed-step RK4; every accepted step is recorded. Aborts with
// LeftDomainError when the state exits the chart box or hits an exclusion,
// NonFiniteStateError when it stops being finite.
Trajectory integrate(const TDependentField& F, const std::vector<double>& x0, double t0, double t1,
                     double step, const std::string& system_id = "");

void write_csv(const Trajectory& traj, std::ostream& os);

struct DriftReport {
    std::string label;
    double initial = 0.0;
    double max_abs_deviation = 0.0;
    double max_rel_deviation = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Evaluates f along the trajectory and reports the worst deviation from its
// initial value, relative to max(1, |f(t0)|).
DriftReport check_constant(const Expr& f, const Trajectory& traj, double tol,
                           const std::string& label = "");

struct NamedInvariant {
    std::string label;
    Expr expr;
};

// The six invariants of the twice-prolonged Schwarzian system, as printed:
// C_xi1, C_xi2, F_xi1xi2, F1, F3, F4 over chart (x_1,v_1,a_1,x_2,v_2,a_2).
std::vector<NamedInvariant> schwarzian_invariants(const ProductChart& pc);

// Verifies the sl(2)-type bracket table {h1,h2}=-h1, {h1,h3}=-2h2,
// {h2,h3}=-h3 for the contracted tuple, then returns the Casimir-derived
// expression h1*h3 - h2^2 after certifying it commutes with all three.
Expr casimir_constant(const Expr& h1, const Expr& h2, const Expr& h3, const VectorField& X1,
                      const VectorField& X2, const VectorField& X3, const TwoForm& omega_theta,
                      const ZeroTestOptions& opts, std::mt19937_64& rng);

enum class PairingStatus { Pass, Fail, Degenerate };

struct PairingResult {
    std::string invariant;
    std::size_t particular;  // which copy of the pair trajectory, 1-based
    PairingStatus status;
    DriftReport drift;
};

struct SuperpositionReport {
    std::vector<PairingResult> results;
    bool all_pass() const;
};

// The pair trajectory holds two particular solutions on the doubled chart;
// the probe is a solution of the same system on the base chart. Each
// invariant must stay constant along both (probe, particular) pairings;
// pairings whose degeneracy indicator vanishes are flagged, not failed.
SuperpositionReport superposition_check(const Trajectory& pair_traj, const Trajectory& probe_traj,
                                        const std::vector<NamedInvariant>& invariants,
                                        const std::vector<Expr>& degeneracy_indicators, double tol);

}  // namespace kslie

#endif
