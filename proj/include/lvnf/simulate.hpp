#pragma once

#include "lvnf/nonpoly.hpp"
#include "lvnf/qp_system.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lvnf {

// Fixed-step classical Runge-Kutta (4th order). The step count is
// round((t1 - t0) / dt); the final recorded time is t0 + steps * dt.
struct IntegratorConfig {
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 1e-4;
    std::size_t record_every = 1;  // record each k-th step (plus first and last)
};

struct Trajectory {
    std::vector<std::string> labels;          // one per state component
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // states[i] belongs to times[i]
    // The integration stops early when a monitored component leaves the
    // positive orthant or the right-hand side leaves its domain; the offending
    // step time is recorded and the trajectory keeps only valid states.
    bool truncated = false;
    std::optional<double> truncated_at;
};

// Right-hand sides as plain vector fields, usable without integrating.
// The GLV form requires a strictly positive state (rational exponents);
// a non-positive component raises DomainError. For a GeneralSystem the state
// vector is (x..., values of the OdeAugmented functions in declaration
// order); closed-form functions are evaluated on the fly.
std::vector<double> eval_rhs(const QPSystem& sys, const std::vector<double>& state);
std::vector<double> eval_rhs(const LVSystem& sys, const std::vector<double>& state);
std::vector<double> eval_rhs(const GeneralSystem& sys, const std::vector<double>& state);

// GLV simulation over the positive orthant (monitors every component).
// Requires x0; throws ValidationError without it, DomainError when the
// initial state is not positive or the first evaluation fails.
Trajectory simulate(const QPSystem& sys, const IntegratorConfig& cfg);

// LV normal-form simulation (labels z1..zm, monitors every component).
Trajectory simulate(const LVSystem& sys, const IntegratorConfig& cfg);

// General-system simulation. Functions with closed forms are evaluated
// pointwise; OdeAugmented functions are appended to the state and integrated
// through their derivative representation (chain rule), starting from f0.
// Only the x variables are positivity-monitored.
Trajectory simulate(const GeneralSystem& sys, const IntegratorConfig& cfg);

// Monomial map z = prod state^B_full row-wise after padding the state with
// `dummy_count` trailing ones.
std::vector<double> diffeo_forward(const ExpandedMap& map, const std::vector<double>& state);

// Exact log-linear inversion of diffeo_forward. The dummy components must
// come back as 1 within `tol`, otherwise the point is off the embedding
// manifold and a DomainError is thrown. Returns the leading (non-dummy)
// components.
std::vector<double> diffeo_inverse(const ExpandedMap& map, const std::vector<double>& z,
                                   double tol = 1e-9);

// Largest relative deviation between two aligned state sequences:
// max over samples/components of |a - b| / max(|b|, floor).
double max_relative_deviation(const std::vector<std::vector<double>>& a,
                              const std::vector<std::vector<double>>& b,
                              double floor = 1e-12);

struct VerifyReport {
    double max_rel_dev = 0.0;
    // Worst deviation per compared label, in comparison order.
    std::vector<std::pair<std::string, double>> per_variable;
    std::size_t compared_samples = 0;
    bool truncated = false;                  // some trajectory stopped early
    std::optional<double> truncated_at;      // earliest stop, if any
    std::vector<std::string> notes;

    bool passed(double tol) const { return compared_samples > 0 && max_rel_dev <= tol; }
};

// Integrates the GLV system and its LV normal form side by side and compares
// the LV variables against the quasimonomial map of the GLV trajectory.
VerifyReport verify_equivalence(const QPSystem& glv, const IntegratorConfig& cfg);

// Full pipeline check for a general system: integrates the original system,
// its GLV embedding, and the LV normal form. Compares (a) the x variables of
// the embedding against the original trajectory and (b) the LV variables
// against the (x, f)-monomial map of the original trajectory.
VerifyReport verify_equivalence(const GeneralSystem& sys, const AuxSpec& spec,
                                const IntegratorConfig& cfg);

} // namespace lvnf
