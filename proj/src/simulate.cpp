#include "lvnf/simulate.hpp"

#include "lvnf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace lvnf {

namespace {

using Rhs = std::function<void(const std::vector<double>&, std::vector<double>&)>;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// Classical fixed-step RK4 with positivity monitoring on the first
// `monitored` components (the rest only need to stay finite). Domain failures
// on the very first evaluation are the caller's fault and propagate; later
// failures truncate the trajectory at the offending step time.
Trajectory run_rk4(std::vector<std::string> labels, const std::vector<double>& x0,
                   const Rhs& rhs, const IntegratorConfig& cfg, std::size_t monitored) {
    if (!(cfg.dt > 0.0)) throw ValidationError("integration step dt must be positive");
    if (!(cfg.t1 > cfg.t0)) throw ValidationError("integration interval must have t1 > t0");
    if (cfg.record_every == 0) throw ValidationError("record_every must be at least 1");
    const long long steps = std::llround((cfg.t1 - cfg.t0) / cfg.dt);
    if (steps <= 0) throw ValidationError("integration interval is shorter than one step");

    for (std::size_t k = 0; k < monitored; ++k) {
        if (!(std::isfinite(x0[k]) && x0[k] > 0.0)) {
            throw DomainError("initial state component '" + labels[k] +
                              "' must be positive, got " + fmt_double(x0[k]));
        }
    }
    for (double v : x0) {
        if (!std::isfinite(v)) throw DomainError("initial state must be finite");
    }

    Trajectory traj;
    traj.labels = std::move(labels);
    traj.times.push_back(cfg.t0);
    traj.states.push_back(x0);

    const std::size_t dim = x0.size();
    std::vector<double> state = x0;
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), stage(dim), next(dim);
    rhs(state, k1); // domain failure at t0 is an error, not truncation

    const double h = cfg.dt;
    for (long long step = 1; step <= steps; ++step) {
        const double t_next = cfg.t0 + static_cast<double>(step) * h;
        bool ok = true;
        try {
            if (step > 1) rhs(state, k1);
            for (std::size_t i = 0; i < dim; ++i) stage[i] = state[i] + 0.5 * h * k1[i];
            rhs(stage, k2);
            for (std::size_t i = 0; i < dim; ++i) stage[i] = state[i] + 0.5 * h * k2[i];
            rhs(stage, k3);
            for (std::size_t i = 0; i < dim; ++i) stage[i] = state[i] + h * k3[i];
            rhs(stage, k4);
            for (std::size_t i = 0; i < dim; ++i) {
                next[i] = state[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        } catch (const DomainError&) {
            ok = false;
        }
        if (ok) {
            for (std::size_t i = 0; i < dim && ok; ++i) {
                ok = (i < monitored) ? (std::isfinite(next[i]) && next[i] > 0.0)
                                     : std::isfinite(next[i]);
            }
        }
        if (!ok) {
            traj.truncated = true;
            traj.truncated_at = t_next;
            break;
        }
        state = next;
        if (step % static_cast<long long>(cfg.record_every) == 0 || step == steps) {
            traj.times.push_back(t_next);
            traj.states.push_back(state);
        }
    }
    return traj;
}

double term_product(const Term& t, const std::vector<double>& x,
                    const std::vector<double>& fv) {
    double prod = t.coefficient.to_double();
    for (std::size_t k = 0; k < t.x_exponents.size(); ++k) {
        if (t.x_exponents[k].is_zero()) continue;
        prod *= pow_rational(x[k], t.x_exponents[k]);
    }
    for (std::size_t u = 0; u < t.f_exponents.size(); ++u) {
        if (t.f_exponents[u].is_zero()) continue;
        prod *= pow_rational(fv[u], t.f_exponents[u]);
    }
    return prod;
}

// GLV right-hand side; rational exponents make the positive orthant the
// natural domain, so non-positive components raise DomainError.
Rhs build_qp_rhs(const QPSystem& clean) {
    const std::size_t n = clean.var_count();
    const std::size_t m = clean.monomial_count();
    const std::vector<double> lam = clean.lambda_doubles();
    const std::vector<std::vector<double>> A = clean.A_doubles();
    const std::vector<std::vector<double>> B = clean.B.to_doubles();
    return [n, m, lam, A, B](const std::vector<double>& x, std::vector<double>& dx) {
        for (std::size_t k = 0; k < n; ++k) {
            if (!(std::isfinite(x[k]) && x[k] > 0.0)) {
                throw DomainError("GLV state component " + std::to_string(k + 1) +
                                  " is not positive: " + fmt_double(x[k]));
            }
        }
        std::vector<double> z(m);
        for (std::size_t j = 0; j < m; ++j) {
            double lz = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (B[j][k] != 0.0) lz += B[j][k] * std::log(x[k]);
            }
            z[j] = std::exp(lz);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double bracket = lam[i];
            for (std::size_t j = 0; j < m; ++j) bracket += A[i][j] * z[j];
            dx[i] = x[i] * bracket;
        }
    };
}

void check_lv_shape(const LVSystem& sys) {
    const std::size_t m = sys.dim();
    if (m == 0) throw ValidationError("the LV system is empty");
    if (sys.A_prime.rows() != m || sys.A_prime.cols() != m ||
        sys.lambda_prime.rows() != m || sys.lambda_prime.cols() != 1) {
        throw ValidationError("LV system dimensions are inconsistent");
    }
}

Rhs build_lv_rhs(const LVSystem& sys) {
    const std::size_t m = sys.dim();
    const std::vector<double> lam = sys.lambda_doubles();
    const std::vector<std::vector<double>> A = sys.A_doubles();
    return [m, lam, A](const std::vector<double>& z, std::vector<double>& dz) {
        for (std::size_t a = 0; a < m; ++a) {
            double bracket = lam[a];
            for (std::size_t b = 0; b < m; ++b) bracket += A[a][b] * z[b];
            dz[a] = z[a] * bracket;
        }
    };
}

struct GeneralPrepared {
    std::vector<std::string> labels;   // variables, then augmented functions
    std::vector<long> slot;            // per function: state index or -1
    std::size_t dim = 0;               // n_x + number of augmented functions
    Rhs rhs;
};

GeneralPrepared build_general(const GeneralSystem& sys) {
    require_valid_general(sys);
    const std::size_t n_x = sys.var_count();
    const std::size_t n_f = sys.function_count();

    auto normalize = [&](const std::vector<Term>& terms) {
        std::vector<Term> out;
        out.reserve(terms.size());
        for (const Term& t : terms) {
            Term c = t;
            c.x_exponents.resize(n_x, Rational(0));
            c.f_exponents.resize(n_f, Rational(0));
            out.push_back(std::move(c));
        }
        return out;
    };

    GeneralPrepared prep;
    prep.labels = sys.variables;
    prep.slot.assign(n_f, -1);
    std::vector<std::vector<Term>> eqs(n_x);
    for (std::size_t s = 0; s < n_x; ++s) eqs[s] = normalize(sys.equations[s]);
    std::vector<std::vector<std::vector<Term>>> der(n_f);
    std::size_t dim = n_x;
    for (std::size_t u = 0; u < n_f; ++u) {
        der[u].resize(n_x);
        for (std::size_t s = 0; s < sys.functions[u].derivatives.size(); ++s) {
            der[u][s] = normalize(sys.functions[u].derivatives[s]);
        }
        if (sys.functions[u].evaluator.kind == EvaluatorKind::OdeAugmented) {
            prep.slot[u] = static_cast<long>(dim++);
            prep.labels.push_back(sys.functions[u].name);
        }
    }
    prep.dim = dim;

    const std::vector<FunctionDef> functions = sys.functions;
    const std::vector<long> slot = prep.slot;
    prep.rhs = [n_x, n_f, eqs, der, slot, functions](const std::vector<double>& state,
                                                     std::vector<double>& dstate) {
        const std::vector<double> x(state.begin(), state.begin() + static_cast<long>(n_x));
        std::vector<double> fv(n_f);
        for (std::size_t u = 0; u < n_f; ++u) {
            fv[u] = slot[u] >= 0 ? state[static_cast<std::size_t>(slot[u])]
                                 : eval_function(functions[u], x);
        }
        std::fill(dstate.begin(), dstate.end(), 0.0);
        for (std::size_t s = 0; s < n_x; ++s) {
            for (const Term& t : eqs[s]) dstate[s] += term_product(t, x, fv);
        }
        for (std::size_t u = 0; u < n_f; ++u) {
            if (slot[u] < 0) continue;
            double df = 0.0;
            for (std::size_t s = 0; s < n_x; ++s) {
                if (der[u][s].empty()) continue;
                double partial = 0.0;
                for (const Term& t : der[u][s]) partial += term_product(t, x, fv);
                df += partial * dstate[s];
            }
            dstate[static_cast<std::size_t>(slot[u])] = df;
        }
    };
    return prep;
}

} // namespace

std::vector<double> eval_rhs(const QPSystem& sys, const std::vector<double>& state) {
    QPSystem clean = require_valid(sys);
    if (state.size() != clean.var_count()) {
        throw ValidationError("state must have one entry per variable");
    }
    std::vector<double> out(state.size());
    build_qp_rhs(clean)(state, out);
    return out;
}

std::vector<double> eval_rhs(const LVSystem& sys, const std::vector<double>& state) {
    check_lv_shape(sys);
    if (state.size() != sys.dim()) {
        throw ValidationError("state must have one entry per LV variable");
    }
    std::vector<double> out(state.size());
    build_lv_rhs(sys)(state, out);
    return out;
}

std::vector<double> eval_rhs(const GeneralSystem& sys, const std::vector<double>& state) {
    GeneralPrepared prep = build_general(sys);
    if (state.size() != prep.dim) {
        throw ValidationError("state must have " + std::to_string(prep.dim) +
                              " components (variables plus ODE-defined function values)");
    }
    std::vector<double> out(state.size());
    prep.rhs(state, out);
    return out;
}

Trajectory simulate(const QPSystem& sys, const IntegratorConfig& cfg) {
    if (sys.x0) {
        // Positivity is a domain question, not a structural one; report it
        // as such before structural validation sees the initial state.
        const std::size_t upto = std::min(sys.x0->size(), sys.variables.size());
        for (std::size_t k = 0; k < upto; ++k) {
            if (!((*sys.x0)[k] > 0.0) || !std::isfinite((*sys.x0)[k])) {
                throw DomainError("initial state component '" + sys.variables[k] +
                                  "' must be positive, got " + fmt_double((*sys.x0)[k]));
            }
        }
    }
    QPSystem clean = require_valid(sys);
    if (!clean.x0) throw ValidationError("simulation requires an initial state");
    return run_rk4(clean.variables, *clean.x0, build_qp_rhs(clean), cfg, clean.var_count());
}

Trajectory simulate(const LVSystem& sys, const IntegratorConfig& cfg) {
    check_lv_shape(sys);
    const std::size_t m = sys.dim();
    if (!sys.z0) throw ValidationError("simulation requires an initial state");
    if (sys.z0->size() != m) throw ValidationError("initial state must have one entry per variable");
    std::vector<std::string> labels;
    labels.reserve(m);
    for (std::size_t j = 0; j < m; ++j) labels.push_back("z" + std::to_string(j + 1));
    return run_rk4(std::move(labels), *sys.z0, build_lv_rhs(sys), cfg, m);
}

Trajectory simulate(const GeneralSystem& sys, const IntegratorConfig& cfg) {
    GeneralPrepared prep = build_general(sys);
    if (!sys.x0) throw ValidationError("simulation requires an initial state");
    std::vector<double> start = *sys.x0;
    start.resize(prep.dim, 0.0);
    for (std::size_t u = 0; u < sys.functions.size(); ++u) {
        if (prep.slot[u] < 0) continue;
        if (!sys.functions[u].f0) {
            throw ValidationError("function '" + sys.functions[u].name +
                                  "' has no closed-form evaluator and no initial value f0");
        }
        start[static_cast<std::size_t>(prep.slot[u])] = *sys.functions[u].f0;
    }
    return run_rk4(prep.labels, start, prep.rhs, cfg, sys.var_count());
}

std::vector<double> diffeo_forward(const ExpandedMap& map, const std::vector<double>& state) {
    const std::size_t m = map.B_full.rows();
    if (map.B_full.cols() != m || map.dummy_count > m) {
        throw ValidationError("expanded exponent matrix must be square");
    }
    const std::size_t n = m - map.dummy_count;
    if (state.size() != n) {
        throw ValidationError("state must have " + std::to_string(n) + " components");
    }
    std::vector<double> padded = state;
    padded.resize(m, 1.0);
    return monomial_values(map.B_full, padded);
}

std::vector<double> diffeo_inverse(const ExpandedMap& map, const std::vector<double>& z,
                                   double tol) {
    const std::size_t m = map.B_full.rows();
    if (map.B_full.cols() != m || map.dummy_count > m) {
        throw ValidationError("expanded exponent matrix must be square");
    }
    if (z.size() != m) {
        throw ValidationError("monomial vector must have " + std::to_string(m) + " components");
    }
    for (double v : z) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw DomainError("monomial values must be positive to invert the embedding");
        }
    }
    const std::vector<std::vector<double>> W = map.B_full.inverse().to_doubles();
    std::vector<double> full(m);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (W[i][j] != 0.0) acc += W[i][j] * std::log(z[j]);
        }
        full[i] = std::exp(acc);
    }
    const std::size_t n = m - map.dummy_count;
    for (std::size_t k = n; k < m; ++k) {
        if (std::fabs(full[k] - 1.0) > tol) {
            throw DomainError("the point is off the embedding manifold: dummy component " +
                              std::to_string(k - n) + " recovers to " + fmt_double(full[k]));
        }
    }
    full.resize(n);
    return full;
}

double max_relative_deviation(const std::vector<std::vector<double>>& a,
                              const std::vector<std::vector<double>>& b,
                              double floor) {
    if (a.size() != b.size()) {
        throw ValidationError("state sequences must have the same length");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != b[i].size()) {
            throw ValidationError("state sequences must have the same width");
        }
        for (std::size_t k = 0; k < a[i].size(); ++k) {
            double dev = std::fabs(a[i][k] - b[i][k]) / std::max(std::fabs(b[i][k]), floor);
            worst = std::max(worst, dev);
        }
    }
    return worst;
}

namespace {

constexpr double kDeviationFloor = 1e-12;

void note_config(VerifyReport& rep, const IntegratorConfig& cfg) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "t in [%g, %g], dt = %g", cfg.t0, cfg.t1, cfg.dt);
    rep.notes.emplace_back(buf);
}

void absorb_truncation(VerifyReport& rep, const Trajectory& traj, const std::string& which) {
    if (!traj.truncated) return;
    rep.truncated = true;
    if (!rep.truncated_at || *traj.truncated_at < *rep.truncated_at) {
        rep.truncated_at = traj.truncated_at;
    }
    rep.notes.push_back(which + " trajectory truncated at t = " +
                        fmt_double(*traj.truncated_at));
}

} // namespace

VerifyReport verify_equivalence(const QPSystem& glv, const IntegratorConfig& cfg) {
    QPSystem clean = require_valid(glv);
    if (!clean.x0) throw ValidationError("verification requires an initial state");
    LVSystem lv = lv_embed(clean);

    Trajectory tg = simulate(clean, cfg);
    Trajectory tl = simulate(lv, cfg);

    VerifyReport rep;
    note_config(rep, cfg);
    absorb_truncation(rep, tg, "GLV");
    absorb_truncation(rep, tl, "LV");

    const std::size_t samples = std::min(tg.states.size(), tl.states.size());
    const std::size_t m = lv.dim();
    std::vector<double> worst(m, 0.0);
    for (std::size_t i = 0; i < samples; ++i) {
        std::vector<double> mapped = monomial_values(clean.B, tg.states[i]);
        for (std::size_t j = 0; j < m; ++j) {
            double dev = std::fabs(tl.states[i][j] - mapped[j]) /
                         std::max(std::fabs(mapped[j]), kDeviationFloor);
            worst[j] = std::max(worst[j], dev);
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        rep.per_variable.emplace_back(tl.labels[j], worst[j]);
        rep.max_rel_dev = std::max(rep.max_rel_dev, worst[j]);
    }
    rep.compared_samples = samples;
    rep.notes.push_back("compared " + std::to_string(m) + " LV variables against the "
                        "quasimonomial map of the GLV trajectory");
    return rep;
}

VerifyReport verify_equivalence(const GeneralSystem& sys, const AuxSpec& spec,
                                const IntegratorConfig& cfg) {
    if (!sys.x0) throw ValidationError("verification requires an initial state");
    RecastResult rc = recast(sys, spec);

    Trajectory to = simulate(sys, cfg);
    Trajectory tg = simulate(rc.glv, cfg);
    Trajectory tl = simulate(rc.lv, cfg);

    VerifyReport rep;
    note_config(rep, cfg);
    absorb_truncation(rep, to, "original");
    absorb_truncation(rep, tg, "GLV");
    absorb_truncation(rep, tl, "LV");

    const std::size_t n_x = sys.var_count();
    const std::size_t n_f = sys.function_count();
    const std::size_t m = rc.lv.dim();
    std::size_t samples = std::min({to.states.size(), tg.states.size(), tl.states.size()});

    std::vector<long> slot(n_f, -1);
    {
        std::size_t pos = n_x;
        for (std::size_t u = 0; u < n_f; ++u) {
            if (sys.functions[u].evaluator.kind == EvaluatorKind::OdeAugmented) {
                slot[u] = static_cast<long>(pos++);
            }
        }
    }

    std::vector<double> worst_x(n_x, 0.0);
    std::vector<double> worst_z(m, 0.0);
    std::size_t compared = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const std::vector<double>& orig = to.states[i];
        const std::vector<double> x(orig.begin(), orig.begin() + static_cast<long>(n_x));
        for (std::size_t k = 0; k < n_x; ++k) {
            double dev = std::fabs(tg.states[i][k] - orig[k]) /
                         std::max(std::fabs(orig[k]), kDeviationFloor);
            worst_x[k] = std::max(worst_x[k], dev);
        }
        bool row_ok = true;
        std::vector<double> fv(n_f);
        for (std::size_t u = 0; u < n_f && row_ok; ++u) {
            try {
                fv[u] = slot[u] >= 0 ? orig[static_cast<std::size_t>(slot[u])]
                                     : eval_function(sys.functions[u], x);
            } catch (const DomainError&) {
                row_ok = false;
            }
        }
        if (row_ok) {
            for (std::size_t j = 0; j < m && row_ok; ++j) {
                double mapped = 1.0;
                const std::vector<Rational>& key = rc.xf_monomials[j].exponents;
                try {
                    for (std::size_t k = 0; k < n_x; ++k) {
                        if (!key[k].is_zero()) mapped *= pow_rational(x[k], key[k]);
                    }
                    for (std::size_t u = 0; u < n_f; ++u) {
                        if (!key[n_x + u].is_zero()) mapped *= pow_rational(fv[u], key[n_x + u]);
                    }
                } catch (const DomainError&) {
                    row_ok = false;
                    break;
                }
                double dev = std::fabs(tl.states[i][j] - mapped) /
                             std::max(std::fabs(mapped), kDeviationFloor);
                worst_z[j] = std::max(worst_z[j], dev);
            }
        }
        if (!row_ok) {
            rep.truncated = true;
            if (!rep.truncated_at || to.times[i] < *rep.truncated_at) {
                rep.truncated_at = to.times[i];
            }
            rep.notes.push_back("monomial map left its domain at t = " +
                                fmt_double(to.times[i]));
            break;
        }
        ++compared;
    }

    for (std::size_t k = 0; k < n_x; ++k) {
        rep.per_variable.emplace_back(sys.variables[k], worst_x[k]);
        rep.max_rel_dev = std::max(rep.max_rel_dev, worst_x[k]);
    }
    for (std::size_t j = 0; j < m; ++j) {
        rep.per_variable.emplace_back(tl.labels[j], worst_z[j]);
        rep.max_rel_dev = std::max(rep.max_rel_dev, worst_z[j]);
    }
    rep.compared_samples = compared;
    rep.notes.push_back("compared the embedded x variables against the original trajectory "
                        "and the LV variables against the (x, f) monomial map");
    return rep;
}

} // namespace lvnf
