#include "lvnf/nonpoly.hpp"

#include "lvnf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lvnf {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::vector<Rational> padded(const std::vector<Rational>& v, std::size_t n) {
    std::vector<Rational> out(n);
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

bool all_zero(const std::vector<Rational>& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r.is_zero(); });
}

// Exact integer power of a rational.
Rational rational_pow(const Rational& base, long e) {
    Rational out(1);
    for (long i = 0; i < e; ++i) out *= base;
    return out;
}

long small_nonneg_integer(const Rational& r, const char* what) {
    if (!r.is_integer() || r.is_negative() || r.num() > 4096) {
        throw ValidationError(std::string(what) +
                              " must be a small non-negative integer, got " + r.str());
    }
    return r.num().convert_to<long>();
}

// Row of binomial coefficients C(n, 0..n), exact.
std::vector<Rational> binomial_row(long n) {
    std::vector<Rational> row(static_cast<std::size_t>(n) + 1);
    BigInt c = 1;
    for (long r = 0; r <= n; ++r) {
        row[static_cast<std::size_t>(r)] = Rational(c);
        c = c * (n - r) / (r + 1);
    }
    return row;
}

void check_term(const Term& t, std::size_t n_x, std::size_t n_f,
                const std::string& where, std::vector<std::string>& issues) {
    if (!t.x_exponents.empty() && t.x_exponents.size() != n_x) {
        issues.push_back(where + ": term has " + std::to_string(t.x_exponents.size()) +
                         " variable exponents, expected " + std::to_string(n_x));
    }
    if (!t.f_exponents.empty() && t.f_exponents.size() != n_f) {
        issues.push_back(where + ": term has " + std::to_string(t.f_exponents.size()) +
                         " function exponents, expected " + std::to_string(n_f));
    }
}

Term normalized_term(const Term& t, std::size_t n_x, std::size_t n_f) {
    return Term{t.coefficient, padded(t.x_exponents, n_x), padded(t.f_exponents, n_f)};
}

double affine_argument(const Evaluator& ev, const std::vector<double>& state) {
    double acc = ev.constant;
    for (std::size_t k = 0; k < ev.linear.size(); ++k) {
        double shifted = state[k] - (k < ev.offset.size() ? ev.offset[k] : 0.0);
        acc += ev.linear[k] * shifted;
    }
    return acc;
}

double poly_value(const Evaluator& ev, const std::vector<double>& state) {
    double acc = 0.0;
    for (const Term& t : ev.terms) {
        double prod = t.coefficient.to_double();
        for (std::size_t k = 0; k < t.x_exponents.size(); ++k) {
            if (t.x_exponents[k].is_zero()) continue;
            double shifted = state[k] - (k < ev.offset.size() ? ev.offset[k] : 0.0);
            prod *= pow_rational(shifted, t.x_exponents[k]);
        }
        acc += prod;
    }
    return acc;
}

// Names for auxiliary variables: y, z, w, v, u, then y1, z1, ...
std::vector<std::string> pick_aux_names(const GeneralSystem& sys) {
    std::set<std::string> taken(sys.variables.begin(), sys.variables.end());
    for (const FunctionDef& f : sys.functions) taken.insert(f.name);
    static const char* pool[] = {"y", "z", "w", "v", "u"};
    std::vector<std::string> names;
    names.reserve(sys.functions.size());
    for (std::size_t u = 0; u < sys.functions.size(); ++u) {
        for (long round = 0;; ++round) {
            bool found = false;
            for (const char* base : pool) {
                std::string candidate = round ? base + std::to_string(round) : base;
                if (!taken.count(candidate)) {
                    taken.insert(candidate);
                    names.push_back(std::move(candidate));
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
    }
    return names;
}

// Value of function u at the initial state: closed form when available,
// otherwise the recorded f0.
double function_initial_value(const FunctionDef& f, const std::vector<double>& x0) {
    if (f.evaluator.kind == EvaluatorKind::OdeAugmented) {
        if (!f.f0) {
            throw ValidationError("function '" + f.name +
                                  "' has no closed-form evaluator and no initial value f0");
        }
        return *f.f0;
    }
    return eval_function(f, x0);
}

// Expands one term's x-part around x -> x - k (so the system reads in the
// shifted coordinates), keeping the f-part untouched. k entries are exact.
// merged: (x_exponents | f_exponents) -> coefficient.
void expand_translated_term(const Term& t, const std::vector<Rational>& k,
                            std::map<std::vector<Rational>, Rational>& merged) {
    std::size_t n_x = k.size();
    // partial products: exponent vector so far (x part only) -> coefficient
    std::map<std::vector<Rational>, Rational> partial;
    partial.emplace(std::vector<Rational>(n_x), t.coefficient);
    for (std::size_t s = 0; s < n_x; ++s) {
        const Rational& e = t.x_exponents[s];
        if (e.is_zero()) continue;
        if (k[s].is_zero()) {
            std::map<std::vector<Rational>, Rational> next;
            for (auto& [xe, c] : partial) {
                std::vector<Rational> nx = xe;
                nx[s] = e;
                next.emplace(std::move(nx), c);
            }
            partial = std::move(next);
            continue;
        }
        if (!e.is_integer() || e.is_negative()) {
            throw ValidationError(
                "translation does not preserve the quasipolynomial term format: variable " +
                std::to_string(s) + " carries exponent " + e.str());
        }
        long ie = small_nonneg_integer(e, "translated exponent");
        std::vector<Rational> binom = binomial_row(ie);
        std::map<std::vector<Rational>, Rational> next;
        for (auto& [xe, c] : partial) {
            for (long r = 0; r <= ie; ++r) {
                Rational coeff = c * binom[static_cast<std::size_t>(r)] *
                                 rational_pow(-k[s], ie - r);
                if (coeff.is_zero()) continue;
                std::vector<Rational> nx = xe;
                nx[s] = Rational(r);
                next[std::move(nx)] += coeff;
            }
        }
        partial = std::move(next);
    }
    for (auto& [xe, c] : partial) {
        if (c.is_zero()) continue;
        std::vector<Rational> key = xe;
        key.insert(key.end(), t.f_exponents.begin(), t.f_exponents.end());
        merged[std::move(key)] += c;
    }
}

std::vector<Term> translate_terms(const std::vector<Term>& terms,
                                  const std::vector<Rational>& k, std::size_t n_f) {
    std::map<std::vector<Rational>, Rational> merged;
    for (const Term& t : terms) {
        expand_translated_term(normalized_term(t, k.size(), n_f), k, merged);
    }
    std::vector<Term> out;
    out.reserve(merged.size());
    for (auto& [key, c] : merged) {
        if (c.is_zero()) continue;
        Term t;
        t.coefficient = c;
        t.x_exponents.assign(key.begin(), key.begin() + static_cast<long>(k.size()));
        t.f_exponents.assign(key.begin() + static_cast<long>(k.size()), key.end());
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

double pow_rational(double base, const Rational& e) {
    if (e.is_zero()) return 1.0;
    if (e.is_integer()) {
        if (base == 0.0 && e.is_negative()) {
            throw DomainError("zero raised to a negative power");
        }
        return std::pow(base, e.num().convert_to<double>());
    }
    if (base > 0.0) return std::pow(base, e.to_double());
    if (base == 0.0 && !e.is_negative()) return 0.0;
    throw DomainError("fractional power " + e.str() + " of a non-positive value " +
                      fmt_double(base));
}

double eval_function(const FunctionDef& f, const std::vector<double>& state) {
    const Evaluator& ev = f.evaluator;
    if (ev.linear.size() > state.size() || ev.offset.size() > state.size()) {
        throw ValidationError("function '" + f.name +
                              "' references more variables than the state provides");
    }
    switch (ev.kind) {
    case EvaluatorKind::ExpAffine:
        return std::exp(affine_argument(ev, state));
    case EvaluatorKind::SinAffine:
        return std::sin(affine_argument(ev, state));
    case EvaluatorKind::CosAffine:
        return std::cos(affine_argument(ev, state));
    case EvaluatorKind::InversePolynomial: {
        double denom = poly_value(ev, state);
        if (denom == 0.0) {
            throw DomainError("function '" + f.name + "' hits a pole at the given state");
        }
        return 1.0 / denom;
    }
    case EvaluatorKind::PolynomialPower:
        return pow_rational(poly_value(ev, state), ev.power);
    case EvaluatorKind::OdeAugmented:
        throw DomainError("function '" + f.name + "' has no closed-form evaluator");
    }
    throw InternalError("unhandled evaluator kind");
}

GeneralValidationReport validate_general(const GeneralSystem& sys) {
    GeneralValidationReport rep;
    std::size_t n_x = sys.var_count();
    std::size_t n_f = sys.function_count();

    std::set<std::string> names;
    for (const std::string& v : sys.variables) {
        if (v.empty()) rep.issues.push_back("variable names must be non-empty");
        if (!names.insert(v).second) rep.issues.push_back("variable names are not distinct");
    }
    for (const FunctionDef& f : sys.functions) {
        if (f.name.empty()) rep.issues.push_back("function names must be non-empty");
        if (!names.insert(f.name).second) {
            rep.issues.push_back("function name '" + f.name +
                                 "' collides with another name");
        }
    }
    if (n_x == 0) rep.issues.push_back("the system must have at least one variable");
    if (sys.equations.size() != n_x) {
        rep.issues.push_back("expected " + std::to_string(n_x) + " equations, got " +
                             std::to_string(sys.equations.size()));
    }
    for (std::size_t s = 0; s < sys.equations.size(); ++s) {
        for (const Term& t : sys.equations[s]) {
            check_term(t, n_x, n_f, "equation " + std::to_string(s), rep.issues);
        }
    }
    for (const FunctionDef& f : sys.functions) {
        if (!f.derivatives.empty() && f.derivatives.size() != n_x) {
            rep.issues.push_back("function '" + f.name + "' has " +
                                 std::to_string(f.derivatives.size()) +
                                 " derivative lists, expected " + std::to_string(n_x));
            continue;
        }
        for (std::size_t s = 0; s < f.derivatives.size(); ++s) {
            for (const Term& t : f.derivatives[s]) {
                check_term(t, n_x, n_f, "derivative of '" + f.name + "' by variable " +
                           std::to_string(s), rep.issues);
            }
        }
        const Evaluator& ev = f.evaluator;
        if (!ev.linear.empty() && ev.linear.size() != n_x) {
            rep.issues.push_back("function '" + f.name +
                                 "' evaluator linear part must have one entry per variable");
        }
        if (!ev.offset.empty() && ev.offset.size() != n_x) {
            rep.issues.push_back("function '" + f.name +
                                 "' evaluator offset must have one entry per variable");
        }
        if (ev.kind == EvaluatorKind::InversePolynomial ||
            ev.kind == EvaluatorKind::PolynomialPower) {
            for (const Term& t : ev.terms) {
                if (!all_zero(t.f_exponents)) {
                    rep.issues.push_back("function '" + f.name +
                                         "' evaluator polynomial must not reference functions");
                    break;
                }
                check_term(t, n_x, 0, "evaluator of '" + f.name + "'", rep.issues);
            }
        }
    }
    if (sys.x0 && sys.x0->size() != n_x) {
        rep.issues.push_back("initial state must have one entry per variable");
    }
    if (sys.shift && sys.shift->size() != n_x) {
        rep.issues.push_back("shift record must have one entry per variable");
    }
    rep.valid = rep.issues.empty();
    return rep;
}

void require_valid_general(const GeneralSystem& sys) {
    GeneralValidationReport rep = validate_general(sys);
    if (!rep.valid) throw ValidationError(rep.issues.front());
}

AuxTransform AuxTransform::identity(std::size_t var_count) {
    return AuxTransform{std::vector<Rational>(var_count), Rational(1)};
}

AuxTransform AuxTransform::inverse() const {
    if (q.is_zero()) throw DomainError("aux exponent q must be nonzero");
    AuxTransform out;
    out.q = q.reciprocal();
    out.p.reserve(p.size());
    for (const Rational& pi : p) out.p.push_back(-pi / q);
    return out;
}

AuxTransform compose(const AuxTransform& a, const AuxTransform& b) {
    if (a.p.size() != b.p.size()) {
        throw ValidationError("aux transform dimensions differ");
    }
    AuxTransform out;
    out.q = a.q * b.q;
    out.p.reserve(a.p.size());
    for (std::size_t k = 0; k < a.p.size(); ++k) {
        out.p.push_back(a.p[k] + a.q * b.p[k]);
    }
    return out;
}

EmbeddingResult introduce_aux(const GeneralSystem& sys, const AuxSpec& spec) {
    require_valid_general(sys);
    const std::size_t n_x = sys.var_count();
    const std::size_t n_f = sys.function_count();
    const std::size_t n = n_x + n_f;

    // Resolve per-function aux transforms, defaulting to (p = 0, q = 1).
    std::vector<AuxTransform> aux(n_f, AuxTransform::identity(n_x));
    for (const auto& [name, tr] : spec.by_function) {
        auto it = std::find_if(sys.functions.begin(), sys.functions.end(),
                               [&](const FunctionDef& f) { return f.name == name; });
        if (it == sys.functions.end()) {
            throw ValidationError("aux spec names unknown function '" + name + "'");
        }
        if (tr.q.is_zero()) {
            throw ValidationError("aux exponent q must be nonzero for function '" + name + "'");
        }
        if (!tr.p.empty() && tr.p.size() != n_x) {
            throw ValidationError("aux exponent vector p for function '" + name +
                                  "' must have one entry per variable");
        }
        AuxTransform fixed = tr;
        if (fixed.p.empty()) fixed.p.assign(n_x, Rational(0));
        aux[static_cast<std::size_t>(it - sys.functions.begin())] = std::move(fixed);
    }

    // Normalized copies of the quasipolynomial data.
    std::vector<std::vector<Term>> eqs(n_x);
    for (std::size_t s = 0; s < n_x; ++s) {
        eqs[s].reserve(sys.equations[s].size());
        for (const Term& t : sys.equations[s]) eqs[s].push_back(normalized_term(t, n_x, n_f));
    }
    std::vector<std::vector<std::vector<Term>>> der(n_f,
        std::vector<std::vector<Term>>(n_x));
    for (std::size_t u = 0; u < n_f; ++u) {
        for (std::size_t s = 0; s < sys.functions[u].derivatives.size(); ++s) {
            for (const Term& t : sys.functions[u].derivatives[s]) {
                der[u][s].push_back(normalized_term(t, n_x, n_f));
            }
        }
    }

    // Bracket assembly: per equation i, coefficients over distinct (x, f)
    // exponent rows; the all-zero row is a constant and belongs to lambda.
    std::map<std::vector<Rational>, std::vector<Rational>> cols;
    RationalMatrix lambda(n, 1);
    auto add = [&](std::size_t i, const Rational& c, std::vector<Rational> xe,
                   const std::vector<Rational>& fe) {
        if (c.is_zero()) return;
        if (all_zero(xe) && all_zero(fe)) {
            lambda(i, 0) += c;
            return;
        }
        xe.insert(xe.end(), fe.begin(), fe.end());
        auto it = cols.find(xe);
        if (it == cols.end()) {
            it = cols.emplace(std::move(xe), std::vector<Rational>(n)).first;
        }
        it->second[i] += c;
    };

    // dx_s/dt = x_s * sum_t c_t x^{i_t - delta_s} f^{j_t}
    for (std::size_t s = 0; s < n_x; ++s) {
        for (const Term& t : eqs[s]) {
            std::vector<Rational> xe = t.x_exponents;
            xe[s] -= Rational(1);
            add(s, t.coefficient, std::move(xe), t.f_exponents);
        }
    }
    // dy_u/dt = y_u * [ sum_s p_us (dx_s/dt)/x_s + q_u (df_u/dt)/f_u ]
    for (std::size_t u = 0; u < n_f; ++u) {
        const std::size_t i = n_x + u;
        for (std::size_t s = 0; s < n_x; ++s) {
            if (aux[u].p[s].is_zero()) continue;
            for (const Term& t : eqs[s]) {
                std::vector<Rational> xe = t.x_exponents;
                xe[s] -= Rational(1);
                add(i, aux[u].p[s] * t.coefficient, std::move(xe), t.f_exponents);
            }
        }
        for (std::size_t s = 0; s < n_x; ++s) {
            for (const Term& d : der[u][s]) {
                for (const Term& t : eqs[s]) {
                    std::vector<Rational> xe(n_x);
                    for (std::size_t k = 0; k < n_x; ++k) {
                        xe[k] = d.x_exponents[k] + t.x_exponents[k];
                    }
                    std::vector<Rational> fe(n_f);
                    for (std::size_t w = 0; w < n_f; ++w) {
                        fe[w] = d.f_exponents[w] + t.f_exponents[w];
                    }
                    fe[u] -= Rational(1);
                    add(i, aux[u].q * d.coefficient * t.coefficient, std::move(xe), fe);
                }
            }
        }
    }

    // Cancellation may zero out a whole column; those rows carry nothing.
    for (auto it = cols.begin(); it != cols.end();) {
        if (all_zero(it->second)) it = cols.erase(it);
        else ++it;
    }
    if (cols.empty()) {
        throw ValidationError(
            "every bracket term is constant; the system is already linear in "
            "per-capita form and has no quasimonomial to embed");
    }

    const std::size_t m = cols.size();
    EmbeddingResult result;
    result.aux_names = pick_aux_names(sys);
    result.glv.variables = sys.variables;
    result.glv.variables.insert(result.glv.variables.end(), result.aux_names.begin(),
                                result.aux_names.end());
    result.glv.lambda = lambda;
    result.glv.A = RationalMatrix(n, m);
    result.glv.B = RationalMatrix(m, n);
    result.xf_monomials.reserve(m);

    std::size_t r = 0;
    for (const auto& [key, coeffs] : cols) {
        // key = (x exponents | f exponents) in the original mixed space.
        result.xf_monomials.push_back(Quasimonomial{key});
        for (std::size_t k = 0; k < n_x; ++k) {
            Rational e = key[k];
            for (std::size_t u = 0; u < n_f; ++u) {
                e -= key[n_x + u] * aux[u].p[k] / aux[u].q;
            }
            result.glv.B(r, k) = std::move(e);
        }
        for (std::size_t u = 0; u < n_f; ++u) {
            result.glv.B(r, n_x + u) = key[n_x + u] / aux[u].q;
        }
        for (std::size_t i = 0; i < n; ++i) result.glv.A(i, r) = coeffs[i];
        ++r;
    }

    if (sys.x0) {
        for (std::size_t k = 0; k < n_x; ++k) {
            if (!((*sys.x0)[k] > 0.0)) {
                throw DomainError("initial value of variable '" + sys.variables[k] +
                                  "' is not positive; apply a positivity translation first");
            }
        }
        std::vector<double> full = *sys.x0;
        for (std::size_t u = 0; u < n_f; ++u) {
            double fv = function_initial_value(sys.functions[u], *sys.x0);
            double y0 = pow_rational(fv, aux[u].q);
            for (std::size_t k = 0; k < n_x; ++k) {
                y0 *= pow_rational((*sys.x0)[k], aux[u].p[k]);
            }
            if (!(y0 > 0.0)) {
                throw DomainError("initial value of auxiliary variable '" +
                                  result.aux_names[u] + "' (" + fmt_double(y0) +
                                  ") is not positive; translate the system to a positive "
                                  "range first");
            }
            full.push_back(y0);
        }
        result.glv.x0 = std::move(full);
    }
    return result;
}

RecastResult recast(const GeneralSystem& sys, const AuxSpec& spec) {
    EmbeddingResult emb = introduce_aux(sys, spec);
    RecastResult out;
    out.lv = lv_embed(emb.glv);
    out.glv = std::move(emb.glv);
    out.xf_monomials = std::move(emb.xf_monomials);
    out.aux_names = std::move(emb.aux_names);
    return out;
}

PositivityReport check_positivity(const GeneralSystem& sys) {
    require_valid_general(sys);
    PositivityReport rep;
    if (!sys.x0) {
        rep.issues.push_back("the system has no initial state to check");
        return rep;
    }
    for (std::size_t k = 0; k < sys.var_count(); ++k) {
        if (!((*sys.x0)[k] > 0.0)) {
            rep.issues.push_back("variable '" + sys.variables[k] +
                                 "' has non-positive initial value " +
                                 fmt_double((*sys.x0)[k]));
        }
    }
    for (const FunctionDef& f : sys.functions) {
        double value = 0.0;
        try {
            value = function_initial_value(f, *sys.x0);
        } catch (const Error& e) {
            rep.issues.push_back("function '" + f.name +
                                 "' cannot be evaluated at the initial state: " + e.what());
            continue;
        }
        if (!(value > 0.0)) {
            rep.issues.push_back("function '" + f.name + "' has non-positive value " +
                                 fmt_double(value) + " at the initial state");
        }
    }
    rep.positive = rep.issues.empty();
    return rep;
}

GeneralSystem positivity_translate(const GeneralSystem& sys,
                                   const std::vector<double>& shift) {
    require_valid_general(sys);
    const std::size_t n_x = sys.var_count();
    const std::size_t n_f = sys.function_count();
    if (shift.size() != n_x) {
        throw ValidationError("shift must have one entry per variable");
    }
    std::vector<Rational> k;
    k.reserve(n_x);
    for (double v : shift) k.push_back(Rational::from_double(v));

    GeneralSystem out = sys;
    for (std::size_t s = 0; s < n_x; ++s) {
        out.equations[s] = translate_terms(sys.equations[s], k, n_f);
    }
    for (std::size_t u = 0; u < n_f; ++u) {
        FunctionDef& f = out.functions[u];
        for (std::size_t s = 0; s < f.derivatives.size(); ++s) {
            f.derivatives[s] = translate_terms(f.derivatives[s], k, n_f);
        }
        if (f.evaluator.offset.empty()) f.evaluator.offset.assign(n_x, 0.0);
        for (std::size_t s = 0; s < n_x; ++s) f.evaluator.offset[s] += shift[s];
    }
    if (out.x0) {
        for (std::size_t s = 0; s < n_x; ++s) (*out.x0)[s] += shift[s];
    }
    if (!out.shift) out.shift = std::vector<double>(n_x, 0.0);
    for (std::size_t s = 0; s < n_x; ++s) (*out.shift)[s] += shift[s];
    return out;
}

} // namespace lvnf
