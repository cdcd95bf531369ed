#pragma once

#include "lvnf/qp_system.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lvnf {

// One quasipolynomial term c * prod_k x_k^{x_exponents[k]} * prod_u f_u^{f_exponents[u]}
// of a general (possibly non-polynomial) ODE right-hand side. Coefficients are
// kept exact so bracket assembly is free of rounding.
struct Term {
    Rational coefficient;
    std::vector<Rational> x_exponents;  // size = variable count
    std::vector<Rational> f_exponents;  // size = function count (may be empty)

    friend bool operator==(const Term&, const Term&) = default;
};

// Closed-form catalog for the non-polynomial building blocks. Every kind
// evaluates at (state - offset); the offset is how a positivity translation
// rewrites a function without touching its shape.
enum class EvaluatorKind {
    ExpAffine,          // exp(constant + linear . (x - offset))
    SinAffine,          // sin(constant + linear . (x - offset))
    CosAffine,          // cos(constant + linear . (x - offset))
    InversePolynomial,  // 1 / P(x - offset)
    PolynomialPower,    // P(x - offset) ^ power
    OdeAugmented,       // no closed form; integrated alongside the state from f0
};

struct Evaluator {
    EvaluatorKind kind = EvaluatorKind::OdeAugmented;
    double constant = 0.0;            // affine kinds
    std::vector<double> linear;       // affine kinds; empty means all-zero
    std::vector<Term> terms;          // polynomial kinds; f_exponents must be zero
    Rational power = Rational(1);     // PolynomialPower
    std::vector<double> offset;       // all kinds; empty means no shift

    friend bool operator==(const Evaluator&, const Evaluator&) = default;
};

// A named non-polynomial function f(x) together with the quasipolynomial form
// of its partial derivatives: derivatives[s] holds d f / d x_s as terms over
// (x, f). This closure property is what makes the embedding possible.
struct FunctionDef {
    std::string name;
    Evaluator evaluator;
    std::vector<std::vector<Term>> derivatives;  // size = variable count
    std::optional<double> f0;  // initial value; required when no closed form

    friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

// General ODE system dx_s/dt = sum of Terms over (x, f).
struct GeneralSystem {
    std::vector<std::string> variables;
    std::vector<FunctionDef> functions;
    std::vector<std::vector<Term>> equations;  // size = variable count
    std::optional<std::vector<double>> x0;
    // Cumulative positivity translation already applied to this system
    // (new coordinates = original + shift); informational.
    std::optional<std::vector<double>> shift;

    std::size_t var_count() const { return variables.size(); }
    std::size_t function_count() const { return functions.size(); }
};

struct GeneralValidationReport {
    bool valid = false;
    std::vector<std::string> issues;
};

GeneralValidationReport validate_general(const GeneralSystem& sys);
void require_valid_general(const GeneralSystem& sys);  // throws ValidationError

// Choice of auxiliary variable for one function: y = f^q * prod_k x_k^{p[k]}.
// These choices form a group: compose(a, b) is "apply b, then a",
//     compose((p1,q1), (p2,q2)) = (p1 + q1 p2, q1 q2),
// with identity (0, 1) and inverse (-p/q, 1/q).
struct AuxTransform {
    std::vector<Rational> p;  // size = variable count
    Rational q = Rational(1); // must be nonzero

    static AuxTransform identity(std::size_t var_count);
    AuxTransform inverse() const;  // throws DomainError when q == 0

    friend bool operator==(const AuxTransform&, const AuxTransform&) = default;
};

AuxTransform compose(const AuxTransform& a, const AuxTransform& b);

// Per-function aux choices; functions not named get the default (p = 0, q = 1).
struct AuxSpec {
    std::map<std::string, AuxTransform> by_function;
};

struct EmbeddingResult {
    QPSystem glv;                               // over (x..., aux...) variables
    std::vector<Quasimonomial> xf_monomials;    // per B row: exponents in (x..., f...) space
    std::vector<std::string> aux_names;         // per function, in function order
};

// Introduces one auxiliary variable per function and rewrites the system in
// GLV form over (x, aux). Bracket rows are sorted lexicographically by their
// (x, f) exponents, which is independent of the aux choice; an all-zero
// exponent row is routed into lambda. When x0 is present the aux initial
// values are f(x0)^q * prod x0^p.
EmbeddingResult introduce_aux(const GeneralSystem& sys, const AuxSpec& spec);

struct RecastResult {
    QPSystem glv;
    std::vector<Quasimonomial> xf_monomials;
    std::vector<std::string> aux_names;
    LVSystem lv;
};

// introduce_aux followed by lv_embed.
RecastResult recast(const GeneralSystem& sys, const AuxSpec& spec);

struct PositivityReport {
    bool positive = false;
    std::vector<std::string> issues;
};

// Checks that the initial state exists, is strictly positive, and that every
// function value at the initial state is strictly positive (closed form or f0).
PositivityReport check_positivity(const GeneralSystem& sys);

// Translates to coordinates x_new = x + shift. Polynomial terms are
// re-expanded exactly (binomially); evaluators absorb the shift in their
// offset; the initial state and the cumulative shift record move along.
// Throws ValidationError when a shifted variable carries a negative or
// fractional exponent, since then the translation does not preserve the
// quasipolynomial term format.
GeneralSystem positivity_translate(const GeneralSystem& sys,
                                   const std::vector<double>& shift);

// Closed-form function value; throws DomainError for OdeAugmented or when the
// state hits a pole / invalid power domain.
double eval_function(const FunctionDef& f, const std::vector<double>& state);

// base^e with exact-rational exponent semantics: integer exponents follow
// std::pow sign rules, fractional exponents require a positive base
// (zero allowed for positive exponents). Throws DomainError otherwise.
double pow_rational(double base, const Rational& e);

} // namespace lvnf
