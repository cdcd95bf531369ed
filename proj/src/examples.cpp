#include "lvnf/examples.hpp"

#include <cmath>

namespace lvnf::examples {

namespace {

Rational R(double v) { return Rational::from_double(v); }

Term term(double coeff, std::vector<Rational> xe, std::vector<Rational> fe) {
    Term t;
    t.coefficient = R(coeff);
    t.x_exponents = std::move(xe);
    t.f_exponents = std::move(fe);
    return t;
}

} // namespace

GeneralSystem enzyme_system(double a, double b, double c, double d) {
    GeneralSystem sys;
    sys.variables = {"x"};

    FunctionDef f;
    f.name = "f";
    f.evaluator.kind = EvaluatorKind::InversePolynomial;
    f.evaluator.terms = {
        term(c, {Rational(0)}, {}),
        term(1.0, {Rational(1)}, {}),
        term(d, {Rational(2)}, {}),
    };
    f.derivatives = {{
        term(-1.0, {Rational(0)}, {Rational(2)}),
        term(-2.0 * d, {Rational(1)}, {Rational(2)}),
    }};
    sys.functions = {f};

    sys.equations = {{
        term(-a, {Rational(1)}, {Rational(1)}),
        term(-b, {Rational(2)}, {Rational(1)}),
    }};
    sys.x0 = std::vector<double>{1.0};
    return sys;
}

GeneralSystem morse_system(double d, double alpha, double c) {
    const double b = std::exp(alpha * c);
    const double a = -2.0 * d * b * alpha;

    GeneralSystem sys;
    sys.variables = {"x", "y"};

    FunctionDef f;
    f.name = "f";
    f.evaluator.kind = EvaluatorKind::ExpAffine;
    f.evaluator.constant = 0.0;
    f.evaluator.linear = {-alpha, 0.0};
    f.derivatives = {
        {term(-alpha, {Rational(0), Rational(0)}, {Rational(1)})},
        {},
    };
    sys.functions = {f};

    sys.equations = {
        {
            term(1.0, {Rational(0), Rational(1)}, {Rational(0)}),
            term(-c, {Rational(0), Rational(0)}, {Rational(0)}),
        },
        {
            term(a, {Rational(0), Rational(0)}, {Rational(1)}),
            term(-a * b, {Rational(0), Rational(0)}, {Rational(2)}),
        },
    };
    sys.x0 = std::vector<double>{c + 0.1, c};
    return sys;
}

AuxSpec default_aux(const GeneralSystem& sys) {
    AuxSpec spec;
    for (const FunctionDef& f : sys.functions) {
        spec.by_function[f.name] = AuxTransform::identity(sys.var_count());
    }
    return spec;
}

} // namespace lvnf::examples
