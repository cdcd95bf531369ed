#include "lvnf/json_io.hpp"

#include "lvnf/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace lvnf {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(std::string("malformed JSON: ") + e.what());
    }
}

const json& field(const json& j, const char* name) {
    if (!j.is_object()) throw ValidationError("expected a JSON object");
    auto it = j.find(name);
    if (it == j.end()) {
        throw ValidationError(std::string("missing field '") + name + "'");
    }
    return *it;
}

const json* optional_field(const json& j, const char* name) {
    if (!j.is_object()) throw ValidationError("expected a JSON object");
    auto it = j.find(name);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

double number_in(const json& j, const char* what) {
    if (!j.is_number()) {
        throw ValidationError(std::string(what) + " must be a JSON number");
    }
    return j.get<double>();
}

std::string string_in(const json& j, const char* what) {
    if (!j.is_string()) {
        throw ValidationError(std::string(what) + " must be a JSON string");
    }
    return j.get<std::string>();
}

const json& array_in(const json& j, const char* what) {
    if (!j.is_array()) {
        throw ValidationError(std::string(what) + " must be a JSON array");
    }
    return j;
}

// Exact rationals ("num/den" strings; numbers also accepted on input).
json rational_out(const Rational& r) { return r.str(); }

Rational rational_in(const json& j, const char* what) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()));
        if (j.is_number()) return Rational::from_double(j.get<double>());
    } catch (const Error&) {
        throw ValidationError(std::string(what) + " is not a valid rational: " + j.dump());
    }
    throw ValidationError(std::string(what) + " must be a rational string or number");
}

// Coefficients: JSON number when the exact value survives the double
// round-trip, "num/den" string otherwise.
json coefficient_out(const Rational& r) {
    if (r.fits_double()) return r.to_double();
    return r.str();
}

std::vector<double> doubles_in(const json& j, const char* what) {
    std::vector<double> out;
    for (const json& v : array_in(j, what)) out.push_back(number_in(v, what));
    return out;
}

json doubles_out(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

std::vector<std::string> strings_in(const json& j, const char* what) {
    std::vector<std::string> out;
    for (const json& v : array_in(j, what)) out.push_back(string_in(v, what));
    return out;
}

json column_out(const RationalMatrix& col, bool as_coefficient) {
    json arr = json::array();
    for (std::size_t i = 0; i < col.rows(); ++i) {
        arr.push_back(as_coefficient ? coefficient_out(col(i, 0)) : rational_out(col(i, 0)));
    }
    return arr;
}

RationalMatrix column_in(const json& j, const char* what) {
    const json& arr = array_in(j, what);
    RationalMatrix col(arr.size(), 1);
    for (std::size_t i = 0; i < arr.size(); ++i) col(i, 0) = rational_in(arr[i], what);
    return col;
}

json matrix_out(const RationalMatrix& m, bool as_coefficient) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            row.push_back(as_coefficient ? coefficient_out(m(i, j)) : rational_out(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RationalMatrix matrix_in(const json& j, const char* what, std::size_t forced_cols,
                         bool force_cols) {
    const json& rows = array_in(j, what);
    std::size_t cols = forced_cols;
    if (!force_cols) {
        cols = rows.empty() ? 0 : array_in(rows[0], what).size();
    }
    RationalMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json& row = array_in(rows[i], what);
        if (row.size() != cols) {
            throw ValidationError(std::string(what) + " rows must all have " +
                                  std::to_string(cols) + " entries");
        }
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = rational_in(row[k], what);
    }
    return m;
}

json term_out(const Term& t) {
    json j;
    j["coeff"] = coefficient_out(t.coefficient);
    json xe = json::array();
    for (const Rational& e : t.x_exponents) xe.push_back(rational_out(e));
    j["xexp"] = std::move(xe);
    json fe = json::array();
    for (const Rational& e : t.f_exponents) fe.push_back(rational_out(e));
    j["fexp"] = std::move(fe);
    return j;
}

Term term_in(const json& j) {
    Term t;
    t.coefficient = rational_in(field(j, "coeff"), "term coefficient");
    for (const json& e : array_in(field(j, "xexp"), "term xexp")) {
        t.x_exponents.push_back(rational_in(e, "term xexp"));
    }
    if (const json* fe = optional_field(j, "fexp")) {
        for (const json& e : array_in(*fe, "term fexp")) {
            t.f_exponents.push_back(rational_in(e, "term fexp"));
        }
    }
    return t;
}

json terms_out(const std::vector<Term>& terms) {
    json arr = json::array();
    for (const Term& t : terms) arr.push_back(term_out(t));
    return arr;
}

std::vector<Term> terms_in(const json& j, const char* what) {
    std::vector<Term> out;
    for (const json& t : array_in(j, what)) out.push_back(term_in(t));
    return out;
}

const char* kind_name(EvaluatorKind kind) {
    switch (kind) {
        case EvaluatorKind::ExpAffine: return "exp_affine";
        case EvaluatorKind::SinAffine: return "sin_affine";
        case EvaluatorKind::CosAffine: return "cos_affine";
        case EvaluatorKind::InversePolynomial: return "inverse_polynomial";
        case EvaluatorKind::PolynomialPower: return "polynomial_power";
        case EvaluatorKind::OdeAugmented: return "ode_augmented";
    }
    throw InternalError("unknown evaluator kind");
}

EvaluatorKind kind_from(const std::string& name) {
    if (name == "exp_affine") return EvaluatorKind::ExpAffine;
    if (name == "sin_affine") return EvaluatorKind::SinAffine;
    if (name == "cos_affine") return EvaluatorKind::CosAffine;
    if (name == "inverse_polynomial") return EvaluatorKind::InversePolynomial;
    if (name == "polynomial_power") return EvaluatorKind::PolynomialPower;
    if (name == "ode_augmented") return EvaluatorKind::OdeAugmented;
    throw ValidationError("unknown evaluator kind '" + name + "'");
}

json evaluator_out(const Evaluator& ev) {
    json params = json::object();
    switch (ev.kind) {
        case EvaluatorKind::ExpAffine:
        case EvaluatorKind::SinAffine:
        case EvaluatorKind::CosAffine:
            params["constant"] = ev.constant;
            params["linear"] = doubles_out(ev.linear);
            break;
        case EvaluatorKind::InversePolynomial:
            params["terms"] = terms_out(ev.terms);
            break;
        case EvaluatorKind::PolynomialPower:
            params["terms"] = terms_out(ev.terms);
            params["power"] = rational_out(ev.power);
            break;
        case EvaluatorKind::OdeAugmented:
            break;
    }
    if (!ev.offset.empty()) params["offset"] = doubles_out(ev.offset);
    json j;
    j["kind"] = kind_name(ev.kind);
    j["params"] = std::move(params);
    return j;
}

Evaluator evaluator_in(const json& j) {
    Evaluator ev;
    ev.kind = kind_from(string_in(field(j, "kind"), "evaluator kind"));
    const json& params = field(j, "params");
    if (!params.is_object()) throw ValidationError("evaluator params must be an object");
    switch (ev.kind) {
        case EvaluatorKind::ExpAffine:
        case EvaluatorKind::SinAffine:
        case EvaluatorKind::CosAffine:
            if (const json* c = optional_field(params, "constant")) {
                ev.constant = number_in(*c, "evaluator constant");
            }
            ev.linear = doubles_in(field(params, "linear"), "evaluator linear");
            break;
        case EvaluatorKind::InversePolynomial:
            ev.terms = terms_in(field(params, "terms"), "evaluator terms");
            break;
        case EvaluatorKind::PolynomialPower:
            ev.terms = terms_in(field(params, "terms"), "evaluator terms");
            ev.power = rational_in(field(params, "power"), "evaluator power");
            break;
        case EvaluatorKind::OdeAugmented:
            break;
    }
    if (const json* off = optional_field(params, "offset")) {
        ev.offset = doubles_in(*off, "evaluator offset");
    }
    return ev;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string to_json(const QPSystem& sys) {
    json j;
    j["variables"] = sys.variables;
    j["lambda"] = column_out(sys.lambda, /*as_coefficient=*/true);
    j["A"] = matrix_out(sys.A, /*as_coefficient=*/true);
    j["B"] = matrix_out(sys.B, /*as_coefficient=*/false);
    if (sys.x0) j["x0"] = doubles_out(*sys.x0);
    return dump(j);
}

QPSystem qp_from_json(const std::string& text) {
    const json j = parse_text(text);
    QPSystem sys;
    sys.variables = strings_in(field(j, "variables"), "variables");
    sys.lambda = column_in(field(j, "lambda"), "lambda");
    sys.A = matrix_in(field(j, "A"), "A", 0, false);
    sys.B = matrix_in(field(j, "B"), "B", sys.variables.size(), true);
    if (const json* x0 = optional_field(j, "x0")) {
        sys.x0 = doubles_in(*x0, "x0");
    }
    return sys;
}

std::string to_json(const LVSystem& sys) {
    json j;
    j["lambda_prime"] = column_out(sys.lambda_prime, /*as_coefficient=*/true);
    j["A_prime"] = matrix_out(sys.A_prime, /*as_coefficient=*/true);
    json qms = json::array();
    for (const Quasimonomial& qm : sys.quasimonomials) {
        json row = json::array();
        for (const Rational& e : qm.exponents) row.push_back(rational_out(e));
        qms.push_back(std::move(row));
    }
    j["quasimonomials"] = std::move(qms);
    if (sys.z0) j["z0"] = doubles_out(*sys.z0);
    return dump(j);
}

LVSystem lv_from_json(const std::string& text) {
    const json j = parse_text(text);
    LVSystem sys;
    sys.lambda_prime = column_in(field(j, "lambda_prime"), "lambda_prime");
    sys.A_prime = matrix_in(field(j, "A_prime"), "A_prime", 0, false);
    for (const json& row : array_in(field(j, "quasimonomials"), "quasimonomials")) {
        Quasimonomial qm;
        for (const json& e : array_in(row, "quasimonomials")) {
            qm.exponents.push_back(rational_in(e, "quasimonomial exponent"));
        }
        sys.quasimonomials.push_back(std::move(qm));
    }
    if (const json* z0 = optional_field(j, "z0")) {
        sys.z0 = doubles_in(*z0, "z0");
    }
    return sys;
}

std::string to_json(const GeneralSystem& sys) {
    json j;
    j["variables"] = sys.variables;
    json eqs = json::array();
    for (const std::vector<Term>& eq : sys.equations) eqs.push_back(terms_out(eq));
    j["equations"] = std::move(eqs);
    json funcs = json::array();
    for (const FunctionDef& f : sys.functions) {
        json jf;
        jf["name"] = f.name;
        jf["evaluator"] = evaluator_out(f.evaluator);
        json ders = json::array();
        for (const std::vector<Term>& d : f.derivatives) ders.push_back(terms_out(d));
        jf["derivatives"] = std::move(ders);
        if (f.f0) jf["f0"] = *f.f0;
        funcs.push_back(std::move(jf));
    }
    j["functions"] = std::move(funcs);
    if (sys.x0) j["x0"] = doubles_out(*sys.x0);
    if (sys.shift) j["shift"] = doubles_out(*sys.shift);
    return dump(j);
}

GeneralSystem general_from_json(const std::string& text) {
    const json j = parse_text(text);
    GeneralSystem sys;
    sys.variables = strings_in(field(j, "variables"), "variables");
    for (const json& eq : array_in(field(j, "equations"), "equations")) {
        sys.equations.push_back(terms_in(eq, "equation"));
    }
    if (const json* funcs = optional_field(j, "functions")) {
        for (const json& jf : array_in(*funcs, "functions")) {
            FunctionDef f;
            f.name = string_in(field(jf, "name"), "function name");
            f.evaluator = evaluator_in(field(jf, "evaluator"));
            for (const json& d : array_in(field(jf, "derivatives"), "derivatives")) {
                f.derivatives.push_back(terms_in(d, "derivative"));
            }
            if (const json* f0 = optional_field(jf, "f0")) {
                f.f0 = number_in(*f0, "f0");
            }
            sys.functions.push_back(std::move(f));
        }
    }
    if (const json* x0 = optional_field(j, "x0")) sys.x0 = doubles_in(*x0, "x0");
    if (const json* shift = optional_field(j, "shift")) {
        sys.shift = doubles_in(*shift, "shift");
    }
    return sys;
}

std::string to_json(const AuxSpec& spec) {
    json arr = json::array();
    for (const auto& [name, transform] : spec.by_function) {
        json entry;
        entry["function"] = name;
        json p = json::array();
        for (const Rational& pk : transform.p) p.push_back(rational_out(pk));
        entry["p"] = std::move(p);
        entry["q"] = rational_out(transform.q);
        arr.push_back(std::move(entry));
    }
    json j;
    j["aux"] = std::move(arr);
    return dump(j);
}

AuxSpec aux_from_json(const std::string& text) {
    const json j = parse_text(text);
    AuxSpec spec;
    for (const json& entry : array_in(field(j, "aux"), "aux")) {
        std::string name = string_in(field(entry, "function"), "aux function");
        if (spec.by_function.count(name)) {
            throw ValidationError("aux spec repeats function '" + name + "'");
        }
        AuxTransform t;
        for (const json& pk : array_in(field(entry, "p"), "aux p")) {
            t.p.push_back(rational_in(pk, "aux p"));
        }
        t.q = rational_in(field(entry, "q"), "aux q");
        spec.by_function[std::move(name)] = std::move(t);
    }
    return spec;
}

std::string to_json(const VerifyReport& rep) {
    json j;
    j["max_rel_dev"] = rep.max_rel_dev;
    json pv = json::array();
    for (const auto& [label, dev] : rep.per_variable) {
        json entry;
        entry["label"] = label;
        entry["deviation"] = dev;
        pv.push_back(std::move(entry));
    }
    j["per_variable"] = std::move(pv);
    j["compared_samples"] = rep.compared_samples;
    j["truncated"] = rep.truncated;
    j["truncated_at"] = rep.truncated_at ? json(*rep.truncated_at) : json(nullptr);
    j["notes"] = rep.notes;
    return dump(j);
}

ModelKind detect_model(const std::string& text) {
    const json j = parse_text(text);
    if (!j.is_object()) throw ValidationError("expected a JSON object");
    if (j.contains("functions") || j.contains("equations")) return ModelKind::General;
    if (j.contains("B")) return ModelKind::QP;
    if (j.contains("A_prime") || j.contains("quasimonomials")) return ModelKind::LV;
    throw ValidationError("the JSON matches no known model schema "
                          "(general system, GLV system, or LV normal form)");
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    for (const std::string& label : traj.labels) {
        out += ',';
        out += label;
    }
    out += '\n';
    char buf[64];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g", traj.times[i]);
        out += buf;
        for (double v : traj.states[i]) {
            std::snprintf(buf, sizeof(buf), ",%.17g", v);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        if (std::cin.bad()) throw IoError("failed to read standard input");
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed while reading '" + path + "'");
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        if (std::cout.bad()) throw IoError("failed to write standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

} // namespace lvnf
