#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lvnf/errors.hpp"
#include "lvnf/examples.hpp"
#include "lvnf/json_io.hpp"
#include "lvnf/nonpoly.hpp"
#include "lvnf/qp_system.hpp"

#include "test_support.hpp"

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using namespace lvnf;
using testsupport::R;

namespace {

GeneralSystem enzyme() { return examples::enzyme_system(); }

AuxSpec enzyme_aux(const Rational& p, const Rational& q) {
    AuxSpec spec;
    spec.by_function["f"] = AuxTransform{{p}, q};
    return spec;
}

} // namespace

TEST_CASE("GLV systems round-trip through canonical JSON") {
    RecastResult rc = recast(enzyme(), enzyme_aux(R(3), R(2)));
    const QPSystem& sys = rc.glv;

    std::string text = to_json(sys);
    QPSystem back = qp_from_json(text);

    CHECK(back.variables == sys.variables);
    CHECK(back.lambda == sys.lambda);
    CHECK(back.A == sys.A);
    CHECK(back.B == sys.B);
    REQUIRE(back.x0.has_value());
    CHECK(*back.x0 == *sys.x0);

    // Canonical form is a fixed point of dump-parse-dump.
    CHECK(to_json(back) == text);
    // Fractional exponents appear as exact rational strings.
    CHECK(text.find("-3/2") != std::string::npos);
}

TEST_CASE("coefficients keep exact values across serialization") {
    QPSystem sys;
    sys.variables = {"x"};
    sys.lambda = RationalMatrix{{R(1, 3)}};          // not double-representable
    sys.A = RationalMatrix{{R(1, 2)}};               // exactly double-representable
    sys.B = RationalMatrix{{R(5, 7)}};
    std::string text = to_json(sys);

    CHECK(text.find("\"1/3\"") != std::string::npos); // kept as a string
    CHECK(text.find("0.5") != std::string::npos);     // kept as a number
    CHECK(text.find("\"5/7\"") != std::string::npos); // exponents always strings

    QPSystem back = qp_from_json(text);
    CHECK(back.lambda(0, 0) == R(1, 3));
    CHECK(back.A(0, 0) == R(1, 2));
    CHECK(back.B(0, 0) == R(5, 7));
}

TEST_CASE("LV systems round-trip through canonical JSON") {
    RecastResult rc = recast(enzyme(), enzyme_aux(R(0), R(1)));
    const LVSystem& lv = rc.lv;

    std::string text = to_json(lv);
    LVSystem back = lv_from_json(text);

    CHECK(back.lambda_prime == lv.lambda_prime);
    CHECK(back.A_prime == lv.A_prime);
    CHECK(back.quasimonomials == lv.quasimonomials);
    REQUIRE(back.z0.has_value());
    CHECK(*back.z0 == *lv.z0);
    CHECK(to_json(back) == text);
}

TEST_CASE("general systems round-trip through canonical JSON") {
    SUBCASE("inverse-polynomial rate function") {
        GeneralSystem sys = enzyme();
        std::string text = to_json(sys);
        GeneralSystem back = general_from_json(text);
        CHECK(back.variables == sys.variables);
        CHECK(back.equations == sys.equations);
        REQUIRE(back.functions.size() == 1);
        CHECK(back.functions[0] == sys.functions[0]);
        CHECK(*back.x0 == *sys.x0);
        CHECK(to_json(back) == text);
    }

    SUBCASE("exponential rate function with parameters") {
        GeneralSystem sys = examples::morse_system();
        GeneralSystem back = general_from_json(to_json(sys));
        CHECK(back.functions[0] == sys.functions[0]);
        CHECK(back.equations == sys.equations);
        CHECK(to_json(back) == to_json(sys));
    }

    SUBCASE("ODE-defined function with initial value and shift record") {
        GeneralSystem sys = enzyme();
        sys.functions[0].evaluator = Evaluator{};
        sys.functions[0].evaluator.kind = EvaluatorKind::OdeAugmented;
        sys.functions[0].f0 = 1.0 / 3.0;
        sys.shift = std::vector<double>{2.0};
        GeneralSystem back = general_from_json(to_json(sys));
        CHECK(back.functions[0] == sys.functions[0]);
        REQUIRE(back.shift.has_value());
        CHECK(*back.shift == *sys.shift);
    }

    SUBCASE("trigonometric pair with offsets") {
        GeneralSystem sys;
        sys.variables = {"x"};
        FunctionDef s;
        s.name = "s";
        s.evaluator.kind = EvaluatorKind::SinAffine;
        s.evaluator.constant = 0.25;
        s.evaluator.linear = {2.0};
        s.evaluator.offset = {1.5};
        Term d;
        d.coefficient = R(2);
        d.x_exponents = {R(0)};
        d.f_exponents = {R(0), R(1)};
        s.derivatives = {{d}};
        FunctionDef c = s;
        c.name = "c";
        c.evaluator.kind = EvaluatorKind::CosAffine;
        Term dc;
        dc.coefficient = R(-2);
        dc.x_exponents = {R(0)};
        dc.f_exponents = {R(1), R(0)};
        c.derivatives = {{dc}};
        sys.functions = {s, c};
        Term eq;
        eq.coefficient = R(1);
        eq.x_exponents = {R(1)};
        eq.f_exponents = {R(1), R(1)};
        sys.equations = {{eq}};

        GeneralSystem back = general_from_json(to_json(sys));
        CHECK(back.functions[0] == sys.functions[0]);
        CHECK(back.functions[1] == sys.functions[1]);
        CHECK(back.equations == sys.equations);
        CHECK(!back.x0.has_value());
    }

    SUBCASE("fractional-power evaluator") {
        GeneralSystem sys;
        sys.variables = {"x"};
        FunctionDef f;
        f.name = "f";
        f.evaluator.kind = EvaluatorKind::PolynomialPower;
        Term one;
        one.coefficient = R(1);
        one.x_exponents = {R(2)};
        f.evaluator.terms = {one};
        f.evaluator.power = R(-1, 2);
        Term d;
        d.coefficient = R(-1);
        d.x_exponents = {R(1)};
        d.f_exponents = {R(3)};
        f.derivatives = {{d}};
        sys.functions = {f};
        Term eq;
        eq.coefficient = R(-1);
        eq.x_exponents = {R(1)};
        eq.f_exponents = {R(1)};
        sys.equations = {{eq}};

        std::string text = to_json(sys);
        CHECK(text.find("-1/2") != std::string::npos);
        GeneralSystem back = general_from_json(text);
        CHECK(back.functions[0] == sys.functions[0]);
    }
}

TEST_CASE("aux specs round-trip and reject duplicates") {
    AuxSpec spec;
    spec.by_function["f"] = AuxTransform{{R(3), R(-1, 2)}, R(2)};
    spec.by_function["g"] = AuxTransform{{R(0), R(0)}, R(1)};

    std::string text = to_json(spec);
    AuxSpec back = aux_from_json(text);
    REQUIRE(back.by_function.size() == 2);
    CHECK(back.by_function.at("f") == spec.by_function.at("f"));
    CHECK(back.by_function.at("g") == spec.by_function.at("g"));
    CHECK(to_json(back) == text);

    CHECK_THROWS_AS(aux_from_json(R"({"aux": [
        {"function": "f", "p": ["0"], "q": "1"},
        {"function": "f", "p": ["1"], "q": "2"}
    ]})"),
                    ValidationError);
}

TEST_CASE("verification reports serialize with their summary fields") {
    VerifyReport rep;
    rep.max_rel_dev = 2.5e-9;
    rep.per_variable = {{"x", 2.5e-9}, {"z1", 1e-10}};
    rep.compared_samples = 42;
    rep.truncated = true;
    rep.truncated_at = 0.75;
    rep.notes = {"one", "two"};

    std::string text = to_json(rep);
    CHECK(text.find("\"max_rel_dev\": 2.5e-09") != std::string::npos);
    CHECK(text.find("\"label\": \"z1\"") != std::string::npos);
    CHECK(text.find("\"truncated_at\": 0.75") != std::string::npos);
    CHECK(text.find("\"compared_samples\": 42") != std::string::npos);

    VerifyReport open;
    open.truncated_at.reset();
    CHECK(to_json(open).find("\"truncated_at\": null") != std::string::npos);
}

TEST_CASE("model kind detection distinguishes the three schemas") {
    RecastResult rc = recast(enzyme(), enzyme_aux(R(0), R(1)));
    CHECK(detect_model(to_json(enzyme())) == ModelKind::General);
    CHECK(detect_model(to_json(rc.glv)) == ModelKind::QP);
    CHECK(detect_model(to_json(rc.lv)) == ModelKind::LV);
    CHECK_THROWS_AS(detect_model("{\"foo\": 1}"), ValidationError);
    CHECK_THROWS_AS(detect_model("[1, 2]"), ValidationError);
    CHECK_THROWS_AS(detect_model("not json at all"), IoError);
}

TEST_CASE("schema violations carry the offending field name") {
    CHECK_THROWS_WITH_AS(qp_from_json(R"({"variables": ["x"]})"),
                         "missing field 'lambda'", ValidationError);
    CHECK_THROWS_WITH_AS(qp_from_json(R"({"variables": ["x"], "lambda": "no",
                                          "A": [], "B": []})"),
                         "lambda must be a JSON array", ValidationError);
    CHECK_THROWS_AS(qp_from_json(R"({"variables": ["x"], "lambda": ["1/0"],
                                     "A": [["1"]], "B": [["1"]]})"),
                    ValidationError);
    CHECK_THROWS_AS(qp_from_json(R"({"variables": ["x", "y"], "lambda": [0, 0],
                                     "A": [[1], [1]], "B": [["1"]]})"),
                    ValidationError); // B row has 1 entry, needs 2
    CHECK_THROWS_AS(general_from_json(R"({"variables": ["x"], "equations": [[
        {"coeff": 1}
    ]]})"),
                    ValidationError); // term lacks xexp
    CHECK_THROWS_AS(general_from_json(R"({"variables": ["x"], "equations": [[]],
        "functions": [{"name": "f", "evaluator": {"kind": "mystery", "params": {}},
                       "derivatives": [[]]}]})"),
                    ValidationError); // unknown evaluator kind
    CHECK_THROWS_AS(qp_from_json("{"), IoError);
}

TEST_CASE("trajectories export as CSV") {
    Trajectory traj;
    traj.labels = {"x", "y"};
    traj.times = {0.0, 0.5};
    traj.states = {{1.0, 2.0}, {0.25, 4.0}};
    CHECK(trajectory_csv(traj) == "t,x,y\n0,1,2\n0.5,0.25,4\n");

    // Full precision survives: 0.1 is not dyadic and must print with enough
    // digits to round-trip.
    Trajectory fine;
    fine.labels = {"x"};
    fine.times = {0.1};
    fine.states = {{0.1}};
    std::string csv = trajectory_csv(fine);
    CHECK(csv.find("0.10000000000000001") != std::string::npos);
}

TEST_CASE("whole-file helpers read and write through paths") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "lvnf_json_io_test";
    fs::create_directories(dir);
    fs::path file = dir / "system.json";

    GeneralSystem sys = enzyme();
    write_text_file(file.string(), to_json(sys));
    std::string loaded = read_text_file(file.string());
    CHECK(loaded == to_json(sys));
    GeneralSystem back = general_from_json(loaded);
    CHECK(back.functions == sys.functions);

    CHECK_THROWS_AS(read_text_file((dir / "absent.json").string()), IoError);
    CHECK_THROWS_AS(write_text_file((dir / "no_dir" / "x.json").string(), "x"), IoError);
    fs::remove_all(dir);
}
