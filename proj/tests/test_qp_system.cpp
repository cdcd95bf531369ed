#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lvnf/errors.hpp"
#include "lvnf/qp_system.hpp"

#include "test_support.hpp"

#include <algorithm>
#include <random>
#include <string>

using lvnf::LVSystem;
using lvnf::QPSystem;
using lvnf::Quasimonomial;
using lvnf::Rational;
using lvnf::RationalMatrix;
using testsupport::R;

namespace {

// GLV form of the rational enzyme kinetics model
//     dx/dt = -x (a + b x) / (c + x + d x^2)
// after introducing the auxiliary variable y = f^q x^p for
// f = 1/(c + x + d x^2). Unit parameters a = b = c = d = 1, x(0) = 1.
// Rows are ordered by the underlying (x, f) exponents:
// f, xf, xf^2, x^2 f^2, x^3 f^2.
QPSystem enzyme_glv(const Rational& p, const Rational& q) {
    QPSystem sys;
    sys.variables = {"x", "y"};
    sys.lambda = RationalMatrix(2, 1);

    const Rational pq = p / q;
    const Rational iq = q.reciprocal();
    sys.B = RationalMatrix(5, 2);
    const Rational xexp[5] = {R(0), R(1), R(1), R(2), R(3)};
    const Rational fexp[5] = {R(1), R(1), R(2), R(2), R(2)};
    for (std::size_t j = 0; j < 5; ++j) {
        sys.B(j, 0) = xexp[j] - fexp[j] * pq;
        sys.B(j, 1) = fexp[j] * iq;
    }

    sys.A = RationalMatrix(2, 5);
    // dx/dt = x [ -a f - b x f ]
    sys.A(0, 0) = R(-1);
    sys.A(0, 1) = R(-1);
    // dy/dt = y [ -pa f - pb xf + qa xf^2 + q(b + 2da) x^2 f^2 + 2bdq x^3 f^2 ]
    sys.A(1, 0) = -p;
    sys.A(1, 1) = -p;
    sys.A(1, 2) = q;
    sys.A(1, 3) = q * R(3);
    sys.A(1, 4) = q * R(2);

    // x(0) = 1, f(1) = 1/3, so y(0) = (1/3)^q.
    double y0 = std::pow(1.0 / 3.0, q.to_double());
    sys.x0 = std::vector<double>{1.0, y0};
    return sys;
}

RationalMatrix golden_enzyme_lv() {
    return RationalMatrix{{R(0), R(0), R(1), R(3), R(2)},
                          {R(-1), R(-1), R(1), R(3), R(2)},
                          {R(-1), R(-1), R(2), R(6), R(4)},
                          {R(-2), R(-2), R(2), R(6), R(4)},
                          {R(-3), R(-3), R(2), R(6), R(4)}};
}

} // namespace

TEST_CASE("validate accepts a well-formed system and reports rank") {
    auto report = lvnf::validate(enzyme_glv(R(0), R(1)));
    CHECK(report.valid);
    CHECK(report.issues.empty());
    CHECK(report.var_count == 2);
    CHECK(report.monomial_count == 5);
    CHECK(report.rank == 2);
}

TEST_CASE("validate merges duplicate quasimonomial rows by summing A columns") {
    QPSystem sys;
    sys.variables = {"x"};
    sys.lambda = RationalMatrix(1, 1);
    sys.A = RationalMatrix{{R(1), R(2)}};
    sys.B = RationalMatrix{{R(1)}, {R(1)}};
    auto report = lvnf::validate(sys);
    REQUIRE(report.valid);
    CHECK(report.monomial_count == 1);
    CHECK(report.normalized->A == RationalMatrix{{R(3)}});
    CHECK(report.normalized->B == RationalMatrix{{R(1)}});
    REQUIRE(report.issues.size() == 1);
    CHECK(report.issues.front().find("merged") != std::string::npos);
}

TEST_CASE("validate rejects a zero exponent row") {
    QPSystem sys;
    sys.variables = {"x"};
    sys.lambda = RationalMatrix(1, 1);
    sys.A = RationalMatrix{{R(1)}};
    sys.B = RationalMatrix(1, 1); // zero row
    auto report = lvnf::validate(sys);
    CHECK_FALSE(report.valid);
    REQUIRE_FALSE(report.issues.empty());
    CHECK(report.issues.front().find("constant term must live in lambda") != std::string::npos);
}

TEST_CASE("validate rejects inconsistent dimensions and bad initial states") {
    QPSystem sys = enzyme_glv(R(0), R(1));
    sys.lambda = RationalMatrix(3, 1);
    CHECK_FALSE(lvnf::validate(sys).valid);

    sys = enzyme_glv(R(0), R(1));
    sys.x0 = std::vector<double>{1.0, -0.5};
    CHECK_FALSE(lvnf::validate(sys).valid);

    sys = enzyme_glv(R(0), R(1));
    sys.x0 = std::vector<double>{1.0};
    CHECK_FALSE(lvnf::validate(sys).valid);
}

TEST_CASE("qm_extract returns the canonical lexicographic order") {
    // For the plain aux choice the rows are already sorted.
    auto qms = lvnf::qm_extract(enzyme_glv(R(0), R(1)));
    REQUIRE(qms.size() == 5);
    CHECK(qms[0].exponents == std::vector<Rational>{R(0), R(1)});
    CHECK(qms[1].exponents == std::vector<Rational>{R(1), R(1)});
    CHECK(qms[2].exponents == std::vector<Rational>{R(1), R(2)});
    CHECK(qms[3].exponents == std::vector<Rational>{R(2), R(2)});
    CHECK(qms[4].exponents == std::vector<Rational>{R(3), R(2)});

    // For aux (3,2) the system-space order differs from the row order.
    auto tilted = lvnf::qm_extract(enzyme_glv(R(3), R(2)));
    REQUIRE(tilted.size() == 5);
    CHECK(tilted[0].exponents == std::vector<Rational>{R(-2), R(1)});
    CHECK(tilted[1].exponents == std::vector<Rational>{R(-3, 2), R(1, 2)});
    CHECK(tilted[2].exponents == std::vector<Rational>{R(-1), R(1)});
    CHECK(tilted[3].exponents == std::vector<Rational>{R(-1, 2), R(1, 2)});
    CHECK(tilted[4].exponents == std::vector<Rational>{R(0), R(1)});
    CHECK(std::is_sorted(tilted.begin(), tilted.end()));
}

TEST_CASE("qm_transform by the identity is the identity") {
    QPSystem sys = enzyme_glv(R(1), R(1));
    QPSystem out = lvnf::qm_transform(sys, RationalMatrix::identity(2));
    CHECK(out.B == sys.B);
    CHECK(out.A == sys.A);
    CHECK(out.lambda == sys.lambda);
    REQUIRE(out.x0.has_value());
    CHECK((*out.x0)[0] == doctest::Approx((*sys.x0)[0]).epsilon(1e-14));
    CHECK((*out.x0)[1] == doctest::Approx((*sys.x0)[1]).epsilon(1e-14));
}

TEST_CASE("qm_transform carries one aux embedding into another") {
    QPSystem from11 = enzyme_glv(R(1), R(1));
    QPSystem to02 = enzyme_glv(R(0), R(2));

    // y_new = x^-2 y_old^2 : block matrix with bottom row (-2, 2) ... applied
    // to the (0,2) system it recovers the (1,1) system, and its inverse
    // [[1,0],[1,1/2]] goes the other way.
    RationalMatrix C{{R(1), R(0)}, {R(-2), R(2)}};
    QPSystem back = lvnf::qm_transform(to02, C);
    CHECK(back.B == from11.B);
    CHECK(back.A == from11.A);
    CHECK(back.lambda == from11.lambda);

    QPSystem forward = lvnf::qm_transform(from11, C.inverse());
    CHECK(forward.B == to02.B);
    CHECK(forward.A == to02.A);
    CHECK(forward.lambda == to02.lambda);
    REQUIRE(forward.x0.has_value());
    // y(0) for the (0,2) choice is f(1)^2 = 1/9.
    CHECK((*forward.x0)[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((*forward.x0)[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

    CHECK_THROWS_WITH_AS(lvnf::qm_transform(from11, RationalMatrix(2, 2)),
                         "transformation matrix is singular", lvnf::ValidationError);
}

TEST_CASE("qm_transform preserves the class invariants exactly") {
    std::mt19937_64 gen(90210813u);
    for (int trial = 0; trial < 100; ++trial) {
        QPSystem sys = testsupport::random_qp_system(gen);
        const std::size_t n = sys.var_count();
        RationalMatrix C = testsupport::random_invertible(gen, n);
        QPSystem hat = lvnf::qm_transform(sys, C);

        CHECK(hat.B * hat.A == sys.B * sys.A);
        CHECK(hat.B * hat.lambda == sys.B * sys.lambda);
        // Re-expressing the transformed quasimonomials in the original
        // variables recovers the original exponent rows verbatim.
        CHECK(hat.B * C.inverse() == sys.B);
    }
}

TEST_CASE("lv_embed reproduces the enzyme normal form") {
    LVSystem lv = lvnf::lv_embed(enzyme_glv(R(0), R(1)));
    CHECK(lv.lambda_prime == RationalMatrix(5, 1));
    CHECK(lv.A_prime == golden_enzyme_lv());
    REQUIRE(lv.z0.has_value());
    const double expected_z0[5] = {1.0 / 3, 1.0 / 3, 1.0 / 9, 1.0 / 9, 1.0 / 9};
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK((*lv.z0)[j] == doctest::Approx(expected_z0[j]).epsilon(1e-14));
    }
}

TEST_CASE("lv_embed with an identity exponent matrix returns the coefficients") {
    QPSystem sys;
    sys.variables = {"x", "y"};
    sys.lambda = RationalMatrix::column(std::vector<double>{0.5, -1.0});
    sys.A = RationalMatrix{{R(1), R(2)}, {R(3), R(4)}};
    sys.B = RationalMatrix::identity(2);
    LVSystem lv = lvnf::lv_embed(sys);
    CHECK(lv.A_prime == sys.A);
    CHECK(lv.lambda_prime == sys.lambda);
    REQUIRE(lv.quasimonomials.size() == 2);
    CHECK(lv.quasimonomials[0].exponents == std::vector<Rational>{R(1), R(0)});
}

TEST_CASE("the normal form is invariant under changes of variables") {
    std::mt19937_64 gen(44550813u);
    for (int trial = 0; trial < 50; ++trial) {
        QPSystem sys = testsupport::random_qp_system(gen);
        RationalMatrix C = testsupport::random_invertible(gen, sys.var_count());
        QPSystem hat = lvnf::qm_transform(sys, C);
        LVSystem lv1 = lvnf::lv_embed(sys);
        LVSystem lv2 = lvnf::lv_embed(hat);
        CHECK(lv1.lambda_prime == lv2.lambda_prime);
        CHECK(lv1.A_prime == lv2.A_prime);
    }
}

TEST_CASE("check_bec identifies equivalent embeddings and recovers the witness") {
    QPSystem sys1 = enzyme_glv(R(1), R(1));
    QPSystem sys2 = enzyme_glv(R(0), R(2));
    auto verdict = lvnf::check_bec(sys1, sys2);
    REQUIRE(verdict.equivalent);
    REQUIRE(verdict.witness.has_value());
    CHECK(*verdict.witness == RationalMatrix{{R(1), R(0)}, {R(-2), R(2)}});

    QPSystem carried = lvnf::qm_transform(sys2, *verdict.witness);
    CHECK(carried.B == sys1.B);
    CHECK(carried.A == sys1.A);
    CHECK(carried.lambda == sys1.lambda);
}

TEST_CASE("check_bec rejects inequivalent systems") {
    QPSystem sys1 = enzyme_glv(R(0), R(1));

    QPSystem scaled = sys1;
    scaled.A = sys1.A * RationalMatrix::identity(5);
    scaled.A(0, 2) = R(7); // not reachable by any change of variables
    auto verdict = lvnf::check_bec(sys1, scaled);
    CHECK_FALSE(verdict.equivalent);
    CHECK_FALSE(verdict.diagnostic.empty());

    QPSystem other;
    other.variables = {"x"};
    other.lambda = RationalMatrix(1, 1);
    other.A = RationalMatrix{{R(1)}};
    other.B = RationalMatrix{{R(1)}};
    auto mismatch = lvnf::check_bec(sys1, other);
    CHECK_FALSE(mismatch.equivalent);
    CHECK(mismatch.diagnostic == "variable counts differ");
}

TEST_CASE("check_bec accepts transformed random systems") {
    std::mt19937_64 gen(5550813u);
    for (int trial = 0; trial < 25; ++trial) {
        QPSystem sys = testsupport::random_qp_system(gen);
        RationalMatrix C = testsupport::random_invertible(gen, sys.var_count());
        QPSystem hat = lvnf::qm_transform(sys, C);
        auto verdict = lvnf::check_bec(sys, hat);
        REQUIRE(verdict.equivalent);
        REQUIRE(verdict.witness.has_value());
        // The witness carries hat back onto sys up to a row matching, so the
        // re-expressed exponent rows agree as canonical sets.
        auto lhs = lvnf::qm_extract(lvnf::qm_transform(hat, *verdict.witness));
        auto rhs = lvnf::qm_extract(sys);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("expand_exponent_matrix completes to an invertible square matrix") {
    QPSystem sys = enzyme_glv(R(0), R(1));
    auto expanded = lvnf::expand_exponent_matrix(sys);
    CHECK(expanded.dummy_count == 3);
    REQUIRE(expanded.B_full.rows() == 5);
    REQUIRE(expanded.B_full.cols() == 5);
    CHECK(expanded.B_full.rank() == 5);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(expanded.B_full(j, 0) == sys.B(j, 0));
        CHECK(expanded.B_full(j, 1) == sys.B(j, 1));
    }
    // The completion columns are the first three unit vectors here.
    RationalMatrix expected{{R(0), R(1), R(1), R(0), R(0)},
                            {R(1), R(1), R(0), R(1), R(0)},
                            {R(1), R(2), R(0), R(0), R(1)},
                            {R(2), R(2), R(0), R(0), R(0)},
                            {R(3), R(2), R(0), R(0), R(0)}};
    CHECK(expanded.B_full == expected);
}

TEST_CASE("expand_exponent_matrix keeps a square invertible matrix unchanged") {
    QPSystem sys;
    sys.variables = {"x", "y"};
    sys.lambda = RationalMatrix(2, 1);
    sys.A = RationalMatrix{{R(1), R(0)}, {R(0), R(1)}};
    sys.B = RationalMatrix{{R(2), R(1)}, {R(1), R(1)}};
    auto expanded = lvnf::expand_exponent_matrix(sys);
    CHECK(expanded.dummy_count == 0);
    CHECK(expanded.B_full == sys.B);
}

TEST_CASE("expand_exponent_matrix requires full column rank") {
    QPSystem sys;
    sys.variables = {"x", "y"};
    sys.lambda = RationalMatrix(2, 1);
    sys.A = RationalMatrix{{R(1), R(0)}, {R(0), R(1)}};
    sys.B = RationalMatrix{{R(1), R(1)}, {R(2), R(2)}};
    CHECK_THROWS_AS(lvnf::expand_exponent_matrix(sys), lvnf::ValidationError);
}

TEST_CASE("monomial map evaluates quasimonomial coordinates") {
    QPSystem sys = enzyme_glv(R(0), R(1));
    auto z = lvnf::monomial_values(sys.B, {1.0, 1.0 / 3.0});
    REQUIRE(z.size() == 5);
    CHECK(z[0] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(z[2] == doctest::Approx(1.0 / 9).epsilon(1e-14));
    CHECK_THROWS_AS(lvnf::monomial_values(sys.B, {1.0, -1.0}), lvnf::DomainError);
    CHECK_THROWS_AS(lvnf::monomial_values(sys.B, {1.0}), lvnf::ValidationError);
}
