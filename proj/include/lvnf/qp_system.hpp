#pragma once

#include "lvnf/rational_matrix.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace lvnf {

// One quasimonomial: the vector of (rational) exponents over the system's
// variables. Canonical ordering of a set of quasimonomials is lexicographic
// over these vectors.
struct Quasimonomial {
    std::vector<Rational> exponents;

    friend bool operator==(const Quasimonomial&, const Quasimonomial&) = default;
    friend auto operator<=>(const Quasimonomial&, const Quasimonomial&) = default;
};

// Generalized Lotka-Volterra system
//
//     dx_i/dt = x_i * ( lambda_i + sum_j A(i,j) * prod_k x_k^B(j,k) )
//
// with n variables and m quasimonomials. A and lambda hold real coefficients;
// they are stored as exact rationals (every finite double is one) so that
// transformation identities can be checked bit-exactly, and convert back to
// double at the numeric boundary.
struct QPSystem {
    std::vector<std::string> variables;       // n names
    RationalMatrix lambda;                     // n x 1
    RationalMatrix A;                          // n x m
    RationalMatrix B;                          // m x n, rational exponents
    std::optional<std::vector<double>> x0;     // positive initial state

    std::size_t var_count() const { return variables.size(); }
    std::size_t monomial_count() const { return B.rows(); }

    static QPSystem from_doubles(std::vector<std::string> variables,
                                 const std::vector<double>& lambda,
                                 const std::vector<std::vector<double>>& A,
                                 RationalMatrix B,
                                 std::optional<std::vector<double>> x0 = std::nullopt);

    std::vector<double> lambda_doubles() const;
    std::vector<std::vector<double>> A_doubles() const;
};

// Lotka-Volterra normal form
//
//     dz_a/dt = z_a * ( lambda'_a + sum_b A'(a,b) z_b )
//
// over the m quasimonomial coordinates of a QPSystem.
struct LVSystem {
    RationalMatrix lambda_prime;               // m x 1
    RationalMatrix A_prime;                    // m x m
    std::vector<Quasimonomial> quasimonomials; // row order of the source B
    std::optional<std::vector<double>> z0;

    std::size_t dim() const { return quasimonomials.size(); }

    std::vector<double> lambda_doubles() const;
    std::vector<std::vector<double>> A_doubles() const;
};

struct ValidationReport {
    bool valid = false;
    std::vector<std::string> issues;  // human-readable findings, may be non-fatal
    std::size_t var_count = 0;
    std::size_t monomial_count = 0;   // after duplicate merging
    std::size_t rank = 0;             // rank of the (merged) exponent matrix
    std::optional<QPSystem> normalized; // present iff valid
};

// Structural check + normalization. Duplicate quasimonomial rows are merged by
// summing the matching A columns (non-fatal, reported); a zero exponent row is
// fatal because a constant term must live in lambda.
ValidationReport validate(const QPSystem& sys);

// validate() + throw ValidationError on failure; returns the merged system.
QPSystem require_valid(const QPSystem& sys);

// The system's quasimonomials in canonical (lexicographic) order.
std::vector<Quasimonomial> qm_extract(const QPSystem& sys);

// Change of variables x_i = prod_k xhat_k^C(i,k) with invertible C:
// (lambda, A, B) -> (C^-1 lambda, C^-1 A, B C). Row order of B is preserved.
// A positive initial state maps through the inverse exponent matrix.
QPSystem qm_transform(const QPSystem& sys, const RationalMatrix& C);

// Lotka-Volterra embedding: lambda' = B lambda, A' = B A, one z per
// quasimonomial (keeping the row order of B), z0 = monomial map of x0.
LVSystem lv_embed(const QPSystem& sys);

struct BecVerdict {
    bool equivalent = false;
    // Change-of-variables matrix connecting the two systems when recoverable:
    // B2 * witness = B1 up to the matched row order (see check_bec).
    std::optional<RationalMatrix> witness;
    std::string diagnostic;
};

// Decides whether two GLV systems lie in the same equivalence class: the
// exact invariants B*A and B*lambda must agree under a common row matching,
// and a single invertible C must carry one exponent/coefficient/bias triple
// into the other. The returned witness satisfies
//
//     qm_transform(sys2, C) == sys1   (up to the matched row order)
//
// so for embeddings of one source system under two aux choices it is exactly
// the block matrix whose bottom rows encode the aux change. When the exponent
// matrix has deficient column rank the witness is not unique and only the
// invariant comparison is reported (witness absent, diagnostic says so).
BecVerdict check_bec(const QPSystem& sys1, const QPSystem& sys2);

struct ExpandedMap {
    RationalMatrix B_full;     // m x m, rank m; first n columns are B
    std::size_t dummy_count;   // m - n trailing variables fixed at value 1
};

// Completes the m x n exponent matrix (rank n required) to an invertible
// square matrix by greedily appending unit-vector columns. The added columns
// correspond to dummy variables that enter every monomial with value 1.
ExpandedMap expand_exponent_matrix(const QPSystem& sys);

// z_j = prod_k state_k^E(j,k), evaluated as exp(sum E log x). All state
// components must be positive.
std::vector<double> monomial_values(const RationalMatrix& exponents,
                                    const std::vector<double>& state);

} // namespace lvnf
