#pragma once

// Shared helpers for the test suites: deterministic random generators for
// rationals, matrices, and systems. Seeds are fixed so failures reproduce.

#include "lvnf/qp_system.hpp"
#include "lvnf/rational.hpp"
#include "lvnf/rational_matrix.hpp"

#include <random>
#include <string>
#include <vector>

namespace testsupport {

inline lvnf::Rational R(long long num, long long den = 1) {
    return lvnf::Rational(lvnf::BigInt(num), lvnf::BigInt(den));
}

inline lvnf::Rational random_rational(std::mt19937_64& gen, int num_span = 6, int max_den = 3) {
    std::uniform_int_distribution<int> num_dist(-num_span, num_span);
    std::uniform_int_distribution<int> den_dist(1, max_den);
    return R(num_dist(gen), den_dist(gen));
}

inline lvnf::RationalMatrix random_matrix(std::mt19937_64& gen, std::size_t rows,
                                          std::size_t cols, int num_span = 6,
                                          int max_den = 3) {
    lvnf::RationalMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = random_rational(gen, num_span, max_den);
        }
    }
    return m;
}

// Rejection-samples an exactly invertible n x n rational matrix.
inline lvnf::RationalMatrix random_invertible(std::mt19937_64& gen, std::size_t n,
                                              int num_span = 4, int max_den = 2) {
    for (;;) {
        lvnf::RationalMatrix m = random_matrix(gen, n, n, num_span, max_den);
        if (m.rank() == n) {
            return m;
        }
    }
}

// Dyadic double in [-2, 2] with a 3-bit fraction; exactly representable.
inline double random_dyadic(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> dist(-16, 16);
    return static_cast<double>(dist(gen)) / 8.0;
}

// Random GLV system with distinct nonzero exponent rows. When
// `full_column_rank` is set, regenerates until rank(B) == n so that a
// change-of-variables witness is recoverable.
inline lvnf::QPSystem random_qp_system(std::mt19937_64& gen, bool full_column_rank = true,
                                       std::size_t max_vars = 4,
                                       std::size_t max_monomials = 8) {
    std::uniform_int_distribution<std::size_t> n_dist(1, max_vars);
    const std::size_t n = n_dist(gen);
    std::uniform_int_distribution<std::size_t> m_dist(n, max_monomials);
    const std::size_t m = std::max<std::size_t>(1, m_dist(gen));

    lvnf::QPSystem sys;
    for (std::size_t i = 0; i < n; ++i) {
        sys.variables.push_back("x" + std::to_string(i + 1));
    }
    for (;;) {
        sys.B = random_matrix(gen, m, n);
        bool ok = true;
        std::vector<std::vector<lvnf::Rational>> rows;
        for (std::size_t j = 0; j < m && ok; ++j) {
            auto row = sys.B.row(j);
            bool zero = true;
            for (const auto& e : row) zero = zero && e.is_zero();
            ok = !zero;
            for (const auto& other : rows) ok = ok && other != row;
            rows.push_back(std::move(row));
        }
        if (!ok) continue;
        if (full_column_rank && sys.B.rank() != n) continue;
        break;
    }
    std::vector<double> lambda(n);
    std::vector<std::vector<double>> A(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
        lambda[i] = random_dyadic(gen);
        for (std::size_t j = 0; j < m; ++j) A[i][j] = random_dyadic(gen);
    }
    sys.lambda = lvnf::RationalMatrix::column(lambda);
    sys.A = lvnf::RationalMatrix::from_doubles(A);
    return sys;
}

} // namespace testsupport
