#pragma once

#include "lvnf/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lvnf {

// Dense matrix over exact rationals, row-major.
//
// Elimination-based queries (rank, inverse, solve) use exact arithmetic with
// partial pivoting on the largest absolute value; the pivot choice only bounds
// intermediate numerator/denominator growth, it cannot change any result.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}
    RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    static RationalMatrix identity(std::size_t n);
    static RationalMatrix from_doubles(const std::vector<std::vector<double>>& rows);
    static RationalMatrix column(const std::vector<double>& values);
    static RationalMatrix column(std::vector<Rational> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return a_.empty(); }

    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<Rational> row(std::size_t i) const;
    std::vector<Rational> col(std::size_t j) const;
    std::vector<std::vector<double>> to_doubles() const;

    RationalMatrix transpose() const;

    // Exact Gaussian elimination; pivot count.
    std::size_t rank() const;

    // Gauss-Jordan inverse; throws ValidationError("matrix is not invertible")
    // on a singular or non-square input.
    RationalMatrix inverse() const;

    // Solves (*this) * X = rhs for square *this; same error as inverse().
    RationalMatrix solve(const RationalMatrix& rhs) const;

    // Returns a row index set I (|I| = rank) such that the rows I of *this are
    // linearly independent. Deterministic for a given matrix.
    std::vector<std::size_t> independent_rows() const;

    RationalMatrix with_appended_column(const std::vector<Rational>& column) const;

    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Rational> a_;
};

} // namespace lvnf
