#include "lvnf/rational_matrix.hpp"

#include "lvnf/errors.hpp"

#include <utility>

namespace lvnf {

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    a_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw ValidationError("ragged matrix initializer");
        }
        a_.insert(a_.end(), r.begin(), r.end());
    }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Rational(1);
    }
    return m;
}

RationalMatrix RationalMatrix::from_doubles(const std::vector<std::vector<double>>& rows) {
    RationalMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            throw ValidationError("ragged coefficient matrix");
        }
        for (std::size_t j = 0; j < m.cols_; ++j) {
            m(i, j) = Rational::from_double(rows[i][j]);
        }
    }
    return m;
}

RationalMatrix RationalMatrix::column(const std::vector<double>& values) {
    RationalMatrix m(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, 0) = Rational::from_double(values[i]);
    }
    return m;
}

RationalMatrix RationalMatrix::column(std::vector<Rational> values) {
    RationalMatrix m(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, 0) = std::move(values[i]);
    }
    return m;
}

std::vector<Rational> RationalMatrix::row(std::size_t i) const {
    return {a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

std::vector<Rational> RationalMatrix::col(std::size_t j) const {
    std::vector<Rational> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i] = (*this)(i, j);
    }
    return out;
}

std::vector<std::vector<double>> RationalMatrix::to_doubles() const {
    std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out[i][j] = (*this)(i, j).to_double();
        }
    }
    return out;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

namespace {

// Forward elimination in place. Returns the pivot (row, col) pairs in the
// order they were chosen; the row indices refer to the *original* row
// positions, tracked through swaps via `origin`.
std::vector<std::pair<std::size_t, std::size_t>> eliminate(RationalMatrix& m,
                                                           std::vector<std::size_t>& origin) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    origin.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) origin[i] = i;

    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < cols && pivot_row < rows; ++col) {
        // Largest |entry| at or below pivot_row keeps intermediates small.
        std::size_t best = pivot_row;
        Rational best_abs = m(pivot_row, col).abs();
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            Rational cand = m(r, col).abs();
            if (cand > best_abs) {
                best = r;
                best_abs = cand;
            }
        }
        if (best_abs.is_zero()) {
            continue;
        }
        if (best != pivot_row) {
            for (std::size_t j = 0; j < cols; ++j) {
                std::swap(m(best, j), m(pivot_row, j));
            }
            std::swap(origin[best], origin[pivot_row]);
        }
        const Rational pivot = m(pivot_row, col);
        for (std::size_t r = pivot_row + 1; r < rows; ++r) {
            if (m(r, col).is_zero()) continue;
            Rational factor = m(r, col) / pivot;
            m(r, col) = Rational(0);
            for (std::size_t j = col + 1; j < cols; ++j) {
                m(r, j) -= factor * m(pivot_row, j);
            }
        }
        pivots.emplace_back(origin[pivot_row], col);
        ++pivot_row;
    }
    return pivots;
}

} // namespace

std::size_t RationalMatrix::rank() const {
    RationalMatrix work(*this);
    std::vector<std::size_t> origin;
    return eliminate(work, origin).size();
}

std::vector<std::size_t> RationalMatrix::independent_rows() const {
    RationalMatrix work(*this);
    std::vector<std::size_t> origin;
    auto pivots = eliminate(work, origin);
    std::vector<std::size_t> rows;
    rows.reserve(pivots.size());
    for (const auto& [row, col] : pivots) {
        (void)col;
        rows.push_back(row);
    }
    return rows;
}

RationalMatrix RationalMatrix::solve(const RationalMatrix& rhs) const {
    if (rows_ != cols_) {
        throw ValidationError("matrix is not invertible");
    }
    if (rhs.rows_ != rows_) {
        throw ValidationError("solve dimension mismatch");
    }
    // Gauss-Jordan on the augmented matrix [*this | rhs].
    RationalMatrix aug(rows_, cols_ + rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < rhs.cols_; ++j) aug(i, cols_ + j) = rhs(i, j);
    }
    for (std::size_t col = 0; col < cols_; ++col) {
        std::size_t best = col;
        Rational best_abs = aug(col, col).abs();
        for (std::size_t r = col + 1; r < rows_; ++r) {
            Rational cand = aug(r, col).abs();
            if (cand > best_abs) {
                best = r;
                best_abs = cand;
            }
        }
        if (best_abs.is_zero()) {
            throw ValidationError("matrix is not invertible");
        }
        if (best != col) {
            for (std::size_t j = 0; j < aug.cols_; ++j) std::swap(aug(best, j), aug(col, j));
        }
        const Rational pivot = aug(col, col);
        for (std::size_t j = col; j < aug.cols_; ++j) aug(col, j) /= pivot;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == col || aug(r, col).is_zero()) continue;
            Rational factor = aug(r, col);
            for (std::size_t j = col; j < aug.cols_; ++j) {
                aug(r, j) -= factor * aug(col, j);
            }
        }
    }
    RationalMatrix x(cols_, rhs.cols_);
    for (std::size_t i = 0; i < cols_; ++i) {
        for (std::size_t j = 0; j < rhs.cols_; ++j) {
            x(i, j) = aug(i, cols_ + j);
        }
    }
    return x;
}

RationalMatrix RationalMatrix::inverse() const {
    return solve(identity(rows_));
}

RationalMatrix RationalMatrix::with_appended_column(const std::vector<Rational>& column) const {
    if (column.size() != rows_) {
        throw ValidationError("appended column has wrong length");
    }
    RationalMatrix out(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
        out(i, cols_) = column[i];
    }
    return out;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) {
        throw ValidationError("matrix product dimension mismatch");
    }
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) {
                if (b(k, j).is_zero()) continue;
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
        throw ValidationError("matrix sum dimension mismatch");
    }
    RationalMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) {
        c.a_[i] = a.a_[i] + b.a_[i];
    }
    return c;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
        throw ValidationError("matrix difference dimension mismatch");
    }
    RationalMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) {
        c.a_[i] = a.a_[i] - b.a_[i];
    }
    return c;
}

} // namespace lvnf
