#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace ttgeo {

// Dense matrix over Q with exact arithmetic.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

    static QMatrix identity(size_t n);
    static QMatrix ones_row(size_t n);

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    mpq_class& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const mpq_class& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

    bool is_zero() const;
    bool operator==(const QMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

    QMatrix operator*(const QMatrix& o) const; // skips zero entries
    QMatrix operator+(const QMatrix& o) const;
    QMatrix operator-(const QMatrix& o) const;
    QMatrix scaled(const mpq_class& s) const;
    QMatrix transpose() const;
    QMatrix block(size_t i0, size_t j0, size_t nr, size_t nc) const;
    void set_block(size_t i0, size_t j0, const QMatrix& b);

    size_t rank() const;
    QMatrix inverse() const;              // throws singular-matrix
    std::vector<QMatrix> kernel() const;  // basis column vectors
    // columns of a basis for the column space
    QMatrix column_basis() const;
    // solve this * X = B, throws no-solution
    QMatrix solve(const QMatrix& B) const;

    static QMatrix kron(const QMatrix& a, const QMatrix& b);
    static QMatrix hcat(const std::vector<QMatrix>& cols, size_t rows);

    nlohmann::json to_json() const;        // integers, or [num, den] for fractions
    static QMatrix from_json(const nlohmann::json& j, size_t rows, size_t cols);

private:
    size_t r_ = 0, c_ = 0;
    std::vector<mpq_class> a_;
};

// row reduction in place, returns pivot columns
std::vector<size_t> rref(QMatrix& m);

} // namespace ttgeo
