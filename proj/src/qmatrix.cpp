#include "ttgeo/qmatrix.hpp"

#include "ttgeo/error.hpp"

namespace ttgeo {

QMatrix QMatrix::identity(size_t n)
{
    QMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMatrix QMatrix::ones_row(size_t n)
{
    QMatrix m(1, n);
    for (size_t j = 0; j < n; ++j) m(0, j) = 1;
    return m;
}

bool QMatrix::is_zero() const
{
    for (auto& x : a_) if (sgn(x) != 0) return false;
    return true;
}

QMatrix QMatrix::operator*(const QMatrix& o) const
{
    if (c_ != o.r_) throw Error("shape-mismatch", "matrix product " + std::to_string(r_) + "x" + std::to_string(c_) + " * " +
                                                     std::to_string(o.r_) + "x" + std::to_string(o.c_));
    QMatrix m(r_, o.c_);
    mpq_class t;
    for (size_t i = 0; i < r_; ++i)
        for (size_t k = 0; k < c_; ++k) {
            const mpq_class& x = (*this)(i, k);
            if (sgn(x) == 0) continue;
            const mpq_class* row = &o.a_[k * o.c_];
            mpq_class* out = &m.a_[i * o.c_];
            bool one = x == 1;
            for (size_t j = 0; j < o.c_; ++j) {
                if (sgn(row[j]) == 0) continue;
                if (one) out[j] += row[j];
                else {
                    t = x * row[j];
                    out[j] += t;
                }
            }
        }
    return m;
}

QMatrix QMatrix::operator+(const QMatrix& o) const
{
    if (r_ != o.r_ || c_ != o.c_) throw Error("shape-mismatch", "matrix sum");
    QMatrix m = *this;
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
    return m;
}

QMatrix QMatrix::operator-(const QMatrix& o) const
{
    if (r_ != o.r_ || c_ != o.c_) throw Error("shape-mismatch", "matrix difference");
    QMatrix m = *this;
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
    return m;
}

QMatrix QMatrix::scaled(const mpq_class& s) const
{
    QMatrix m = *this;
    for (auto& x : m.a_) x *= s;
    return m;
}

QMatrix QMatrix::transpose() const
{
    QMatrix m(c_, r_);
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

QMatrix QMatrix::block(size_t i0, size_t j0, size_t nr, size_t nc) const
{
    QMatrix m(nr, nc);
    for (size_t i = 0; i < nr; ++i)
        for (size_t j = 0; j < nc; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
    return m;
}

void QMatrix::set_block(size_t i0, size_t j0, const QMatrix& b)
{
    if (i0 + b.r_ > r_ || j0 + b.c_ > c_) throw Error("shape-mismatch", "block out of range");
    for (size_t i = 0; i < b.r_; ++i)
        for (size_t j = 0; j < b.c_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

std::vector<size_t> rref(QMatrix& m)
{
    std::vector<size_t> piv;
    size_t row = 0;
    mpq_class f;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t p = row;
        while (p < m.rows() && sgn(m(p, col)) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        mpq_class inv = 1 / m(row, col);
        for (size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == row || sgn(m(i, col)) == 0) continue;
            f = m(i, col);
            for (size_t j = col; j < m.cols(); ++j)
                if (sgn(m(row, j)) != 0) m(i, j) -= f * m(row, j);
        }
        piv.push_back(col);
        ++row;
    }
    return piv;
}

size_t QMatrix::rank() const
{
    if (r_ == 0 || c_ == 0) return 0;
    QMatrix m = r_ <= c_ ? *this : transpose();
    return rref(m).size();
}

QMatrix QMatrix::inverse() const
{
    if (r_ != c_) throw Error("singular-matrix", "inverse of a non-square matrix");
    QMatrix aug(r_, 2 * r_);
    aug.set_block(0, 0, *this);
    aug.set_block(0, r_, identity(r_));
    auto piv = rref(aug);
    if (piv.size() < r_ || (r_ && piv.back() >= r_)) throw Error("singular-matrix", "matrix is not invertible");
    return aug.block(0, r_, r_, r_);
}

std::vector<QMatrix> QMatrix::kernel() const
{
    QMatrix m = *this;
    auto piv = rref(m);
    std::vector<char> is_piv(c_, 0);
    for (size_t p : piv) is_piv[p] = 1;
    std::vector<QMatrix> out;
    for (size_t f = 0; f < c_; ++f) {
        if (is_piv[f]) continue;
        QMatrix v(c_, 1);
        v(f, 0) = 1;
        for (size_t i = 0; i < piv.size(); ++i) v(piv[i], 0) = -m(i, f);
        out.push_back(v);
    }
    return out;
}

QMatrix QMatrix::column_basis() const
{
    QMatrix m = *this;
    auto piv = rref(m);
    QMatrix out(r_, piv.size());
    for (size_t k = 0; k < piv.size(); ++k)
        for (size_t i = 0; i < r_; ++i) out(i, k) = (*this)(i, piv[k]);
    return out;
}

QMatrix QMatrix::solve(const QMatrix& B) const
{
    if (B.r_ != r_) throw Error("shape-mismatch", "solve");
    QMatrix aug(r_, c_ + B.c_);
    aug.set_block(0, 0, *this);
    aug.set_block(0, c_, B);
    auto piv = rref(aug);
    QMatrix X(c_, B.c_);
    for (size_t i = 0; i < piv.size(); ++i) {
        if (piv[i] >= c_) throw Error("no-solution", "linear system is inconsistent");
        for (size_t j = 0; j < B.c_; ++j) X(piv[i], j) = aug(i, c_ + j);
    }
    return X;
}

QMatrix QMatrix::kron(const QMatrix& a, const QMatrix& b)
{
    QMatrix m(a.r_ * b.r_, a.c_ * b.c_);
    for (size_t i = 0; i < a.r_; ++i)
        for (size_t j = 0; j < a.c_; ++j) {
            const mpq_class& x = a(i, j);
            if (sgn(x) == 0) continue;
            for (size_t k = 0; k < b.r_; ++k)
                for (size_t l = 0; l < b.c_; ++l)
                    if (sgn(b(k, l)) != 0) m(i * b.r_ + k, j * b.c_ + l) = x * b(k, l);
        }
    return m;
}

QMatrix QMatrix::hcat(const std::vector<QMatrix>& cols, size_t rows)
{
    size_t c = 0;
    for (auto& x : cols) c += x.c_;
    QMatrix m(rows, c);
    size_t at = 0;
    for (auto& x : cols) {
        m.set_block(0, at, x);
        at += x.c_;
    }
    return m;
}

nlohmann::json QMatrix::to_json() const
{
    auto j = nlohmann::json::array();
    for (size_t i = 0; i < r_; ++i) {
        auto row = nlohmann::json::array();
        for (size_t k = 0; k < c_; ++k) {
            const mpq_class& x = (*this)(i, k);
            bool small = x.get_num().fits_slong_p() && x.get_den().fits_slong_p();
            if (x.get_den() == 1 && small) row.push_back(x.get_num().get_si());
            else if (small) row.push_back({x.get_num().get_si(), x.get_den().get_si()});
            else row.push_back({x.get_num().get_str(), x.get_den().get_str()}); // beyond 64 bits
        }
        j.push_back(row);
    }
    return j;
}

static mpz_class json_int(const nlohmann::json& j)
{
    if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        try {
            return mpz_class(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw Error("invalid-spec", "matrix entry is not an integer: " + j.dump());
}

QMatrix QMatrix::from_json(const nlohmann::json& j, size_t rows, size_t cols)
{
    if (!j.is_array() || j.size() != rows) throw Error("invalid-spec", "matrix must have " + std::to_string(rows) + " rows");
    QMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw Error("invalid-spec", "matrix row must have " + std::to_string(cols) + " entries");
        for (size_t k = 0; k < cols; ++k) {
            auto& e = j[i][k];
            if (e.is_array()) {
                if (e.size() != 2) throw Error("invalid-spec", "rational entries are [num, den]");
                mpz_class den = json_int(e[1]);
                if (den == 0) throw Error("invalid-spec", "zero denominator");
                m(i, k) = mpq_class(json_int(e[0]), den);
                m(i, k).canonicalize();
            } else {
                m(i, k) = json_int(e);
            }
        }
    }
    return m;
}

} // namespace ttgeo
