#include "wptlab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace wptlab {

CMatrix CMatrix::identity(std::size_t n)
{
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::transpose() const
{
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m(c, r) = (*this)(r, c);
    return m;
}

CMatrix CMatrix::conjugate() const
{
    CMatrix m(rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m(r, c) = std::conj((*this)(r, c));
    return m;
}

CMatrix CMatrix::adjoint() const
{
    CMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m(c, r) = std::conj((*this)(r, c));
    return m;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("matrix product dimension mismatch");
    CMatrix m(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex a = (*this)(r, k);
            if (a == Complex{})
                continue;
            for (std::size_t c = 0; c < rhs.cols_; ++c)
                m(r, c) += a * rhs(k, c);
        }
    }
    return m;
}

CMatrix CMatrix::operator*(Complex scale) const
{
    CMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        m.entries_[i] = entries_[i] * scale;
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix sum dimension mismatch");
    CMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        m.entries_[i] = entries_[i] + rhs.entries_[i];
    return m;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("matrix difference dimension mismatch");
    CMatrix m(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
        m.entries_[i] = entries_[i] - rhs.entries_[i];
    return m;
}

CVector CMatrix::apply(const CVector& x) const
{
    if (x.size() != cols_)
        throw std::invalid_argument("matrix-vector dimension mismatch");
    CVector y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Complex acc{};
        for (std::size_t c = 0; c < cols_; ++c)
            acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

CVector CMatrix::column(std::size_t j) const
{
    CVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        v[r] = (*this)(r, j);
    return v;
}

double CMatrix::frobenius_norm() const
{
    double acc = 0.0;
    for (const Complex& z : entries_)
        acc += std::norm(z);
    return std::sqrt(acc);
}

double CMatrix::max_abs() const
{
    double m = 0.0;
    for (const Complex& z : entries_)
        m = std::max(m, std::abs(z));
    return m;
}

double CMatrix::hermitian_defect() const
{
    double m = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return m;
}

bool CMatrix::all_finite() const
{
    for (const Complex& z : entries_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return false;
    return true;
}

Complex inner(const CVector& x, const CVector& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("inner product dimension mismatch");
    Complex acc{};
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += std::conj(x[i]) * y[i];
    return acc;
}

double squared_norm(const CVector& x)
{
    double acc = 0.0;
    for (const Complex& z : x)
        acc += std::norm(z);
    return acc;
}

double norm(const CVector& x)
{
    return std::sqrt(squared_norm(x));
}

bool all_finite(const CVector& x)
{
    for (const Complex& z : x)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return false;
    return true;
}

CVector operator+(const CVector& x, const CVector& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("vector sum dimension mismatch");
    CVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = x[i] + y[i];
    return z;
}

CVector operator-(const CVector& x, const CVector& y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("vector difference dimension mismatch");
    CVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = x[i] - y[i];
    return z;
}

CVector operator*(Complex scale, const CVector& x)
{
    CVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = scale * x[i];
    return z;
}

CVector conjugate(const CVector& x)
{
    CVector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = std::conj(x[i]);
    return z;
}

} // namespace wptlab
