#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace wptlab {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix. Networks in this project have at most a
/// few dozen ports, so all operations are plain loops with no blocking.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Complex>& entries() const { return entries_; }

    CMatrix transpose() const;
    CMatrix conjugate() const;
    /// Conjugate transpose.
    CMatrix adjoint() const;

    CMatrix operator*(const CMatrix& rhs) const;
    CMatrix operator*(Complex scale) const;
    CMatrix operator+(const CMatrix& rhs) const;
    CMatrix operator-(const CMatrix& rhs) const;

    /// Matrix-vector product.
    CVector apply(const CVector& x) const;

    /// Column j as a vector.
    CVector column(std::size_t j) const;

    double frobenius_norm() const;
    double max_abs() const;

    /// Largest |a_ij - conj(a_ji)| over all entries; zero for Hermitian input.
    double hermitian_defect() const;

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

/// Inner product, conjugate-linear in the first argument: sum conj(x_i) y_i.
Complex inner(const CVector& x, const CVector& y);

double squared_norm(const CVector& x);
double norm(const CVector& x);
bool all_finite(const CVector& x);

CVector operator+(const CVector& x, const CVector& y);
CVector operator-(const CVector& x, const CVector& y);
CVector operator*(Complex scale, const CVector& x);
CVector conjugate(const CVector& x);

} // namespace wptlab
