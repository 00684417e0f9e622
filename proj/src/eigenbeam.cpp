#include "wptlab/eigenbeam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wptlab {

namespace {

// Applies the unitary similarity that annihilates a(p, q): a phase rotation
// makes the pivot real, then a classical symmetric Jacobi rotation zeroes
// it. The eigenvector accumulator v picks up the same column operations.
void rotate(CMatrix& a, CMatrix& v, std::size_t p, std::size_t q)
{
    const Complex apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0)
        return;
    const Complex phase = apq / mag;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * mag);
    const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                  : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // Combined 2x2 unitary: columns (c, -s conj(phase)) and (s, c conj(phase)).
    const Complex gqp = -s * std::conj(phase);
    const Complex gqq = c * std::conj(phase);

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * c + akq * gqp;
        a(k, q) = akp * s + akq * gqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = c * apk + std::conj(gqp) * aqk;
        a(q, k) = s * apk + std::conj(gqq) * aqk;
    }
    a(p, q) = Complex{};
    a(q, p) = Complex{};
    a(p, p) = Complex{a(p, p).real(), 0.0};
    a(q, q) = Complex{a(q, q).real(), 0.0};

    for (std::size_t k = 0; k < v.rows(); ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * c + vkq * gqp;
        v(k, q) = vkp * s + vkq * gqq;
    }
}

double off_diagonal_mass(const CMatrix& a)
{
    double acc = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (r != c)
                acc += std::norm(a(r, c));
    return std::sqrt(acc);
}

// Rotates each vector so its largest-magnitude component (the first such on
// ties) is real and positive, fixing the arbitrary overall phase.
void normalize_phase(CVector& v)
{
    std::size_t idx = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            idx = i;
        }
    }
    if (best == 0.0)
        return;
    const Complex factor = std::conj(v[idx]) / best;
    for (Complex& z : v)
        z *= factor;
    v[idx] = Complex{std::abs(v[idx]), 0.0};
}

} // namespace

EigenDecomposition hermitian_eigendecompose(const CMatrix& h, double tol)
{
    if (h.empty() || !h.square())
        throw std::invalid_argument("eigendecomposition requires a non-empty square matrix");
    if (!h.all_finite())
        throw std::invalid_argument("eigendecomposition requires finite entries");
    if (!(tol > 0.0))
        throw std::invalid_argument("tolerance must be positive");
    const double defect = h.hermitian_defect();
    if (defect > 1e-10) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian: max |h_ij - conj(h_ji)| = " << defect;
        throw std::invalid_argument(msg.str());
    }

    const std::size_t n = h.rows();
    // Work on the Hermitian average so representation roundoff cannot bias
    // the rotations.
    CMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
    CMatrix v = CMatrix::identity(n);

    const double scale = a.frobenius_norm();
    if (scale > 0.0) {
        for (int sweep = 0; sweep < 100; ++sweep) {
            if (off_diagonal_mass(a) <= tol * scale)
                break;
            for (std::size_t p = 0; p + 1 < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q)
                    rotate(a, v, p, q);
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });

    EigenDecomposition out;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t i : order) {
        out.values.push_back(a(i, i).real());
        CVector vec = v.column(i);
        normalize_phase(vec);
        out.vectors.push_back(std::move(vec));
    }
    return out;
}

BeamModeSet beam_modes(const CMatrix& s21)
{
    if (s21.empty())
        throw std::invalid_argument("transmission block must be non-empty");
    if (!s21.all_finite())
        throw std::invalid_argument("transmission block entries must be finite");

    const CMatrix adj = s21.adjoint();
    EigenDecomposition tx = hermitian_eigendecompose(adj * s21);
    EigenDecomposition rx = hermitian_eigendecompose(s21 * adj);

    BeamModeSet modes;
    // Both products share the coupled spectrum; the larger side carries the
    // full list including its null modes.
    modes.eigenvalues = (s21.cols() >= s21.rows()) ? std::move(tx.values) : std::move(rx.values);
    modes.tx_modes = std::move(tx.vectors);
    modes.rx_modes = std::move(rx.vectors);

    for (double& x : modes.eigenvalues) {
        if (x < 0.0) {
            if (x < -1e-12)
                throw std::runtime_error("transfer eigenvalue unexpectedly negative: " +
                                         std::to_string(x));
            x = 0.0;  // roundoff on an exact zero of the Gram product
        }
    }
    return modes;
}

double efficiency(const CMatrix& s21, const CVector& drive)
{
    if (s21.empty())
        throw std::invalid_argument("transmission block must be non-empty");
    if (drive.size() != s21.cols())
        throw std::invalid_argument("drive length must match generator port count");
    const double denom = squared_norm(drive);
    if (denom == 0.0)
        throw std::domain_error("efficiency undefined for a zero drive vector");
    return squared_norm(s21.apply(drive)) / denom;
}

std::vector<Complex> decompose_input(const BeamModeSet& modes, const CVector& drive)
{
    std::vector<Complex> weights;
    weights.reserve(modes.tx_modes.size());
    for (const CVector& mode : modes.tx_modes)
        weights.push_back(inner(mode, drive));
    return weights;
}

double weighted_efficiency(const std::vector<Complex>& weights,
                           const std::vector<double>& eigenvalues)
{
    if (weights.size() != eigenvalues.size())
        throw std::invalid_argument("weights and eigenvalues must have equal length");
    double num = 0.0;
    double denom = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double p = std::norm(weights[i]);
        num += eigenvalues[i] * p;
        denom += p;
    }
    if (denom == 0.0)
        throw std::domain_error("efficiency undefined for all-zero weights");
    return num / denom;
}

MaxEfficiency max_efficiency(const CMatrix& s21)
{
    BeamModeSet modes = beam_modes(s21);
    return MaxEfficiency{modes.eigenvalues.at(0), std::move(modes.tx_modes.at(0))};
}

} // namespace wptlab
