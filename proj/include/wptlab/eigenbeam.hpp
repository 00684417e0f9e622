#pragma once

#include "wptlab/linalg.hpp"

#include <cstddef>
#include <vector>

namespace wptlab {

struct EigenDecomposition {
    std::vector<double> values;    // descending; ties keep original index order
    std::vector<CVector> vectors;  // orthonormal, phase-normalized, values[i] <-> vectors[i]
};

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each pivot is phase-rotated to make the off-diagonal entry real and then
/// annihilated with a classical symmetric rotation; sweeps continue until the
/// off-diagonal Frobenius mass falls below tol times the matrix norm (at most
/// 100 sweeps). Eigenvectors are normalized so the largest-magnitude
/// component (first such, on ties) is real and positive.
///
/// Throws std::invalid_argument for non-square input or when the Hermitian
/// defect max |h_ij - conj(h_ji)| exceeds 1e-10 (the defect is reported).
EigenDecomposition hermitian_eigendecompose(const CMatrix& h, double tol = 1e-14);

/// Orthogonal power-transfer channels of a transmission block.
///
/// For an M x N block (receiver ports x generator ports), tx_modes are the N
/// eigenvectors of s21^H s21 and rx_modes the M eigenvectors of s21 s21^H,
/// each set orthonormal and sorted by descending eigenvalue. `eigenvalues`
/// holds max(M, N) entries: the min(M, N) coupled-mode transfer ratios,
/// padded with the null modes of the larger side. Entry i pairs with
/// tx_modes[i] and rx_modes[i] wherever those exist.
struct BeamModeSet {
    std::vector<double> eigenvalues;
    std::vector<CVector> tx_modes;
    std::vector<CVector> rx_modes;
};

BeamModeSet beam_modes(const CMatrix& s21);

/// Fraction of the drive power that reaches the receiver ports:
/// |s21 drive|^2 / |drive|^2. Throws std::domain_error on a zero drive.
double efficiency(const CMatrix& s21, const CVector& drive);

/// Expansion weights of a drive vector over the tx eigenbasis.
std::vector<Complex> decompose_input(const BeamModeSet& modes, const CVector& drive);

/// Transfer efficiency reconstructed from expansion weights:
/// sum xi_i |w_i|^2 / sum |w_i|^2. Sizes must match; throws
/// std::domain_error when all weights vanish.
double weighted_efficiency(const std::vector<Complex>& weights,
                           const std::vector<double>& eigenvalues);

struct MaxEfficiency {
    double xi_max = 0.0;
    CVector a_max;  // optimal drive vector (unit norm)
};

/// Best achievable transfer ratio over all drive vectors, with its
/// maximizer (the dominant tx mode).
MaxEfficiency max_efficiency(const CMatrix& s21);

} // namespace wptlab
