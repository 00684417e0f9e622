#pragma once

#include "wptlab/network.hpp"
#include "wptlab/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace wptlab {

/// Haar-distributed random unitary, drawn by QR-orthonormalizing a complex
/// Gaussian matrix (modified Gram-Schmidt with a reorthogonalization pass;
/// the positive-real normalization of each pivot makes the draw Haar).
CMatrix haar_unitary(std::size_t n, RandomSource& rng);

/// Random n-port network that is exactly lossless and reciprocal: S = U U^T
/// for a Haar-random unitary U. Same seed, same network.
ScatteringMatrix random_lossless_reciprocal(std::size_t n, std::uint64_t seed,
                                            double frequency_hz = 2.4e9);

/// Lossless reciprocal 2m-port network whose transmission block from the
/// generator half into the receiver half has exactly the given singular
/// values. Built from the block form [[C, S], [S, -C]] with S = diag(sigma),
/// C = diag(sqrt(1 - sigma^2)), then scrambled on each side by a seeded
/// random unitary congruence (seed 0 keeps the diagonal form). Returns the
/// network together with its port split: receivers 1..m, generators
/// m+1..2m. Each sigma must lie in [0, 1].
std::pair<ScatteringMatrix, PortPartition> embed_singular_values(
    const std::vector<double>& sigmas, std::uint64_t seed, double frequency_hz = 2.4e9);

} // namespace wptlab
