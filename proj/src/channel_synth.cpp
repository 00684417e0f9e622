#include "wptlab/channel_synth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wptlab {

CMatrix haar_unitary(std::size_t n, RandomSource& rng)
{
    if (n == 0)
        throw std::invalid_argument("unitary dimension must be at least 1");

    CMatrix g(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            g(r, c) = rng.complex_gaussian();

    // Column-wise modified Gram-Schmidt. A second projection pass keeps the
    // columns orthonormal to machine precision even for unlucky draws.
    CMatrix q = g;
    for (std::size_t j = 0; j < n; ++j) {
        CVector col = q.column(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                const CVector prev = q.column(i);
                const Complex proj = inner(prev, col);
                for (std::size_t r = 0; r < n; ++r)
                    col[r] -= proj * prev[r];
            }
        }
        const double len = norm(col);
        if (len < 1e-12)
            throw std::runtime_error("random matrix was numerically singular");
        for (std::size_t r = 0; r < n; ++r)
            q(r, j) = col[r] / len;
    }
    return q;
}

ScatteringMatrix random_lossless_reciprocal(std::size_t n, std::uint64_t seed,
                                            double frequency_hz)
{
    if (n == 0)
        throw std::invalid_argument("port count must be at least 1");

    RandomSource rng(seed);
    const CMatrix u = haar_unitary(n, rng);

    ScatteringMatrix network;
    network.s = u * u.transpose();  // symmetric and unitary by construction
    network.frequency_hz = frequency_hz;
    network.validate();
    return network;
}

std::pair<ScatteringMatrix, PortPartition> embed_singular_values(
    const std::vector<double>& sigmas, std::uint64_t seed, double frequency_hz)
{
    const std::size_t m = sigmas.size();
    if (m == 0)
        throw std::invalid_argument("at least one singular value is required");
    for (double s : sigmas)
        if (!(s >= 0.0) || s > 1.0)
            throw std::domain_error("singular value " + std::to_string(s) +
                                    " outside [0, 1]");

    // Orthogonal 2m x 2m core [[C, S], [S, -C]]: each generator port m+i
    // couples to receiver port i with amplitude sigma_i, the remainder
    // reflects.
    CMatrix core(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        const double c = std::sqrt(std::max(0.0, 1.0 - sigmas[i] * sigmas[i]));
        core(i, i) = c;
        core(i, m + i) = sigmas[i];
        core(m + i, i) = sigmas[i];
        core(m + i, m + i) = -c;
    }

    ScatteringMatrix network;
    if (seed == 0) {
        network.s = std::move(core);
    } else {
        // Congruence by block-diagonal unitaries keeps the network lossless
        // and reciprocal and leaves the transmission singular values alone.
        RandomSource rng(seed);
        const CMatrix t1 = haar_unitary(m, rng);
        const CMatrix t2 = haar_unitary(m, rng);
        CMatrix u(2 * m, 2 * m);
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) {
                u(r, c) = t1(r, c);
                u(m + r, m + c) = t2(r, c);
            }
        }
        network.s = u * core * u.transpose();
    }
    network.frequency_hz = frequency_hz;
    network.validate();

    PortPartition partition;
    for (std::size_t i = 1; i <= m; ++i) {
        partition.rx_active.push_back(static_cast<int>(i));
        partition.tx_active.push_back(static_cast<int>(m + i));
    }
    return {std::move(network), std::move(partition)};
}

} // namespace wptlab
