#include "wptlab/eigenbeam.hpp"

#include "oracles.hpp"
#include "wptlab/channel_synth.hpp"
#include "wptlab/network.hpp"
#include "wptlab/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace wptlab;
using namespace wptlab::testing;

namespace {

CMatrix diag2(double a, double b)
{
    CMatrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

double vector_gap(const CVector& x, const CVector& y)
{
    return norm(x - y);
}

// Transmission block of a random lossless reciprocal channel with the first
// `rows` ports as receivers and the rest as generators.
CMatrix random_lossless_block(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    const ScatteringMatrix network = random_lossless_reciprocal(rows + cols, seed);
    std::vector<int> rx(rows);
    std::vector<int> tx(cols);
    std::iota(rx.begin(), rx.end(), 1);
    std::iota(tx.begin(), tx.end(), static_cast<int>(rows) + 1);
    return subblock(network, rx, tx);
}

double orthonormality_defect(const std::vector<CVector>& vectors)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = 0; j < vectors.size(); ++j) {
            const double expected = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(inner(vectors[i], vectors[j]) - expected));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("diagonal matrices decompose to sorted eigenvalues and basis vectors")
{
    const EigenDecomposition eig = hermitian_eigendecompose(diag2(0.36, 0.64));
    REQUIRE(eig.values.size() == 2);
    CHECK(eig.values[0] == doctest::Approx(0.64).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(vector_gap(eig.vectors[0], CVector{Complex{}, Complex{1.0, 0.0}}) <= 1e-12);
    CHECK(vector_gap(eig.vectors[1], CVector{Complex{1.0, 0.0}, Complex{}}) <= 1e-12);
}

TEST_CASE("a symmetric swap matrix splits into even and odd vectors")
{
    CMatrix h(2, 2);
    h(0, 1) = 1.0;
    h(1, 0) = 1.0;
    const EigenDecomposition eig = hermitian_eigendecompose(h);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(eig.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig.values[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(vector_gap(eig.vectors[0],
                     CVector{Complex{inv_sqrt2, 0.0}, Complex{inv_sqrt2, 0.0}}) <= 1e-12);
    CHECK(vector_gap(eig.vectors[1],
                     CVector{Complex{inv_sqrt2, 0.0}, Complex{-inv_sqrt2, 0.0}}) <= 1e-12);
}

TEST_CASE("equal eigenvalues keep their original index order")
{
    const EigenDecomposition eig = hermitian_eigendecompose(CMatrix::identity(3));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(eig.values[i] == doctest::Approx(1.0).epsilon(1e-14));
        CVector expected(3);
        expected[i] = Complex{1.0, 0.0};
        CHECK(vector_gap(eig.vectors[i], expected) <= 1e-12);
    }
}

TEST_CASE("random Hermitian matrices agree with the power-iteration oracle")
{
    for (std::uint64_t seed : {2ull, 3ull, 4ull}) {
        const CMatrix h = random_hermitian(5, seed);
        const EigenDecomposition eig = hermitian_eigendecompose(h);
        const std::vector<double> reference = power_iteration_eigenvalues(h, seed + 100);
        REQUIRE(eig.values.size() == reference.size());
        for (std::size_t i = 0; i < reference.size(); ++i)
            CHECK(std::abs(eig.values[i] - reference[i]) <= 1e-9);

        CHECK(orthonormality_defect(eig.vectors) <= 1e-10);
        for (std::size_t i = 0; i < eig.values.size(); ++i) {
            const CVector residual = h.apply(eig.vectors[i]) -
                                     Complex{eig.values[i], 0.0} * eig.vectors[i];
            CHECK(norm(residual) <= 1e-9);
        }
    }
}

TEST_CASE("eigendecomposition rejects invalid input")
{
    CHECK_THROWS_AS(static_cast<void>(hermitian_eigendecompose(CMatrix(2, 3))),
                    std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(hermitian_eigendecompose(CMatrix())),
                    std::invalid_argument);

    CMatrix skew(2, 2);
    skew(0, 1) = Complex{0.0, 1.0};
    skew(1, 0) = Complex{0.0, 1.0};  // Hermitian would need -i here
    CHECK_THROWS_WITH_AS(static_cast<void>(hermitian_eigendecompose(skew)),
                         doctest::Contains("Hermitian"), std::invalid_argument);
}

TEST_CASE("beam modes of a diagonal block")
{
    const BeamModeSet modes = beam_modes(diag2(0.6, 0.8));
    REQUIRE(modes.eigenvalues.size() == 2);
    CHECK(modes.eigenvalues[0] == doctest::Approx(0.64).epsilon(1e-14));
    CHECK(modes.eigenvalues[1] == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(vector_gap(modes.tx_modes[0], CVector{Complex{}, Complex{1.0, 0.0}}) <= 1e-12);

    // Driving each mode transfers exactly its eigenvalue of the power.
    const CMatrix block = diag2(0.6, 0.8);
    for (std::size_t i = 0; i < modes.tx_modes.size(); ++i)
        CHECK(std::abs(squared_norm(block.apply(modes.tx_modes[i])) - modes.eigenvalues[i]) <=
              1e-10);
}

TEST_CASE("a dead channel yields all-zero eigenvalues and canonical modes")
{
    const BeamModeSet modes = beam_modes(CMatrix(2, 3));
    REQUIRE(modes.eigenvalues.size() == 3);  // the longer side carries the list
    for (double xi : modes.eigenvalues)
        CHECK(xi == 0.0);
    REQUIRE(modes.tx_modes.size() == 3);
    REQUIRE(modes.rx_modes.size() == 2);
    for (std::size_t i = 0; i < modes.tx_modes.size(); ++i) {
        CVector expected(3);
        expected[i] = Complex{1.0, 0.0};
        CHECK(vector_gap(modes.tx_modes[i], expected) <= 1e-12);
    }
}

TEST_CASE("beam-mode eigenvalues are the squared singular values of the block")
{
    const CMatrix block = random_lossless_block(3, 4, 17);
    const BeamModeSet modes = beam_modes(block);
    const std::vector<double> singular = jacobi_singular_values(block);
    REQUIRE(modes.eigenvalues.size() == 4);
    for (std::size_t i = 0; i < singular.size(); ++i)
        CHECK(std::abs(modes.eigenvalues[i] - singular[i] * singular[i]) <= 1e-9);
    CHECK(std::abs(modes.eigenvalues[3]) <= 1e-9);  // null mode of the wider side
}

TEST_CASE("transfer efficiency of explicit drives")
{
    const CMatrix block = diag2(0.6, 0.8);
    CHECK(efficiency(block, CVector{Complex{}, Complex{1.0, 0.0}}) ==
          doctest::Approx(0.64).epsilon(1e-14));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(efficiency(block, CVector{Complex{inv_sqrt2, 0.0}, Complex{inv_sqrt2, 0.0}}) ==
          doctest::Approx(0.50).epsilon(1e-14));
    CHECK_THROWS_AS(static_cast<void>(efficiency(block, CVector(2))), std::domain_error);
    CHECK_THROWS_AS(static_cast<void>(efficiency(block, CVector(3))), std::invalid_argument);
}

TEST_CASE("drive decomposition recovers mode weights")
{
    const CMatrix block = random_lossless_block(3, 3, 23);
    const BeamModeSet modes = beam_modes(block);

    const std::vector<Complex> unit = decompose_input(modes, modes.tx_modes[0]);
    CHECK(std::abs(unit[0] - Complex{1.0, 0.0}) <= 1e-12);
    for (std::size_t i = 1; i < unit.size(); ++i)
        CHECK(std::abs(unit[i]) <= 1e-12);

    CVector mixed(3);
    for (std::size_t j = 0; j < 3; ++j)
        mixed[j] = 2.0 * modes.tx_modes[0][j] + Complex{0.0, 3.0} * modes.tx_modes[1][j];
    const std::vector<Complex> weights = decompose_input(modes, mixed);
    CHECK(std::abs(weights[0] - Complex{2.0, 0.0}) <= 1e-12);
    CHECK(std::abs(weights[1] - Complex{0.0, 3.0}) <= 1e-12);
    CHECK(std::abs(weights[2]) <= 1e-12);
}

TEST_CASE("decomposition preserves total power")
{
    RandomSource rng(31);
    const CMatrix block = random_lossless_block(4, 4, 29);
    const BeamModeSet modes = beam_modes(block);
    for (int trial = 0; trial < 5; ++trial) {
        const CVector drive = rng.complex_gaussian_vector(4);
        const std::vector<Complex> weights = decompose_input(modes, drive);
        double weight_power = 0.0;
        for (const Complex& w : weights)
            weight_power += std::norm(w);
        CHECK(std::abs(weight_power - squared_norm(drive)) <= 1e-10);
    }
}

TEST_CASE("weighted efficiency combines modes by power share")
{
    CHECK(weighted_efficiency({Complex{1.0, 0.0}, Complex{1.0, 0.0}}, {0.36, 0.64}) ==
          doctest::Approx(0.50).epsilon(1e-14));
    CHECK(weighted_efficiency({Complex{1.0, 0.0}, Complex{}}, {0.36, 0.64}) ==
          doctest::Approx(0.36).epsilon(1e-14));
    CHECK(weighted_efficiency({Complex{1.0, 0.0}, Complex{1.0, 0.0}, Complex{1.0, 0.0}},
                              {0.2, 0.3, 0.4}) == doctest::Approx(0.30).epsilon(1e-14));
    CHECK_THROWS_AS(
        static_cast<void>(weighted_efficiency({Complex{1.0, 0.0}}, {0.2, 0.3})),
        std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(weighted_efficiency({Complex{}, Complex{}}, {0.2, 0.3})),
                    std::domain_error);
}

TEST_CASE("best achievable transfer on a diagonal block")
{
    const MaxEfficiency best = max_efficiency(diag2(0.6, 0.8));
    CHECK(best.xi_max == doctest::Approx(0.64).epsilon(1e-14));
    CHECK(vector_gap(best.a_max, CVector{Complex{}, Complex{1.0, 0.0}}) <= 1e-12);

    const MaxEfficiency dead = max_efficiency(CMatrix(2, 2));
    CHECK(dead.xi_max == 0.0);
    CHECK(vector_gap(dead.a_max, CVector{Complex{1.0, 0.0}, Complex{}}) <= 1e-12);
}

TEST_CASE("no random drive beats the reported maximum on a many-port channel")
{
    const ScatteringMatrix network = random_lossless_reciprocal(12, 77);
    const CMatrix block = subblock(network, {1, 2}, {7, 8});
    const MaxEfficiency best = max_efficiency(block);
    const double searched = random_search_efficiency(block, 100000, 991);
    CHECK(best.xi_max >= searched - 1e-9);
    // The random search with this many draws must come close on 2 ports.
    CHECK(searched >= 0.9 * best.xi_max);
}

TEST_CASE("efficiency never exceeds the dominant eigenvalue and ignores drive scale")
{
    RandomSource rng(41);
    const CMatrix block = random_lossless_block(3, 4, 37);
    const double xi_max = max_efficiency(block).xi_max;
    for (int trial = 0; trial < 20; ++trial) {
        const CVector drive = rng.complex_gaussian_vector(4);
        const double eta = efficiency(block, drive);
        CHECK(eta <= xi_max + 1e-12);
        const double scaled = efficiency(block, Complex{0.0, 2.7} * drive);
        CHECK(std::abs(eta - scaled) <= 1e-12);
    }
}

TEST_CASE("direct and mode-weighted efficiency agree")
{
    RandomSource rng(43);
    for (std::uint64_t seed : {51ull, 52ull}) {
        const CMatrix block = random_lossless_block(4, 3, seed);
        const BeamModeSet modes = beam_modes(block);
        const std::vector<double> coupled(modes.eigenvalues.begin(),
                                          modes.eigenvalues.begin() + 3);
        for (int trial = 0; trial < 10; ++trial) {
            const CVector drive = rng.complex_gaussian_vector(3);
            const double direct = efficiency(block, drive);
            const double weighted =
                weighted_efficiency(decompose_input(modes, drive), coupled);
            CHECK(std::abs(direct - weighted) <= 1e-10);
        }
    }
}

TEST_CASE("lossless blocks spend the full Frobenius mass across the modes")
{
    for (std::uint64_t seed : {61ull, 62ull}) {
        const CMatrix block = random_lossless_block(3, 5, seed);
        const BeamModeSet modes = beam_modes(block);
        const double trace =
            std::accumulate(modes.eigenvalues.begin(), modes.eigenvalues.end(), 0.0);
        const double frob = block.frobenius_norm();
        CHECK(std::abs(trace - frob * frob) <= 1e-10);
    }
}

TEST_CASE("both Gram products share their nonzero spectrum")
{
    const CMatrix block = random_lossless_block(2, 5, 71);
    const CMatrix adj = block.adjoint();
    const EigenDecomposition tall = hermitian_eigendecompose(adj * block);  // 5 x 5
    const EigenDecomposition wide = hermitian_eigendecompose(block * adj);  // 2 x 2
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::abs(tall.values[i] - wide.values[i]) <= 1e-10);
    for (std::size_t i = 2; i < 5; ++i)
        CHECK(std::abs(tall.values[i]) <= 1e-10);
}
