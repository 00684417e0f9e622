#include "wptlab/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace wptlab {

void ScatteringMatrix::validate() const
{
    if (s.empty())
        throw std::invalid_argument("scattering matrix must be non-empty");
    if (!s.square())
        throw std::invalid_argument("scattering matrix must be square");
    if (!s.all_finite())
        throw std::invalid_argument("scattering matrix entries must be finite");
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("frequency must be positive");
    if (!(reference_impedance > 0.0))
        throw std::invalid_argument("reference impedance must be positive");
}

void PortPartition::validate(std::size_t port_count) const
{
    if (rx_active.empty())
        throw std::invalid_argument("receiver port group must be non-empty");
    if (tx_active.empty())
        throw std::invalid_argument("generator port group must be non-empty");

    std::set<int> seen;
    std::size_t total = 0;
    for (const std::vector<int>* group : {&rx_active, &tx_active, &rx_absorbing, &tx_absorbing}) {
        for (int p : *group) {
            if (p < 1 || static_cast<std::size_t>(p) > port_count)
                throw std::invalid_argument("port " + std::to_string(p) + " out of range for " +
                                            std::to_string(port_count) + "-port network");
            if (!seen.insert(p).second)
                throw std::invalid_argument("port " + std::to_string(p) +
                                            " assigned to more than one group");
            ++total;
        }
    }
    if (total != port_count)
        throw std::invalid_argument("port groups must cover all " + std::to_string(port_count) +
                                    " ports (got " + std::to_string(total) + ")");
}

bool is_reciprocal(const ScatteringMatrix& network, double tolerance)
{
    network.validate();
    if (tolerance < 0.0)
        throw std::invalid_argument("tolerance must be non-negative");
    const CMatrix& s = network.s;
    for (std::size_t r = 0; r < s.rows(); ++r)
        for (std::size_t c = r + 1; c < s.cols(); ++c)
            if (std::abs(s(r, c) - s(c, r)) > tolerance)
                return false;
    return true;
}

bool is_lossless(const ScatteringMatrix& network, double tolerance)
{
    network.validate();
    if (tolerance < 0.0)
        throw std::invalid_argument("tolerance must be non-negative");
    const CMatrix gram = network.s.adjoint() * network.s;
    const std::size_t n = gram.rows();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const Complex expected = (r == c) ? Complex{1.0, 0.0} : Complex{};
            if (std::abs(gram(r, c) - expected) > tolerance)
                return false;
        }
    }
    return true;
}

namespace {

std::size_t checked_index(int port, std::size_t port_count)
{
    if (port < 1 || static_cast<std::size_t>(port) > port_count)
        throw std::out_of_range("port " + std::to_string(port) + " out of range for " +
                                std::to_string(port_count) + "-port network");
    return static_cast<std::size_t>(port - 1);
}

} // namespace

CMatrix subblock(const ScatteringMatrix& network, const std::vector<int>& row_ports,
                 const std::vector<int>& col_ports)
{
    network.validate();
    const std::size_t n = network.ports();
    CMatrix block(row_ports.size(), col_ports.size());
    for (std::size_t r = 0; r < row_ports.size(); ++r) {
        const std::size_t ri = checked_index(row_ports[r], n);
        for (std::size_t c = 0; c < col_ports.size(); ++c)
            block(r, c) = network.s(ri, checked_index(col_ports[c], n));
    }
    return block;
}

CMatrix transmission_block(const ScatteringMatrix& network, const PortPartition& partition)
{
    partition.validate(network.ports());
    return subblock(network, partition.rx_active, partition.tx_active);
}

double fraunhofer_distance(double diameter_m, double wavelength_m)
{
    if (!(wavelength_m > 0.0))
        throw std::domain_error("wavelength must be positive");
    if (diameter_m < 0.0)
        throw std::domain_error("aperture diameter must be non-negative");
    return 2.0 * diameter_m * diameter_m / wavelength_m;
}

} // namespace wptlab
