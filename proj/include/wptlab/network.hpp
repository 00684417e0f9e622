#pragma once

#include "wptlab/linalg.hpp"

#include <cstddef>
#include <vector>

namespace wptlab {

/// Single-frequency scattering description of an n-port network.
/// Entry s(i, j) is the wave amplitude leaving port i+1 per unit wave
/// entering port j+1, referenced to `reference_impedance` ohms.
struct ScatteringMatrix {
    CMatrix s;
    double frequency_hz = 2.4e9;
    double reference_impedance = 50.0;

    std::size_t ports() const { return s.rows(); }

    /// Throws std::invalid_argument unless the matrix is square, non-empty
    /// and finite, with positive frequency and reference impedance.
    void validate() const;
};

/// Assignment of the 1-based ports of a network to the four functional
/// groups used throughout: powered receivers, powered generators, and the
/// terminated (absorbing) remainder on each side.
struct PortPartition {
    std::vector<int> rx_active;
    std::vector<int> tx_active;
    std::vector<int> rx_absorbing;
    std::vector<int> tx_absorbing;

    /// Throws std::invalid_argument unless the four groups are disjoint,
    /// cover ports 1..port_count exactly, and both active groups are
    /// non-empty.
    void validate(std::size_t port_count) const;
};

/// True when s departs from its transpose by at most `tolerance` in any
/// entry (a reciprocal network).
bool is_reciprocal(const ScatteringMatrix& network, double tolerance);

/// True when s^H s departs from the identity by at most `tolerance` in any
/// entry (a lossless network).
bool is_lossless(const ScatteringMatrix& network, double tolerance);

/// Extracts the sub-matrix with rows taken from `row_ports` and columns
/// from `col_ports` (both 1-based, in the given order). Throws
/// std::out_of_range naming any port outside 1..n.
CMatrix subblock(const ScatteringMatrix& network, const std::vector<int>& row_ports,
                 const std::vector<int>& col_ports);

/// Transmission block from the active generator ports into the active
/// receiver ports: rows rx_active, columns tx_active.
CMatrix transmission_block(const ScatteringMatrix& network, const PortPartition& partition);

/// Far-field boundary 2 d^2 / lambda for an aperture of diameter d.
/// Throws std::domain_error for non-positive wavelength or negative
/// diameter.
double fraunhofer_distance(double diameter_m, double wavelength_m);

} // namespace wptlab
