#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hamvqe/family.hpp"
#include "hamvqe/pauli.hpp"

namespace hamvqe {

struct Spectrum {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXcd vectors; // columns
};

/// The k lowest eigenpairs of the dense matrix of h.
Spectrum eigenspectrum(const PauliSum &h, std::size_t k);

struct SectorSpec {
    std::size_t n_qubits;
    std::size_t electrons;
};

/// Ascending eigenvalues of h restricted to basis states with `electrons` one
/// bits. Throws NumericalError when h couples different particle numbers.
Eigen::VectorXd sector_spectrum(const PauliSum &h, SectorSpec sector);

/// Exact ground energy at every grid node, optionally within one sector.
std::vector<double> ground_energies(const HamiltonianFamily &family, std::optional<std::size_t> electrons = {});

struct PesMinimum {
    std::vector<double> lambda;
    double energy;
    std::vector<std::size_t> node;
    bool boundary;
};

/// Grid scan of the exact ground energy. With `refine`, a parabola through the
/// minimum node and its neighbours along each axis gives the vertex.
PesMinimum pes_argmin(const HamiltonianFamily &family, bool refine, std::optional<std::size_t> electrons = {});

/// True when the node's energy is below each existing grid neighbour along every axis.
bool is_local_minimum(const HamiltonianFamily &family, const std::vector<double> &energies,
                      std::span<const std::size_t> node);

} // namespace hamvqe
