#include "hamvqe/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "hamvqe/error.hpp"

namespace hamvqe {

Spectrum eigenspectrum(const PauliSum &h, std::size_t k) {
    const Eigen::MatrixXcd m = dense_matrix(h);
    const auto dim = static_cast<std::size_t>(m.rows());
    if (k == 0 || k > dim) {
        throw DimensionError("requested " + std::to_string(k) + " eigenpairs of a " + std::to_string(dim) +
                             "-dimensional operator");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver did not converge");
    }
    const auto kk = static_cast<Eigen::Index>(k);
    Spectrum s{solver.eigenvalues().head(kk), solver.eigenvectors().leftCols(kk)};
    for (Eigen::Index i = 0; i < kk; ++i) {
        const double residual = (m * s.vectors.col(i) - s.values(i) * s.vectors.col(i)).norm();
        if (residual > 1e-8) {
            throw NumericalError("eigenpair " + std::to_string(i) + " residual " + std::to_string(residual));
        }
    }
    return s;
}

Eigen::VectorXd sector_spectrum(const PauliSum &h, SectorSpec sector) {
    if (sector.n_qubits != h.n_qubits()) {
        throw DimensionError("sector width does not match the operator");
    }
    if (sector.electrons > sector.n_qubits) {
        throw DimensionError("sector electron count exceeds the qubit count");
    }
    const Eigen::MatrixXcd m = dense_matrix(h);
    const auto dim = static_cast<std::uint64_t>(m.rows());
    std::vector<Eigen::Index> basis;
    for (std::uint64_t i = 0; i < dim; ++i) {
        if (static_cast<std::size_t>(std::popcount(i)) == sector.electrons) {
            basis.push_back(static_cast<Eigen::Index>(i));
        }
    }
    for (std::uint64_t i = 0; i < dim; ++i) {
        for (std::uint64_t j = 0; j < dim; ++j) {
            if (std::popcount(i) != std::popcount(j) &&
                std::abs(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) > 1e-10) {
                throw NumericalError("operator does not conserve particle number (couples basis states " +
                                     std::to_string(i) + " and " + std::to_string(j) + ")");
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd block(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            block(a, b) = m(basis[static_cast<std::size_t>(a)], basis[static_cast<std::size_t>(b)]);
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver did not converge");
    }
    return solver.eigenvalues();
}

std::vector<double> ground_energies(const HamiltonianFamily &family, std::optional<std::size_t> electrons) {
    std::vector<double> out;
    out.reserve(family.node_count());
    for (std::size_t i = 0; i < family.node_count(); ++i) {
        const PauliSum h = family.hamiltonian_at(family.node(i));
        out.push_back(electrons ? sector_spectrum(h, {h.n_qubits(), *electrons})(0) : eigenspectrum(h, 1).values(0));
    }
    return out;
}

bool is_local_minimum(const HamiltonianFamily &family, const std::vector<double> &energies,
                      std::span<const std::size_t> node) {
    const double e = energies.at(family.flat_index(node));
    std::vector<std::size_t> neighbour(node.begin(), node.end());
    for (std::size_t a = 0; a < family.dims(); ++a) {
        for (int dir : {-1, 1}) {
            if ((dir < 0 && node[a] == 0) || (dir > 0 && node[a] + 1 == family.axes()[a].grid.size())) {
                continue;
            }
            neighbour[a] = dir < 0 ? node[a] - 1 : node[a] + 1;
            const bool lower = energies.at(family.flat_index(neighbour)) <= e;
            neighbour[a] = node[a];
            if (lower) {
                return false;
            }
        }
    }
    return true;
}

PesMinimum pes_argmin(const HamiltonianFamily &family, bool refine, std::optional<std::size_t> electrons) {
    const auto energies = ground_energies(family, electrons);
    const auto best = static_cast<std::size_t>(
        std::distance(energies.begin(), std::min_element(energies.begin(), energies.end())));
    PesMinimum out;
    out.node = family.node_indices(best);
    out.lambda = family.node(best);
    out.energy = energies[best];
    out.boundary = false;
    for (std::size_t a = 0; a < family.dims(); ++a) {
        const std::size_t n = family.axes()[a].grid.size();
        out.boundary = out.boundary || out.node[a] == 0 || out.node[a] + 1 == n;
    }
    if (!refine) {
        return out;
    }
    for (std::size_t a = 0; a < family.dims(); ++a) {
        const auto &g = family.axes()[a].grid;
        const std::size_t i = out.node[a];
        if (i == 0 || i + 1 == g.size()) {
            continue;
        }
        std::vector<std::size_t> idx = out.node;
        idx[a] = i - 1;
        const double e0 = energies[family.flat_index(idx)];
        idx[a] = i + 1;
        const double e2 = energies[family.flat_index(idx)];
        const double e1 = energies[best];
        const double x0 = g[i - 1], x1 = g[i], x2 = g[i + 1];
        // Parabola through three points in Newton form.
        const double d01 = (e1 - e0) / (x1 - x0);
        const double d12 = (e2 - e1) / (x2 - x1);
        const double curvature = (d12 - d01) / (x2 - x0);
        if (!(curvature > 0.0)) {
            continue;
        }
        const double vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
        const double shift = e0 + d01 * (vertex - x0) + curvature * (vertex - x0) * (vertex - x1) - e1;
        out.lambda[a] = std::clamp(vertex, x0, x2);
        out.energy += shift;
    }
    return out;
}

} // namespace hamvqe
