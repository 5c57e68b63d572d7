#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include "hamvqe/pauli.hpp"

namespace hamvqe {

class Ansatz;

using Amplitude = std::complex<double>;

/// Dense amplitude vector of length 2^n.
class StateVector {
  public:
    StateVector() = default;
    StateVector(std::size_t n_qubits, std::vector<Amplitude> amplitudes);

    static StateVector zero(std::size_t n_qubits);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<Amplitude> amplitudes() noexcept { return amps_; }
    [[nodiscard]] Amplitude operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm_squared() const noexcept;
    [[nodiscard]] Amplitude inner(const StateVector &other) const;

    Eigen::VectorXcd to_eigen() const;

  private:
    std::size_t n_qubits_ = 0;
    std::vector<Amplitude> amps_;
};

/// Basis index of a bitstring under the qubit-0-leftmost convention.
std::size_t basis_index(std::string_view bits);

StateVector prepare_reference(std::string_view bits);

/// exp(-i angle P)|psi> = cos(angle)|psi> - i sin(angle) P|psi>.
StateVector apply_exp_pauli(const StateVector &state, const PauliString &p, double angle);
void apply_exp_pauli_inplace(StateVector &state, const PauliString &p, double angle);

StateVector apply_ansatz(const Ansatz &ansatz, std::span<const double> theta);

/// Same as apply_ansatz starting from an arbitrary reference bitstring.
StateVector apply_ansatz(const Ansatz &ansatz, std::span<const double> theta, std::string_view reference);

/// Ansatz application with an extra angle added to one gate occurrence
/// (flattened index over all factor applications). Used by the shift rule.
StateVector apply_ansatz_shifted(const Ansatz &ansatz, std::span<const double> theta,
                                 std::string_view reference, std::size_t gate, double shift);

} // namespace hamvqe
