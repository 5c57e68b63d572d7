#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hamvqe/pauli.hpp"

namespace hamvqe {

struct Factor {
    double prefactor;
    PauliString string;
};

/// Commuting Pauli factors sharing one parameter: exp(-i theta sum_k c_k P_k).
class Generator {
  public:
    /// Throws DimensionError for an empty list, mixed widths or non-commuting factors.
    explicit Generator(std::vector<Factor> factors);

    [[nodiscard]] const std::vector<Factor> &factors() const noexcept { return factors_; }
    [[nodiscard]] std::size_t n_qubits() const noexcept { return factors_.front().string.n_qubits(); }
    [[nodiscard]] PauliSum as_sum() const;

  private:
    std::vector<Factor> factors_;
};

/// One application of a generator inside the circuit. Trotter repeats of an
/// excitation point at the same parameter slot with a fractional scale.
struct GateStep {
    std::size_t parameter;
    double scale = 1.0;
};

/// A single exponentiated Pauli string in the flattened circuit.
struct Gate {
    std::size_t parameter;
    double coefficient; // prefactor times step scale
    const PauliString *string;
};

class Ansatz {
  public:
    /// One step per generator, applied in order.
    Ansatz(std::string reference, std::vector<Generator> generators);
    Ansatz(std::string reference, std::vector<Generator> generators, std::vector<GateStep> steps);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return reference_.size(); }
    [[nodiscard]] const std::string &reference() const noexcept { return reference_; }
    [[nodiscard]] std::size_t parameter_count() const noexcept { return generators_.size(); }
    [[nodiscard]] const std::vector<Generator> &generators() const noexcept { return generators_; }
    [[nodiscard]] const std::vector<GateStep> &steps() const noexcept { return steps_; }

    /// The circuit flattened into exponentials, in application order.
    [[nodiscard]] std::vector<Gate> gates() const;

  private:
    std::string reference_;
    std::vector<Generator> generators_;
    std::vector<GateStep> steps_;
};

/// exp(-i theta X0 Y1) on |01>.
Ansatz h2_ansatz();

/// exp(-i theta2 X0 Y2) exp(-i theta1 X0 Y1) on |001>.
Ansatz lih_ansatz();

/// Generator G with exp(-i theta G) = exp(theta (a+_p a_q - a+_q a_p)).
Generator jw_single_excitation(std::size_t p, std::size_t q, std::size_t n_qubits);

/// Generator G with exp(-i theta G) = exp(theta (T - T+)), T = a+_p a+_q a_r a_s.
Generator jw_double_excitation(std::size_t p, std::size_t q, std::size_t r, std::size_t s,
                               std::size_t n_qubits);

/// Hartree-Fock filling: the lowest n_electrons spin orbitals occupied.
std::string hartree_fock_reference(std::size_t n_spin_orbitals, std::size_t n_electrons);

/// Spin-preserving occupied-to-virtual singles then doubles over interleaved
/// spin orbitals (even index alpha, odd index beta).
Ansatz uccsd_ansatz(std::size_t n_spin_orbitals, std::size_t n_electrons, std::size_t trotter_steps);

/// Generalized variant: spin-preserving singles and doubles over all orbital
/// pairs, not only occupied to virtual.
Ansatz uccgsd_ansatz(std::size_t n_spin_orbitals, std::size_t n_electrons, std::size_t trotter_steps);

/// "h2", "lih", "uccsd:<orbitals>,<electrons>,<trotter>" or "uccgsd:...".
Ansatz ansatz_from_name(std::string_view name);

} // namespace hamvqe
