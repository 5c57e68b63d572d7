#include "hamvqe/simulator.hpp"

#include <bit>
#include <cmath>

#include "hamvqe/error.hpp"
#include "hamvqe/ucc.hpp"

namespace hamvqe {

StateVector::StateVector(std::size_t n_qubits, std::vector<Amplitude> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits == 0 || n_qubits > 30) {
        throw DimensionError("unsupported qubit count " + std::to_string(n_qubits));
    }
    if (amps_.size() != (std::size_t{1} << n_qubits)) {
        throw DimensionError("amplitude count " + std::to_string(amps_.size()) + " does not match " +
                             std::to_string(n_qubits) + " qubits");
    }
}

StateVector StateVector::zero(std::size_t n_qubits) {
    std::vector<Amplitude> a(std::size_t{1} << n_qubits);
    a[0] = 1.0;
    return StateVector(n_qubits, std::move(a));
}

double StateVector::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

Amplitude StateVector::inner(const StateVector &other) const {
    if (other.n_qubits_ != n_qubits_) {
        throw DimensionError("inner product of states with different widths");
    }
    Amplitude s = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        s += std::conj(amps_[i]) * other.amps_[i];
    }
    return s;
}

Eigen::VectorXcd StateVector::to_eigen() const {
    return Eigen::Map<const Eigen::VectorXcd>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
}

std::size_t basis_index(std::string_view bits) {
    if (bits.empty()) {
        throw ParseError("empty bitstring", 0);
    }
    if (bits.size() > 30) {
        throw CapacityError("bitstring wider than 30 qubits");
    }
    std::size_t index = 0;
    for (std::size_t j = 0; j < bits.size(); ++j) {
        if (bits[j] != '0' && bits[j] != '1') {
            throw ParseError("invalid bit '" + std::string(1, bits[j]) + "' in '" + std::string(bits) + "'", j);
        }
        index = (index << 1) | static_cast<std::size_t>(bits[j] == '1');
    }
    return index;
}

StateVector prepare_reference(std::string_view bits) {
    const std::size_t index = basis_index(bits);
    std::vector<Amplitude> a(std::size_t{1} << bits.size());
    a[index] = 1.0;
    return StateVector(bits.size(), std::move(a));
}

void apply_exp_pauli_inplace(StateVector &state, const PauliString &p, double angle) {
    if (state.n_qubits() != p.n_qubits()) {
        throw DimensionError("apply_exp_pauli: state has " + std::to_string(state.n_qubits()) +
                             " qubits, string has " + std::to_string(p.n_qubits()));
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    auto a = state.amplitudes();
    const std::uint64_t flip = p.flip_mask();
    const std::uint64_t phase = p.phase_mask();
    // -i sin * i^{nY}
    Amplitude k = Amplitude(0.0, -s);
    for (int y = 0; y < p.y_count() % 4; ++y) {
        k *= Amplitude(0.0, 1.0);
    }
    if (flip == 0) {
        for (std::uint64_t i = 0; i < a.size(); ++i) {
            const double sign = (std::popcount(i & phase) & 1) ? -1.0 : 1.0;
            a[i] *= c + k * sign;
        }
        return;
    }
    // Pair up i and j = i ^ flip once each.
    const std::uint64_t top = std::uint64_t{1} << (std::bit_width(flip) - 1);
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        if (i & top) {
            continue;
        }
        const std::uint64_t j = i ^ flip;
        const double si = (std::popcount(i & phase) & 1) ? -1.0 : 1.0;
        const double sj = (std::popcount(j & phase) & 1) ? -1.0 : 1.0;
        const Amplitude ai = a[i];
        const Amplitude aj = a[j];
        // (P a)[j] = k' sign(i) a[i], (P a)[i] = k' sign(j) a[j]
        a[i] = c * ai + k * sj * aj;
        a[j] = c * aj + k * si * ai;
    }
}

StateVector apply_exp_pauli(const StateVector &state, const PauliString &p, double angle) {
    StateVector out = state;
    apply_exp_pauli_inplace(out, p, angle);
    return out;
}

namespace {

void check_parameters(const Ansatz &ansatz, std::span<const double> theta) {
    if (theta.size() != ansatz.parameter_count()) {
        throw DimensionError("ansatz takes " + std::to_string(ansatz.parameter_count()) + " parameters, got " +
                             std::to_string(theta.size()));
    }
}

} // namespace

StateVector apply_ansatz(const Ansatz &ansatz, std::span<const double> theta) {
    return apply_ansatz(ansatz, theta, ansatz.reference());
}

StateVector apply_ansatz(const Ansatz &ansatz, std::span<const double> theta, std::string_view reference) {
    check_parameters(ansatz, theta);
    if (reference.size() != ansatz.n_qubits()) {
        throw DimensionError("reference '" + std::string(reference) + "' does not match the ansatz width");
    }
    StateVector state = prepare_reference(reference);
    for (const auto &g : ansatz.gates()) {
        apply_exp_pauli_inplace(state, *g.string, theta[g.parameter] * g.coefficient);
    }
    return state;
}

StateVector apply_ansatz_shifted(const Ansatz &ansatz, std::span<const double> theta, std::string_view reference,
                                 std::size_t gate, double shift) {
    check_parameters(ansatz, theta);
    const auto gates = ansatz.gates();
    if (gate >= gates.size()) {
        throw DimensionError("gate index " + std::to_string(gate) + " out of range");
    }
    StateVector state = prepare_reference(reference);
    for (std::size_t k = 0; k < gates.size(); ++k) {
        const auto &g = gates[k];
        const double angle = theta[g.parameter] * g.coefficient + (k == gate ? shift : 0.0);
        apply_exp_pauli_inplace(state, *g.string, angle);
    }
    return state;
}

} // namespace hamvqe
