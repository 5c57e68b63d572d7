#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hamvqe {

class StateVector;

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Tensor product of single-qubit Paulis. Position j acts on qubit j; qubit 0 is
/// the leftmost character of the label and the most significant bit of a basis
/// index.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::vector<Pauli> ops);

    static PauliString identity(std::size_t n_qubits);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return ops_.size(); }
    [[nodiscard]] Pauli op(std::size_t qubit) const { return ops_.at(qubit); }
    [[nodiscard]] const std::vector<Pauli> &ops() const noexcept { return ops_; }
    [[nodiscard]] bool is_identity() const noexcept;

    // Bit masks over basis indices: flip_mask marks X/Y positions, phase_mask Y/Z.
    [[nodiscard]] std::uint64_t flip_mask() const noexcept { return flip_; }
    [[nodiscard]] std::uint64_t phase_mask() const noexcept { return phase_; }
    [[nodiscard]] int y_count() const noexcept { return y_count_; }

    /// True when the two strings commute, i.e. they anticommute on an even
    /// number of positions.
    [[nodiscard]] bool commutes_with(const PauliString &other) const;

    friend bool operator==(const PauliString &a, const PauliString &b) { return a.ops_ == b.ops_; }
    friend bool operator<(const PauliString &a, const PauliString &b) { return a.ops_ < b.ops_; }

  private:
    std::vector<Pauli> ops_;
    std::uint64_t flip_ = 0;
    std::uint64_t phase_ = 0;
    int y_count_ = 0;
};

PauliString parse_pauli(std::string_view label, std::size_t n_qubits);
std::string format_pauli(const PauliString &p);

struct PauliTerm {
    double coefficient;
    PauliString string;
};

/// Real-weighted sum of Pauli strings; Hermitian by construction.
class PauliSum {
  public:
    explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}
    /// Duplicate strings are merged by summing their coefficients.
    PauliSum(std::size_t n_qubits, const std::vector<PauliTerm> &terms);
    /// Complex coefficients are accepted only when their imaginary part is zero.
    static PauliSum from_complex(std::size_t n_qubits,
                                 const std::vector<std::pair<std::complex<double>, PauliString>> &terms);

    void add(double coefficient, const PauliString &string);

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept { return terms_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }

    /// Coefficient of `string`, zero if absent.
    [[nodiscard]] double coefficient(const PauliString &string) const;

  private:
    std::size_t n_qubits_;
    std::vector<PauliTerm> terms_;
};

PauliSum operator+(const PauliSum &a, const PauliSum &b);
PauliSum operator*(double scale, const PauliSum &h);

StateVector apply_pauli(const StateVector &state, const PauliString &p);

/// <psi|P|psi> for a single string, without normalization checks.
double pauli_expectation(const StateVector &state, const PauliString &p);

/// <psi|H|psi>. The state must be normalized to 1e-8.
double expectation(const StateVector &state, const PauliSum &h);

inline constexpr std::size_t kDefaultDenseCap = 12;

Eigen::MatrixXcd dense_matrix(const PauliString &p);
Eigen::MatrixXcd dense_matrix(const PauliSum &h, std::size_t cap = kDefaultDenseCap);

} // namespace hamvqe
