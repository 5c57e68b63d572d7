#include "hamvqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "hamvqe/error.hpp"
#include "hamvqe/simulator.hpp"

namespace hamvqe {

namespace {

constexpr std::size_t kMaxQubits = 62;

std::complex<double> i_power(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

void check_width(std::size_t expected, std::size_t actual, const char *what) {
    if (expected != actual) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(expected) + " qubits, got " +
                             std::to_string(actual));
    }
}

} // namespace

PauliString::PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {
    if (ops_.empty()) {
        throw DimensionError("Pauli string needs at least one qubit");
    }
    if (ops_.size() > kMaxQubits) {
        throw CapacityError("Pauli string wider than " + std::to_string(kMaxQubits) + " qubits");
    }
    const std::size_t n = ops_.size();
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - j);
        switch (ops_[j]) {
        case Pauli::I:
            break;
        case Pauli::X:
            flip_ |= bit;
            break;
        case Pauli::Y:
            flip_ |= bit;
            phase_ |= bit;
            ++y_count_;
            break;
        case Pauli::Z:
            phase_ |= bit;
            break;
        }
    }
}

PauliString PauliString::identity(std::size_t n_qubits) { return PauliString(std::vector<Pauli>(n_qubits, Pauli::I)); }

bool PauliString::is_identity() const noexcept { return flip_ == 0 && phase_ == 0; }

bool PauliString::commutes_with(const PauliString &other) const {
    check_width(n_qubits(), other.n_qubits(), "commutes_with");
    // Single-qubit operators anticommute when both are non-identity and differ.
    const std::uint64_t anti = (flip_ & other.phase_) ^ (phase_ & other.flip_);
    return std::popcount(anti) % 2 == 0;
}

PauliString parse_pauli(std::string_view label, std::size_t n_qubits) {
    if (label.size() != n_qubits) {
        throw ParseError("Pauli label '" + std::string(label) + "' has length " + std::to_string(label.size()) +
                             ", expected " + std::to_string(n_qubits),
                         std::min(label.size(), n_qubits));
    }
    std::vector<Pauli> ops;
    ops.reserve(label.size());
    for (std::size_t j = 0; j < label.size(); ++j) {
        switch (label[j]) {
        case 'I':
            ops.push_back(Pauli::I);
            break;
        case 'X':
            ops.push_back(Pauli::X);
            break;
        case 'Y':
            ops.push_back(Pauli::Y);
            break;
        case 'Z':
            ops.push_back(Pauli::Z);
            break;
        default:
            throw ParseError("invalid Pauli character '" + std::string(1, label[j]) + "' in '" +
                                 std::string(label) + "'",
                             j);
        }
    }
    return PauliString(std::move(ops));
}

std::string format_pauli(const PauliString &p) {
    static constexpr char letters[] = {'I', 'X', 'Y', 'Z'};
    std::string out;
    out.reserve(p.n_qubits());
    for (Pauli op : p.ops()) {
        out.push_back(letters[static_cast<int>(op)]);
    }
    return out;
}

PauliSum::PauliSum(std::size_t n_qubits, const std::vector<PauliTerm> &terms) : n_qubits_(n_qubits) {
    for (const auto &t : terms) {
        add(t.coefficient, t.string);
    }
}

PauliSum PauliSum::from_complex(std::size_t n_qubits,
                                const std::vector<std::pair<std::complex<double>, PauliString>> &terms) {
    PauliSum h(n_qubits);
    for (const auto &[c, s] : terms) {
        if (c.imag() != 0.0) {
            throw NumericalError("complex coefficient on " + format_pauli(s) + " makes the operator non-Hermitian");
        }
        h.add(c.real(), s);
    }
    return h;
}

void PauliSum::add(double coefficient, const PauliString &string) {
    check_width(n_qubits_, string.n_qubits(), "PauliSum term");
    auto it = std::find_if(terms_.begin(), terms_.end(), [&](const PauliTerm &t) { return t.string == string; });
    if (it != terms_.end()) {
        it->coefficient += coefficient;
    } else {
        terms_.push_back({coefficient, string});
    }
}

double PauliSum::coefficient(const PauliString &string) const {
    for (const auto &t : terms_) {
        if (t.string == string) {
            return t.coefficient;
        }
    }
    return 0.0;
}

PauliSum operator+(const PauliSum &a, const PauliSum &b) {
    check_width(a.n_qubits(), b.n_qubits(), "PauliSum addition");
    PauliSum out = a;
    for (const auto &t : b.terms()) {
        out.add(t.coefficient, t.string);
    }
    return out;
}

PauliSum operator*(double scale, const PauliSum &h) {
    PauliSum out(h.n_qubits());
    for (const auto &t : h.terms()) {
        out.add(scale * t.coefficient, t.string);
    }
    return out;
}

// P|i> = i^{nY} (-1)^{popcount(i & phase_mask)} |i ^ flip_mask>, from
// Y|b> = i (-1)^b |1-b> and Z|b> = (-1)^b |b>.
StateVector apply_pauli(const StateVector &state, const PauliString &p) {
    check_width(state.n_qubits(), p.n_qubits(), "apply_pauli");
    const auto in = state.amplitudes();
    std::vector<Amplitude> out(in.size());
    const std::uint64_t flip = p.flip_mask();
    const std::uint64_t phase = p.phase_mask();
    const Amplitude global = i_power(p.y_count());
    for (std::uint64_t i = 0; i < in.size(); ++i) {
        const double sign = (std::popcount(i & phase) & 1) ? -1.0 : 1.0;
        out[i ^ flip] = global * sign * in[i];
    }
    return StateVector(state.n_qubits(), std::move(out));
}

double pauli_expectation(const StateVector &state, const PauliString &p) {
    check_width(state.n_qubits(), p.n_qubits(), "pauli_expectation");
    const auto a = state.amplitudes();
    const std::uint64_t flip = p.flip_mask();
    const std::uint64_t phase = p.phase_mask();
    Amplitude acc = 0.0;
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        const double sign = (std::popcount(i & phase) & 1) ? -1.0 : 1.0;
        acc += std::conj(a[i ^ flip]) * sign * a[i];
    }
    acc *= i_power(p.y_count());
    if (std::abs(acc.imag()) > 1e-10) {
        throw NumericalError("imaginary residue " + std::to_string(acc.imag()) + " in <" + format_pauli(p) + ">");
    }
    return acc.real();
}

double expectation(const StateVector &state, const PauliSum &h) {
    check_width(state.n_qubits(), h.n_qubits(), "expectation");
    const double norm = state.norm_squared();
    if (std::abs(norm - 1.0) > 1e-8) {
        throw NumericalError("state is not normalized (norm^2 = " + std::to_string(norm) + ")");
    }
    double e = 0.0;
    for (const auto &t : h.terms()) {
        e += t.coefficient * pauli_expectation(state, t.string);
    }
    return e;
}

Eigen::MatrixXcd dense_matrix(const PauliString &p) {
    const std::size_t dim = std::size_t{1} << p.n_qubits();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const Amplitude global = i_power(p.y_count());
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double sign = (std::popcount(i & p.phase_mask()) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(i ^ p.flip_mask()), static_cast<Eigen::Index>(i)) = global * sign;
    }
    return m;
}

Eigen::MatrixXcd dense_matrix(const PauliSum &h, std::size_t cap) {
    if (h.n_qubits() > cap) {
        throw CapacityError("dense matrix of " + std::to_string(h.n_qubits()) + " qubits exceeds the cap of " +
                            std::to_string(cap));
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << h.n_qubits());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto &t : h.terms()) {
        const PauliString &p = t.string;
        const Amplitude global = i_power(p.y_count()) * t.coefficient;
        for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(dim); ++i) {
            const double sign = (std::popcount(i & p.phase_mask()) & 1) ? -1.0 : 1.0;
            m(static_cast<Eigen::Index>(i ^ p.flip_mask()), static_cast<Eigen::Index>(i)) += global * sign;
        }
    }
    return m;
}

} // namespace hamvqe
