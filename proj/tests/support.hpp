#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamvqe/family.hpp"
#include "hamvqe/pauli.hpp"
#include "hamvqe/simulator.hpp"
#include "hamvqe/ucc.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string &name) {
    return std::filesystem::path(HAMVQE_TEST_FIXTURE_DIR) / name;
}

inline std::shared_ptr<const hamvqe::HamiltonianFamily> load_fixture(const std::string &name) {
    return std::make_shared<const hamvqe::HamiltonianFamily>(hamvqe::load_family(fixture(name)));
}

inline std::vector<hamvqe::PauliString> strings(std::size_t n, std::initializer_list<const char *> labels) {
    std::vector<hamvqe::PauliString> out;
    for (const char *l : labels) {
        out.push_back(hamvqe::parse_pauli(l, n));
    }
    return out;
}

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

// c_Z = cos(lambda), c_X = sin(lambda) on one qubit. With exp(-i theta Y)|0>
// the energy is cos(2 theta - lambda).
inline std::shared_ptr<const hamvqe::HamiltonianFamily> rotating_family() {
    auto values = [](std::span<const double> l) {
        Eigen::VectorXd c(2);
        c << std::cos(l[0]), std::sin(l[0]);
        return c;
    };
    auto derivative = [](std::span<const double> l, std::size_t) {
        Eigen::VectorXd c(2);
        c << -std::sin(l[0]), std::cos(l[0]);
        return c;
    };
    return std::make_shared<const hamvqe::HamiltonianFamily>(
        "rotating", 1, strings(1, {"Z", "X"}), std::vector<hamvqe::Axis>{{"lambda", uniform_grid(-1.0, 4.0, 11)}},
        std::make_shared<hamvqe::AnalyticModel>(values, derivative));
}

inline hamvqe::Ansatz y_rotation() {
    return hamvqe::Ansatz("0", {hamvqe::Generator({{1.0, hamvqe::parse_pauli("Y", 1)}})});
}

// Identity coefficient (lambda - 2)^2 plus a constant Z: E = (lambda - 2)^2 + cos(2 theta).
inline std::shared_ptr<const hamvqe::HamiltonianFamily> well_family() {
    auto values = [](std::span<const double> l) {
        Eigen::VectorXd c(2);
        c << (l[0] - 2.0) * (l[0] - 2.0), 1.0;
        return c;
    };
    auto derivative = [](std::span<const double> l, std::size_t) {
        Eigen::VectorXd c(2);
        c << 2.0 * (l[0] - 2.0), 0.0;
        return c;
    };
    return std::make_shared<const hamvqe::HamiltonianFamily>(
        "well", 1, strings(1, {"I", "Z"}), std::vector<hamvqe::Axis>{{"lambda", uniform_grid(0.0, 4.0, 41)}},
        std::make_shared<hamvqe::AnalyticModel>(values, derivative));
}

// Tabulated family whose samples do not depend on lambda.
inline std::shared_ptr<const hamvqe::HamiltonianFamily> constant_family() {
    Eigen::MatrixXd samples(3, 10);
    samples.row(0).setConstant(-0.5);
    samples.row(1).setConstant(0.3);
    samples.row(2).setConstant(0.2);
    return std::make_shared<const hamvqe::HamiltonianFamily>(hamvqe::HamiltonianFamily::from_samples(
        "constant", 2, strings(2, {"II", "ZI", "XY"}),
        std::vector<hamvqe::Axis>{{"lambda", uniform_grid(0.0, 1.0, 10)}}, samples));
}

inline hamvqe::StateVector random_state(std::size_t n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &x : a) {
        x = {g(rng), g(rng)};
        norm += std::norm(x);
    }
    for (auto &x : a) {
        x /= std::sqrt(norm);
    }
    return hamvqe::StateVector(n, std::move(a));
}

inline hamvqe::PauliString random_string(std::size_t n, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::string label;
    for (std::size_t j = 0; j < n; ++j) {
        label.push_back("IXYZ"[pick(rng)]);
    }
    return hamvqe::parse_pauli(label, n);
}

// Fermionic ladder operators as dense Kronecker products, independent of the
// Pauli module: a_j = Z x ... x Z x [[0,1],[0,0]] x I x ... (bit 1 occupied).
inline Eigen::MatrixXcd annihilator(std::size_t j, std::size_t n) {
    Eigen::Matrix2cd z, lower, id;
    z << 1, 0, 0, -1;
    lower << 0, 1, 0, 0;
    id.setIdentity();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::Matrix2cd &f = k < j ? z : (k == j ? lower : id);
        Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                next.block(r * 2, c * 2, 2, 2) = m(r, c) * f;
            }
        }
        m = next;
    }
    return m;
}

inline Eigen::MatrixXcd number_operator(std::size_t n) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Eigen::MatrixXcd N = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t j = 0; j < n; ++j) {
        const Eigen::MatrixXcd a = annihilator(j, n);
        N += a.adjoint() * a;
    }
    return N;
}

// exp(-i t H) for Hermitian H via its eigendecomposition.
inline Eigen::MatrixXcd unitary_exp(const Eigen::MatrixXcd &h, double t) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXcd phases =
        (es.eigenvalues().cast<std::complex<double>>() * std::complex<double>(0.0, -t)).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace testing
