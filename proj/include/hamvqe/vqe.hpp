#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamvqe/landscape.hpp"

namespace hamvqe {

struct VqeOptions {
    double step = 0.1;
    std::size_t max_iterations = 5000;
    double tolerance = 1e-7;
    std::vector<double> theta0; // empty means all zeros
    bool step_halving = true;
};

struct VqeRecord {
    Eigen::VectorXd theta;
    double energy;
};

struct VqeResult {
    Eigen::VectorXd theta;
    double energy = 0.0;
    double gradient_norm = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<VqeRecord> history;
    Eigen::VectorXd state_energies; // one per reference of the objective
};

/// Gradient descent on the landscape's objective at fixed lambda. Steps that
/// raise the cost are rejected and the step size halved; it is restored after
/// three accepted steps in a row.
VqeResult minimize(const Landscape &landscape, std::span<const double> lambda, const VqeOptions &options = {});

/// Random initial parameters in [-pi, pi) from a seeded generator.
std::vector<double> random_theta(std::size_t count, unsigned seed);

struct SsvqeSpec {
    std::vector<std::string> references;
    std::vector<double> weights;

    /// Weights w_j = (k + 1 - j) / (k + 1), j = 1..k for k references.
    static SsvqeSpec with_default_weights(std::vector<std::string> references);
    /// Throws on repeated references, length mismatch or weights that are not
    /// positive, at most one and strictly decreasing.
    void validate(std::size_t n_qubits) const;
    [[nodiscard]] Objective objective() const { return {references, weights}; }
};

struct SsvqeCost {
    double total;
    Eigen::VectorXd energies;
};

SsvqeCost ssvqe_cost(const Landscape &landscape, std::span<const double> theta, std::span<const double> lambda,
                     const SsvqeSpec &spec);

VqeResult ssvqe_minimize(const Landscape &landscape, std::span<const double> lambda, const SsvqeSpec &spec,
                         const VqeOptions &options = {});

} // namespace hamvqe
