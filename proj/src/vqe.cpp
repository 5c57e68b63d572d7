#include "hamvqe/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "hamvqe/error.hpp"

namespace hamvqe {

namespace {

constexpr std::size_t kRestoreAfter = 3;

double accept_slack(double e) { return 1e-13 * std::max(1.0, std::abs(e)); }

} // namespace

VqeResult minimize(const Landscape &landscape, std::span<const double> lambda, const VqeOptions &options) {
    if (!(options.step > 0.0) || !(options.tolerance > 0.0)) {
        throw DimensionError("VQE step and tolerance must be positive");
    }
    landscape.family().check_domain(lambda);
    const std::size_t k = landscape.parameter_count();
    std::vector<double> theta = options.theta0.empty() ? std::vector<double>(k, 0.0) : options.theta0;
    if (theta.size() != k) {
        throw DimensionError("initial theta has " + std::to_string(theta.size()) + " entries, ansatz takes " +
                             std::to_string(k));
    }

    VqeResult result;
    double e = landscape.energy(theta, lambda);
    auto as_vector = [](const std::vector<double> &v) {
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
    };
    result.history.push_back({as_vector(theta), e});

    double eta = options.step;
    std::size_t streak = 0;
    Eigen::VectorXd g = landscape.grad_theta(theta, lambda);
    std::size_t it = 0;
    while (true) {
        if (g.norm() <= options.tolerance) {
            result.converged = true;
            break;
        }
        if (it >= options.max_iterations) {
            break;
        }
        ++it;
        std::vector<double> trial(k);
        for (std::size_t i = 0; i < k; ++i) {
            trial[i] = theta[i] - eta * g(static_cast<Eigen::Index>(i));
        }
        const double e_trial = landscape.energy(trial, lambda);
        if (!options.step_halving || e_trial <= e + accept_slack(e)) {
            theta = std::move(trial);
            e = e_trial;
            g = landscape.grad_theta(theta, lambda);
            result.history.push_back({as_vector(theta), e});
            if (++streak >= kRestoreAfter) {
                eta = options.step;
            }
        } else {
            eta *= 0.5;
            streak = 0;
            if (eta < options.step * 1e-12) {
                break; // no descent direction at working precision
            }
        }
    }
    result.theta = as_vector(theta);
    result.energy = e;
    result.gradient_norm = g.norm();
    result.iterations = it;
    result.state_energies = landscape.state_energies(theta, lambda);
    return result;
}

std::vector<double> random_theta(std::size_t count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
    std::vector<double> theta(count);
    for (auto &t : theta) {
        t = dist(rng);
    }
    return theta;
}

SsvqeSpec SsvqeSpec::with_default_weights(std::vector<std::string> references) {
    const auto k = static_cast<double>(references.size());
    std::vector<double> weights;
    for (std::size_t j = 1; j <= references.size(); ++j) {
        weights.push_back((k + 1.0 - static_cast<double>(j)) / (k + 1.0));
    }
    return {std::move(references), std::move(weights)};
}

void SsvqeSpec::validate(std::size_t n_qubits) const {
    if (references.empty()) {
        throw DimensionError("SSVQE needs at least one reference");
    }
    if (references.size() != weights.size()) {
        throw DimensionError("SSVQE has " + std::to_string(references.size()) + " references but " +
                             std::to_string(weights.size()) + " weights");
    }
    std::set<std::string> seen;
    for (const auto &r : references) {
        if (r.size() != n_qubits) {
            throw DimensionError("SSVQE reference '" + r + "' does not have " + std::to_string(n_qubits) + " bits");
        }
        if (!seen.insert(r).second) {
            throw DimensionError("SSVQE reference '" + r + "' is repeated");
        }
    }
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!(weights[j] > 0.0 && weights[j] <= 1.0)) {
            throw DimensionError("SSVQE weight " + std::to_string(j) + " is outside (0, 1]");
        }
        if (j > 0 && !(weights[j] < weights[j - 1])) {
            throw DimensionError("SSVQE weights must be strictly decreasing");
        }
    }
}

SsvqeCost ssvqe_cost(const Landscape &landscape, std::span<const double> theta, std::span<const double> lambda,
                     const SsvqeSpec &spec) {
    spec.validate(landscape.ansatz().n_qubits());
    const Landscape ssvqe = landscape.with_objective(spec.objective());
    const Eigen::VectorXd energies = ssvqe.state_energies(theta, lambda);
    const Eigen::Map<const Eigen::VectorXd> w(spec.weights.data(), static_cast<Eigen::Index>(spec.weights.size()));
    return {w.dot(energies), energies};
}

VqeResult ssvqe_minimize(const Landscape &landscape, std::span<const double> lambda, const SsvqeSpec &spec,
                         const VqeOptions &options) {
    spec.validate(landscape.ansatz().n_qubits());
    return minimize(landscape.with_objective(spec.objective()), lambda, options);
}

} // namespace hamvqe
