#include "hamvqe/landscape.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>

#include "hamvqe/error.hpp"
#include "hamvqe/simulator.hpp"

namespace hamvqe {

struct Landscape::Cache {
    struct Entry {
        Eigen::MatrixXd states; // terms x references
        Eigen::VectorXd weighted;
        std::optional<Eigen::MatrixXd> jacobian;
    };
    using Key = std::vector<std::uint64_t>;

    static constexpr std::size_t kCapacity = 4096;

    static Key key(std::span<const double> theta) {
        Key k(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) {
            k[i] = std::bit_cast<std::uint64_t>(theta[i]);
        }
        return k;
    }

    void insert(Key k, Entry e) {
        if (entries.size() >= kCapacity) {
            entries.erase(order.front());
            order.pop_front();
        }
        order.push_back(k);
        entries.emplace(std::move(k), std::move(e));
    }

    std::mutex mutex;
    std::map<Key, Entry> entries;
    std::deque<Key> order;
    std::size_t evaluations = 0;
};

Landscape::Landscape(std::shared_ptr<const HamiltonianFamily> family, Ansatz ansatz, GradientOptions options)
    : Landscape(family, ansatz, Objective::ground(ansatz.reference()), options) {}

Landscape::Landscape(std::shared_ptr<const HamiltonianFamily> family, Ansatz ansatz, Objective objective,
                     GradientOptions options)
    : family_(std::move(family)), ansatz_(std::move(ansatz)), objective_(std::move(objective)), options_(options),
      cache_(std::make_unique<Cache>()) {
    if (!family_) {
        throw DimensionError("landscape needs a family");
    }
    if (family_->n_qubits() != ansatz_.n_qubits()) {
        throw DimensionError("family '" + family_->name() + "' has " + std::to_string(family_->n_qubits()) +
                             " qubits but the ansatz has " + std::to_string(ansatz_.n_qubits()));
    }
    if (objective_.references.empty() || objective_.references.size() != objective_.weights.size()) {
        throw DimensionError("objective needs one weight per reference");
    }
    for (const auto &r : objective_.references) {
        if (r.size() != ansatz_.n_qubits()) {
            throw DimensionError("reference '" + r + "' does not match the ansatz width");
        }
        (void)basis_index(r);
    }
    if (!(options_.difference_step > 0.0) || !(options_.hessian_step > 0.0)) {
        throw DimensionError("finite-difference steps must be positive");
    }
}

Landscape::~Landscape() = default;
Landscape::Landscape(Landscape &&) noexcept = default;
Landscape &Landscape::operator=(Landscape &&) noexcept = default;

Landscape Landscape::with_objective(Objective objective) const {
    return Landscape(family_, ansatz_, std::move(objective), options_);
}

Landscape Landscape::with_options(GradientOptions options) const {
    return Landscape(family_, ansatz_, objective_, options);
}

void Landscape::check_theta(std::span<const double> theta) const {
    if (theta.size() != ansatz_.parameter_count()) {
        throw DimensionError("ansatz takes " + std::to_string(ansatz_.parameter_count()) + " parameters, got " +
                             std::to_string(theta.size()));
    }
    for (double t : theta) {
        if (!std::isfinite(t)) {
            throw NumericalError("non-finite parameter");
        }
    }
}

Eigen::MatrixXd Landscape::compute_expectations(std::span<const double> theta) const {
    const auto &strings = family_->strings();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(strings.size()),
                        static_cast<Eigen::Index>(objective_.references.size()));
    for (std::size_t j = 0; j < objective_.references.size(); ++j) {
        const StateVector psi = apply_ansatz(ansatz_, theta, objective_.references[j]);
        for (std::size_t m = 0; m < strings.size(); ++m) {
            out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j)) = pauli_expectation(psi, strings[m]);
        }
    }
    return out;
}

Eigen::MatrixXd Landscape::compute_jacobian(std::span<const double> theta) const {
    const auto &strings = family_->strings();
    const auto terms = static_cast<Eigen::Index>(strings.size());
    const auto k = static_cast<Eigen::Index>(ansatz_.parameter_count());
    const Eigen::Map<const Eigen::VectorXd> w(objective_.weights.data(),
                                              static_cast<Eigen::Index>(objective_.weights.size()));
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(terms, k);

    if (options_.method == GradientMethod::CentralDifference) {
        const double h = options_.difference_step;
        std::vector<double> shifted(theta.begin(), theta.end());
        for (Eigen::Index i = 0; i < k; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            shifted[ii] = theta[ii] + h;
            const Eigen::VectorXd plus = compute_expectations(shifted) * w;
            shifted[ii] = theta[ii] - h;
            const Eigen::VectorXd minus = compute_expectations(shifted) * w;
            shifted[ii] = theta[ii];
            jac.col(i) = (plus - minus) / (2.0 * h);
        }
        return jac;
    }

    // Each factor angle phi enters through exp(-i phi P), so the expectation is
    // a pi-periodic sinusoid in phi and dE/dphi = E(phi + pi/4) - E(phi - pi/4).
    constexpr double shift = std::numbers::pi / 4.0;
    const auto gates = ansatz_.gates();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        Eigen::VectorXd diff = Eigen::VectorXd::Zero(terms);
        for (std::size_t j = 0; j < objective_.references.size(); ++j) {
            const StateVector plus = apply_ansatz_shifted(ansatz_, theta, objective_.references[j], g, shift);
            const StateVector minus = apply_ansatz_shifted(ansatz_, theta, objective_.references[j], g, -shift);
            for (Eigen::Index m = 0; m < terms; ++m) {
                const auto &p = strings[static_cast<std::size_t>(m)];
                diff(m) += objective_.weights[j] * (pauli_expectation(plus, p) - pauli_expectation(minus, p));
            }
        }
        jac.col(static_cast<Eigen::Index>(gates[g].parameter)) += gates[g].coefficient * diff;
    }
    return jac;
}

Eigen::MatrixXd Landscape::state_expectations(std::span<const double> theta) const {
    check_theta(theta);
    auto key = Cache::key(theta);
    {
        std::lock_guard lock(cache_->mutex);
        if (auto it = cache_->entries.find(key); it != cache_->entries.end()) {
            return it->second.states;
        }
    }
    Cache::Entry entry;
    entry.states = compute_expectations(theta);
    const Eigen::Map<const Eigen::VectorXd> w(objective_.weights.data(),
                                              static_cast<Eigen::Index>(objective_.weights.size()));
    entry.weighted = entry.states * w;
    Eigen::MatrixXd states = entry.states;
    std::lock_guard lock(cache_->mutex);
    if (cache_->entries.find(key) == cache_->entries.end()) {
        ++cache_->evaluations;
        cache_->insert(std::move(key), std::move(entry));
    }
    return states;
}

Eigen::VectorXd Landscape::pauli_expectations(std::span<const double> theta) const {
    const Eigen::MatrixXd states = state_expectations(theta);
    const Eigen::Map<const Eigen::VectorXd> w(objective_.weights.data(),
                                              static_cast<Eigen::Index>(objective_.weights.size()));
    return states * w;
}

Eigen::MatrixXd Landscape::expectation_jacobian(std::span<const double> theta) const {
    (void)state_expectations(theta); // ensures an entry exists
    const auto key = Cache::key(theta);
    {
        std::lock_guard lock(cache_->mutex);
        auto it = cache_->entries.find(key);
        if (it != cache_->entries.end() && it->second.jacobian) {
            return *it->second.jacobian;
        }
    }
    Eigen::MatrixXd jac = compute_jacobian(theta);
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end() && !it->second.jacobian) {
        it->second.jacobian = jac;
        ++cache_->evaluations;
    } else if (it == cache_->entries.end()) {
        ++cache_->evaluations;
    }
    return jac;
}

double Landscape::energy(std::span<const double> theta, std::span<const double> lambda) const {
    const Eigen::VectorXd c = family_->coefficients_at(lambda);
    const double e = c.dot(pauli_expectations(theta));
    if (!std::isfinite(e)) {
        throw NumericalError("non-finite energy");
    }
    return e;
}

Eigen::VectorXd Landscape::state_energies(std::span<const double> theta, std::span<const double> lambda) const {
    const Eigen::VectorXd c = family_->coefficients_at(lambda);
    return state_expectations(theta).transpose() * c;
}

Eigen::VectorXd Landscape::grad_theta(std::span<const double> theta, std::span<const double> lambda) const {
    const Eigen::VectorXd c = family_->coefficients_at(lambda);
    return expectation_jacobian(theta).transpose() * c;
}

Eigen::VectorXd Landscape::grad_lambda(std::span<const double> theta, std::span<const double> lambda) const {
    family_->check_domain(lambda);
    const Eigen::VectorXd expectations = pauli_expectations(theta);
    Eigen::VectorXd g(static_cast<Eigen::Index>(family_->dims()));
    for (std::size_t a = 0; a < family_->dims(); ++a) {
        g(static_cast<Eigen::Index>(a)) = family_->coefficient_derivative(lambda, a).dot(expectations);
    }
    return g;
}

Eigen::MatrixXd Landscape::hessian_theta(std::span<const double> theta, std::span<const double> lambda,
                                         bool symmetrize) const {
    check_theta(theta);
    const auto k = static_cast<Eigen::Index>(theta.size());
    const double h = options_.hessian_step;
    Eigen::MatrixXd a(k, k);
    std::vector<double> shifted(theta.begin(), theta.end());
    for (Eigen::Index i = 0; i < k; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        shifted[ii] = theta[ii] + h;
        const Eigen::VectorXd plus = grad_theta(shifted, lambda);
        shifted[ii] = theta[ii] - h;
        const Eigen::VectorXd minus = grad_theta(shifted, lambda);
        shifted[ii] = theta[ii];
        a.col(i) = (plus - minus) / (2.0 * h);
    }
    if (symmetrize) {
        const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
        return sym;
    }
    return a;
}

Eigen::VectorXd Landscape::mixed_theta_lambda(std::span<const double> theta, std::span<const double> lambda,
                                              std::size_t axis) const {
    const Eigen::VectorXd dc = family_->coefficient_derivative(lambda, axis);
    return expectation_jacobian(theta).transpose() * dc;
}

std::size_t Landscape::quantum_evaluations() const noexcept {
    std::lock_guard lock(cache_->mutex);
    return cache_->evaluations;
}

void Landscape::clear_cache() const {
    std::lock_guard lock(cache_->mutex);
    cache_->entries.clear();
    cache_->order.clear();
}

} // namespace hamvqe
