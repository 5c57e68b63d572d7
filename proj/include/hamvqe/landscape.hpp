#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamvqe/family.hpp"
#include "hamvqe/ucc.hpp"

namespace hamvqe {

enum class GradientMethod { ParameterShift, CentralDifference };

struct GradientOptions {
    GradientMethod method = GradientMethod::ParameterShift;
    double difference_step = 1e-5; // central-difference mode only
    double hessian_step = 1e-4;
};

/// Weighted sum of energies over orthogonal reference states. A single
/// reference with weight 1 is the plain ground-state energy.
struct Objective {
    std::vector<std::string> references;
    std::vector<double> weights;

    static Objective ground(const std::string &reference) { return {{reference}, {1.0}}; }
};

/// E(theta; lambda) = c(lambda) . L(theta) and its derivatives.
///
/// L(theta) and its Jacobian depend only on theta and are cached by the bit
/// pattern of theta, so lambda-only queries never re-run the circuit. Every
/// cache miss counts as one quantum evaluation.
class Landscape {
  public:
    Landscape(std::shared_ptr<const HamiltonianFamily> family, Ansatz ansatz, GradientOptions options = {});
    Landscape(std::shared_ptr<const HamiltonianFamily> family, Ansatz ansatz, Objective objective,
              GradientOptions options = {});
    ~Landscape();
    Landscape(Landscape &&) noexcept;
    Landscape &operator=(Landscape &&) noexcept;

    /// Same family, ansatz and options with a different objective and a fresh cache.
    [[nodiscard]] Landscape with_objective(Objective objective) const;
    [[nodiscard]] Landscape with_options(GradientOptions options) const;

    [[nodiscard]] const HamiltonianFamily &family() const noexcept { return *family_; }
    [[nodiscard]] const std::shared_ptr<const HamiltonianFamily> &family_ptr() const noexcept { return family_; }
    [[nodiscard]] const Ansatz &ansatz() const noexcept { return ansatz_; }
    [[nodiscard]] const Objective &objective() const noexcept { return objective_; }
    [[nodiscard]] const GradientOptions &options() const noexcept { return options_; }
    [[nodiscard]] std::size_t parameter_count() const noexcept { return ansatz_.parameter_count(); }
    [[nodiscard]] std::size_t state_count() const noexcept { return objective_.references.size(); }

    /// Weighted per-term expectations sum_j w_j <psi_j|L_m|psi_j>.
    [[nodiscard]] Eigen::VectorXd pauli_expectations(std::span<const double> theta) const;
    /// Per-reference expectations, one column per reference.
    [[nodiscard]] Eigen::MatrixXd state_expectations(std::span<const double> theta) const;
    /// d(weighted L_m)/d(theta_k), terms by parameters.
    [[nodiscard]] Eigen::MatrixXd expectation_jacobian(std::span<const double> theta) const;

    [[nodiscard]] double energy(std::span<const double> theta, std::span<const double> lambda) const;
    [[nodiscard]] Eigen::VectorXd state_energies(std::span<const double> theta, std::span<const double> lambda) const;
    [[nodiscard]] Eigen::VectorXd grad_theta(std::span<const double> theta, std::span<const double> lambda) const;
    [[nodiscard]] Eigen::VectorXd grad_lambda(std::span<const double> theta, std::span<const double> lambda) const;
    /// Central differences of grad_theta; symmetrized unless `symmetrize` is false.
    [[nodiscard]] Eigen::MatrixXd hessian_theta(std::span<const double> theta, std::span<const double> lambda,
                                                bool symmetrize = true) const;
    [[nodiscard]] Eigen::VectorXd mixed_theta_lambda(std::span<const double> theta, std::span<const double> lambda,
                                                     std::size_t axis) const;

    [[nodiscard]] std::size_t quantum_evaluations() const noexcept;
    void clear_cache() const;

  private:
    struct Cache;

    [[nodiscard]] Eigen::MatrixXd compute_expectations(std::span<const double> theta) const;
    [[nodiscard]] Eigen::MatrixXd compute_jacobian(std::span<const double> theta) const;
    void check_theta(std::span<const double> theta) const;

    std::shared_ptr<const HamiltonianFamily> family_;
    Ansatz ansatz_;
    Objective objective_;
    GradientOptions options_;
    std::unique_ptr<Cache> cache_;
};

} // namespace hamvqe
