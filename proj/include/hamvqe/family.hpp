#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hamvqe/pauli.hpp"
#include "hamvqe/spline.hpp"

namespace hamvqe {

struct Axis {
    std::string name;
    std::vector<double> grid;

    [[nodiscard]] double lower() const { return grid.front(); }
    [[nodiscard]] double upper() const { return grid.back(); }
};

/// Coefficient vector c(lambda) and its partial derivatives. Callers have
/// already checked the domain.
class CoefficientModel {
  public:
    virtual ~CoefficientModel() = default;
    [[nodiscard]] virtual Eigen::VectorXd values(std::span<const double> lambda) const = 0;
    [[nodiscard]] virtual Eigen::VectorXd derivative(std::span<const double> lambda, std::size_t axis) const = 0;
};

/// Tensor-product natural cubic splines through samples on the grid.
class SplineModel final : public CoefficientModel {
  public:
    /// samples: one row per term, columns row-major over the grid (first axis slowest).
    SplineModel(const std::vector<Axis> &axes, Eigen::MatrixXd samples);

    [[nodiscard]] Eigen::VectorXd values(std::span<const double> lambda) const override;
    [[nodiscard]] Eigen::VectorXd derivative(std::span<const double> lambda, std::size_t axis) const override;

  private:
    [[nodiscard]] Eigen::VectorXd combine(std::span<const double> lambda, std::size_t derivative_axis) const;

    std::vector<SplineBasis> bases_;
    Eigen::MatrixXd samples_;
};

/// Closed-form coefficients, used for synthetic and analytic test families.
class AnalyticModel final : public CoefficientModel {
  public:
    using ValueFn = std::function<Eigen::VectorXd(std::span<const double>)>;
    using DerivativeFn = std::function<Eigen::VectorXd(std::span<const double>, std::size_t)>;

    AnalyticModel(ValueFn values, DerivativeFn derivative)
        : values_(std::move(values)), derivative_(std::move(derivative)) {}

    [[nodiscard]] Eigen::VectorXd values(std::span<const double> lambda) const override { return values_(lambda); }
    [[nodiscard]] Eigen::VectorXd derivative(std::span<const double> lambda, std::size_t axis) const override {
        return derivative_(lambda, axis);
    }

  private:
    ValueFn values_;
    DerivativeFn derivative_;
};

/// H(lambda) = sum_m c_m(lambda) L_m over a 1-D or 2-D box.
class HamiltonianFamily {
  public:
    HamiltonianFamily(std::string name, std::size_t n_qubits, std::vector<PauliString> strings,
                      std::vector<Axis> axes, std::shared_ptr<const CoefficientModel> model,
                      std::optional<std::vector<double>> reference_energies = std::nullopt);

    /// Spline family through tabulated samples (rows = terms).
    static HamiltonianFamily from_samples(std::string name, std::size_t n_qubits,
                                          std::vector<PauliString> strings, std::vector<Axis> axes,
                                          Eigen::MatrixXd samples,
                                          std::optional<std::vector<double>> reference_energies = std::nullopt);

    [[nodiscard]] const std::string &name() const noexcept { return name_; }
    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dims() const noexcept { return axes_.size(); }
    [[nodiscard]] const std::vector<Axis> &axes() const noexcept { return axes_; }
    [[nodiscard]] const std::vector<PauliString> &strings() const noexcept { return strings_; }
    [[nodiscard]] std::size_t term_count() const noexcept { return strings_.size(); }
    [[nodiscard]] const std::optional<std::vector<double>> &reference_energies() const noexcept {
        return reference_energies_;
    }

    [[nodiscard]] bool contains(std::span<const double> lambda) const;
    /// Throws DomainError naming the violated axis and its bounds.
    void check_domain(std::span<const double> lambda) const;
    /// Componentwise projection onto the box.
    [[nodiscard]] std::vector<double> clip(std::span<const double> lambda) const;

    [[nodiscard]] Eigen::VectorXd coefficients_at(std::span<const double> lambda) const;
    [[nodiscard]] Eigen::VectorXd coefficient_derivative(std::span<const double> lambda, std::size_t axis) const;
    [[nodiscard]] PauliSum hamiltonian_at(std::span<const double> lambda) const;

    /// Grid nodes, row-major with the first axis slowest.
    [[nodiscard]] std::size_t node_count() const;
    [[nodiscard]] std::vector<double> node(std::size_t flat_index) const;
    [[nodiscard]] std::vector<std::size_t> node_indices(std::size_t flat_index) const;
    [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> indices) const;

  private:
    std::string name_;
    std::size_t n_qubits_;
    std::vector<PauliString> strings_;
    std::vector<Axis> axes_;
    std::shared_ptr<const CoefficientModel> model_;
    std::optional<std::vector<double>> reference_energies_;
};

HamiltonianFamily parse_family(std::string_view json_text, std::string_view source = "<memory>");
HamiltonianFamily load_family(const std::filesystem::path &path);

} // namespace hamvqe
