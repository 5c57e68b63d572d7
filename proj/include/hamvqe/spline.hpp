#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hamvqe {

/// Natural cubic spline on a fixed grid, expressed as linear weights over the
/// node samples so many curves on the same grid share one factorization.
/// value(x) = weights(x) . samples.
class SplineBasis {
  public:
    explicit SplineBasis(std::vector<double> grid);

    [[nodiscard]] const std::vector<double> &grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }

    /// Weights for the value at x. At a node this is the unit vector.
    [[nodiscard]] Eigen::VectorXd weights(double x) const;
    [[nodiscard]] Eigen::VectorXd derivative_weights(double x) const;

    [[nodiscard]] double evaluate(std::span<const double> samples, double x) const;
    [[nodiscard]] double derivative(std::span<const double> samples, double x) const;

  private:
    [[nodiscard]] std::size_t interval(double x) const;

    std::vector<double> grid_;
    Eigen::MatrixXd moments_; // second derivatives at nodes as a linear map of samples
};

} // namespace hamvqe
