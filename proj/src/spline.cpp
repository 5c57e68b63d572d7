#include "hamvqe/spline.hpp"

#include <algorithm>
#include <sstream>

#include "hamvqe/error.hpp"

namespace hamvqe {

SplineBasis::SplineBasis(std::vector<double> grid) : grid_(std::move(grid)) {
    const auto n = static_cast<Eigen::Index>(grid_.size());
    if (n < 2) {
        throw SchemaError("spline grid needs at least two nodes");
    }
    for (Eigen::Index i = 1; i < n; ++i) {
        if (!(grid_[i] > grid_[i - 1])) {
            throw SchemaError("spline grid is not strictly increasing at node " + std::to_string(i));
        }
    }
    moments_ = Eigen::MatrixXd::Zero(n, n);
    if (n == 2) {
        return;
    }
    // Natural end conditions: zero second derivative at both ends.
    const Eigen::Index m = n - 2;
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, n);
    for (Eigen::Index r = 0; r < m; ++r) {
        const Eigen::Index i = r + 1;
        const double h0 = grid_[i] - grid_[i - 1];
        const double h1 = grid_[i + 1] - grid_[i];
        lhs(r, r) = 2.0 * (h0 + h1);
        if (r > 0) {
            lhs(r, r - 1) = h0;
        }
        if (r + 1 < m) {
            lhs(r, r + 1) = h1;
        }
        rhs(r, i - 1) = 6.0 / h0;
        rhs(r, i) = -6.0 / h0 - 6.0 / h1;
        rhs(r, i + 1) = 6.0 / h1;
    }
    moments_.middleRows(1, m) = lhs.partialPivLu().solve(rhs);
}

std::size_t SplineBasis::interval(double x) const {
    if (!(x >= grid_.front() && x <= grid_.back())) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "spline query " << x << " outside [" << grid_.front() << ", " << grid_.back() << "]";
        throw DomainError(msg.str());
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const auto i = static_cast<std::size_t>(std::distance(grid_.begin(), it));
    return std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, grid_.size() - 2);
}

Eigen::VectorXd SplineBasis::weights(double x) const {
    const std::size_t i = interval(x);
    const auto n = static_cast<Eigen::Index>(grid_.size());
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    const auto ii = static_cast<Eigen::Index>(i);
    if (x == grid_[i]) {
        w(ii) = 1.0;
        return w;
    }
    if (x == grid_[i + 1]) {
        w(ii + 1) = 1.0;
        return w;
    }
    const double h = grid_[i + 1] - grid_[i];
    const double a = (grid_[i + 1] - x) / h;
    const double b = (x - grid_[i]) / h;
    w(ii) += a;
    w(ii + 1) += b;
    w += ((a * a * a - a) * h * h / 6.0) * moments_.row(ii).transpose();
    w += ((b * b * b - b) * h * h / 6.0) * moments_.row(ii + 1).transpose();
    return w;
}

Eigen::VectorXd SplineBasis::derivative_weights(double x) const {
    const std::size_t i = interval(x);
    const auto n = static_cast<Eigen::Index>(grid_.size());
    const auto ii = static_cast<Eigen::Index>(i);
    const double h = grid_[i + 1] - grid_[i];
    const double a = (grid_[i + 1] - x) / h;
    const double b = (x - grid_[i]) / h;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    w(ii) -= 1.0 / h;
    w(ii + 1) += 1.0 / h;
    w -= ((3.0 * a * a - 1.0) * h / 6.0) * moments_.row(ii).transpose();
    w += ((3.0 * b * b - 1.0) * h / 6.0) * moments_.row(ii + 1).transpose();
    return w;
}

double SplineBasis::evaluate(std::span<const double> samples, double x) const {
    if (samples.size() != grid_.size()) {
        throw DimensionError("spline sample count does not match the grid");
    }
    return weights(x).dot(Eigen::Map<const Eigen::VectorXd>(samples.data(), static_cast<Eigen::Index>(samples.size())));
}

double SplineBasis::derivative(std::span<const double> samples, double x) const {
    if (samples.size() != grid_.size()) {
        throw DimensionError("spline sample count does not match the grid");
    }
    return derivative_weights(x).dot(
        Eigen::Map<const Eigen::VectorXd>(samples.data(), static_cast<Eigen::Index>(samples.size())));
}

} // namespace hamvqe
