#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hamvqe/error.hpp"
#include "hamvqe/landscape.hpp"
#include "hamvqe/vqe.hpp"

namespace hamvqe {

inline constexpr double kDefaultMaxCondition = 1e10;

/// Solves A x = b and returns -delta_lambda x. Throws SingularMatrixError when
/// A is singular or its 2-norm condition number exceeds `max_condition`.
Eigen::VectorXd predictor_step(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, double delta_lambda,
                               double max_condition = kDefaultMaxCondition);

/// Multi-axis form: solves A x = sum_axis delta_axis b_axis, b_axis the columns of B.
Eigen::VectorXd predictor_step(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B,
                               std::span<const double> delta_lambda, double max_condition = kDefaultMaxCondition);

double condition_number(const Eigen::MatrixXd &A);

struct CorrectorOptions {
    std::size_t max_steps = 10; // zero disables the corrector
    double tolerance = 1e-7;
    double step = 0.1;
};

struct ContinuationPlan {
    std::vector<std::vector<double>> path;
    std::vector<double> theta0; // empty: solved by VQE at the first point
    CorrectorOptions corrector;
    double max_condition = kDefaultMaxCondition;
    VqeOptions initial; // used only when theta0 is empty
};

struct ContinuationPoint {
    std::vector<double> lambda;
    Eigen::VectorXd predicted;
    Eigen::VectorXd corrected;
    double energy;
    Eigen::VectorXd state_energies;
    double gradient_norm;
    std::size_t corrector_steps;
    double condition; // of A at the previous point; zero at the first point
    bool converged;
};

struct ContinuationResult {
    std::vector<ContinuationPoint> points;

    [[nodiscard]] std::size_t flagged() const;
};

/// Raised when the Hessian becomes singular mid-path; carries every point
/// completed before the breakdown.
class ContinuationBreakdown : public SingularMatrixError {
  public:
    ContinuationBreakdown(const SingularMatrixError &cause, ContinuationResult partial)
        : SingularMatrixError(cause.what(), cause.condition()), partial_(std::move(partial)) {}
    [[nodiscard]] const ContinuationResult &partial() const noexcept { return partial_; }

  private:
    ContinuationResult partial_;
};

/// Euler predictor with A and b at the previous point, then gradient-descent
/// correction at the new point. A point whose corrector does not reach the
/// tolerance is flagged and the path proceeds from the last corrector iterate.
ContinuationResult continue_path(const Landscape &landscape, const ContinuationPlan &plan);

ContinuationResult continue_ssvqe(const Landscape &landscape, const ContinuationPlan &plan, const SsvqeSpec &spec);

/// All nodes of a 1-D family between two node indices, in either direction.
std::vector<std::vector<double>> grid_path(const HamiltonianFamily &family, std::size_t from, std::size_t to);

/// Nodes along `axis` of a 2-D family with the other axis held at node `fixed`.
std::vector<std::vector<double>> grid_line(const HamiltonianFamily &family, std::size_t axis, std::size_t fixed);

void write_continuation_csv(std::ostream &out, const ContinuationResult &result, std::size_t lambda_dims,
                            std::size_t parameters, std::size_t states);

} // namespace hamvqe
