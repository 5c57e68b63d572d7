#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "hamvqe/landscape.hpp"

namespace hamvqe {

struct MgdOptions {
    double step_theta = 0.1;   // eta_A
    double step_lambda = 0.05; // eta_B
    std::size_t lambda_steps = 5; // N
    std::size_t theta_steps = 5;  // T
    double tolerance_theta = 1e-5;
    double tolerance_lambda = 1e-5;
    std::size_t max_outer = 200;
    std::vector<double> theta0; // empty means all zeros
    std::vector<double> lambda0;
};

enum class MgdPhase { Start, Lambda, Theta };

struct MgdRecord {
    std::size_t outer;
    MgdPhase phase;
    std::vector<double> lambda;
    Eigen::VectorXd theta;
    double energy;
    double grad_theta_norm;
    double grad_lambda_norm;
    std::size_t quantum_evals;
    bool clipped = false;
};

struct MgdTrace {
    std::vector<MgdRecord> records;
    bool converged = false;
    std::size_t outer_iterations = 0;
    std::size_t clips = 0;

    [[nodiscard]] const MgdRecord &final() const { return records.back(); }
};

/// Mutual gradient descent: alternate N lambda steps, which reuse the cached
/// expectations at the current theta, with T theta steps, until both gradient
/// norms are below tolerance at the end of an outer iteration.
MgdTrace mgd_optimize(const Landscape &landscape, const MgdOptions &options);

const char *to_string(MgdPhase phase);

void write_mgd_csv(std::ostream &out, const MgdTrace &trace, std::size_t lambda_dims, std::size_t parameters);

} // namespace hamvqe
