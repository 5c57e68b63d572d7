#include "hamvqe/mgd.hpp"

#include <cmath>
#include <ostream>

#include "hamvqe/csv.hpp"
#include "hamvqe/error.hpp"

namespace hamvqe {

const char *to_string(MgdPhase phase) {
    switch (phase) {
    case MgdPhase::Start:
        return "start";
    case MgdPhase::Lambda:
        return "lambda";
    case MgdPhase::Theta:
        return "theta";
    }
    return "?";
}

MgdTrace mgd_optimize(const Landscape &landscape, const MgdOptions &options) {
    if (!(options.step_theta > 0.0) || !(options.step_lambda > 0.0) || options.lambda_steps == 0 ||
        options.theta_steps == 0 || !(options.tolerance_theta > 0.0) || !(options.tolerance_lambda > 0.0)) {
        throw DimensionError("MGD step sizes, step counts and tolerances must be positive");
    }
    const HamiltonianFamily &family = landscape.family();
    family.check_domain(options.lambda0);
    const std::size_t k = landscape.parameter_count();
    std::vector<double> theta = options.theta0.empty() ? std::vector<double>(k, 0.0) : options.theta0;
    if (theta.size() != k) {
        throw DimensionError("initial theta has " + std::to_string(theta.size()) + " entries, ansatz takes " +
                             std::to_string(k));
    }
    std::vector<double> lambda = options.lambda0;

    MgdTrace trace;
    auto record = [&](std::size_t outer, MgdPhase phase, bool clipped) {
        const Eigen::VectorXd gt = landscape.grad_theta(theta, lambda);
        const Eigen::VectorXd gl = landscape.grad_lambda(theta, lambda);
        const double e = landscape.energy(theta, lambda);
        trace.records.push_back({outer, phase, lambda,
                                 Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(k)), e,
                                 gt.norm(), gl.norm(), landscape.quantum_evaluations(), clipped});
        return std::pair{gt, gl};
    };
    auto stationary = [&](const MgdRecord &r) {
        return r.grad_theta_norm <= options.tolerance_theta && r.grad_lambda_norm <= options.tolerance_lambda;
    };

    auto [gt, gl] = record(0, MgdPhase::Start, false);
    if (stationary(trace.records.back())) {
        trace.converged = true;
        return trace;
    }

    for (std::size_t outer = 1; outer <= options.max_outer; ++outer) {
        trace.outer_iterations = outer;
        // Classical phase: the expectations at theta are cached, so only c(lambda) changes.
        for (std::size_t n = 0; n < options.lambda_steps; ++n) {
            std::vector<double> next(lambda.size());
            for (std::size_t a = 0; a < lambda.size(); ++a) {
                next[a] = lambda[a] - options.step_lambda * gl(static_cast<Eigen::Index>(a));
            }
            std::vector<double> clipped = family.clip(next);
            const bool was_clipped = clipped != next;
            if (was_clipped) {
                ++trace.clips;
            }
            lambda = std::move(clipped);
            std::tie(gt, gl) = record(outer, MgdPhase::Lambda, was_clipped);
        }
        for (std::size_t t = 0; t < options.theta_steps; ++t) {
            for (std::size_t i = 0; i < k; ++i) {
                theta[i] -= options.step_theta * gt(static_cast<Eigen::Index>(i));
            }
            std::tie(gt, gl) = record(outer, MgdPhase::Theta, false);
        }
        if (!std::isfinite(trace.records.back().energy)) {
            throw NumericalError("MGD produced a non-finite energy at outer iteration " + std::to_string(outer));
        }
        if (stationary(trace.records.back())) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

void write_mgd_csv(std::ostream &out, const MgdTrace &trace, std::size_t lambda_dims, std::size_t parameters) {
    std::vector<std::string> header{"outer", "phase"};
    for (std::size_t a = 0; a < lambda_dims; ++a) {
        header.push_back("lambda_" + std::to_string(a));
    }
    for (std::size_t i = 0; i < parameters; ++i) {
        header.push_back("theta_" + std::to_string(i));
    }
    for (const char *c : {"energy", "grad_theta_norm", "grad_lambda_norm", "quantum_evals"}) {
        header.emplace_back(c);
    }
    write_row(out, header);
    for (const auto &r : trace.records) {
        std::vector<std::string> row{std::to_string(r.outer), to_string(r.phase)};
        for (double l : r.lambda) {
            row.push_back(format_double(l));
        }
        for (Eigen::Index i = 0; i < r.theta.size(); ++i) {
            row.push_back(format_double(r.theta(i)));
        }
        row.push_back(format_double(r.energy));
        row.push_back(format_double(r.grad_theta_norm));
        row.push_back(format_double(r.grad_lambda_norm));
        row.push_back(std::to_string(r.quantum_evals));
        write_row(out, row);
    }
}

} // namespace hamvqe
