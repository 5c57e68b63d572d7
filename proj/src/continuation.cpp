#include "hamvqe/continuation.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hamvqe/csv.hpp"

namespace hamvqe {

double condition_number(const Eigen::MatrixXd &A) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto &s = svd.singularValues();
    if (s.size() == 0) {
        return 1.0;
    }
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return s(0) / smin;
}

Eigen::VectorXd predictor_step(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, double delta_lambda,
                               double max_condition) {
    if (A.rows() != A.cols() || A.rows() != b.size()) {
        throw DimensionError("predictor needs a square A matching b");
    }
    const double cond = condition_number(A);
    if (!(cond <= max_condition)) {
        std::ostringstream msg;
        msg << "Hessian is singular or ill-conditioned (condition " << cond << ", threshold " << max_condition << ")";
        throw SingularMatrixError(msg.str(), cond);
    }
    const Eigen::VectorXd x = A.partialPivLu().solve(b);
    return -delta_lambda * x;
}

Eigen::VectorXd predictor_step(const Eigen::MatrixXd &A, const Eigen::MatrixXd &B,
                               std::span<const double> delta_lambda, double max_condition) {
    if (B.cols() != static_cast<Eigen::Index>(delta_lambda.size())) {
        throw DimensionError("one mixed-derivative column per lambda axis is required");
    }
    const Eigen::VectorXd rhs =
        B * Eigen::Map<const Eigen::VectorXd>(delta_lambda.data(), static_cast<Eigen::Index>(delta_lambda.size()));
    // The rhs already carries the step, so solve with unit delta.
    return predictor_step(A, rhs, 1.0, max_condition);
}

std::size_t ContinuationResult::flagged() const {
    std::size_t n = 0;
    for (const auto &p : points) {
        n += p.converged ? 0 : 1;
    }
    return n;
}

namespace {

void validate_path(const HamiltonianFamily &family, const std::vector<std::vector<double>> &path) {
    if (path.empty()) {
        throw DimensionError("continuation path is empty");
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
        family.check_domain(path[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (path[i] == path[j]) {
                throw DimensionError("continuation path repeats point " + std::to_string(j) + " at " +
                                     std::to_string(i));
            }
        }
    }
}

ContinuationPoint correct(const Landscape &landscape, const std::vector<double> &lambda,
                          const Eigen::VectorXd &predicted, const CorrectorOptions &corrector, double condition) {
    VqeOptions opts;
    opts.step = corrector.step;
    opts.tolerance = corrector.tolerance;
    opts.max_iterations = corrector.max_steps;
    opts.theta0.assign(predicted.data(), predicted.data() + predicted.size());
    const VqeResult r = minimize(landscape, lambda, opts);
    return {lambda, predicted, r.theta, r.energy, r.state_energies, r.gradient_norm, r.iterations, condition,
            r.converged};
}

} // namespace

ContinuationResult continue_path(const Landscape &landscape, const ContinuationPlan &plan) {
    const HamiltonianFamily &family = landscape.family();
    validate_path(family, plan.path);
    const std::size_t k = landscape.parameter_count();

    Eigen::VectorXd theta;
    if (plan.theta0.empty()) {
        theta = minimize(landscape, plan.path.front(), plan.initial).theta;
    } else {
        if (plan.theta0.size() != k) {
            throw DimensionError("initial theta has the wrong length");
        }
        theta = Eigen::Map<const Eigen::VectorXd>(plan.theta0.data(), static_cast<Eigen::Index>(k));
    }

    ContinuationResult result;
    result.points.push_back(correct(landscape, plan.path.front(), theta, plan.corrector, 0.0));
    theta = result.points.back().corrected;

    for (std::size_t i = 0; i + 1 < plan.path.size(); ++i) {
        const auto &here = plan.path[i];
        const auto &next = plan.path[i + 1];
        std::vector<double> t(theta.data(), theta.data() + theta.size());
        const Eigen::MatrixXd A = landscape.hessian_theta(t, here);
        Eigen::MatrixXd B(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(family.dims()));
        std::vector<double> delta(family.dims());
        for (std::size_t a = 0; a < family.dims(); ++a) {
            B.col(static_cast<Eigen::Index>(a)) = landscape.mixed_theta_lambda(t, here, a);
            delta[a] = next[a] - here[a];
        }
        Eigen::VectorXd step;
        try {
            step = predictor_step(A, B, delta, plan.max_condition);
        } catch (const SingularMatrixError &e) {
            throw ContinuationBreakdown(e, std::move(result));
        }
        const double cond = condition_number(A);
        result.points.push_back(correct(landscape, next, theta + step, plan.corrector, cond));
        theta = result.points.back().corrected;
    }
    return result;
}

ContinuationResult continue_ssvqe(const Landscape &landscape, const ContinuationPlan &plan, const SsvqeSpec &spec) {
    spec.validate(landscape.ansatz().n_qubits());
    return continue_path(landscape.with_objective(spec.objective()), plan);
}

std::vector<std::vector<double>> grid_path(const HamiltonianFamily &family, std::size_t from, std::size_t to) {
    if (family.dims() != 1) {
        throw DimensionError("grid_path needs a one-dimensional family");
    }
    const auto &g = family.axes().front().grid;
    if (from >= g.size() || to >= g.size()) {
        throw DimensionError("grid_path node out of range");
    }
    std::vector<std::vector<double>> path;
    if (from <= to) {
        for (std::size_t i = from; i <= to; ++i) {
            path.push_back({g[i]});
        }
    } else {
        for (std::size_t i = from + 1; i-- > to;) {
            path.push_back({g[i]});
        }
    }
    return path;
}

std::vector<std::vector<double>> grid_line(const HamiltonianFamily &family, std::size_t axis, std::size_t fixed) {
    if (family.dims() != 2 || axis > 1) {
        throw DimensionError("grid_line needs a two-dimensional family and axis 0 or 1");
    }
    const auto &moving = family.axes()[axis].grid;
    const auto &held = family.axes()[1 - axis].grid;
    if (fixed >= held.size()) {
        throw DimensionError("grid_line fixed node out of range");
    }
    std::vector<std::vector<double>> path;
    for (double x : moving) {
        std::vector<double> p(2);
        p[axis] = x;
        p[1 - axis] = held[fixed];
        path.push_back(std::move(p));
    }
    return path;
}

void write_continuation_csv(std::ostream &out, const ContinuationResult &result, std::size_t lambda_dims,
                            std::size_t parameters, std::size_t states) {
    std::vector<std::string> header;
    for (std::size_t a = 0; a < lambda_dims; ++a) {
        header.push_back("lambda_" + std::to_string(a));
    }
    for (std::size_t i = 0; i < parameters; ++i) {
        header.push_back("predicted_" + std::to_string(i));
    }
    for (std::size_t i = 0; i < parameters; ++i) {
        header.push_back("theta_" + std::to_string(i));
    }
    if (states == 1) {
        header.emplace_back("energy");
    } else {
        for (std::size_t j = 0; j < states; ++j) {
            header.push_back("energy_" + std::to_string(j));
        }
    }
    for (const char *c : {"grad_norm", "corrector_steps", "cond_A", "converged"}) {
        header.emplace_back(c);
    }
    write_row(out, header);
    for (const auto &p : result.points) {
        std::vector<std::string> row;
        for (double l : p.lambda) {
            row.push_back(format_double(l));
        }
        for (Eigen::Index i = 0; i < p.predicted.size(); ++i) {
            row.push_back(format_double(p.predicted(i)));
        }
        for (Eigen::Index i = 0; i < p.corrected.size(); ++i) {
            row.push_back(format_double(p.corrected(i)));
        }
        if (states == 1) {
            row.push_back(format_double(p.energy));
        } else {
            for (Eigen::Index j = 0; j < p.state_energies.size(); ++j) {
                row.push_back(format_double(p.state_energies(j)));
            }
        }
        row.push_back(format_double(p.gradient_norm));
        row.push_back(std::to_string(p.corrector_steps));
        row.push_back(format_double(p.condition));
        row.push_back(p.converged ? "1" : "0");
        write_row(out, row);
    }
}

} // namespace hamvqe
