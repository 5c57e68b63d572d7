#include "hamvqe/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "hamvqe/continuation.hpp"
#include "hamvqe/csv.hpp"
#include "hamvqe/error.hpp"
#include "hamvqe/family.hpp"
#include "hamvqe/landscape.hpp"
#include "hamvqe/mgd.hpp"
#include "hamvqe/oracle.hpp"
#include "hamvqe/simulator.hpp"
#include "hamvqe/ucc.hpp"
#include "hamvqe/vqe.hpp"

#ifndef HAMVQE_DEFAULT_FIXTURE_DIR
#define HAMVQE_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace hamvqe {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

class UsageError : public Error {
  public:
    using Error::Error;
};

struct RunConfig {
    std::string family;
    std::string ansatz;
    std::string out;
    std::string gradient = "shift";
    double fd_step = 1e-5;
    double hessian_step = 1e-4;
    unsigned seed = 0;
    bool random_init = false;
    bool strict = false;

    // vqe / corrector
    double eta_a = 0.1;
    double tol_theta = 1e-7;
    std::size_t max_iter = 5000;

    // mgd
    double eta_b = 0.05;
    std::size_t lambda_steps = 5;
    std::size_t theta_steps = 5;
    double mgd_tol_theta = 1e-5;
    double mgd_tol_lambda = 1e-5;
    std::size_t max_outer = 200;
    std::vector<double> lambda0;
    std::vector<double> theta0;

    // continuation
    std::optional<std::size_t> from_node;
    std::optional<std::size_t> to_node;
    std::size_t axis = 0;
    std::size_t fixed_node = 0;
    std::size_t corrector_steps = 10;
    double corrector_tol = 1e-7;
    double max_condition = kDefaultMaxCondition;
    std::vector<std::string> references;
    std::vector<double> weights;

    // exact / check
    std::optional<std::size_t> electrons;
    std::size_t levels = 1;
    std::string csv;
    double check_tol = 1e-7;
};

fs::path resolve_family(const std::string &name) {
    if (name.empty()) {
        throw UsageError("--family is required");
    }
    const fs::path given(name);
    if (fs::exists(given)) {
        return given;
    }
    if (given.is_relative()) {
        std::vector<fs::path> dirs;
        if (const char *env = std::getenv("HAMVQE_FIXTURES"); env != nullptr && *env != '\0') {
            dirs.emplace_back(env);
        }
        dirs.emplace_back(HAMVQE_DEFAULT_FIXTURE_DIR);
        for (const auto &d : dirs) {
            if (fs::exists(d / given)) {
                return d / given;
            }
        }
    }
    throw UsageError("family file not found: " + name + " (set HAMVQE_FIXTURES or pass a path)");
}

std::shared_ptr<const HamiltonianFamily> open_family(const std::string &name) {
    const fs::path path = resolve_family(name);
    try {
        return std::make_shared<const HamiltonianFamily>(load_family(path));
    } catch (const SchemaError &e) {
        throw UsageError(e.what());
    }
}

Ansatz open_ansatz(const std::string &name, const HamiltonianFamily &family) {
    if (name.empty()) {
        throw UsageError("--ansatz is required");
    }
    Ansatz ansatz = [&] {
        try {
            return ansatz_from_name(name);
        } catch (const Error &e) {
            throw UsageError(e.what());
        }
    }();
    if (ansatz.n_qubits() != family.n_qubits()) {
        throw UsageError("ansatz '" + name + "' acts on " + std::to_string(ansatz.n_qubits()) + " qubits but family '" +
                         family.name() + "' has " + std::to_string(family.n_qubits()));
    }
    return ansatz;
}

GradientOptions gradient_options(const RunConfig &cfg) {
    GradientOptions g;
    g.method = cfg.gradient == "cd" ? GradientMethod::CentralDifference : GradientMethod::ParameterShift;
    g.difference_step = cfg.fd_step;
    g.hessian_step = cfg.hessian_step;
    return g;
}

std::vector<double> initial_theta(const RunConfig &cfg, std::size_t k) {
    if (cfg.random_init) {
        return random_theta(k, cfg.seed);
    }
    if (!cfg.theta0.empty()) {
        if (cfg.theta0.size() != k) {
            throw UsageError("--theta0 needs " + std::to_string(k) + " values");
        }
        return cfg.theta0;
    }
    return std::vector<double>(k, 0.0);
}

std::string join(const std::vector<double> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + format_double(v[i]);
    }
    return s;
}

std::string join(const std::vector<std::string> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + v[i];
    }
    return s;
}

std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

std::map<std::string, std::string> base_manifest(const std::string &command, const RunConfig &cfg) {
    return {
        {"command", command},
        {"version", kVersion},
        {"timestamp", timestamp()},
        {"family", cfg.family},
        {"ansatz", cfg.ansatz},
        {"gradient", cfg.gradient},
        {"fd_step", format_double(cfg.fd_step)},
        {"hessian_step", format_double(cfg.hessian_step)},
        {"seed", std::to_string(cfg.seed)},
        {"random_init", cfg.random_init ? "true" : "false"},
        {"strict", cfg.strict ? "true" : "false"},
    };
}

fs::path output_path(const RunConfig &cfg, const std::string &command) {
    return cfg.out.empty() ? fs::path(command + ".csv") : fs::path(cfg.out);
}

void write_outputs(const fs::path &csv_path, const std::string &csv, std::map<std::string, std::string> manifest) {
    {
        std::ofstream f(csv_path, std::ios::binary);
        if (!f) {
            throw UsageError("cannot write " + csv_path.string());
        }
        f << csv;
    }
    fs::path mpath = csv_path;
    mpath.replace_extension(".manifest");
    manifest["output"] = csv_path.string();
    std::ofstream m(mpath);
    if (!m) {
        throw UsageError("cannot write " + mpath.string());
    }
    write_manifest(m, manifest);
}

std::vector<std::string> lambda_header(const HamiltonianFamily &f) {
    std::vector<std::string> h;
    for (std::size_t a = 0; a < f.dims(); ++a) {
        h.push_back("lambda_" + std::to_string(a));
    }
    return h;
}

int cmd_vqe(const RunConfig &cfg, std::ostream &out) {
    const auto family = open_family(cfg.family);
    const Ansatz ansatz = open_ansatz(cfg.ansatz, *family);
    const Landscape landscape(family, ansatz, gradient_options(cfg));
    VqeOptions opts;
    opts.step = cfg.eta_a;
    opts.tolerance = cfg.tol_theta;
    opts.max_iterations = cfg.max_iter;
    opts.theta0 = initial_theta(cfg, ansatz.parameter_count());

    const std::size_t first = cfg.from_node.value_or(0);
    const std::size_t last = cfg.to_node.value_or(family->node_count() - 1);
    if (first > last || last >= family->node_count()) {
        throw UsageError("node range out of bounds (family has " + std::to_string(family->node_count()) + " nodes)");
    }
    std::ostringstream csv;
    auto header = lambda_header(*family);
    header.insert(header.begin(), "node");
    for (std::size_t i = 0; i < ansatz.parameter_count(); ++i) {
        header.push_back("theta_" + std::to_string(i));
    }
    for (const char *c : {"energy", "grad_norm", "iterations", "converged"}) {
        header.emplace_back(c);
    }
    write_row(csv, header);
    std::size_t unconverged = 0;
    for (std::size_t n = first; n <= last; ++n) {
        const auto lambda = family->node(n);
        const VqeResult r = minimize(landscape, lambda, opts);
        unconverged += r.converged ? 0 : 1;
        std::vector<std::string> row{std::to_string(n)};
        for (double l : lambda) {
            row.push_back(format_double(l));
        }
        for (Eigen::Index i = 0; i < r.theta.size(); ++i) {
            row.push_back(format_double(r.theta(i)));
        }
        row.push_back(format_double(r.energy));
        row.push_back(format_double(r.gradient_norm));
        row.push_back(std::to_string(r.iterations));
        row.push_back(r.converged ? "1" : "0");
        write_row(csv, row);
    }
    auto manifest = base_manifest("vqe", cfg);
    manifest["eta_a"] = format_double(cfg.eta_a);
    manifest["tol_theta"] = format_double(cfg.tol_theta);
    manifest["max_iter"] = std::to_string(cfg.max_iter);
    manifest["theta0"] = join(opts.theta0);
    manifest["nodes"] = std::to_string(first) + ".." + std::to_string(last);
    manifest["unconverged"] = std::to_string(unconverged);
    const fs::path path = output_path(cfg, "vqe");
    write_outputs(path, csv.str(), manifest);
    out << "vqe: " << (last - first + 1) << " nodes, " << unconverged << " unconverged -> " << path.string() << '\n';
    return cfg.strict && unconverged > 0 ? kNumerical : kOk;
}

int cmd_mgd(const RunConfig &cfg, std::ostream &out) {
    const auto family = open_family(cfg.family);
    const Ansatz ansatz = open_ansatz(cfg.ansatz, *family);
    const Landscape landscape(family, ansatz, gradient_options(cfg));
    MgdOptions opts;
    opts.step_theta = cfg.eta_a;
    opts.step_lambda = cfg.eta_b;
    opts.lambda_steps = cfg.lambda_steps;
    opts.theta_steps = cfg.theta_steps;
    opts.tolerance_theta = cfg.mgd_tol_theta;
    opts.tolerance_lambda = cfg.mgd_tol_lambda;
    opts.max_outer = cfg.max_outer;
    opts.theta0 = initial_theta(cfg, ansatz.parameter_count());
    if (cfg.lambda0.size() != family->dims()) {
        throw UsageError("--lambda0 needs " + std::to_string(family->dims()) + " value(s)");
    }
    if (!family->contains(cfg.lambda0)) {
        throw UsageError("--lambda0 " + join(cfg.lambda0) + " is outside the family domain");
    }
    opts.lambda0 = cfg.lambda0;
    const MgdTrace trace = mgd_optimize(landscape, opts);
    std::ostringstream csv;
    write_mgd_csv(csv, trace, family->dims(), ansatz.parameter_count());
    auto manifest = base_manifest("mgd", cfg);
    manifest["eta_a"] = format_double(opts.step_theta);
    manifest["eta_b"] = format_double(opts.step_lambda);
    manifest["lambda_steps"] = std::to_string(opts.lambda_steps);
    manifest["theta_steps"] = std::to_string(opts.theta_steps);
    manifest["tol_theta"] = format_double(opts.tolerance_theta);
    manifest["tol_lambda"] = format_double(opts.tolerance_lambda);
    manifest["max_outer"] = std::to_string(opts.max_outer);
    manifest["lambda0"] = join(opts.lambda0);
    manifest["theta0"] = join(opts.theta0);
    manifest["converged"] = trace.converged ? "true" : "false";
    manifest["outer_iterations"] = std::to_string(trace.outer_iterations);
    manifest["clips"] = std::to_string(trace.clips);
    manifest["final_lambda"] = join(trace.final().lambda);
    manifest["final_energy"] = format_double(trace.final().energy);
    manifest["quantum_evals"] = std::to_string(trace.final().quantum_evals);
    const fs::path path = output_path(cfg, "mgd");
    write_outputs(path, csv.str(), manifest);
    out << "mgd: lambda* = " << join(trace.final().lambda) << ", E = " << format_double(trace.final().energy)
        << ", " << (trace.converged ? "converged" : "not converged") << " after " << trace.outer_iterations
        << " outer iterations -> " << path.string() << '\n';
    return cfg.strict && !trace.converged ? kNumerical : kOk;
}

int cmd_pes(const RunConfig &cfg, std::ostream &out, bool ssvqe) {
    const std::string command = ssvqe ? "ssvqe-pes" : "pes";
    const auto family = open_family(cfg.family);
    const Ansatz ansatz = open_ansatz(cfg.ansatz, *family);
    Landscape landscape(family, ansatz, gradient_options(cfg));
    std::optional<SsvqeSpec> spec;
    if (ssvqe) {
        if (cfg.references.empty()) {
            throw UsageError("ssvqe-pes needs --references");
        }
        spec = cfg.weights.empty() ? SsvqeSpec::with_default_weights(cfg.references)
                                   : SsvqeSpec{cfg.references, cfg.weights};
        try {
            spec->validate(ansatz.n_qubits());
        } catch (const Error &e) {
            throw UsageError(e.what());
        }
        landscape = landscape.with_objective(spec->objective());
    }

    ContinuationPlan plan;
    if (family->dims() == 1) {
        const std::size_t n = family->node_count();
        const std::size_t from = cfg.from_node.value_or(0);
        const std::size_t to = cfg.to_node.value_or(from == n - 1 ? 0 : n - 1);
        if (from >= n || to >= n || from == to) {
            throw UsageError("--from-node/--to-node must be distinct nodes below " + std::to_string(n));
        }
        plan.path = grid_path(*family, from, to);
    } else {
        if (cfg.axis > 1 || cfg.fixed_node >= family->axes()[1 - cfg.axis].grid.size()) {
            throw UsageError("--axis must be 0 or 1 and --fixed-node a node of the other axis");
        }
        plan.path = grid_line(*family, cfg.axis, cfg.fixed_node);
        if (cfg.from_node && cfg.to_node) {
            const std::size_t a = *cfg.from_node, b = *cfg.to_node;
            if (a >= plan.path.size() || b >= plan.path.size() || a == b) {
                throw UsageError("--from-node/--to-node out of range along the path axis");
            }
            std::vector<std::vector<double>> sub;
            if (a < b) {
                sub.assign(plan.path.begin() + static_cast<std::ptrdiff_t>(a),
                           plan.path.begin() + static_cast<std::ptrdiff_t>(b) + 1);
            } else {
                for (std::size_t i = a + 1; i-- > b;) {
                    sub.push_back(plan.path[i]);
                }
            }
            plan.path = std::move(sub);
        }
    }
    plan.corrector.max_steps = cfg.corrector_steps;
    plan.corrector.tolerance = cfg.corrector_tol;
    plan.corrector.step = cfg.eta_a;
    plan.max_condition = cfg.max_condition;
    plan.initial.step = cfg.eta_a;
    plan.initial.tolerance = cfg.tol_theta;
    plan.initial.max_iterations = cfg.max_iter;
    plan.initial.theta0 = initial_theta(cfg, ansatz.parameter_count());

    auto manifest = base_manifest(command, cfg);
    manifest["eta_a"] = format_double(cfg.eta_a);
    manifest["tol_theta"] = format_double(cfg.tol_theta);
    manifest["corrector_steps"] = std::to_string(cfg.corrector_steps);
    manifest["corrector_tol"] = format_double(cfg.corrector_tol);
    manifest["max_condition"] = format_double(cfg.max_condition);
    manifest["path_points"] = std::to_string(plan.path.size());
    if (spec) {
        manifest["references"] = join(spec->references);
        manifest["weights"] = join(spec->weights);
    }
    const fs::path path = output_path(cfg, command);
    const std::size_t states = landscape.state_count();
    ContinuationResult result;
    int status = kOk;
    try {
        result = continue_path(landscape, plan);
    } catch (const ContinuationBreakdown &e) {
        result = e.partial();
        manifest["breakdown"] = e.what();
        status = kNumerical;
    }
    std::ostringstream csv;
    write_continuation_csv(csv, result, family->dims(), ansatz.parameter_count(), states);
    manifest["flagged"] = std::to_string(result.flagged());
    write_outputs(path, csv.str(), manifest);
    out << command << ": " << result.points.size() << " points, " << result.flagged() << " flagged -> "
        << path.string() << '\n';
    if (status == kOk && cfg.strict && result.flagged() > 0) {
        status = kNumerical;
    }
    return status;
}

int cmd_exact(const RunConfig &cfg, std::ostream &out) {
    const auto family = open_family(cfg.family);
    if (cfg.levels == 0) {
        throw UsageError("--levels must be positive");
    }
    std::ostringstream csv;
    auto header = lambda_header(*family);
    header.insert(header.begin(), "node");
    for (std::size_t j = 0; j < cfg.levels; ++j) {
        header.push_back("energy_" + std::to_string(j));
    }
    write_row(csv, header);
    for (std::size_t n = 0; n < family->node_count(); ++n) {
        const auto lambda = family->node(n);
        const PauliSum h = family->hamiltonian_at(lambda);
        Eigen::VectorXd values;
        if (cfg.electrons) {
            values = sector_spectrum(h, {h.n_qubits(), *cfg.electrons});
        } else {
            values = eigenspectrum(h, std::size_t{1} << h.n_qubits()).values;
        }
        if (static_cast<std::size_t>(values.size()) < cfg.levels) {
            throw UsageError("--levels exceeds the number of eigenvalues");
        }
        std::vector<std::string> row{std::to_string(n)};
        for (double l : lambda) {
            row.push_back(format_double(l));
        }
        for (std::size_t j = 0; j < cfg.levels; ++j) {
            row.push_back(format_double(values(static_cast<Eigen::Index>(j))));
        }
        write_row(csv, row);
    }
    const PesMinimum best = pes_argmin(*family, true, cfg.electrons);
    auto manifest = base_manifest("exact", cfg);
    manifest["electrons"] = cfg.electrons ? std::to_string(*cfg.electrons) : "all";
    manifest["levels"] = std::to_string(cfg.levels);
    manifest["argmin_refined"] = join(best.lambda);
    manifest["argmin_energy"] = format_double(best.energy);
    manifest["argmin_boundary"] = best.boundary ? "true" : "false";
    const fs::path path = output_path(cfg, "exact");
    write_outputs(path, csv.str(), manifest);
    out << "exact: " << family->node_count() << " nodes, refined argmin " << join(best.lambda) << " -> "
        << path.string() << '\n';
    return kOk;
}

// Post-hoc validation of a CSV written by any subcommand.
int check_csv(const RunConfig &cfg, std::ostream &out) {
    std::ifstream in(cfg.csv);
    if (!in) {
        throw UsageError("cannot open CSV: " + cfg.csv);
    }
    CsvTable table = [&] {
        try {
            return read_csv(in);
        } catch (const SchemaError &e) {
            throw UsageError(e.what());
        }
    }();
    std::vector<std::string> problems;
    auto number = [&](std::size_t row, const std::string &col) {
        const auto c = table.column(col);
        const std::string &cell = table.rows[row][static_cast<std::size_t>(c)];
        char *end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0' || !std::isfinite(v)) {
            problems.push_back("row " + std::to_string(row + 1) + ": column " + col + " is not a finite number");
        }
        return v;
    };
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (const auto &col : table.header) {
            if (col != "phase") {
                (void)number(r, col);
            }
        }
    }
    std::shared_ptr<const HamiltonianFamily> family;
    if (!cfg.family.empty()) {
        family = open_family(cfg.family);
    }
    std::vector<std::string> lambda_cols;
    for (const auto &h : table.header) {
        if (h.rfind("lambda_", 0) == 0) {
            lambda_cols.push_back(h);
        }
    }
    auto lambda_of = [&](std::size_t r) {
        std::vector<double> l;
        for (const auto &c : lambda_cols) {
            l.push_back(number(r, c));
        }
        return l;
    };
    std::string kind;
    if (table.column("phase") >= 0) {
        kind = "mgd";
        const auto phase = static_cast<std::size_t>(table.column("phase"));
        for (std::size_t r = 1; r < table.rows.size(); ++r) {
            const double prev = number(r - 1, "quantum_evals");
            const double cur = number(r, "quantum_evals");
            if (cur < prev) {
                problems.push_back("row " + std::to_string(r + 1) + ": quantum_evals decreased");
            }
            if (table.rows[r][phase] == "lambda" && cur != prev) {
                problems.push_back("row " + std::to_string(r + 1) + ": quantum_evals changed during a lambda step");
            }
        }
    } else if (table.column("corrector_steps") >= 0) {
        kind = "continuation";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const double conv = number(r, "converged");
            if (conv != 0.0 && conv != 1.0) {
                problems.push_back("row " + std::to_string(r + 1) + ": converged is not 0 or 1");
            }
            if (conv == 1.0 && number(r, "grad_norm") > cfg.check_tol) {
                problems.push_back("row " + std::to_string(r + 1) + ": converged point has gradient above tolerance");
            }
        }
    } else if (table.column("iterations") >= 0) {
        kind = "vqe";
        std::vector<double> exact;
        if (family) {
            exact = ground_energies(*family, cfg.electrons);
        }
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (number(r, "converged") == 1.0 && number(r, "grad_norm") > cfg.check_tol) {
                problems.push_back("row " + std::to_string(r + 1) + ": converged node has gradient above tolerance");
            }
            if (family) {
                const auto node = static_cast<std::size_t>(number(r, "node"));
                if (node < exact.size() && number(r, "energy") < exact[node] - 1e-10) {
                    problems.push_back("row " + std::to_string(r + 1) + ": energy below the exact ground state");
                }
            }
        }
    } else if (table.column("energy_0") >= 0 && table.column("node") >= 0) {
        kind = "exact";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            double prev = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; table.column("energy_" + std::to_string(j)) >= 0; ++j) {
                const double v = number(r, "energy_" + std::to_string(j));
                if (v < prev) {
                    problems.push_back("row " + std::to_string(r + 1) + ": levels not ascending");
                }
                prev = v;
            }
        }
    } else {
        throw UsageError("unrecognized CSV layout in " + cfg.csv);
    }
    if (family) {
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            if (!family->contains(lambda_of(r))) {
                problems.push_back("row " + std::to_string(r + 1) + ": lambda outside the family domain");
            }
        }
    }
    for (const auto &p : problems) {
        out << "FAIL " << p << '\n';
    }
    out << "check " << kind << ": " << table.rows.size() << " rows, " << problems.size() << " problem(s)\n";
    return problems.empty() ? kOk : kNumerical;
}

// Quick invariant battery on the bundled fixtures.
int check_battery(std::ostream &out) {
    int failures = 0;
    auto report = [&](const std::string &name, bool ok, const std::string &detail) {
        out << (ok ? "PASS " : "FAIL ") << name << "  " << detail << '\n';
        failures += ok ? 0 : 1;
    };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    {
        PauliSum h(3);
        const char *labels[] = {"XYZ", "ZZI", "IXY", "YYX", "III"};
        for (const char *l : labels) {
            h.add(unit(rng), parse_pauli(l, 3));
        }
        const Eigen::MatrixXcd m = dense_matrix(h);
        const double err = (m - m.adjoint()).cwiseAbs().maxCoeff();
        report("pauli.hermitian", err <= 1e-14, "max |M - M^H| = " + format_double(err));
    }

    struct Case {
        const char *family;
        const char *ansatz;
    };
    for (const Case c : {Case{"h2_sto3g.json", "h2"}, Case{"lih_sto6g.json", "lih"},
                         Case{"h2_sto3g_4q.json", "uccsd:4,2,1"}, Case{"h4.json", "uccsd:6,2,1"}}) {
        std::shared_ptr<const HamiltonianFamily> family;
        try {
            family = open_family(c.family);
        } catch (const UsageError &e) {
            report(std::string("fixture.") + c.family, false, e.what());
            continue;
        }
        const Ansatz ansatz = ansatz_from_name(c.ansatz);
        const Landscape ps(family, ansatz);
        GradientOptions cd_opts;
        cd_opts.method = GradientMethod::CentralDifference;
        const Landscape cd(family, ansatz, cd_opts);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> theta(ansatz.parameter_count());
            for (auto &t : theta) {
                t = unit(rng) * 3.0;
            }
            std::vector<double> lambda;
            for (const auto &axis : family->axes()) {
                lambda.push_back(axis.lower() + (axis.upper() - axis.lower()) * (0.5 + 0.4 * unit(rng)));
            }
            const Eigen::VectorXd a = ps.grad_theta(theta, lambda);
            const Eigen::VectorXd b = cd.grad_theta(theta, lambda);
            worst = std::max(worst, (a - b).norm() / std::max(1.0, a.norm()));
        }
        report(std::string("gradient.") + c.ansatz, worst <= 1e-6, "max relative error " + format_double(worst));

        double node_err = 0.0;
        for (std::size_t n = 0; n < family->node_count(); n += 7) {
            const Eigen::VectorXd v = family->coefficients_at(family->node(n));
            const Eigen::VectorXd again = family->coefficients_at(family->node(n));
            node_err = std::max(node_err, (v - again).cwiseAbs().maxCoeff());
        }
        report(std::string("family.deterministic.") + c.family, node_err == 0.0, "");
    }
    out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed") << '\n';
    return failures == 0 ? kOk : kNumerical;
}

void add_common(CLI::App *sub, RunConfig &cfg, bool needs_ansatz) {
    sub->add_option("--family", cfg.family, "Family JSON file (searched in HAMVQE_FIXTURES when relative)")
        ->required();
    if (needs_ansatz) {
        sub->add_option("--ansatz", cfg.ansatz, "h2 | lih | uccsd:o,e,t | uccgsd:o,e,t")->required();
        sub->add_option("--gradient", cfg.gradient, "shift | cd")->check(CLI::IsMember({"shift", "cd"}));
        sub->add_option("--fd-step", cfg.fd_step, "central-difference step")->check(CLI::PositiveNumber);
        sub->add_option("--hessian-step", cfg.hessian_step, "Hessian difference step")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "seed for --random-init");
        sub->add_flag("--random-init", cfg.random_init, "draw initial theta uniformly in [-pi, pi)");
        sub->add_option("--theta0", cfg.theta0, "initial parameters");
        sub->add_option("--eta-a", cfg.eta_a, "theta step size")->check(CLI::PositiveNumber);
        sub->add_flag("--strict", cfg.strict, "exit 1 on non-convergence");
    }
    sub->add_option("--out,-o", cfg.out, "output CSV path (manifest written alongside)");
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Variational quantum eigensolver sweeps, mutual gradient descent and continuation", "hamvqe"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "INI/TOML config file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;

    auto *vqe = app.add_subcommand("vqe", "independent VQE at every grid node");
    add_common(vqe, cfg, true);
    vqe->add_option("--tol-theta", cfg.tol_theta)->check(CLI::PositiveNumber);
    vqe->add_option("--max-iter", cfg.max_iter);
    vqe->add_option("--from-node", cfg.from_node);
    vqe->add_option("--to-node", cfg.to_node);

    auto *mgd = app.add_subcommand("mgd", "mutual gradient descent for the equilibrium geometry");
    add_common(mgd, cfg, true);
    mgd->add_option("--lambda0", cfg.lambda0, "initial geometry")->required();
    mgd->add_option("--eta-b", cfg.eta_b, "lambda step size")->check(CLI::PositiveNumber);
    mgd->add_option("--lambda-steps,-N", cfg.lambda_steps)->check(CLI::PositiveNumber);
    mgd->add_option("--theta-steps,-T", cfg.theta_steps)->check(CLI::PositiveNumber);
    mgd->add_option("--tol-theta", cfg.mgd_tol_theta)->check(CLI::PositiveNumber);
    mgd->add_option("--tol-lambda", cfg.mgd_tol_lambda)->check(CLI::PositiveNumber);
    mgd->add_option("--max-outer", cfg.max_outer);

    auto add_path = [&](CLI::App *sub) {
        add_common(sub, cfg, true);
        sub->add_option("--from-node", cfg.from_node, "first node along the path");
        sub->add_option("--to-node", cfg.to_node, "last node along the path");
        sub->add_option("--axis", cfg.axis, "moving axis of a 2-D family");
        sub->add_option("--fixed-node", cfg.fixed_node, "node index of the held axis of a 2-D family");
        sub->add_option("--corrector-steps", cfg.corrector_steps);
        sub->add_option("--corrector-tol", cfg.corrector_tol)->check(CLI::PositiveNumber);
        sub->add_option("--tol-theta", cfg.tol_theta, "tolerance of the initial VQE")->check(CLI::PositiveNumber);
        sub->add_option("--max-iter", cfg.max_iter, "iteration cap of the initial VQE");
        sub->add_option("--max-condition", cfg.max_condition)->check(CLI::PositiveNumber);
    };
    auto *pes = app.add_subcommand("pes", "ground-state curve by continuation");
    add_path(pes);
    auto *ssvqe = app.add_subcommand("ssvqe-pes", "excited-state curves by SSVQE continuation");
    add_path(ssvqe);
    ssvqe->add_option("--references", cfg.references, "reference bitstrings")->required();
    ssvqe->add_option("--weights", cfg.weights, "strictly decreasing weights (default (k+1-j)/(k+1))");

    auto *exact = app.add_subcommand("exact", "exact diagonalization at every grid node");
    add_common(exact, cfg, false);
    exact->add_option("--electrons", cfg.electrons, "restrict to a particle-number sector");
    exact->add_option("--levels", cfg.levels, "number of lowest levels to report");

    auto *check = app.add_subcommand("check", "validate a CSV, or run the invariant battery");
    check->add_option("--csv", cfg.csv, "CSV written by another subcommand");
    check->add_option("--family", cfg.family, "family used for domain and variational checks");
    check->add_option("--electrons", cfg.electrons);
    check->add_option("--tol", cfg.check_tol, "gradient tolerance for converged rows");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) {
        reversed.pop_back(); // program name
    }
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*vqe) {
            return cmd_vqe(cfg, out);
        }
        if (*mgd) {
            return cmd_mgd(cfg, out);
        }
        if (*pes) {
            return cmd_pes(cfg, out, false);
        }
        if (*ssvqe) {
            return cmd_pes(cfg, out, true);
        }
        if (*exact) {
            return cmd_exact(cfg, out);
        }
        if (*check) {
            return cfg.csv.empty() ? check_battery(out) : check_csv(cfg, out);
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error &e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

} // namespace hamvqe
