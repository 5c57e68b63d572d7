// Acceptance run: one PASS/FAIL line per primary criterion. Exit status is
// the number of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hamvqe/continuation.hpp"
#include "hamvqe/csv.hpp"
#include "hamvqe/landscape.hpp"
#include "hamvqe/mgd.hpp"
#include "hamvqe/oracle.hpp"
#include "hamvqe/vqe.hpp"
#include "support.hpp"

using namespace hamvqe;
namespace fs = std::filesystem;

namespace {

using FamilyPtr = std::shared_ptr<const HamiltonianFamily>;

class Report {
  public:
    void line(const std::string &name, bool ok, const std::string &detail) {
        const auto now = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        std::cout << (ok ? "PASS " : "FAIL ") << name << "  " << detail << "  [" << format_double(std::round(secs * 10) / 10)
                  << " s]" << std::endl;
        failures_ += ok ? 0 : 1;
    }
    [[nodiscard]] int failures() const { return failures_; }

  private:
    int failures_ = 0;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << x;
    return s.str();
}

std::vector<double> draw_theta(std::size_t k, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    std::vector<double> t(k);
    for (auto &x : t) {
        x = u(rng);
    }
    return t;
}

std::vector<double> draw_lambda(const HamiltonianFamily &f, std::mt19937_64 &rng, double margin) {
    std::vector<double> l;
    for (const auto &a : f.axes()) {
        std::uniform_real_distribution<double> u(a.lower() + margin, a.upper() - margin);
        l.push_back(u(rng));
    }
    return l;
}

std::vector<double> as_vector(const Eigen::VectorXd &v) { return {v.data(), v.data() + v.size()}; }

struct Subject {
    const char *label;
    FamilyPtr family;
    Ansatz ansatz;
};

void gradient_exactness(Report &report, const std::vector<Subject> &subjects) {
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    std::string detail;
    for (const auto &s : subjects) {
        const Landscape ps(s.family, s.ansatz);
        GradientOptions cd_opts;
        cd_opts.method = GradientMethod::CentralDifference;
        cd_opts.difference_step = 1e-5;
        const Landscape cd(s.family, s.ansatz, cd_opts);
        double local = 0.0;
        for (int draw = 0; draw < 100; ++draw) {
            const auto theta = draw_theta(s.ansatz.parameter_count(), rng);
            const auto lambda = draw_lambda(*s.family, rng, 0.0);
            const Eigen::VectorXd a = ps.grad_theta(theta, lambda);
            const Eigen::VectorXd b = cd.grad_theta(theta, lambda);
            local = std::max(local, (a - b).norm() / a.norm());
        }
        worst = std::max(worst, local);
        detail += std::string(s.label) + " " + fmt(local) + "  ";
    }
    report.line("gradient-exactness", worst <= 1e-6, "max relative error: " + detail + "(bound 1e-6)");
}

void vqe_vs_oracle(Report &report, const FamilyPtr &h2, const FamilyPtr &lih) {
    const Landscape lh2(h2, h2_ansatz());
    double worst_h2 = 0.0;
    for (std::size_t n = 0; n < h2->node_count(); ++n) {
        const auto lambda = h2->node(n);
        const double exact = sector_spectrum(h2->hamiltonian_at(lambda), {2, 1})(0);
        worst_h2 = std::max(worst_h2, std::abs(minimize(lh2, lambda).energy - exact));
    }
    // The 3-qubit LiH operator does not conserve particle number; compare to the full ground state.
    const Landscape llih(lih, lih_ansatz());
    const auto ground = ground_energies(*lih);
    double worst_lih = 0.0;
    for (std::size_t n = 0; n < lih->node_count(); ++n) {
        worst_lih = std::max(worst_lih, std::abs(minimize(llih, lih->node(n)).energy - ground[n]));
    }
    report.line("vqe-vs-oracle", worst_h2 <= 1e-6 && worst_lih <= 1e-4,
                "H2 max |dE| " + fmt(worst_h2) + " (bound 1e-6), LiH max |dE| " + fmt(worst_lih) + " (bound 1e-4)");
}

bool lambda_phases_classical(const MgdTrace &t) {
    for (std::size_t i = 1; i < t.records.size(); ++i) {
        if (t.records[i].phase == MgdPhase::Lambda && t.records[i].quantum_evals != t.records[i - 1].quantum_evals) {
            return false;
        }
    }
    return true;
}

void mgd_equilibrium(Report &report, const FamilyPtr &h2, const FamilyPtr &lih, std::vector<MgdTrace> &traces) {
    const Landscape lh2(h2, h2_ansatz());
    const Landscape llih(lih, lih_ansatz());
    const double argmin_h2 = pes_argmin(*h2, true, 1).lambda[0];
    const double argmin_lih = pes_argmin(*lih, true).lambda[0];

    bool ok = true;
    std::string detail;
    for (double start : {0.5, 1.5, 2.5}) {
        MgdOptions opts;
        opts.lambda0 = {start};
        traces.push_back(mgd_optimize(lh2, opts));
        const MgdTrace &t = traces.back();
        const double l = t.final().lambda[0];
        const bool good = t.converged && t.outer_iterations <= 200 && std::abs(l - 0.744) <= 0.01 &&
                          std::abs(l - argmin_h2) <= 0.01;
        ok = ok && good;
        detail += "H2 from " + format_double(start) + ": " + format_double(std::round(l * 1e5) / 1e5) + " in " +
                  std::to_string(t.outer_iterations) + "; ";
    }
    MgdOptions opts;
    opts.lambda0 = {1.5};
    traces.push_back(mgd_optimize(llih, opts));
    const MgdTrace &t = traces.back();
    const double l = t.final().lambda[0];
    ok = ok && t.converged && std::abs(l - 1.520) <= 0.02 && std::abs(l - argmin_lih) <= 0.01;
    detail += "LiH from 1.5: " + format_double(std::round(l * 1e5) / 1e5) + " in " +
              std::to_string(t.outer_iterations) + "; oracle argmin H2 " +
              format_double(std::round(argmin_h2 * 1e5) / 1e5) + ", LiH " +
              format_double(std::round(argmin_lih * 1e5) / 1e5);
    report.line("mgd-equilibrium", ok, detail + " (targets 0.744 +- 0.01, 1.520 +- 0.02, oracle +- 0.01)");
}

void mgd_quantum_freeness(Report &report, const std::vector<MgdTrace> &traces) {
    std::size_t lambda_records = 0;
    bool ok = !traces.empty();
    for (const auto &t : traces) {
        ok = ok && lambda_phases_classical(t);
        lambda_records += static_cast<std::size_t>(std::count_if(
            t.records.begin(), t.records.end(), [](const MgdRecord &r) { return r.phase == MgdPhase::Lambda; }));
    }
    report.line("mgd-quantum-freeness", ok,
                std::to_string(traces.size()) + " runs, " + std::to_string(lambda_records) +
                    " lambda steps, counter constant within every lambda phase");
}

double analytic_path_error(double step) {
    const Landscape l(testing::rotating_family(), testing::y_rotation());
    ContinuationPlan plan;
    for (std::size_t i = 0;; ++i) {
        const double x = step * static_cast<double>(i);
        if (x > std::numbers::pi + 1e-12) {
            break;
        }
        plan.path.push_back({x});
    }
    plan.theta0 = {std::numbers::pi / 2};
    plan.corrector.max_steps = 0;
    const ContinuationResult r = continue_path(l, plan);
    double worst = 0.0;
    for (const auto &p : r.points) {
        worst = std::max(worst, std::abs(p.corrected(0) - (p.lambda[0] + std::numbers::pi) / 2));
    }
    return worst;
}

void continuation_analytic(Report &report) {
    const double coarse = analytic_path_error(0.01);
    const double fine = analytic_path_error(0.005);
    const double ratio = coarse / fine;
    report.line("continuation-analytic", coarse <= 1e-3 && ratio >= 1.6,
                "max error " + fmt(coarse) + " at step 0.01 (bound 1e-3), " + fmt(fine) + " at 0.005, ratio " +
                    format_double(std::round(ratio * 1000) / 1000) + " (bound 1.6)");
}

double path_vs_vqe(const FamilyPtr &f, const Ansatz &a) {
    const Landscape l(f, a);
    ContinuationPlan plan;
    plan.path = grid_path(*f, 0, f->node_count() - 1);
    plan.corrector.max_steps = 5;
    const ContinuationResult r = continue_path(l, plan);
    double worst = 0.0;
    for (const auto &p : r.points) {
        worst = std::max(worst, std::abs(p.energy - minimize(l, p.lambda).energy));
    }
    return worst;
}

void continuation_vs_vqe(Report &report, const FamilyPtr &h2, const FamilyPtr &lih) {
    const double e_h2 = path_vs_vqe(h2, h2_ansatz());
    const double e_lih = path_vs_vqe(lih, lih_ansatz());
    report.line("continuation-vs-vqe", e_h2 <= 1e-4 && e_lih <= 1e-4,
                "corrector 5 steps: H2 max |dE| " + fmt(e_h2) + " over " + std::to_string(h2->node_count()) +
                    " nodes, LiH " + fmt(e_lih) + " over " + std::to_string(lih->node_count()) + " nodes (bound 1e-4)");
}

void excited_states(Report &report, const FamilyPtr &h2q) {
    const SsvqeSpec spec = SsvqeSpec::with_default_weights({"1100", "1010", "1001", "0110", "0101", "0011"});
    const Landscape l(h2q, uccgsd_ansatz(4, 2, 1));
    ContinuationPlan plan;
    plan.path = grid_path(*h2q, 0, h2q->node_count() - 1);
    const ContinuationResult r = continue_ssvqe(l, plan, spec);

    double worst = 0.0;
    double worst_spread = 0.0;
    std::size_t bad_counts = 0;
    for (const auto &p : r.points) {
        auto e = as_vector(p.state_energies);
        std::sort(e.begin(), e.end());
        const Eigen::VectorXd exact = sector_spectrum(h2q->hamiltonian_at(p.lambda), {4, 2});
        for (std::size_t j = 0; j < e.size(); ++j) {
            worst = std::max(worst, std::abs(e[j] - exact(static_cast<Eigen::Index>(j))));
        }
        std::size_t distinct = 1;
        double spread = 0.0;
        for (std::size_t j = 1; j < e.size(); ++j) {
            if (e[j] - e[j - 1] > 1e-6) {
                ++distinct;
            } else {
                spread = std::max(spread, e[j] - e[j - 1]);
            }
        }
        worst_spread = std::max(worst_spread, spread);
        bad_counts += distinct == 4 ? 0 : 1;
    }
    report.line("ssvqe-excited-states", worst <= 1e-3 && bad_counts == 0,
                "max |dE| vs sector spectrum " + fmt(worst) + " (bound 1e-3), nodes without exactly 4 distinct values: " +
                    std::to_string(bad_counts) + " of " + std::to_string(r.points.size()) +
                    ", max gap within coincident curves " + fmt(worst_spread));
}

struct SelfConsistency {
    double asymmetry = 0.0;
    double hessian = 0.0;
    double mixed = 0.0;
    double lambda_gradient = 0.0;
};

void self_consistency_on(const Subject &s, std::mt19937_64 &rng, int draws, SelfConsistency &out) {
    const Landscape l(s.family, s.ansatz);
    const std::size_t k = s.ansatz.parameter_count();
    const double h = 1e-3;
    const double hl = 1e-5;
    for (int d = 0; d < draws; ++d) {
        const auto theta = draw_theta(k, rng);
        const auto lambda = draw_lambda(*s.family, rng, 0.01);
        const Eigen::MatrixXd raw = l.hessian_theta(theta, lambda, false);
        out.asymmetry = std::max(out.asymmetry, (raw - raw.transpose()).cwiseAbs().rowwise().sum().maxCoeff());
        const Eigen::MatrixXd A = l.hessian_theta(theta, lambda);

        auto E = [&](std::vector<double> t, std::vector<double> lam) { return l.energy(t, lam); };
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i; j < k; ++j) {
                auto shifted = [&](double di, double dj) {
                    auto t = theta;
                    t[i] += di;
                    t[j] += dj;
                    return E(t, lambda);
                };
                const double fd = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) / (4 * h * h);
                out.hessian = std::max(out.hessian, std::abs(fd - A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
            }
        }
        const Eigen::VectorXd gl = l.grad_lambda(theta, lambda);
        for (std::size_t a = 0; a < s.family->dims(); ++a) {
            const Eigen::VectorXd b = l.mixed_theta_lambda(theta, lambda, a);
            for (std::size_t i = 0; i < k; ++i) {
                auto shifted = [&](double dt, double dl) {
                    auto t = theta;
                    auto lam = lambda;
                    t[i] += dt;
                    lam[a] += dl;
                    return E(t, lam);
                };
                const double fd = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) / (4 * h * h);
                out.mixed = std::max(out.mixed, std::abs(fd - b(static_cast<Eigen::Index>(i))));
            }
            auto up = lambda;
            auto down = lambda;
            up[a] += hl;
            down[a] -= hl;
            const double fd = (E(theta, up) - E(theta, down)) / (2 * hl);
            out.lambda_gradient = std::max(out.lambda_gradient, std::abs(fd - gl(static_cast<Eigen::Index>(a))));
        }
    }
}

void derivative_self_consistency(Report &report, const std::vector<Subject> &subjects) {
    std::mt19937_64 rng(2002);
    SelfConsistency s;
    for (const auto &subject : subjects) {
        self_consistency_on(subject, rng, 20, s);
    }
    report.line("derivative-self-consistency",
                s.asymmetry <= 1e-6 && s.hessian <= 5e-5 && s.mixed <= 5e-5 && s.lambda_gradient <= 1e-6,
                "||A - A^T||_inf " + fmt(s.asymmetry) + " (1e-6), A vs second differences " + fmt(s.hessian) +
                    " (5e-5), b " + fmt(s.mixed) + " (5e-5), grad_lambda vs difference " + fmt(s.lambda_gradient) +
                    " (1e-6)");
}

void h4_structure(Report &report, const FamilyPtr &h4, std::vector<MgdTrace> &traces) {
    const Landscape l(h4, uccsd_ansatz(6, 2, 1));
    MgdOptions opts;
    opts.lambda0 = {1.2, 2.5};
    opts.step_lambda = 0.2;
    traces.push_back(mgd_optimize(l, opts));
    const MgdTrace &t = traces.back();
    const auto &lam = t.final().lambda;
    std::vector<std::size_t> node(2);
    for (std::size_t a = 0; a < 2; ++a) {
        const auto &g = h4->axes()[a].grid;
        const auto it = std::min_element(g.begin(), g.end(),
                                         [&](double x, double y) { return std::abs(x - lam[a]) < std::abs(y - lam[a]); });
        node[a] = static_cast<std::size_t>(it - g.begin());
    }
    const auto ground = ground_energies(*h4, 2);
    const bool local = is_local_minimum(*h4, ground, node);
    const double gl = t.final().grad_lambda_norm;
    report.line("h4-structure", t.converged && gl <= 1e-4 && local,
                "lambda* (" + format_double(std::round(lam[0] * 1e5) / 1e5) + ", " +
                    format_double(std::round(lam[1] * 1e5) / 1e5) + ") in " + std::to_string(t.outer_iterations) +
                    " outer iterations, ||grad_lambda|| " + fmt(gl) + " (1e-4), nearest node (" +
                    std::to_string(node[0]) + ", " + std::to_string(node[1]) + ") " +
                    (local ? "is" : "is not") + " a local minimum of the exact PES");
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void determinism(Report &report) {
    const fs::path dir = fs::temp_directory_path() / "hamvqe_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cli = HAMVQE_CLI_PATH;
    const std::string family = testing::fixture("h2_sto3g.json").string();
    const std::vector<std::string> runs{
        "vqe --family " + family + " --ansatz h2 --random-init --seed 42",
        "mgd --family " + family + " --ansatz h2 --lambda0 2.5 --random-init --seed 42",
        "pes --family " + family + " --ansatz h2 --corrector-steps 5 --random-init --seed 42",
    };
    bool ok = true;
    std::size_t compared = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::string first;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = dir / ("run" + std::to_string(i) + "_" + std::to_string(rep) + ".csv");
            const std::string cmd = "\"" + cli + "\" " + runs[i] + " -o \"" + out.string() + "\" > /dev/null";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                continue;
            }
            const std::string bytes = slurp(out);
            if (rep == 0) {
                first = bytes;
            } else {
                ok = ok && !bytes.empty() && bytes == first;
                ++compared;
            }
        }
    }
    fs::remove_all(dir);
    report.line("cli-determinism", ok && compared == runs.size(),
                std::to_string(compared) + " of " + std::to_string(runs.size()) +
                    " seeded CLI runs repeated byte-identically (vqe, mgd, pes)");
}

} // namespace

int main() {
    const FamilyPtr h2 = testing::load_fixture("h2_sto3g.json");
    const FamilyPtr lih = testing::load_fixture("lih_sto6g.json");
    const FamilyPtr h4 = testing::load_fixture("h4.json");
    const FamilyPtr h2q = testing::load_fixture("h2_sto3g_4q.json");
    const std::vector<Subject> subjects{{"h2", h2, h2_ansatz()}, {"lih", lih, lih_ansatz()},
                                        {"uccsd(6,2,1)", h4, uccsd_ansatz(6, 2, 1)}};

    Report report;
    std::vector<MgdTrace> traces;
    gradient_exactness(report, subjects);
    vqe_vs_oracle(report, h2, lih);
    mgd_equilibrium(report, h2, lih, traces);
    h4_structure(report, h4, traces);
    mgd_quantum_freeness(report, traces);
    continuation_analytic(report);
    continuation_vs_vqe(report, h2, lih);
    excited_states(report, h2q);
    derivative_self_consistency(report, subjects);
    determinism(report);
    std::cout << (report.failures() == 0 ? "all criteria passed" : std::to_string(report.failures()) + " criterion(s) failed")
              << std::endl;
    return report.failures();
}
