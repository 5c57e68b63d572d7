#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "hamvqe/error.hpp"
#include "hamvqe/oracle.hpp"
#include "hamvqe/simulator.hpp"
#include "hamvqe/vqe.hpp"
#include "support.hpp"

using namespace hamvqe;

namespace {

const std::vector<std::string> kSixReferences{"1100", "1010", "1001", "0110", "0101", "0011"};

std::vector<double> as_vector(const Eigen::VectorXd &v) { return {v.data(), v.data() + v.size()}; }

} // namespace

TEST_SUITE("vqe") {

TEST_CASE("single-qubit minimum") {
    const Landscape l(testing::rotating_family(), testing::y_rotation());
    VqeOptions opts;
    opts.theta0 = {1.0};
    const std::vector<double> lambda{0.0};
    const VqeResult r = minimize(l, lambda, opts);
    CHECK(r.converged);
    CHECK(r.energy == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(std::remainder(r.theta(0) - std::numbers::pi / 2, std::numbers::pi)) <= 1e-6);
    CHECK(r.gradient_norm <= opts.tolerance);
}

TEST_CASE("an optimal start returns immediately") {
    const Landscape l(testing::rotating_family(), testing::y_rotation());
    VqeOptions opts;
    opts.theta0 = {std::numbers::pi / 2};
    const VqeResult r = minimize(l, std::vector<double>{0.0}, opts);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.theta(0) == std::numbers::pi / 2);
}

TEST_CASE("energies never increase along accepted steps") {
    const auto f = testing::load_fixture("lih_sto6g.json");
    const Landscape l(f, lih_ansatz());
    VqeOptions opts;
    opts.theta0 = random_theta(2, 3);
    opts.step = 0.5;
    const VqeResult r = minimize(l, std::vector<double>{1.6}, opts);
    REQUIRE(r.history.size() >= 2);
    for (std::size_t k = 1; k < r.history.size(); ++k) {
        CHECK(r.history[k].energy <= r.history[k - 1].energy + 1e-13 * std::max(1.0, std::abs(r.history[k - 1].energy)));
    }
}

TEST_CASE("iteration cap reports non-convergence") {
    const auto f = testing::load_fixture("h2_sto3g.json");
    const Landscape l(f, h2_ansatz());
    VqeOptions opts;
    opts.max_iterations = 2;
    opts.step = 1e-3;
    const VqeResult r = minimize(l, std::vector<double>{0.7}, opts);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
}

TEST_CASE("H2 nodes reach the sector ground energy") {
    const auto f = testing::load_fixture("h2_sto3g.json");
    const Landscape l(f, h2_ansatz());
    for (std::size_t i = 0; i < f->node_count(); i += 7) {
        const auto lambda = f->node(i);
        const VqeResult r = minimize(l, lambda);
        const double exact = sector_spectrum(f->hamiltonian_at(lambda), {2, 1})(0);
        CHECK(std::abs(r.energy - exact) <= 1e-6);
    }
}

TEST_CASE("seeded random initial parameters") {
    const auto a = random_theta(5, 11);
    CHECK(a == random_theta(5, 11));
    CHECK(a != random_theta(5, 12));
    for (double x : a) {
        CHECK(x >= -std::numbers::pi);
        CHECK(x < std::numbers::pi);
    }
}

TEST_CASE("SSVQE default weights") {
    const SsvqeSpec s = SsvqeSpec::with_default_weights({"01", "10"});
    REQUIRE(s.weights.size() == 2);
    CHECK(s.weights[0] == doctest::Approx(2.0 / 3.0));
    CHECK(s.weights[1] == doctest::Approx(1.0 / 3.0));
    CHECK_NOTHROW(s.validate(2));
}

TEST_CASE("SSVQE validation") {
    CHECK_THROWS_AS((SsvqeSpec{{"01", "01"}, {0.6, 0.3}}.validate(2)), DimensionError);
    CHECK_THROWS_AS((SsvqeSpec{{"01", "10"}, {0.3, 0.6}}.validate(2)), DimensionError);
    CHECK_THROWS_AS((SsvqeSpec{{"01", "10"}, {0.6}}.validate(2)), DimensionError);
    CHECK_THROWS_AS((SsvqeSpec{{"01", "10"}, {1.5, 0.6}}.validate(2)), DimensionError);
    CHECK_THROWS_AS((SsvqeSpec{{"01", "10"}, {0.6, 0.0}}.validate(2)), DimensionError);
    CHECK_THROWS((SsvqeSpec{{"011"}, {1.0}}.validate(2)));
}

TEST_CASE("a single unit-weight reference is the plain energy") {
    std::mt19937_64 rng(60);
    const auto f = testing::load_fixture("h2_sto3g_4q.json");
    const Ansatz a = uccsd_ansatz(4, 2, 1);
    const Landscape l(f, a);
    const SsvqeSpec spec{{"1100"}, {1.0}};
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> theta(a.parameter_count());
        std::uniform_real_distribution<double> u(-2, 2);
        for (auto &t : theta) {
            t = u(rng);
        }
        const std::vector<double> lambda = f->node(static_cast<std::size_t>(trial) * 9);
        const SsvqeCost c = ssvqe_cost(l, theta, lambda, spec);
        CHECK(c.total == doctest::Approx(l.energy(theta, lambda)).epsilon(1e-14));
        CHECK(c.energies.size() == 1);
    }
}

TEST_CASE("six-reference SSVQE orders the sector spectrum") {
    const auto f = testing::load_fixture("h2_sto3g_4q.json");
    const Ansatz a = uccgsd_ansatz(4, 2, 1);
    const Landscape l(f, a);
    const SsvqeSpec spec = SsvqeSpec::with_default_weights(kSixReferences);
    const std::vector<double> lambda = f->node(10);
    VqeOptions opts;
    opts.tolerance = 1e-6;
    const VqeResult r = ssvqe_minimize(l, lambda, spec, opts);
    REQUIRE(r.state_energies.size() == 6);
    const Eigen::VectorXd exact = sector_spectrum(f->hamiltonian_at(lambda), {4, 2});

    std::vector<double> found = as_vector(r.state_energies);
    std::sort(found.begin(), found.end());
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(std::abs(found[j] - exact(static_cast<Eigen::Index>(j))) <= 1e-3);
    }
    // weighted cost is bounded below by the weighted sum of sorted eigenvalues
    double bound = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
        bound += spec.weights[j] * exact(static_cast<Eigen::Index>(j));
    }
    CHECK(r.energy >= bound - 1e-10);
    // 1010 and 0101 are triplet eigenstates the ansatz cannot leave, so the
    // reachable optimum is G, T, T, S, T, D in reference order.
    const std::vector<Eigen::Index> reachable{0, 1, 2, 4, 3, 5};
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(std::abs(r.state_energies(static_cast<Eigen::Index>(j)) - exact(reachable[j])) <= 1e-3);
    }
}

TEST_CASE("states keep their particle number") {
    std::mt19937_64 rng(61);
    const Ansatz a = uccgsd_ansatz(4, 2, 1);
    const Eigen::MatrixXcd N = testing::number_operator(4);
    for (const auto &ref : kSixReferences) {
        std::vector<double> theta(a.parameter_count());
        std::uniform_real_distribution<double> u(-3, 3);
        for (auto &t : theta) {
            t = u(rng);
        }
        const Eigen::VectorXcd psi = apply_ansatz(a, theta, ref).to_eigen();
        CHECK(std::abs((psi.adjoint() * N * psi)(0).real() - 2.0) <= 1e-10);
    }
}

}
