#include <doctest.h>

#include <numbers>

#include "hamvqe/error.hpp"
#include "hamvqe/simulator.hpp"
#include "hamvqe/ucc.hpp"
#include "support.hpp"

using namespace hamvqe;
using cd = std::complex<double>;

TEST_SUITE("simulator") {

TEST_CASE("reference states follow the leftmost-qubit convention") {
    const StateVector a = prepare_reference("01");
    CHECK(a.dimension() == 4);
    CHECK(a[1] == cd(1.0));
    const StateVector b = prepare_reference("001");
    CHECK(b.dimension() == 8);
    CHECK(b[1] == cd(1.0));
    const StateVector c = prepare_reference("1100");
    CHECK(c.dimension() == 16);
    CHECK(c[12] == cd(1.0));
    CHECK_THROWS_AS((void)prepare_reference("01a"), ParseError);
    CHECK_THROWS_AS((void)prepare_reference(""), ParseError);
}

TEST_CASE("exp-Pauli at zero angle is the identity") {
    std::mt19937_64 rng(10);
    const StateVector s = testing::random_state(3, rng);
    const StateVector t = apply_exp_pauli(s, parse_pauli("XYZ", 3), 0.0);
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        CHECK(t[i] == s[i]);
    }
}

TEST_CASE("exp(-i theta XY)|01> = cos|01> - sin|10>") {
    for (double theta : {0.3, 1.1, -2.0}) {
        const StateVector s = apply_exp_pauli(prepare_reference("01"), parse_pauli("XY", 2), theta);
        CHECK(std::abs(s[1] - cd(std::cos(theta))) < 1e-15);
        CHECK(std::abs(s[2] - cd(-std::sin(theta))) < 1e-15);
    }
}

TEST_CASE("angle pi is a global sign") {
    std::mt19937_64 rng(11);
    const StateVector s = testing::random_state(2, rng);
    const StateVector t = apply_exp_pauli(s, parse_pauli("YX", 2), std::numbers::pi);
    for (std::size_t i = 0; i < s.dimension(); ++i) {
        CHECK(std::abs(t[i] + s[i]) < 1e-15);
    }
    const PauliSum h(2, {{0.4, parse_pauli("ZZ", 2)}, {0.3, parse_pauli("XY", 2)}});
    CHECK(std::abs(expectation(s, h) - expectation(t, h)) < 1e-14);
}

TEST_CASE("exp-Pauli matches the dense matrix exponential") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 15; ++trial) {
            const PauliString p = testing::random_string(n, rng);
            const double angle = u(rng);
            const StateVector s = testing::random_state(n, rng);
            const Eigen::VectorXcd expected = testing::unitary_exp(dense_matrix(p), angle) * s.to_eigen();
            const Eigen::VectorXcd got = apply_exp_pauli(s, p, angle).to_eigen();
            CHECK((expected - got).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("norm drift stays below 1e-9 over 10^4 gates") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    StateVector s = testing::random_state(4, rng);
    for (int k = 0; k < 10000; ++k) {
        apply_exp_pauli_inplace(s, testing::random_string(4, rng), u(rng));
    }
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-9);
}

TEST_CASE("generator order matters for non-commuting factors") {
    const Generator a({{1.0, parse_pauli("XI", 2)}});
    const Generator b({{1.0, parse_pauli("ZY", 2)}});
    const std::vector<double> theta{0.7, 0.4};
    const StateVector ab = apply_ansatz(Ansatz("00", {a, b}), theta);
    const StateVector ba = apply_ansatz(Ansatz("00", {b, a}), std::vector<double>{0.4, 0.7});
    double diff = 0.0;
    for (std::size_t i = 0; i < ab.dimension(); ++i) {
        diff = std::max(diff, std::abs(ab[i] - ba[i]));
    }
    CHECK(diff > 0.1);

    // Declared order: a first, then b.
    StateVector manual = prepare_reference("00");
    apply_exp_pauli_inplace(manual, parse_pauli("XI", 2), 0.7);
    apply_exp_pauli_inplace(manual, parse_pauli("ZY", 2), 0.4);
    for (std::size_t i = 0; i < ab.dimension(); ++i) {
        CHECK(std::abs(ab[i] - manual[i]) < 1e-15);
    }
}

TEST_CASE("H2 ansatz states") {
    const Ansatz a = h2_ansatz();
    const StateVector ref = apply_ansatz(a, std::vector<double>{0.0});
    CHECK(ref[1] == cd(1.0));
    const StateVector flipped = apply_ansatz(a, std::vector<double>{std::numbers::pi / 2});
    CHECK(std::abs(flipped[2] - cd(-1.0)) < 1e-15);
    const PauliSum z0(2, {{1.0, parse_pauli("ZI", 2)}});
    CHECK(expectation(ref, z0) == doctest::Approx(1.0));
    CHECK(expectation(flipped, z0) == doctest::Approx(-1.0));
}

TEST_CASE("LiH ansatz applies theta1 then theta2") {
    const Ansatz a = lih_ansatz();
    const double t1 = 0.3, t2 = -0.8;
    StateVector manual = prepare_reference("001");
    apply_exp_pauli_inplace(manual, parse_pauli("XYI", 3), t1);
    apply_exp_pauli_inplace(manual, parse_pauli("XIY", 3), t2);
    const StateVector got = apply_ansatz(a, std::vector<double>{t1, t2});
    for (std::size_t i = 0; i < got.dimension(); ++i) {
        CHECK(std::abs(got[i] - manual[i]) < 1e-15);
    }
}

TEST_CASE("parameter count is enforced") {
    CHECK_THROWS_AS((void)apply_ansatz(h2_ansatz(), std::vector<double>{0.1, 0.2}), DimensionError);
}

}
