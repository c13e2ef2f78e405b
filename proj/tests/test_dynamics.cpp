#include "doctest.h"

#include <cmath>
#include <random>

#include "fockbit/dynamics.hpp"
#include "fockbit/errors.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using fockbit::ComplexMatrix;
using fockbit::cplx;
using fockbit::Direction;
using fockbit::JointState;
using fockbit::StepSpec;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double unitarity_defect(const ComplexMatrix& u) {
    return fockbit::max_abs_diff(fockbit::mul(fockbit::adjoint(u), u),
                                 ComplexMatrix::identity(u.rows));
}

} // namespace

TEST_CASE("protocol steps pin the coupling range and angle") {
    const StepSpec s1 = StepSpec::protocol_step(1);
    CHECK(s1.p == 1);
    CHECK(s1.theta == doctest::Approx(kPi / 2.0));
    const StepSpec s3 = StepSpec::protocol_step(3);
    CHECK(s3.p == 4);
    CHECK(s3.theta == doctest::Approx(kPi / 8.0));
    CHECK_THROWS_AS(StepSpec::protocol_step(0), fockbit::ValidationError);
}

TEST_CASE("protocol rotations are exact at the quarter turns") {
    const StepSpec s = StepSpec::protocol_step(2); // theta = pi/4, quarter = 2 levels
    double c = -2.0, sn = -2.0;
    s.rotation(0, c, sn);
    CHECK(c == 1.0);
    CHECK(sn == 0.0);
    s.rotation(2, c, sn);
    CHECK(c == 0.0);
    CHECK(sn == 1.0);
    s.rotation(4, c, sn);
    CHECK(c == -1.0);
    CHECK(sn == 0.0);
    s.rotation(6, c, sn);
    CHECK(c == 0.0);
    CHECK(sn == -1.0);
    s.rotation(8, c, sn); // full period of 2^(k+1) levels
    CHECK(c == 1.0);
    CHECK(sn == 0.0);
    s.rotation(1, c, sn); // off the grid: ordinary trig
    CHECK(c == doctest::Approx(std::cos(kPi / 4.0)));
    CHECK(sn == doctest::Approx(std::sin(kPi / 4.0)));
}

TEST_CASE("single-ket step actions match the worked examples") {
    const std::size_t D = 8;
    SUBCASE("step 1 swaps |1,-> down to -i |0,+>") {
        const ComplexMatrix u = fockbit::step_unitary(StepSpec::protocol_step(1), D,
                                                      Direction::forward);
        CHECK(std::abs(u.at(2 * 0 + 1, 2 * 1 + 0) - cplx(0.0, -1.0)) < 1e-15);
        CHECK(std::abs(u.at(2 * 1 + 0, 2 * 1 + 0)) < 1e-15);
    }
    SUBCASE("step 1 leaves |2,-> with a sign flip") {
        const ComplexMatrix u = fockbit::step_unitary(StepSpec::protocol_step(1), D,
                                                      Direction::forward);
        CHECK(std::abs(u.at(2 * 2 + 0, 2 * 2 + 0) - cplx(-1.0, 0.0)) < 1e-15);
    }
    SUBCASE("step 2 swaps |2,-> down to -i |0,+>") {
        const ComplexMatrix u = fockbit::step_unitary(StepSpec::protocol_step(2), D,
                                                      Direction::forward);
        CHECK(std::abs(u.at(2 * 0 + 1, 2 * 2 + 0) - cplx(0.0, -1.0)) < 1e-15);
    }
    SUBCASE("levels below the coupling range are stationary") {
        const ComplexMatrix u = fockbit::step_unitary(StepSpec::protocol_step(2), D,
                                                      Direction::forward);
        CHECK(std::abs(u.at(2 * 1 + 0, 2 * 1 + 0) - cplx(1.0, 0.0)) < 1e-15);
    }
    SUBCASE("the truncation guard freezes partnerless excited kets") {
        const ComplexMatrix u = fockbit::step_unitary(StepSpec::protocol_step(1), 4,
                                                      Direction::forward);
        CHECK(std::abs(u.at(2 * 3 + 1, 2 * 3 + 1) - cplx(1.0, 0.0)) < 1e-15);
    }
    SUBCASE("reverse moves |0,+> back up with a +i phase") {
        const ComplexMatrix u = fockbit::step_unitary(StepSpec::protocol_step(2), D,
                                                      Direction::reverse);
        CHECK(std::abs(u.at(2 * 2 + 0, 2 * 0 + 1) - cplx(0.0, 1.0)) < 1e-15);
    }
}

TEST_CASE("step unitaries are unitary for protocol and arbitrary angles") {
    for (int k : {1, 2, 3}) {
        for (double theta : {0.0, 0.3, kPi / 2.0, 1.7, kPi}) {
            CAPTURE(k);
            CAPTURE(theta);
            const StepSpec s = StepSpec::with_angle(k, theta);
            CHECK(unitarity_defect(fockbit::step_unitary(s, 16, Direction::forward)) < 1e-12);
        }
        const StepSpec p = StepSpec::protocol_step(k);
        CHECK(unitarity_defect(fockbit::step_unitary(p, 16, Direction::forward)) < 1e-12);
    }
}

TEST_CASE("theta = 0 is the identity and reverse undoes forward") {
    const StepSpec zero = StepSpec::with_angle(2, 0.0);
    CHECK(fockbit::max_abs_diff(fockbit::step_unitary(zero, 8, Direction::forward),
                                ComplexMatrix::identity(16)) < 1e-15);

    for (int k : {1, 2, 3}) {
        const StepSpec s = StepSpec::protocol_step(k);
        const ComplexMatrix fwd = fockbit::step_unitary(s, 16, Direction::forward);
        const ComplexMatrix rev = fockbit::step_unitary(s, 16, Direction::reverse);
        CHECK(fockbit::max_abs_diff(fockbit::mul(rev, fwd), ComplexMatrix::identity(32)) <
              1e-12);
    }
}

TEST_CASE("step unitaries match the spectral matrix-exponential oracle") {
    const std::size_t D = 24;
    for (int k : {1, 2, 3}) {
        const StepSpec proto = StepSpec::protocol_step(k);
        for (double theta : {proto.theta, 0.37, 1.0}) {
            for (Direction dir : {Direction::forward, Direction::reverse}) {
                CAPTURE(k);
                CAPTURE(theta);
                const StepSpec s = (theta == proto.theta)
                                       ? proto
                                       : StepSpec::with_angle(k, theta);
                const ComplexMatrix u = fockbit::step_unitary(s, D, dir);
                const ComplexMatrix ref = oracles::step_unitary_oracle(k, theta, D, dir);
                CHECK(fockbit::max_abs_diff(u, ref) < 1e-9);
            }
        }
    }
}

TEST_CASE("apply_step agrees with explicit matrix application") {
    std::mt19937_64 rng(0x5EED10);
    const std::size_t D = 8;
    const StepSpec s = StepSpec::protocol_step(1);
    const ComplexMatrix u = fockbit::step_unitary(s, D, Direction::forward);

    SUBCASE("pure joint vectors") {
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<cplx> psi(2 * D);
        for (cplx& a : psi) a = cplx(dist(rng), dist(rng));
        // K=1 joint layout (f*2 + b) coincides with the step_unitary layout.
        JointState st = JointState::pure(D, 1, psi);
        fockbit::apply_step(st, s, Direction::forward, 1);
        for (std::size_t i = 0; i < 2 * D; ++i) {
            cplx expect(0.0, 0.0);
            for (std::size_t j = 0; j < 2 * D; ++j) expect += u.at(i, j) * psi[j];
            CHECK(std::abs(st.vec[i] - expect) < 1e-13);
        }
    }
    SUBCASE("density matrices") {
        const ComplexMatrix rho = testutil::random_density(rng, 2 * D, 2 * D).matrix;
        JointState st = JointState::density(D, 1, rho);
        fockbit::apply_step(st, s, Direction::forward, 1);
        const ComplexMatrix expect =
            fockbit::mul(fockbit::mul(u, rho), fockbit::adjoint(u));
        CHECK(fockbit::max_abs_diff(st.mat, expect) < 1e-12);
    }
    SUBCASE("reverse application undoes the forward one in place") {
        const ComplexMatrix rho = testutil::random_density(rng, 2 * D, 2 * D).matrix;
        JointState st = JointState::density(D, 1, rho);
        fockbit::apply_step(st, s, Direction::forward, 1);
        fockbit::apply_step(st, s, Direction::reverse, 1);
        CHECK(fockbit::max_abs_diff(st.mat, rho) < 1e-13);
    }
}

TEST_CASE("multi-qubit stepping extracts binary digits with the expected phases") {
    // Walk |5> through the three protocol steps in a K=3 register: 5 = 101 in binary, and
    // the surviving amplitude picks up (-i) * (-1) * (-i) = +1.
    const std::size_t D = 8;
    const int K = 3;
    std::vector<cplx> psi(D << K, cplx(0.0, 0.0));
    psi[5u << K] = cplx(1.0, 0.0);
    JointState st = JointState::pure(D, K, psi);
    for (int k = 1; k <= K; ++k)
        fockbit::apply_step(st, StepSpec::protocol_step(k), Direction::forward, k);
    const std::size_t target = (0u << K) | 5u; // field drained, register reads 101
    for (std::size_t i = 0; i < st.vec.size(); ++i) {
        if (i == target)
            CHECK(std::abs(st.vec[i] - cplx(1.0, 0.0)) < 1e-15);
        else
            CHECK(std::abs(st.vec[i]) < 1e-15);
    }

    // Reverse steps K..1 restore the original ket exactly.
    for (int k = K; k >= 1; --k)
        fockbit::apply_step(st, StepSpec::protocol_step(k), Direction::reverse, k);
    CHECK(std::abs(st.vec[5u << K] - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("guard_block_mass sees exactly the frozen corner") {
    const std::size_t D = 8;
    const StepSpec s = StepSpec::protocol_step(3); // p = 4: guard rows are f >= 4
    std::vector<cplx> psi(D * 2, cplx(0.0, 0.0));
    JointState st = JointState::pure(D, 1, psi);
    CHECK(fockbit::guard_block_mass(st, s, 1) == 0.0);
    st.vec[5 * 2 + 1] = cplx(0.6, 0.0); // |5,+>: 5 + 4 >= 8, frozen
    st.vec[3 * 2 + 1] = cplx(0.8, 0.0); // |3,+>: partner |7,-> exists, not frozen
    CHECK(fockbit::guard_block_mass(st, s, 1) == doctest::Approx(0.36).epsilon(1e-14));
}
