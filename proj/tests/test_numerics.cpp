#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "fockbit/errors.hpp"
#include "fockbit/numerics.hpp"
#include "test_util.hpp"

using fockbit::ComplexMatrix;
using fockbit::cplx;
using fockbit::HermitianEigenResult;

namespace {

double reconstruction_error(const ComplexMatrix& a, const HermitianEigenResult& eig) {
    // || A - V diag(lambda) V^dag ||_max
    const std::size_t n = a.rows;
    ComplexMatrix scaled = eig.eigenvectors;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) scaled.at(i, j) *= eig.eigenvalues[j];
    const ComplexMatrix back = fockbit::mul_adjB(scaled, eig.eigenvectors);
    return fockbit::max_abs_diff(a, back);
}

double orthonormality_error(const ComplexMatrix& v) {
    const ComplexMatrix g = fockbit::mul(fockbit::adjoint(v), v);
    return fockbit::max_abs_diff(g, ComplexMatrix::identity(v.rows));
}

} // namespace

TEST_CASE("eigh handles small matrices with known spectra") {
    SUBCASE("identity") {
        const HermitianEigenResult eig = fockbit::eigh(ComplexMatrix::identity(4));
        for (double lam : eig.eigenvalues) CHECK(lam == doctest::Approx(1.0));
        CHECK(orthonormality_error(eig.eigenvectors) < 1e-12);
    }
    SUBCASE("diagonal entries come back sorted ascending") {
        ComplexMatrix d(2, 2);
        d.at(0, 0) = cplx(0.75, 0.0);
        d.at(1, 1) = cplx(0.25, 0.0);
        const HermitianEigenResult eig = fockbit::eigh(d);
        CHECK(eig.eigenvalues[0] == doctest::Approx(0.25));
        CHECK(eig.eigenvalues[1] == doctest::Approx(0.75));
        CHECK(std::abs(eig.eigenvectors.at(1, 0)) == doctest::Approx(1.0));
        CHECK(std::abs(eig.eigenvectors.at(0, 1)) == doctest::Approx(1.0));
    }
    SUBCASE("sigma_x splits into -1 and +1") {
        ComplexMatrix sx(2, 2);
        sx.at(0, 1) = cplx(1.0, 0.0);
        sx.at(1, 0) = cplx(1.0, 0.0);
        const HermitianEigenResult eig = fockbit::eigh(sx);
        CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0));
        CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));
        CHECK(reconstruction_error(sx, eig) < 1e-12);
    }
    SUBCASE("non-Hermitian input is rejected") {
        ComplexMatrix bad(2, 2);
        bad.at(0, 1) = cplx(1.0, 0.0);
        CHECK_THROWS_AS(fockbit::eigh(bad), fockbit::ValidationError);
    }
}

TEST_CASE("eigh reconstructs random Hermitian matrices") {
    std::mt19937_64 rng(0x5EED02);
    const std::size_t sizes[] = {1, 2, 3, 5, 8, 13, 21, 34, 64};
    for (std::size_t n : sizes) {
        for (int rep = 0; rep < 12; ++rep) {
            CAPTURE(n);
            CAPTURE(rep);
            const ComplexMatrix a = testutil::random_hermitian(rng, n);
            const HermitianEigenResult eig = fockbit::eigh(a);
            CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
            const double scale = std::max(1.0, fockbit::frobenius_norm(a));
            CHECK(reconstruction_error(a, eig) < 1e-10 * scale);
            CHECK(orthonormality_error(eig.eigenvectors) < 1e-12 * static_cast<double>(n));
        }
    }
}

TEST_CASE("sqrt_psd squares back to the input") {
    SUBCASE("diagonal") {
        ComplexMatrix d(2, 2);
        d.at(0, 0) = cplx(4.0, 0.0);
        d.at(1, 1) = cplx(9.0, 0.0);
        const ComplexMatrix r = fockbit::sqrt_psd(d);
        CHECK(r.at(0, 0).real() == doctest::Approx(2.0));
        CHECK(r.at(1, 1).real() == doctest::Approx(3.0));
        CHECK(std::abs(r.at(0, 1)) < 1e-14);
    }
    SUBCASE("random PSD") {
        std::mt19937_64 rng(0x5EED03);
        for (std::size_t n : {2u, 5u, 16u, 32u}) {
            const ComplexMatrix g = testutil::random_matrix(rng, n, n);
            const ComplexMatrix p = fockbit::mul(g, fockbit::adjoint(g));
            const ComplexMatrix r = fockbit::sqrt_psd(p);
            CHECK(fockbit::hermiticity_defect(r) < 1e-10);
            CHECK(fockbit::max_abs_diff(fockbit::mul(r, r), p) <
                  1e-9 * std::max(1.0, fockbit::frobenius_norm(p)));
        }
    }
}

TEST_CASE("tensor products use the right-factor-least-significant layout") {
    ComplexMatrix sx(2, 2);
    sx.at(0, 1) = cplx(1.0, 0.0);
    sx.at(1, 0) = cplx(1.0, 0.0);
    const ComplexMatrix t = fockbit::tensor(sx, ComplexMatrix::identity(2));
    // (sx (x) I)[i*2+a][j*2+b] = sx[i][j] * I[a][b]
    CHECK(t.rows == 4);
    CHECK(t.at(0, 2) == cplx(1.0, 0.0));
    CHECK(t.at(1, 3) == cplx(1.0, 0.0));
    CHECK(t.at(2, 0) == cplx(1.0, 0.0));
    CHECK(t.at(0, 3) == cplx(0.0, 0.0));

    std::mt19937_64 rng(0x5EED04);
    const ComplexMatrix a = testutil::random_matrix(rng, 2, 2);
    const ComplexMatrix b = testutil::random_matrix(rng, 3, 3);
    const ComplexMatrix c = testutil::random_matrix(rng, 2, 2);
    const ComplexMatrix left = fockbit::tensor(fockbit::tensor(a, b), c);
    const ComplexMatrix right = fockbit::tensor(a, fockbit::tensor(b, c));
    CHECK(fockbit::max_abs_diff(left, right) < 1e-13);
}

TEST_CASE("partial_trace reduces composite states correctly") {
    SUBCASE("Bell state reduces to the maximally mixed qubit") {
        ComplexMatrix bell(4, 4);
        const std::size_t idx[2] = {0, 3}; // |00> and |11>
        for (std::size_t i : idx)
            for (std::size_t j : idx) bell.at(i, j) = cplx(0.5, 0.0);
        for (std::size_t keep : {0u, 1u}) {
            const ComplexMatrix red = fockbit::partial_trace(bell, {2, 2}, {keep});
            CHECK(red.at(0, 0).real() == doctest::Approx(0.5));
            CHECK(red.at(1, 1).real() == doctest::Approx(0.5));
            CHECK(std::abs(red.at(0, 1)) < 1e-15);
        }
    }
    SUBCASE("product states reduce to their factors") {
        std::mt19937_64 rng(0x5EED05);
        const ComplexMatrix a = testutil::random_density(rng, 3, 3).matrix;
        const ComplexMatrix b = testutil::random_density(rng, 4, 4).matrix;
        const ComplexMatrix ab = fockbit::tensor(a, b);
        CHECK(fockbit::max_abs_diff(fockbit::partial_trace(ab, {3, 4}, {0}), a) < 1e-13);
        CHECK(fockbit::max_abs_diff(fockbit::partial_trace(ab, {3, 4}, {1}), b) < 1e-13);
    }
    SUBCASE("trace is preserved and keep-all is the identity map") {
        std::mt19937_64 rng(0x5EED06);
        const ComplexMatrix m = testutil::random_matrix(rng, 6, 6);
        const ComplexMatrix red = fockbit::partial_trace(m, {2, 3}, {1});
        CHECK(std::abs(fockbit::trace(red) - fockbit::trace(m)) < 1e-13);
        const ComplexMatrix all = fockbit::partial_trace(m, {2, 3}, {0, 1});
        CHECK(fockbit::max_abs_diff(all, m) == 0.0);
    }
    SUBCASE("three factors, middle kept") {
        std::mt19937_64 rng(0x5EED07);
        const ComplexMatrix a = testutil::random_density(rng, 2, 2).matrix;
        const ComplexMatrix b = testutil::random_density(rng, 3, 3).matrix;
        const ComplexMatrix c = testutil::random_density(rng, 2, 2).matrix;
        const ComplexMatrix abc = fockbit::tensor(fockbit::tensor(a, b), c);
        CHECK(fockbit::max_abs_diff(fockbit::partial_trace(abc, {2, 3, 2}, {1}), b) < 1e-13);
    }
}
