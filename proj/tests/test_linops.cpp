#include "qbeit/linops.hpp"
#include "qbeit/eit.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace qbeit;

TEST_CASE("eig_hermitian: identity, off-diagonal pair, diagonal dipole battery") {
    const EigenSystem id = eig_hermitian(ComplexMatrix::Identity(2, 2));
    CHECK(id.values(0).real() == doctest::Approx(1.0));
    CHECK(id.values(1).real() == doctest::Approx(1.0));
    CHECK((id.vectors.adjoint() * id.vectors - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

    ComplexMatrix a(2, 2);
    a << 0.0, 0.5, 0.5, 0.0;
    const EigenSystem s = eig_hermitian(a);
    CHECK(s.values(0).real() == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(s.values(1).real() == doctest::Approx(0.5).epsilon(1e-14));

    ComplexMatrix hb = ComplexMatrix::Zero(4, 4);
    hb.diagonal() << 0.0, 0.8, 1.2, 2.0;
    const EigenSystem d = eig_hermitian(hb);
    const double want[] = {0.0, 0.8, 1.2, 2.0};
    for (int k = 0; k < 4; ++k) CHECK(std::abs(d.values(k) - want[k]) < 1e-14);
}

TEST_CASE("eig_hermitian rejects non-Hermitian input with the deviation") {
    ComplexMatrix a(2, 2);
    a << 0.0, 1.0, 0.0, 0.0;
    try {
        eig_hermitian(a);
        FAIL("expected NonHermitianError");
    } catch (const NonHermitianError& e) {
        CHECK(e.deviation() == doctest::Approx(1.0));
    }
}

TEST_CASE("eig_hermitian residuals and round trip on random matrices") {
    std::mt19937_64 rng(11);
    for (int n : {1, 2, 3, 5, 8, 16, 33}) {
        const ComplexMatrix a = test::random_hermitian(rng, n);
        const EigenSystem s = eig_hermitian(a);
        for (int k = 0; k + 1 < n; ++k) CHECK(s.values(k).real() <= s.values(k + 1).real());
        for (int k = 0; k < n; ++k) {
            CHECK(s.values(k).imag() == 0.0);
            CHECK((a * s.vectors.col(k) - s.values(k) * s.vectors.col(k)).norm() < 1e-12 * std::max(1.0, max_norm(a)) * n);
        }
        const ComplexMatrix back = s.vectors * s.values.asDiagonal() * s.vectors.adjoint();
        CHECK((back - a).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("eig_general: diagonal, Jordan block, random residuals, Hermitian agreement") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = Complex(1.0, 2.0);
    d(1, 1) = 3.0;
    const EigenSystem s = eig_general(d);
    CHECK(std::abs(s.values(0) - Complex(1.0, 2.0)) < 1e-14);
    CHECK(std::abs(s.values(1) - 3.0) < 1e-14);

    ComplexMatrix j(2, 2);
    j << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(eig_general(j), DefectiveMatrixError);

    std::mt19937_64 rng(5);
    for (int n : {2, 3, 4, 7, 12, 30}) {
        const ComplexMatrix a = test::random_matrix(rng, n);
        const EigenSystem g = eig_general(a);
        for (int k = 0; k < n; ++k) {
            CHECK(std::abs(g.vectors.col(k).norm() - 1.0) < 1e-12);
            CHECK((a * g.vectors.col(k) - g.values(k) * g.vectors.col(k)).norm() < 1e-9 * max_norm(a));
        }
        for (int k = 0; k + 1 < n; ++k) {
            const Complex x = g.values(k), y = g.values(k + 1);
            CHECK((x.real() < y.real() || (x.real() == y.real() && x.imag() <= y.imag())));
        }
        const ComplexMatrix h = test::random_hermitian(rng, n);
        const EigenSystem gh = eig_general(h);
        const EigenSystem hh = eig_hermitian(h);
        for (int k = 0; k < n; ++k) CHECK(std::abs(gh.values(k) - hh.values(k)) < 1e-9);
    }
}

TEST_CASE("eig_general enforces the dimension cap") {
    CHECK_THROWS_AS(eig_general(ComplexMatrix::Identity(65, 65)), DimensionError);
}

TEST_CASE("eig_general on the EIT matrix matches the first-order dark eigenvalue") {
    const EitParams p;
    const EigenSystem s = eig_general(build_h0(p));
    const Complex shift(p.omega_d, -p.kappa);
    int best = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs((s.values(k) + shift).imag()) < std::abs((s.values(best) + shift).imag())) best = k;
    const Complex first_order = (p.Omega1 * p.Omega1 / p.Omega_sq()) * p.omega_2() + shift;
    // Next order is O(|omega_2|^2 / Omega), about 2e-4 here.
    CHECK(std::abs(s.values(best) + shift - first_order) < 1e-3);
}

TEST_CASE("expm: zero, diagonal, 2x2 closed form") {
    CHECK((expm(ComplexMatrix::Zero(3, 3), 2.5) - ComplexMatrix::Identity(3, 3)).norm() == 0.0);

    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d.diagonal() << -kI * 0.3, -kI * 1.7, -kI * 4.0;
    const double t = 2.3;
    const ComplexMatrix e = expm(d, t);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(e(k, k) - std::exp(d(k, k) * t)) < 1e-14);

    const double J = 0.5;
    ComplexMatrix a(2, 2);
    a << 0.0, -kI * J, -kI * J, 0.0;
    for (double tt : {0.1, 1.0, 3.7, 12.0}) {
        const ComplexMatrix u = expm(a, tt);
        CHECK(std::abs(u(0, 0) - std::cos(J * tt)) < 1e-13);
        CHECK(std::abs(u(0, 1) + kI * std::sin(J * tt)) < 1e-13);
        // truncated power series as a second oracle
        ComplexMatrix sum = ComplexMatrix::Identity(2, 2), term = sum;
        for (int k = 1; k < 80; ++k) {
            term = term * a * tt / double(k);
            sum += term;
        }
        CHECK((u - sum).norm() < 1e-12);
    }
}

TEST_CASE("expm relative accuracy against spectral exponential for |scale a| <= 20") {
    std::mt19937_64 rng(17);
    for (int n : {2, 4, 9, 20}) {
        ComplexMatrix h = test::random_hermitian(rng, n);
        h *= 20.0 / h.operatorNorm();
        const EigenSystem s = eig_hermitian(h);
        ComplexVector ph(n);
        for (int k = 0; k < n; ++k) ph(k) = std::exp(-kI * s.values(k).real());
        const ComplexMatrix ref = s.vectors * ph.asDiagonal() * s.vectors.adjoint();
        const ComplexMatrix u = expm(h, -kI);
        CHECK((u - ref).norm() / ref.norm() < 1e-10);
    }
}

TEST_CASE("expm semigroup property for commuting factors") {
    std::mt19937_64 rng(3);
    const ComplexMatrix a = test::random_matrix(rng, 6, 0.4);
    for (double t1 : {0.3, 1.1}) {
        for (double t2 : {0.7, 2.0}) {
            const ComplexMatrix lhs = expm(a, t1) * expm(a, t2);
            const ComplexMatrix rhs = expm(a, t1 + t2);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, max_norm(rhs)));
        }
    }
}

TEST_CASE("expm reports overflow") {
    ComplexMatrix a = ComplexMatrix::Identity(2, 2) * 1e4;
    CHECK_THROWS_AS(expm(a, 1.0), std::overflow_error);
}

TEST_CASE("partial_trace: product state, Bell state, trace, pure-state variant") {
    std::mt19937_64 rng(23);
    const ComplexVector va = test::random_state(rng, 3), vb = test::random_state(rng, 4);
    const ComplexMatrix ra = 0.7 * va * va.adjoint(), rb = vb * vb.adjoint();
    const ComplexMatrix rho = kron(ra, rb);
    CHECK((partial_trace(rho, {3, 4}, Keep::B) - rb * ra.trace()).norm() < 1e-13);
    CHECK((partial_trace(rho, {3, 4}, Keep::A) - ra * rb.trace()).norm() < 1e-13);

    ComplexVector bell = ComplexVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const ComplexMatrix rb2 = partial_trace(bell * bell.adjoint(), {2, 2}, Keep::B);
    CHECK((rb2 - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

    for (int trial = 0; trial < 20; ++trial) {
        const ComplexVector psi = 0.9 * test::random_state(rng, 12);
        const ComplexMatrix full = psi * psi.adjoint();
        for (Keep k : {Keep::A, Keep::B}) {
            const ComplexMatrix r = partial_trace(full, {3, 4}, k);
            CHECK(std::abs(r.trace() - full.trace()) < 1e-12);
            CHECK((partial_trace_pure(psi, {3, 4}, k) - r).norm() < 1e-13);
        }
    }
    CHECK_THROWS_AS(partial_trace(ComplexMatrix::Identity(5, 5), {2, 2}, Keep::A), DimensionError);
}

TEST_CASE("partial_trace: single-excitation state, direct summation oracle") {
    // cavity (2) x N=3 atoms (8): c0 |1>|ggg> + sum_j c_j |0> sigma_j^+ |ggg>
    std::mt19937_64 rng(7);
    const ComplexVector amps = 0.8 * test::random_state(rng, 4);
    ComplexVector psi = ComplexVector::Zero(16);
    psi(1 * 8 + 0) = amps(0);
    for (int j = 0; j < 3; ++j) psi(0 * 8 + (1 << j)) = amps(1 + j);
    const ComplexMatrix r = partial_trace(psi * psi.adjoint(), {2, 8}, Keep::B);
    ComplexMatrix want = ComplexMatrix::Zero(8, 8);
    for (int n = 0; n < 2; ++n)
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) want(i, j) += psi(n * 8 + i) * std::conj(psi(n * 8 + j));
    CHECK((r - want).norm() < 1e-14);
    CHECK(std::abs(r.trace().real() - amps.squaredNorm()) < 1e-12);
}

TEST_CASE("partial_trace over a trivial factor is the identity map") {
    std::mt19937_64 rng(1);
    const ComplexMatrix h = test::random_hermitian(rng, 5);
    const ComplexMatrix once = partial_trace(h, {5, 1}, Keep::A);
    CHECK((once - h).norm() < 1e-15);
    CHECK((partial_trace(once, {5, 1}, Keep::A) - once).norm() < 1e-15);
}

TEST_CASE("annihilation and kron") {
    const ComplexMatrix a = annihilation(4);
    CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
    const ComplexMatrix comm = a * a.adjoint() - a.adjoint() * a;
    for (int k = 0; k < 4; ++k) CHECK(std::abs(comm(k, k) - 1.0) < 1e-14);
    Eigen::Matrix2d x;
    x << 0, 1, 1, 0;
    const ComplexMatrix k = kron(x, Eigen::Matrix2d::Identity());
    CHECK(k(0, 2) == Complex(1.0));
    CHECK(k(1, 3) == Complex(1.0));
    CHECK(k(0, 1) == Complex(0.0));
}
