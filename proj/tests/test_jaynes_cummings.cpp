#include "qbeit/jaynes_cummings.hpp"
#include "qbeit/linops.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qbeit;

namespace {

JcParams resonant(double J, int n = 0) {
    JcParams p;
    p.battery.x1 = 1.0;
    p.omega = 1.0;
    p.J = J;
    p.n = n;
    return p;
}

JcParams reference(bool eit, int n) {
    JcParams p;
    p.battery = effective_battery(EitParams{}, eit);
    p.omega = 1.0;
    p.J = 0.5;
    p.n = n;
    return p;
}

}  // namespace

TEST_CASE("dressed_pair: decoupled limit and resonant splitting") {
    JcParams p;
    p.battery.x1 = 0.7;
    p.omega = 1.0;
    p.J = 0.0;
    p.n = 2;
    const DressedPair d = dressed_pair(p);
    CHECK(d.lambda_plus == Complex(3.0));
    CHECK(std::abs(d.lambda_minus - Complex(2.7)) < 1e-15);

    const DressedPair r = dressed_pair(resonant(0.3));
    CHECK(std::abs(r.lambda_plus - 1.3) < 1e-14);
    CHECK(std::abs(r.lambda_minus - 0.7) < 1e-14);
}

TEST_CASE("dressed_pair matches a general eigensolve of the sector block") {
    for (int n : {0, 1, 4}) {
        for (bool eit : {false, true}) {
            const JcParams p = reference(eit, n);
            const DressedPair d = dressed_pair(p);
            const EigenSystem s = eig_general(ComplexMatrix(jc_block(p)));
            const Complex lo = d.lambda_minus.real() < d.lambda_plus.real() ? d.lambda_minus : d.lambda_plus;
            const Complex hi = d.lambda_minus.real() < d.lambda_plus.real() ? d.lambda_plus : d.lambda_minus;
            CHECK(std::abs(lo - s.values(0)) < 1e-10);
            CHECK(std::abs(hi - s.values(1)) < 1e-10);
            CHECK(std::abs(d.lambda_plus + d.lambda_minus - (p.battery.x1 + (2.0 * n + 1.0) * p.omega)) < 1e-12);
        }
    }
}

TEST_CASE("dressed columns are unit-norm without loss") {
    JcParams p = resonant(0.4, 3);
    p.battery.x1 = 1.2;
    const DressedPair d = dressed_pair(p);
    CHECK(std::abs(std::norm(d.c_plus) + std::norm(d.d_plus) - 1.0) < 1e-14);
    CHECK(std::abs(std::norm(d.c_minus) + std::norm(d.d_minus) - 1.0) < 1e-14);
}

TEST_CASE("dressed_pair refuses a discriminant on the branch cut") {
    JcParams p;
    p.battery.x1 = Complex(1.0, -3.0);  // (w - x1)^2 = -9, 4 J^2 = 1
    p.omega = 1.0;
    p.J = 0.5;
    CHECK_THROWS_AS(dressed_pair(p), std::domain_error);
}

TEST_CASE("evolve_pure: identity at t=0 and resonant Rabi flop") {
    const JcParams p = reference(true, 1);
    const Eigen::Vector2cd a = evolve_pure(p, 0.6, 0.8, 0.0);
    CHECK(std::abs(a(0) - 0.6) < 1e-14);
    CHECK(std::abs(a(1) - 0.8) < 1e-14);

    const JcParams r = resonant(0.5);
    for (double t : {0.3, 1.0, 2.2, 7.5, 31.0}) {
        const Eigen::Vector2cd v = evolve_pure(r, 1.0, 0.0, t);
        CHECK(std::abs(std::norm(v(0)) - std::pow(std::cos(0.5 * t), 2)) < 1e-12);
    }
}

TEST_CASE("evolve_pure equals expm of the sector block at random points") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        JcParams p;
        p.battery.x1 = Complex(0.5 + u(rng), -0.1 * u(rng));
        p.omega = 0.5 + u(rng);
        p.J = 0.05 + u(rng);
        p.n = int(5 * u(rng));
        const double t = 50.0 * u(rng);
        const double th = 2.0 * M_PI * u(rng);
        const Complex alpha = std::cos(th), beta = std::sin(th) * std::exp(kI * 3.0 * u(rng));
        const Eigen::Vector2cd got = evolve_pure(p, alpha, beta, t);
        const ComplexVector want = expm(ComplexMatrix(jc_block(p)), -kI * t) * Eigen::Vector2cd(alpha, beta);
        CHECK((got - want).norm() < 1e-9);
    }
}

TEST_CASE("reduced_density matches the partial trace of the embedded state") {
    const JcParams p = reference(false, 1);
    for (double t : {0.0, 1.3, 7.0, 40.0}) {
        const Eigen::Vector2cd a = evolve_pure(p, 0.8, 0.6, t);
        // cavity {0,1,2} (x) atom {E1, g}; |1>|E1> and |2>|g>
        ComplexVector psi = ComplexVector::Zero(6);
        psi(1 * 2 + 0) = a(0);
        psi(2 * 2 + 1) = a(1);
        const ComplexMatrix oracle = partial_trace(psi * psi.adjoint(), {3, 2}, Keep::B);
        CHECK((reduced_density(p, 0.8, 0.6, t) - oracle).norm() < 1e-9);
    }
    const ComplexMatrix r0 = reduced_density(p, 1.0, 0.0, 0.0);
    CHECK(std::abs(r0(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(r0(1, 1)) < 1e-15);
}

TEST_CASE("lossless evolution keeps unit trace and complementary populations") {
    JcParams p = resonant(0.5, 1);
    p.battery.x1 = 0.9;
    for (int k = 0; k <= 100; ++k) {
        const double t = k * 1.0;
        const ComplexMatrix r = reduced_density(p, 1.0, 0.0, t);
        CHECK(std::abs(r.trace().real() - 1.0) < 1e-9);
    }
}

TEST_CASE("lossy trace stays below one and local maxima of the norm do not grow") {
    const JcParams p = reference(false, 0);
    const Eigen::VectorXd t = uniform_grid(100.0, 4001);
    Eigen::VectorXd nrm(t.size());
    for (Eigen::Index k = 0; k < t.size(); ++k) {
        nrm(k) = reduced_density(p, 1.0, 0.0, t(k)).trace().real();
        CHECK(nrm(k) <= 1.0 + 1e-9);
    }
    double last = INFINITY;
    for (Eigen::Index k = 1; k + 1 < t.size(); ++k)
        if (nrm(k) > nrm(k - 1) && nrm(k) > nrm(k + 1)) {
            CHECK(nrm(k) <= last + 1e-12);
            last = nrm(k);
        }
}

TEST_CASE("kappa -> 0 continuity") {
    EitParams e;
    e.kappa = 1e-8;
    JcParams a{effective_battery(e, false), 1.0, 0.5, 0};
    e.kappa = 0.0;
    JcParams b{effective_battery(e, false), 1.0, 0.5, 0};
    for (int k = 0; k <= 200; ++k) {
        const double t = 0.5 * k;
        CHECK((evolve_pure(a, 1.0, 0.0, t) - evolve_pure(b, 1.0, 0.0, t)).norm() < 1e-5);
    }
}

TEST_CASE("renormalized evolution keeps unit norm") {
    const JcParams p = reference(false, 0);
    CHECK(std::abs(evolve_pure(p, 1.0, 0.0, 60.0, true).norm() - 1.0) < 1e-12);
    CHECK(evolve_pure(p, 1.0, 0.0, 60.0, false).norm() < 0.5);
}

TEST_CASE("energy and ergotropy series: resonant full charge, bounds") {
    JcParams p = resonant(0.5, 0);
    const Eigen::VectorXd t = uniform_grid(2.0 * M_PI, 2001);
    const EnergySeries s = energy_and_ergotropy_series(p, 1.0, 0.0, t);
    CHECK(std::abs(s.ergotropy.y(0) - 1.0) < 1e-12);
    // W = max(0, E1 (p_e - p_g)) for a diagonal qubit
    for (Eigen::Index k = 0; k < t.size(); ++k) {
        const double want = std::max(0.0, s.p_excited.y(k) - s.p_ground.y(k));
        CHECK(std::abs(s.ergotropy.y(k) - want) < 1e-12);
        CHECK(s.ergotropy.y(k) >= -1e-12);
        CHECK(s.ergotropy.y(k) <= s.energy.y(k) + 1e-12);
    }
    CHECK(std::abs(s.ergotropy.y(t.size() - 1) - 1.0) < 1e-9);  // back at P_E1 = 1 after 2 pi / (2J)
}

TEST_CASE("fitted decay of the single-atom series") {
    const Eigen::VectorXd t = uniform_grid(100.0, 2000);
    const EnergySeries off = energy_and_ergotropy_series(reference(false, 1), 1.0, 0.0, t);
    const EnergySeries on = energy_and_ergotropy_series(reference(true, 1), 1.0, 0.0, t);
    const double r_off = fit_envelope(off.ergotropy).rate;
    const double r_on = fit_envelope(on.ergotropy).rate;
    CHECK(r_off == doctest::Approx(0.05).epsilon(0.01));
    CHECK(r_on == doctest::Approx(effective_battery(EitParams{}, true).gamma()).epsilon(0.01));
    CHECK(r_off / r_on > 50.0);
}
