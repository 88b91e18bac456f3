#include "qbeit/eit.hpp"
#include "qbeit/excitation_transfer.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qbeit;

namespace {

// Direct RK4 integration of
//   i dc0/dt = w c0 + J sum_j c_j,   i dc_j/dt = x1 c_j + J c0.
std::vector<ComplexVector> rk4_oracle(int N, double w, Complex x1, double J, double t_end, double h, int every) {
    ComplexVector c = ComplexVector::Zero(N + 1);
    c(0) = 1.0;
    auto f = [&](const ComplexVector& y) {
        ComplexVector d(N + 1);
        d(0) = -kI * (w * y(0) + J * y.tail(N).sum());
        for (int j = 1; j <= N; ++j) d(j) = -kI * (x1 * y(j) + J * y(0));
        return d;
    };
    std::vector<ComplexVector> out{c};
    const int steps = int(std::lround(t_end / h));
    for (int s = 1; s <= steps; ++s) {
        const ComplexVector k1 = f(c), k2 = f(c + 0.5 * h * k1), k3 = f(c + 0.5 * h * k2), k4 = f(c + h * k3);
        c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (s % every == 0) out.push_back(c);
    }
    return out;
}

double max_dev(const SingleExcitationState& s, const ComplexVector& ref) {
    double d = std::abs(s.c0 - ref(0));
    for (std::size_t j = 0; j < s.c.size(); ++j) d = std::max(d, std::abs(s.c[j] - ref(Eigen::Index(j) + 1)));
    return d;
}

}  // namespace

TEST_CASE("decoupled limit") {
    for (double t : {0.0, 1.0, 17.3}) {
        const SingleExcitationState s = amplitudes(4, 1.3, Complex(0.9, -0.05), 0.0, t);
        CHECK(std::abs(s.c0 - std::exp(-kI * 1.3 * t)) < 1e-15);
        for (const Complex& c : s.c) CHECK(c == Complex(0.0));
    }
}

TEST_CASE("one atom on resonance reduces to the vacuum Rabi flop") {
    for (double t : {0.2, 1.5, 4.0, 33.0}) {
        const SingleExcitationState s = amplitudes(1, 1.0, 1.0, 0.5, t);
        CHECK(std::abs(std::norm(s.c0) - std::pow(std::cos(0.5 * t), 2)) < 1e-12);
    }
}

TEST_CASE("pole sum") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const int N = 1 + int(6 * u(rng));
        const double w = 0.5 + u(rng);
        const Complex x1(0.5 + u(rng), -0.1 * u(rng));
        const TransferPoles p = transfer_poles(N, w, x1, 0.05 + u(rng));
        CHECK(std::abs(p.s_plus + p.s_minus + kI * (w + x1)) < 1e-12);
    }
}

TEST_CASE("Laplace amplitudes match direct RK4 integration") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int N : {1, 2, 3, 5}) {
        for (int draw = 0; draw < 50; ++draw) {
            const double w = 0.5 + u(rng);
            const Complex x1(0.5 + u(rng), -0.05 * u(rng));
            const double J = 0.05 + 0.95 * u(rng);
            const double h = 0.005;
            const int every = 200;  // compare every 1/omega
            const auto ref = rk4_oracle(N, w, x1, J, 200.0, h, every);
            for (std::size_t k = 0; k < ref.size(); ++k)
                worst = std::max(worst, max_dev(amplitudes(N, w, x1, J, double(k) * h * every), ref[k]));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("uniform atomic amplitudes and lossless norm") {
    for (double t : {0.5, 3.0, 50.0}) {
        const SingleExcitationState s = amplitudes(4, 1.0, 0.8, 0.4, t);
        for (const Complex& c : s.c) CHECK(c == s.c[0]);
        CHECK(std::abs(s.norm_sq() - 1.0) < 1e-9);
    }
}

TEST_CASE("exceptional point uses the confluent limit") {
    // (w - x1)^2 + 4 N J^2 = 0 with w - x1 = 2 i sqrt(N) J
    const int N = 2;
    const double J = 0.1, w = 1.0;
    const Complex x1 = w - 2.0 * kI * std::sqrt(double(N)) * J;
    const auto ref = rk4_oracle(N, w, x1, J, 20.0, 0.001, 1000);
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(max_dev(amplitudes(N, w, x1, J, double(k)), ref[k]) < 1e-8);
}

TEST_CASE("battery energy: zero at start, full transfer on resonance without loss") {
    const int N = 3;
    const double J = 0.5;
    const Eigen::VectorXd t = uniform_grid(10.0, 20001);
    const TimeSeries e = battery_energy(N, 1.0, 1.0, J, t);
    CHECK(e.y(0) == 0.0);
    CHECK(e.y.minCoeff() >= 0.0);
    CHECK(std::abs(e.y.maxCoeff() - 1.0) < 1e-5);
    const TimeSeries d = battery_energy(N, 1.0, Complex(0.99, -0.01), J, t);
    CHECK(d.y.minCoeff() >= 0.0);
}

TEST_CASE("collective frequency scales as sqrt(N)") {
    const double J = 0.3;
    const Eigen::VectorXd t = uniform_grid(400.0, 8001);
    for (int N : {1, 2, 3, 4, 6}) {
        TimeSeries e = battery_energy(N, 1.0, 1.0, J, t);
        const double mean = e.y.mean();
        auto amp = [&](double nu) {
            Complex acc = 0.0;
            for (Eigen::Index i = 0; i < t.size(); ++i) acc += (e.y(i) - mean) * std::exp(-kI * nu * t(i));
            return std::abs(acc);
        };
        // coarse scan of the spectrum, then refine around the strongest line
        double best_nu = 0.0, best_amp = -1.0;
        for (int k = 1; k <= 600; ++k)
            if (const double a = amp(0.01 * k); a > best_amp) best_amp = a, best_nu = 0.01 * k;
        const double centre = best_nu;
        for (int k = -50; k <= 50; ++k)
            if (const double a = amp(centre + 0.0002 * k); a > best_amp) best_amp = a, best_nu = centre + 0.0002 * k;
        // sum |c_j|^2 = sin^2(sqrt(N) J t) oscillates at 2 sqrt(N) J
        CHECK(best_nu / (2.0 * J) == doctest::Approx(std::sqrt(double(N))).epsilon(0.01));
    }
}

TEST_CASE("reduced density on {|G>, sigma_j^+ |G>}") {
    const SingleExcitationState s0 = amplitudes(3, 1.0, Complex(0.99, -0.01), 0.5, 0.0);
    const ComplexMatrix r0 = reduced_density_n(s0);
    CHECK(r0.rows() == 4);
    CHECK(std::abs(r0(0, 0) - 1.0) < 1e-15);
    CHECK(r0.bottomRightCorner(3, 3).norm() < 1e-15);

    const SingleExcitationState s = amplitudes(3, 1.0, Complex(0.99, -0.01), 0.5, 2.7);
    const ComplexMatrix r = reduced_density_n(s);
    CHECK(is_hermitian(r));
    CHECK(std::abs(r.trace().real() - s.norm_sq()) < 1e-12);
    const EigenSystem es = eig_hermitian(r.bottomRightCorner(3, 3));
    CHECK(std::abs(es.values(0).real()) < 1e-12);
    CHECK(std::abs(es.values(1).real()) < 1e-12);
    CHECK(es.values(2).real() > 0.0);

    // oracle: partial trace of the full pure state over the cavity factor
    ComplexVector psi = ComplexVector::Zero(2 * 8);
    psi(1 * 8 + 0) = s.c0;
    for (int j = 0; j < 3; ++j) psi(0 * 8 + (1 << j)) = s.c[std::size_t(j)];
    const ComplexMatrix full = partial_trace_pure(psi, {2, 8}, Keep::B);
    const int idx[4] = {0, 1, 2, 4};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) CHECK(std::abs(full(idx[a], idx[b]) - r(a, b)) < 1e-14);
}

TEST_CASE("single-photon energy decay with and without EIT") {
    const Eigen::VectorXd t = uniform_grid(100.0, 2000);
    const EitParams p;
    const double r_off = fit_envelope(battery_energy(3, 1.0, effective_battery(p, false).x1, 0.5, t)).rate;
    const double r_on = fit_envelope(battery_energy(3, 1.0, effective_battery(p, true).x1, 0.5, t)).rate;
    CHECK(r_off == doctest::Approx(effective_battery(p, false).gamma()).epsilon(0.05));
    CHECK(r_on == doctest::Approx(effective_battery(p, true).gamma()).epsilon(0.05));
}
