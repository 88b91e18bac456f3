#include "qbeit/jaynes_cummings.hpp"

#include <cmath>
#include <stdexcept>

namespace qbeit {

void JcParams::validate() const {
    if (!(J >= 0.0) || !std::isfinite(J)) throw std::invalid_argument("JcParams: J must be finite and >= 0");
    if (n < 0) throw std::invalid_argument("JcParams: n must be >= 0");
    if (!std::isfinite(omega)) throw std::invalid_argument("JcParams: omega must be finite");
    if (battery.gamma() < 0.0) throw std::invalid_argument("JcParams: battery gain (gamma < 0)");
}

Eigen::Matrix2cd jc_block(const JcParams& p) {
    const double n = p.n;
    Eigen::Matrix2cd h;
    h << p.battery.x1 + n * p.omega, p.J, p.J, (n + 1.0) * p.omega;
    return h;
}

DressedPair dressed_pair(const JcParams& p) {
    p.validate();
    const Complex x1 = p.battery.x1;
    const double w = p.omega;
    const Complex centre = (double(p.n) + 0.5) * w;
    DressedPair d;

    if (p.J == 0.0) {
        // Decoupled: eigenvectors are the bare states. lambda_plus is the
        // cavity-like level (n+1) w, lambda_minus the atom-like x1 + n w.
        d.lambda_plus = (double(p.n) + 1.0) * w;
        d.lambda_minus = x1 + double(p.n) * w;
        d.c_plus = 0.0;
        d.d_plus = 1.0;
        d.c_minus = 1.0;
        d.d_minus = 0.0;
        return d;
    }

    const Complex disc = 4.0 * p.J * p.J + (w - x1) * (w - x1);
    if (!(disc.real() > 0.0))
        throw std::domain_error("dressed_pair: discriminant " + std::to_string(disc.real()) + std::string(" + ") +
                                std::to_string(disc.imag()) + "i is off the principal-branch domain");
    const Complex root = std::sqrt(disc);
    d.lambda_plus = 0.5 * (x1 + root) + centre;
    d.lambda_minus = 0.5 * (x1 - root) + centre;

    // (H - lambda) v = 0, first row: (x1 + n w - lambda) c + J d = 0.
    // Normalised as c = J / N, d = (lambda - x1 - n w) / N.
    auto column = [&](Complex lambda, Complex& c, Complex& dd) {
        const Complex a = p.J;
        const Complex b = lambda - x1 - double(p.n) * w;
        const double nrm = std::sqrt(std::norm(a) + std::norm(b));
        c = a / nrm;
        dd = b / nrm;
    };
    column(d.lambda_plus, d.c_plus, d.d_plus);
    column(d.lambda_minus, d.c_minus, d.d_minus);
    return d;
}

Eigen::Vector2cd evolve_pure(const JcParams& p, Complex alpha, Complex beta, double t, bool renormalize) {
    const DressedPair d = dressed_pair(p);
    Eigen::Matrix2cd P;
    P << d.c_plus, d.c_minus, d.d_plus, d.d_minus;
    // P^-1 carries the 1 / (c+ d- - c- d+) factor.
    const Complex det = d.c_plus * d.d_minus - d.c_minus * d.d_plus;
    if (std::abs(det) < 1e-12) throw DefectiveMatrixError("evolve_pure: dressed states are degenerate (exceptional point)");
    Eigen::Matrix2cd Pinv;
    Pinv << d.d_minus, -d.c_minus, -d.d_plus, d.c_plus;
    Pinv /= det;

    const Eigen::Vector2cd phases(std::exp(-kI * d.lambda_plus * t), std::exp(-kI * d.lambda_minus * t));
    Eigen::Vector2cd out = P * phases.asDiagonal() * (Pinv * Eigen::Vector2cd(alpha, beta));
    if (renormalize) {
        const double nrm = out.norm();
        if (nrm > 0.0) out /= nrm;
    }
    return out;
}

ComplexMatrix reduced_density(const JcParams& p, Complex alpha, Complex beta, double t, bool renormalize) {
    const Eigen::Vector2cd a = evolve_pure(p, alpha, beta, t, renormalize);
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = std::norm(a(0));
    rho(1, 1) = std::norm(a(1));
    return rho;
}

ComplexMatrix battery_hamiltonian(const EffectiveBattery& b) {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = b.energy();
    return h;
}

EnergySeries energy_and_ergotropy_series(const JcParams& p, Complex alpha, Complex beta,
                                         const Eigen::VectorXd& grid, bool renormalize) {
    EnergySeries s;
    for (TimeSeries* ts : {&s.energy, &s.ergotropy, &s.p_excited, &s.p_ground}) {
        ts->t = grid;
        ts->y.resize(grid.size());
    }
    s.energy.validate();

    const ComplexMatrix hb = battery_hamiltonian(p.battery);
    const double e1 = p.battery.energy();
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        const ComplexMatrix rho = reduced_density(p, alpha, beta, grid(k), renormalize);
        const double m11 = rho(0, 0).real();
        s.p_excited.y(k) = m11;
        s.p_ground.y(k) = rho(1, 1).real();
        s.energy.y(k) = e1 * m11;
        s.ergotropy.y(k) = ergotropy(rho, hb).ergotropy;
    }
    return s;
}

}  // namespace qbeit
