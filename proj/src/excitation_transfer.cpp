#include "qbeit/excitation_transfer.hpp"

#include <cmath>
#include <stdexcept>

namespace qbeit {

namespace {

void check_args(int n_atoms, double J) {
    if (n_atoms < 1) throw std::invalid_argument("excitation transfer: n_atoms must be >= 1");
    if (!(J >= 0.0)) throw std::invalid_argument("excitation transfer: J must be >= 0");
}

}  // namespace

double SingleExcitationState::norm_sq() const {
    double s = std::norm(c0);
    for (const Complex& z : c) s += std::norm(z);
    return s;
}

TransferPoles transfer_poles(int n_atoms, double omega, Complex x1, double J) {
    check_args(n_atoms, J);
    const Complex root = std::sqrt((omega - x1) * (omega - x1) + 4.0 * double(n_atoms) * J * J);
    const Complex mu_p = 0.5 * ((omega + x1) + root);
    const Complex mu_m = 0.5 * ((omega + x1) - root);
    TransferPoles p;
    p.s_plus = -kI * mu_p;
    p.s_minus = -kI * mu_m;
    const Complex gap = p.s_plus - p.s_minus;
    if (std::abs(gap) > 0.0) {
        p.A_plus = (p.s_plus + kI * x1) / gap;
        p.A_minus = -(p.s_minus + kI * x1) / gap;
        p.B_plus = -kI * J / gap;
        p.B_minus = kI * J / gap;
    }
    return p;
}

SingleExcitationState amplitudes(int n_atoms, double omega, Complex x1, double J, double t) {
    check_args(n_atoms, J);
    SingleExcitationState st;
    st.t = t;
    if (J == 0.0) {
        st.c0 = std::exp(-kI * omega * t);
        st.c.assign(static_cast<std::size_t>(n_atoms), Complex(0.0));
        return st;
    }

    const TransferPoles p = transfer_poles(n_atoms, omega, x1, J);
    Complex cj;
    if (std::abs(p.s_plus - p.s_minus) < 1e-10 * (1.0 + std::abs(p.s_plus))) {
        // Double pole (exceptional point): take the confluent limit.
        const Complex s0 = 0.5 * (p.s_plus + p.s_minus);
        const Complex e = std::exp(s0 * t);
        st.c0 = e * (1.0 + (s0 + kI * x1) * t);
        cj = -kI * J * t * e;
    } else {
        const Complex ep = std::exp(p.s_plus * t);
        const Complex em = std::exp(p.s_minus * t);
        st.c0 = p.A_plus * ep + p.A_minus * em;
        cj = p.B_plus * ep + p.B_minus * em;
    }
    st.c.assign(static_cast<std::size_t>(n_atoms), cj);
    return st;
}

TimeSeries battery_energy(int n_atoms, double omega, Complex x1, double J, const Eigen::VectorXd& grid) {
    TimeSeries s{grid, Eigen::VectorXd(grid.size())};
    s.validate();
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        const SingleExcitationState st = amplitudes(n_atoms, omega, x1, J, grid(k));
        double pop = 0.0;
        for (const Complex& z : st.c) pop += std::norm(z);
        s.y(k) = x1.real() * pop;
    }
    return s;
}

ComplexMatrix reduced_density_n(const SingleExcitationState& state) {
    const Eigen::Index n = static_cast<Eigen::Index>(state.c.size());
    ComplexMatrix rho = ComplexMatrix::Zero(n + 1, n + 1);
    rho(0, 0) = std::norm(state.c0);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            rho(j + 1, k + 1) = state.c[std::size_t(j)] * std::conj(state.c[std::size_t(k)]);
    return rho;
}

}  // namespace qbeit
