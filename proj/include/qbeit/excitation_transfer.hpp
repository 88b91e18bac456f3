// N identical quasi-two-level atoms sharing a single cavity photon. The photon
// couples only to the symmetric atomic mode, so the problem reduces to a
// two-pole Laplace solution with effective coupling sqrt(N) J.
#pragma once

#include "qbeit/fit.hpp"
#include "qbeit/linops.hpp"

#include <vector>

namespace qbeit {

struct SingleExcitationState {
    Complex c0;              // photon amplitude, atoms in |G>
    std::vector<Complex> c;  // one amplitude per atom
    double t = 0.0;

    double norm_sq() const;
};

struct TransferPoles {
    Complex s_plus, s_minus;
    Complex A_plus, A_minus;  // c0 residues
    Complex B_plus, B_minus;  // c_j residues
};

/// Poles s = -i mu with mu = ((w + x1) +- sqrt((w - x1)^2 + 4 N J^2)) / 2.
TransferPoles transfer_poles(int n_atoms, double omega, Complex x1, double J);

/// c0(0) = 1, c_j(0) = 0.
SingleExcitationState amplitudes(int n_atoms, double omega, Complex x1, double J, double t);

/// Re(x1) * sum_j |c_j|^2.
TimeSeries battery_energy(int n_atoms, double omega, Complex x1, double J, const Eigen::VectorXd& grid);

/// (N+1)x(N+1) matrix on {|G>, sigma_j^+ |G>}.
ComplexMatrix reduced_density_n(const SingleExcitationState& state);

}  // namespace qbeit
