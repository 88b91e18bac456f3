// One effective two-level battery coupled to a single cavity mode, solved in
// the two-state sector {|n>|E1>, |n+1>|g>}.
#pragma once

#include "qbeit/eit.hpp"
#include "qbeit/ergotropy.hpp"
#include "qbeit/fit.hpp"

#include <utility>

namespace qbeit {

struct JcParams {
    EffectiveBattery battery;
    double omega = 1.0;
    double J = 0.5;
    int n = 0;

    void validate() const;
};

/// Eigenpairs of the 2x2 block [[x1 + n w, J], [J, (n+1) w]]. Columns (c, d)
/// are the eigenvector components on (|n>|E1>, |n+1>|g>).
struct DressedPair {
    Complex lambda_plus, lambda_minus;
    Complex c_plus, c_minus;
    Complex d_plus, d_minus;
};

/// The 2x2 sector Hamiltonian.
Eigen::Matrix2cd jc_block(const JcParams& p);

/// Principal branch of the square root. Throws std::domain_error when
/// Re(4J^2 + (w - x1)^2) <= 0, where the branch cut would be crossed.
DressedPair dressed_pair(const JcParams& p);

/// Amplitudes on (|n>|E1>, |n+1>|g>) at time t. `renormalize` rescales to unit
/// norm; off by default since the norm loss carries the dissipated energy.
Eigen::Vector2cd evolve_pure(const JcParams& p, Complex alpha, Complex beta, double t,
                             bool renormalize = false);

/// diag(M11, M22): populations of |E1> and |g>, excited level first.
ComplexMatrix reduced_density(const JcParams& p, Complex alpha, Complex beta, double t,
                              bool renormalize = false);

/// diag(Re x1, 0) in the (|E1>, |g>) ordering used by reduced_density.
ComplexMatrix battery_hamiltonian(const EffectiveBattery& b);

struct EnergySeries {
    TimeSeries energy;
    TimeSeries ergotropy;
    TimeSeries p_excited;  // M11
    TimeSeries p_ground;   // M22
};

EnergySeries energy_and_ergotropy_series(const JcParams& p, Complex alpha, Complex beta,
                                         const Eigen::VectorXd& grid, bool renormalize = false);

}  // namespace qbeit
