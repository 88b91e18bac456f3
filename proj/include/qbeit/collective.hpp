// Collective bosonized dynamics: the Holstein-Primakoff beam splitter
// H = w a^dag a + x1 b^dag b + J_N (a b^dag + a^dag b), its Wei-Norman
// factorized propagator, and the coherent-state solution.
//
// Two-mode Fock index: i = n_a * (n_max + 1) + n_b (cavity a first).
#pragma once

#include "qbeit/ergotropy.hpp"
#include "qbeit/linops.hpp"

#include <stdexcept>

namespace qbeit {

struct HpParams {
    double omega;
    Complex x1;
    double J_N;  // sqrt(N) J
};

HpParams hp_hamiltonian(int n_atoms, double omega, Complex x1, double J);

struct WeiNormanGauge {
    Complex g1, g2, g3;
};

class SingularGaugeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// g1 = -i tan(J_N t), g2 = -(i/2) sin(2 J_N t), g3 = -ln cos(J_N t).
/// Throws SingularGaugeError within 1e-6 of J_N t = (k + 1/2) pi; use
/// coherent_evolution there.
WeiNormanGauge wn_gauge(double J_N, double t);

struct CoherentPair {
    Complex alpha_cavity;
    Complex beta_atoms;
};

/// Initial |sqrt(N)>_a |0>_b: alpha = sqrt(N) cos(J_N t), beta = -i sqrt(N) sin(J_N t).
CoherentPair coherent_evolution(int n_atoms, double J_N, double t);

/// Mean atomic excitation per atom, sin^2(J_N t).
double hp_excitation_fraction(double J_N, double t);

/// True while <b^dag b>/N <= 0.5, where the low-excitation mapping holds.
bool hp_valid(double J_N, double t);

/// n_max = 10 + ceil(N + 6 sqrt(N)).
int oracle_dim(int n_atoms);

/// Coherent state truncated to {|0>, ..., |n_max>} (not renormalized).
ComplexVector coherent_state(Complex alpha, int n_max);

/// Interaction-picture H_I = J_N (a b^dag + a^dag b) on the truncated two-mode space.
ComplexMatrix beam_splitter_hamiltonian(double J_N, int n_max);

/// e^{g1 a b^dag} e^{g2 a^dag b} e^{g3 (b^dag b - a^dag a)} on the truncated space.
ComplexMatrix wn_propagator(double J_N, double t, int n_max);

struct HpBatteryReport {
    double energy;     // Re(x1) |beta|^2
    double ergotropy;  // truncated |beta> fed through the ergotropy routine
    bool hp_valid;
};

HpBatteryReport hp_battery(int n_atoms, const HpParams& p, double t, int n_max);

}  // namespace qbeit
