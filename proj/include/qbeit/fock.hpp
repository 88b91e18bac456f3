// Truncated cavity mode coupled to N identical atoms with uniform exchange
// coupling V between every pair. Two bases:
//   FullTensor      index = n * 2^N + bits   (bit j set: atom j excited)
//   SymmetricDicke  index = n * (N+1) + k    (k excitations, symmetric)
#pragma once

#include "qbeit/ergotropy.hpp"
#include "qbeit/fit.hpp"
#include "qbeit/linops.hpp"

#include <vector>

namespace qbeit {

enum class Basis { FullTensor, SymmetricDicke };

struct SystemSpec {
    int n_atoms = 1;
    int n_max = 4;
    double omega = 1.0;
    Complex x1{1.0, 0.0};
    double J = 0.5;
    double V = 0.0;
    Basis basis = Basis::SymmetricDicke;

    int atom_dim() const;
    int dim() const;
    void validate(const NumericPolicy& policy = kDefaultPolicy) const;
};

struct PulseSpec {
    double Omega0 = 0.0;
    double t_c = 1.6;
    double sigma = 0.8;
    double omega_L = 1.0;

    double rabi(double t) const;
    void validate() const;
};

/// omega a^dag a + sum_j x1 sigma_j^+ sigma_j^- + V sum_{i<j} (sigma_i^+ sigma_j^- + h.c.)
///   + J sum_j (a sigma_j^+ + a^dag sigma_j^-).
/// Throws DimensionError above policy.max_dim_expm with a suggested n_max.
ComplexMatrix build_hamiltonian(const SystemSpec& spec, const NumericPolicy& policy = kDefaultPolicy);

/// Atomic part only, with Re(x1): acts on the 2^N (or N+1) atomic factor.
ComplexMatrix battery_hamiltonian(const SystemSpec& spec);

/// |n> (x) symmetric state with k atomic excitations, unit norm. When J != 0
/// requires n_max >= n + k + 4.
ComplexVector initial_state(const SystemSpec& spec, int n_photons, int k_excited);

/// Truncated coherent cavity state (x) symmetric k-excitation atomic state.
ComplexVector initial_coherent(const SystemSpec& spec, Complex alpha, int k_excited);

/// e^{-iHt} psi0.
ComplexVector evolve(const SystemSpec& spec, const ComplexVector& psi0, double t);

/// States on a uniform grid starting at grid(0) = 0, by repeated application
/// of e^{-iH dt}.
std::vector<ComplexVector> evolve_series(const SystemSpec& spec, const ComplexVector& psi0,
                                         const Eigen::VectorXd& grid);

/// Frame rotating at omega_L: atomic level x1 - omega_L, cavity omega - omega_L,
/// plus Omega(t)/2 sum_j (sigma_j^+ + sigma_j^-).
ComplexMatrix rotating_frame_hamiltonian(const SystemSpec& spec, const PulseSpec& pulse);
ComplexMatrix drive_operator(const SystemSpec& spec);

/// Largest RK4 step allowed: min(0.01/Omega0, 0.01 sigma, 0.05/|H|max).
double max_pulsed_step(const SystemSpec& spec, const PulseSpec& pulse);

/// Fixed-step RK4 in the rotating frame. substeps = 0 picks the smallest count
/// meeting max_pulsed_step; an explicit count that violates it is rejected.
std::vector<ComplexVector> evolve_pulsed(const SystemSpec& spec, const PulseSpec& pulse,
                                         const ComplexVector& psi0, const Eigen::VectorXd& grid,
                                         int substeps = 0);

/// Reduced atomic density matrix (cavity traced out).
ComplexMatrix battery_state(const SystemSpec& spec, const ComplexVector& psi);

struct Observables {
    TimeSeries energy;
    TimeSeries ergotropy;
};

/// For N = 2 in the Dicke basis the symmetric state is embedded into
/// {|G>, |p>, |q>, |E>} so the antisymmetric level takes part in the passive state.
ErgotropyReport battery_report(const SystemSpec& spec, const ComplexVector& psi);

Observables observables(const SystemSpec& spec, const std::vector<ComplexVector>& states,
                        const Eigen::VectorXd& grid);

/// Population in the top two Fock levels.
double truncation_leakage(const SystemSpec& spec, const ComplexVector& psi);

/// Population of level k in the Dicke basis, or of atomic basis state `bits`
/// in the full tensor basis, summed over photon number.
double atomic_population(const SystemSpec& spec, const ComplexVector& psi, int index);

/// Exact eigenvalues (upper, lower) of [[Delta, Omega/2], [Omega/2, 0]].
std::pair<double, double> stark_levels(double delta, double omega_rabi);

}  // namespace qbeit
