// Three-level EIT system with decay on |d>, and the effective two-level
// battery built from the ground state and the dark eigenstate.
//
// Basis ordering throughout: (|d>, |e>, |m>). All energies in units of the
// reference frequency.
#pragma once

#include "qbeit/linops.hpp"

#include <array>
#include <utility>
#include <vector>

namespace qbeit {

struct EitParams {
    double omega_d = 0.25;
    double omega_e = 1.0;
    double omega_m = 0.5;
    double Omega1 = 50.0;
    double Omega2 = 5.0;
    double omega_a = 1.0;
    double omega_b = 0.5;
    double kappa = 0.05;

    double omega_c() const { return omega_a - omega_b; }
    /// Omega^2 = Omega1^2 + Omega2^2.
    double Omega_sq() const { return Omega1 * Omega1 + Omega2 * Omega2; }
    /// omega_1 = omega_e + omega_a - omega_d + i kappa.
    Complex omega_1() const { return {omega_e + omega_a - omega_d, kappa}; }
    /// omega_2 = omega_m + omega_c - omega_d + i kappa.
    Complex omega_2() const { return {omega_m + omega_c() - omega_d, kappa}; }

    /// Throws std::invalid_argument unless Omega1 > 0, Omega2 >= 0, kappa >= 0.
    void validate() const;

    /// Parameters of the single-atom figures with the given omega_c
    /// (omega_b held at 0.5, omega_a = omega_b + omega_c).
    static EitParams reference_defaults(double omega_c = 0.5);
};

struct EitSpectrum {
    std::array<Complex, 3> x{};                 // eigenvalues of H_eff' (shifted by omega_d - i kappa)
    std::array<Eigen::Vector3cd, 3> states{};   // unit-norm, (|d>,|e>,|m>) components
    int dark_index = 0;
    bool degenerate = false;                    // two eigenvalues closer than 1e-9
    double expansion_ratio = 0.0;               // max(|omega_1|, |omega_2|) / Omega
};

struct EffectiveBattery {
    Complex x1{1.0, 0.0};
    Eigen::Vector3cd dark_state = Eigen::Vector3cd::Zero();

    double energy() const { return x1.real(); }
    /// Amplitude decay rate -Im(x1).
    double gamma() const { return -x1.imag(); }
};

/// H0 = H_eff' - (omega_d - i kappa) I.
ComplexMatrix build_h0(const EitParams& p);

/// H_eff' itself.
ComplexMatrix build_h_eff(const EitParams& p);

EitSpectrum spectrum_exact(const EitParams& p);

/// Closed-form first-order eigenvalues (x1', x2', x3') and zeroth-order
/// eigenstates. Index 0 is always the dark state. Throws when Omega = 0.
EitSpectrum spectrum_perturbative(const EitParams& p);

/// First-order roots of the characteristic cubic, A_j taken exactly
/// (before the large-Omega simplification), shifted into H_eff' frame.
std::array<Complex, 3> cubic_first_order_roots(const EitParams& p);

/// with_eit: the dark eigenvalue of the exact spectrum. Without: the bare
/// |g> <-> |e> transition, x1 = omega_e - i kappa.
EffectiveBattery effective_battery(const EitParams& p, bool with_eit);

struct OmegaCPoint {
    double omega_c;
    double energy;
};

/// Battery energy Re(x1') versus omega_c for omega_a scanned at fixed omega_b.
std::vector<OmegaCPoint> sweep_omega_c(const EitParams& p, const std::vector<double>& omega_a_values);

}  // namespace qbeit
