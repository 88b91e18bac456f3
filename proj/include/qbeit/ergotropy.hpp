// Ergotropy via the passive state: density-matrix eigenvalues sorted
// descending are paired with Hamiltonian eigenvalues sorted ascending.
#pragma once

#include "qbeit/linops.hpp"

namespace qbeit {

struct ErgotropyReport {
    double energy = 0.0;
    double passive_energy = 0.0;
    double ergotropy = 0.0;
};

enum class TraceHandling {
    Raw,         // sub-unit trace kept (decaying norm counts as lost energy)
    Normalized,  // rho / Tr(rho) before pairing
};

class NegativeDensityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Eigenvalues of rho in [-1e-9, 0) are clamped to zero; anything more
/// negative is rejected.
ErgotropyReport ergotropy(const ComplexMatrix& rho_b, const ComplexMatrix& h_b,
                          TraceHandling trace = TraceHandling::Raw);

/// Two-atom battery in the basis {|G>, |p>, |q>, |E>} with
/// H_B = diag(0, e1 - v, e1 + v, 2 e1).
ErgotropyReport ergotropy_dicke(const ComplexMatrix& rho_b, double e1, double v,
                                TraceHandling trace = TraceHandling::Raw);

/// diag(0, e1 - v, e1 + v, 2 e1).
ComplexMatrix dicke_pair_hamiltonian(double e1, double v);

}  // namespace qbeit
