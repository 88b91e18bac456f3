#include "qbeit/ergotropy.hpp"

#include <algorithm>
#include <vector>

namespace qbeit {

ErgotropyReport ergotropy(const ComplexMatrix& rho_b, const ComplexMatrix& h_b, TraceHandling trace) {
    if (rho_b.rows() != h_b.rows() || rho_b.cols() != h_b.cols())
        throw DimensionError("ergotropy: rho and H_B dimensions differ");

    ComplexMatrix rho = rho_b;
    if (trace == TraceHandling::Normalized) {
        const double tr = rho.trace().real();
        if (!(tr > 0.0)) throw NegativeDensityError("ergotropy: cannot normalise a zero-trace state");
        rho /= tr;
    }

    const EigenSystem rs = eig_hermitian(rho);
    const EigenSystem hs = eig_hermitian(h_b);

    const Eigen::Index n = rho.rows();
    std::vector<double> r(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        double v = rs.values(k).real();
        if (v < -1e-9) throw NegativeDensityError("ergotropy: density matrix eigenvalue " + std::to_string(v));
        r[static_cast<std::size_t>(k)] = std::max(v, 0.0);
    }
    std::stable_sort(r.begin(), r.end(), std::greater<>());

    ErgotropyReport out;
    out.energy = (rho * h_b).trace().real();
    for (Eigen::Index k = 0; k < n; ++k) out.passive_energy += r[static_cast<std::size_t>(k)] * hs.values(k).real();
    out.ergotropy = out.energy - out.passive_energy;
    return out;
}

ComplexMatrix dicke_pair_hamiltonian(double e1, double v) {
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    h(1, 1) = e1 - v;
    h(2, 2) = e1 + v;
    h(3, 3) = 2.0 * e1;
    return h;
}

ErgotropyReport ergotropy_dicke(const ComplexMatrix& rho_b, double e1, double v, TraceHandling trace) {
    if (rho_b.rows() != 4 || rho_b.cols() != 4) throw DimensionError("ergotropy_dicke: rho must be 4x4");
    return ergotropy(rho_b, dicke_pair_hamiltonian(e1, v), trace);
}

}  // namespace qbeit
