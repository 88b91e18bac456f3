#include "qbeit/collective.hpp"

#include <cmath>
#include <numbers>

namespace qbeit {

HpParams hp_hamiltonian(int n_atoms, double omega, Complex x1, double J) {
    if (n_atoms < 1) throw std::invalid_argument("hp_hamiltonian: n_atoms must be >= 1");
    if (!(J >= 0.0)) throw std::invalid_argument("hp_hamiltonian: J must be >= 0");
    return {omega, x1, J * std::sqrt(double(n_atoms))};
}

WeiNormanGauge wn_gauge(double J_N, double t) {
    const double th = J_N * t;
    const double k = std::round(th / std::numbers::pi - 0.5);
    if (std::abs(th - (k + 0.5) * std::numbers::pi) < 1e-6)
        throw SingularGaugeError("wn_gauge: J_N t = " + std::to_string(th) +
                                 " is at a tan/log singularity; use coherent_evolution");
    const double c = std::cos(th);
    // Complex log keeps g3 finite past the first singularity (cos < 0).
    return {-kI * std::tan(th), -0.5 * kI * std::sin(2.0 * th), -std::log(Complex(c, 0.0))};
}

CoherentPair coherent_evolution(int n_atoms, double J_N, double t) {
    if (n_atoms < 1) throw std::invalid_argument("coherent_evolution: n_atoms must be >= 1");
    const double r = std::sqrt(double(n_atoms));
    return {r * std::cos(J_N * t), -kI * r * std::sin(J_N * t)};
}

double hp_excitation_fraction(double J_N, double t) {
    const double s = std::sin(J_N * t);
    return s * s;
}

bool hp_valid(double J_N, double t) { return hp_excitation_fraction(J_N, t) <= 0.5; }

int oracle_dim(int n_atoms) {
    const double n = n_atoms;
    return 10 + int(std::ceil(n + 6.0 * std::sqrt(n)));
}

ComplexVector coherent_state(Complex alpha, int n_max) {
    if (n_max < 0) throw std::invalid_argument("coherent_state: n_max must be >= 0");
    ComplexVector v(n_max + 1);
    Complex term = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) term *= alpha / std::sqrt(double(n));
        v(n) = term;
    }
    return v;
}

namespace {

struct TwoMode {
    ComplexMatrix a, b;
};

TwoMode two_mode_ops(int n_max) {
    const ComplexMatrix a1 = annihilation(n_max);
    const ComplexMatrix id = ComplexMatrix::Identity(n_max + 1, n_max + 1);
    return {kron(a1, id), kron(id, a1)};
}

}  // namespace

ComplexMatrix beam_splitter_hamiltonian(double J_N, int n_max) {
    const TwoMode m = two_mode_ops(n_max);
    const ComplexMatrix ab = m.a * m.b.adjoint();
    return J_N * (ab + ab.adjoint());
}

namespace {

// exp(g a b^dag) (to_b) or exp(g a^dag b) on the truncated space. Both are
// nilpotent there, so the series is summed exactly along each ladder.
ComplexMatrix ladder_exp(Complex g, int n_max, bool to_b) {
    const int d = n_max + 1;
    ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
    for (int na = 0; na <= n_max; ++na)
        for (int nb = 0; nb <= n_max; ++nb) {
            const int src = na * d + nb;
            Complex c = 1.0;
            out(src, src) = 1.0;
            for (int k = 1;; ++k) {
                const int from = to_b ? na : nb, into = to_b ? nb : na;
                if (k > from || into + k > n_max) break;
                c *= g * std::sqrt(double(from - k + 1) * double(into + k)) / double(k);
                const int dst = to_b ? (na - k) * d + (nb + k) : (na + k) * d + (nb - k);
                out(dst, src) = c;
            }
        }
    return out;
}

}  // namespace

ComplexMatrix wn_propagator(double J_N, double t, int n_max) {
    const WeiNormanGauge g = wn_gauge(J_N, t);
    const int d = n_max + 1;
    ComplexVector phase(d * d);
    for (int na = 0; na <= n_max; ++na)
        for (int nb = 0; nb <= n_max; ++nb) phase(na * d + nb) = std::exp(g.g3 * double(nb - na));
    return ladder_exp(g.g1, n_max, true) * ladder_exp(g.g2, n_max, false) * phase.asDiagonal();
}

HpBatteryReport hp_battery(int n_atoms, const HpParams& p, double t, int n_max) {
    const CoherentPair cp = coherent_evolution(n_atoms, p.J_N, t);
    const double e1 = p.x1.real();
    const ComplexVector psi = coherent_state(cp.beta_atoms, n_max);
    ComplexMatrix hb = ComplexMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n) hb(n, n) = e1 * double(n);
    const ErgotropyReport r = ergotropy(psi * psi.adjoint(), hb);
    return {e1 * std::norm(cp.beta_atoms), r.ergotropy, hp_valid(p.J_N, t)};
}

}  // namespace qbeit
