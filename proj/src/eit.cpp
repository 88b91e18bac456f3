#include "qbeit/eit.hpp"

#include <cmath>
#include <stdexcept>

namespace qbeit {

namespace {

void check_finite(const EitParams& p) {
    for (double v : {p.omega_d, p.omega_e, p.omega_m, p.Omega1, p.Omega2, p.omega_a, p.omega_b, p.kappa})
        if (!std::isfinite(v)) throw std::invalid_argument("EitParams: non-finite parameter");
    if (p.Omega1 < 0.0 || p.Omega2 < 0.0) throw std::invalid_argument("EitParams: negative Rabi frequency");
    if (p.kappa < 0.0) throw std::invalid_argument("EitParams: kappa must be >= 0");
}

Complex shift(const EitParams& p) { return {p.omega_d, -p.kappa}; }

// Unnormalised eigenvector of H0 for eigenvalue x, from the row structure of
// (H0 - x) v = 0:  v ~ [(x-w1)(x-w2) - O2^2, O1 (x-w2), O1 O2].
Eigen::Vector3cd appendix_vector(const EitParams& p, Complex x) {
    const Complex w1 = p.omega_1();
    const Complex w2 = p.omega_2();
    return {(x - w1) * (x - w2) - p.Omega2 * p.Omega2, p.Omega1 * (x - w2), p.Omega1 * p.Omega2};
}

}  // namespace

void EitParams::validate() const {
    check_finite(*this);
    if (!(Omega1 > 0.0)) throw std::invalid_argument("EitParams: Omega1 must be > 0");
}

EitParams EitParams::reference_defaults(double omega_c) {
    EitParams p;
    p.omega_b = 0.5;
    p.omega_a = p.omega_b + omega_c;
    return p;
}

ComplexMatrix build_h0(const EitParams& p) {
    check_finite(p);
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 1) = h(1, 0) = p.Omega1;
    h(1, 2) = h(2, 1) = p.Omega2;
    h(1, 1) = p.omega_1();
    h(2, 2) = p.omega_2();
    return h;
}

ComplexMatrix build_h_eff(const EitParams& p) {
    return build_h0(p) + shift(p) * ComplexMatrix::Identity(3, 3);
}

EitSpectrum spectrum_exact(const EitParams& p) {
    p.validate();
    const EigenSystem es = eig_general(build_h0(p));

    EitSpectrum out;
    for (int j = 0; j < 3; ++j) {
        out.x[j] = es.values(j) + shift(p);
        out.states[j] = es.vectors.col(j);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(out.x[i] - out.x[j]) < 1e-9) out.degenerate = true;

    double im_lo = std::abs(out.x[0].imag()), im_hi = im_lo;
    for (int j = 1; j < 3; ++j) {
        im_lo = std::min(im_lo, std::abs(out.x[j].imag()));
        im_hi = std::max(im_hi, std::abs(out.x[j].imag()));
    }
    const bool im_uninformative = (im_hi - im_lo) <= 1e-12 * std::max(1.0, max_norm(build_h0(p)));

    int best = 0;
    if (out.degenerate || im_uninformative) {
        for (int j = 1; j < 3; ++j)
            if (std::abs(out.states[j](1)) < std::abs(out.states[best](1))) best = j;
    } else {
        for (int j = 1; j < 3; ++j)
            if (std::abs(out.x[j].imag()) < std::abs(out.x[best].imag())) best = j;
    }
    out.dark_index = best;

    const double Omega = std::sqrt(p.Omega_sq());
    out.expansion_ratio = std::max(std::abs(p.omega_1()), std::abs(p.omega_2())) / Omega;
    return out;
}

EitSpectrum spectrum_perturbative(const EitParams& p) {
    p.validate();
    const double O2sq = p.Omega_sq();
    if (!(O2sq > 0.0)) throw std::invalid_argument("spectrum_perturbative: Omega = 0");
    const double Omega = std::sqrt(O2sq);
    const double r1 = p.Omega1 * p.Omega1 / O2sq;
    const double r2 = p.Omega2 * p.Omega2 / O2sq;
    const Complex w1 = p.omega_1();
    const Complex w2 = p.omega_2();

    // Eigenvalues of H0 to first order in (w1, w2) / Omega.
    const std::array<Complex, 3> h0_roots = {
        r1 * w2,
        Omega + 0.5 * (w1 + r2 * w2),
        -Omega + 0.5 * (w1 + r2 * w2),
    };

    // Zeroth-order eigenvectors, used where the first-order form vanishes.
    const double s2 = std::sqrt(2.0) * Omega;
    const std::array<Eigen::Vector3cd, 3> zeroth = {
        Eigen::Vector3cd(-p.Omega2 / Omega, 0.0, p.Omega1 / Omega),
        Eigen::Vector3cd(p.Omega1 / s2, Omega / s2, p.Omega2 / s2),
        Eigen::Vector3cd(p.Omega1 / s2, -Omega / s2, p.Omega2 / s2),
    };

    EitSpectrum out;
    for (int j = 0; j < 3; ++j) {
        out.x[j] = h0_roots[j] + shift(p);
        Eigen::Vector3cd v = appendix_vector(p, h0_roots[j]);
        const double n = v.norm();  // N_i^2 = sum of squared moduli
        out.states[j] = n > 1e-12 * O2sq ? Eigen::Vector3cd(v / n) : zeroth[j];
    }
    out.dark_index = 0;
    out.expansion_ratio = std::max(std::abs(w1), std::abs(w2)) / Omega;
    return out;
}

std::array<Complex, 3> cubic_first_order_roots(const EitParams& p) {
    p.validate();
    const Complex w1 = p.omega_1();
    const Complex w2 = p.omega_2();
    const double O2sq = p.Omega_sq();
    const double O1sq = p.Omega1 * p.Omega1;
    const Complex disc = std::sqrt((w1 - w2) * (w1 - w2) + 4.0 * O2sq);
    const Complex wp = 0.5 * ((w1 + w2) + disc);
    const Complex wm = 0.5 * ((w1 + w2) - disc);
    const Complex a1 = -O1sq / (wp * wm);
    const Complex a2 = -O1sq / (wp * (wp - wm));
    const Complex a3 = O1sq / (wm * (wp - wm));
    return {a1 * w2 + shift(p), wp + a2 * w2 + shift(p), wm + a3 * w2 + shift(p)};
}

EffectiveBattery effective_battery(const EitParams& p, bool with_eit) {
    if (!with_eit) {
        check_finite(p);
        return {Complex(p.omega_e, -p.kappa), Eigen::Vector3cd(0.0, 1.0, 0.0)};
    }
    const EitSpectrum s = spectrum_exact(p);
    return {s.x[s.dark_index], s.states[s.dark_index]};
}

std::vector<OmegaCPoint> sweep_omega_c(const EitParams& p, const std::vector<double>& omega_a_values) {
    std::vector<OmegaCPoint> out;
    out.reserve(omega_a_values.size());
    for (double wa : omega_a_values) {
        EitParams q = p;
        q.omega_a = wa;
        const EitSpectrum s = spectrum_exact(q);
        out.push_back({q.omega_c(), s.x[s.dark_index].real()});
    }
    return out;
}

}  // namespace qbeit
