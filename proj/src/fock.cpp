#include "qbeit/fock.hpp"

#include "qbeit/collective.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qbeit {

namespace {

struct AtomOps {
    ComplexMatrix raise;     // S+ = sum_j sigma_j^+
    ComplexMatrix number;    // sum_j sigma_j^+ sigma_j^-
    ComplexMatrix exchange;  // sum_{i<j} (sigma_i^+ sigma_j^- + h.c.)
};

AtomOps atom_ops(const SystemSpec& s) {
    const int d = s.atom_dim();
    AtomOps ops{ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d)};
    const int N = s.n_atoms;
    if (s.basis == Basis::SymmetricDicke) {
        for (int k = 0; k <= N; ++k) {
            ops.number(k, k) = double(k);
            ops.exchange(k, k) = double(k) * double(N - k);
            if (k < N) ops.raise(k + 1, k) = std::sqrt(double(k + 1) * double(N - k));
        }
        return ops;
    }
    for (int b = 0; b < d; ++b) {
        ops.number(b, b) = double(std::popcount(unsigned(b)));
        for (int j = 0; j < N; ++j) {
            const int mj = 1 << j;
            if (!(b & mj)) ops.raise(b | mj, b) = 1.0;
            // sigma_i^+ sigma_j^- hops an excitation from j to i.
            for (int i = 0; i < N; ++i) {
                const int mi = 1 << i;
                if (i != j && (b & mj) && !(b & mi)) ops.exchange((b & ~mj) | mi, b) = 1.0;
            }
        }
    }
    return ops;
}

ComplexMatrix number_cavity(int n_max) {
    ComplexMatrix n = ComplexMatrix::Zero(n_max + 1, n_max + 1);
    for (int k = 0; k <= n_max; ++k) n(k, k) = double(k);
    return n;
}

// Symmetric k-excitation atomic state in the spec's basis.
ComplexVector symmetric_atoms(const SystemSpec& s, int k) {
    if (k < 0 || k > s.n_atoms) throw std::invalid_argument("initial state: k_excited out of range");
    ComplexVector v = ComplexVector::Zero(s.atom_dim());
    if (s.basis == Basis::SymmetricDicke) {
        v(k) = 1.0;
        return v;
    }
    for (int b = 0; b < s.atom_dim(); ++b)
        if (std::popcount(unsigned(b)) == k) v(b) = 1.0;
    v.normalize();
    return v;
}

ComplexMatrix hamiltonian_with(const SystemSpec& s, double cavity_freq, Complex level) {
    const AtomOps ops = atom_ops(s);
    const ComplexMatrix a = annihilation(s.n_max);
    const ComplexMatrix id_c = ComplexMatrix::Identity(s.n_max + 1, s.n_max + 1);
    const ComplexMatrix id_a = ComplexMatrix::Identity(s.atom_dim(), s.atom_dim());
    const ComplexMatrix atoms = level * ops.number + s.V * ops.exchange;
    ComplexMatrix coupling = kron(a, ops.raise);
    coupling += coupling.adjoint().eval();
    return cavity_freq * kron(number_cavity(s.n_max), id_a) + kron(id_c, atoms) + s.J * coupling;
}

}  // namespace

int SystemSpec::atom_dim() const {
    return basis == Basis::SymmetricDicke ? n_atoms + 1 : (1 << n_atoms);
}

int SystemSpec::dim() const { return (n_max + 1) * atom_dim(); }

void SystemSpec::validate(const NumericPolicy& policy) const {
    if (n_atoms < 1) throw std::invalid_argument("SystemSpec: n_atoms must be >= 1");
    if (n_atoms > 12) throw DimensionError("SystemSpec: n_atoms > 12 is outside desk scale");
    if (n_max < 0) throw std::invalid_argument("SystemSpec: n_max must be >= 0");
    if (!(J >= 0.0)) throw std::invalid_argument("SystemSpec: J must be >= 0");
    if (x1.imag() > 0.0) throw std::invalid_argument("SystemSpec: Im(x1) > 0 is gain, not loss");
    if (dim() > policy.max_dim_expm) {
        const int suggest = policy.max_dim_expm / atom_dim() - 1;
        throw DimensionError("SystemSpec: dimension " + std::to_string(dim()) + " exceeds " +
                             std::to_string(policy.max_dim_expm) + "; use n_max <= " + std::to_string(suggest) +
                             (basis == Basis::FullTensor ? " or the symmetric Dicke basis" : ""));
    }
}

double PulseSpec::rabi(double t) const {
    const double u = (t - t_c) / sigma;
    return Omega0 * std::exp(-0.5 * u * u);
}

void PulseSpec::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("PulseSpec: sigma must be > 0");
    if (!(Omega0 >= 0.0)) throw std::invalid_argument("PulseSpec: Omega0 must be >= 0");
}

ComplexMatrix build_hamiltonian(const SystemSpec& spec, const NumericPolicy& policy) {
    spec.validate(policy);
    return hamiltonian_with(spec, spec.omega, spec.x1);
}

ComplexMatrix battery_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    const AtomOps ops = atom_ops(spec);
    return spec.x1.real() * ops.number + spec.V * ops.exchange;
}

ComplexVector initial_state(const SystemSpec& spec, int n_photons, int k_excited) {
    spec.validate();
    if (n_photons < 0 || n_photons > spec.n_max) throw std::invalid_argument("initial_state: photon number outside truncation");
    if (spec.J != 0.0 && spec.n_max < n_photons + k_excited + 4)
        throw std::invalid_argument("initial_state: n_max must be >= total excitation + 4 (got n_max = " +
                                    std::to_string(spec.n_max) + ")");
    ComplexVector cav = ComplexVector::Zero(spec.n_max + 1);
    cav(n_photons) = 1.0;
    return kron(cav, symmetric_atoms(spec, k_excited));
}

ComplexVector initial_coherent(const SystemSpec& spec, Complex alpha, int k_excited) {
    spec.validate();
    ComplexVector cav = coherent_state(alpha, spec.n_max);
    cav.normalize();
    return kron(cav, symmetric_atoms(spec, k_excited));
}

ComplexVector evolve(const SystemSpec& spec, const ComplexVector& psi0, double t) {
    if (psi0.size() != spec.dim()) throw DimensionError("evolve: state dimension does not match spec");
    return expm(build_hamiltonian(spec), -kI * t) * psi0;
}

std::vector<ComplexVector> evolve_series(const SystemSpec& spec, const ComplexVector& psi0,
                                         const Eigen::VectorXd& grid) {
    if (psi0.size() != spec.dim()) throw DimensionError("evolve_series: state dimension does not match spec");
    TimeSeries{grid, grid}.validate();
    std::vector<ComplexVector> out;
    out.reserve(std::size_t(grid.size()));
    if (grid.size() == 0) return out;
    const ComplexMatrix h = build_hamiltonian(spec);
    ComplexVector psi = grid(0) == 0.0 ? psi0 : ComplexVector(expm(h, -kI * grid(0)) * psi0);
    out.push_back(psi);
    if (grid.size() == 1) return out;
    const ComplexMatrix step = expm(h, -kI * (grid(1) - grid(0)));
    for (Eigen::Index k = 1; k < grid.size(); ++k) {
        psi = step * psi;
        out.push_back(psi);
    }
    return out;
}

ComplexMatrix rotating_frame_hamiltonian(const SystemSpec& spec, const PulseSpec& pulse) {
    spec.validate();
    pulse.validate();
    return hamiltonian_with(spec, spec.omega - pulse.omega_L, spec.x1 - pulse.omega_L);
}

ComplexMatrix drive_operator(const SystemSpec& spec) {
    const AtomOps ops = atom_ops(spec);
    const ComplexMatrix id_c = ComplexMatrix::Identity(spec.n_max + 1, spec.n_max + 1);
    return 0.5 * kron(id_c, ComplexMatrix(ops.raise + ops.raise.adjoint()));
}

double max_pulsed_step(const SystemSpec& spec, const PulseSpec& pulse) {
    const ComplexMatrix h = rotating_frame_hamiltonian(spec, pulse) + pulse.Omega0 * drive_operator(spec);
    double h_max = 0.01 * pulse.sigma;
    if (pulse.Omega0 > 0.0) h_max = std::min(h_max, 0.01 / pulse.Omega0);
    const double hn = max_norm(h);
    if (hn > 0.0) h_max = std::min(h_max, 0.05 / hn);
    return h_max;
}

std::vector<ComplexVector> evolve_pulsed(const SystemSpec& spec, const PulseSpec& pulse,
                                         const ComplexVector& psi0, const Eigen::VectorXd& grid, int substeps) {
    if (psi0.size() != spec.dim()) throw DimensionError("evolve_pulsed: state dimension does not match spec");
    TimeSeries{grid, grid}.validate();
    const ComplexMatrix h0 = rotating_frame_hamiltonian(spec, pulse);
    const ComplexMatrix d = drive_operator(spec);
    const double h_lim = max_pulsed_step(spec, pulse);

    std::vector<ComplexVector> out;
    out.reserve(std::size_t(grid.size()));
    out.push_back(psi0);
    if (grid.size() < 2) return out;
    const double dt = grid(1) - grid(0);
    if (substeps <= 0) {
        substeps = int(std::ceil(dt / h_lim * (1.0 + 1e-12)));
    } else if (dt / substeps > h_lim * (1.0 + 1e-12)) {
        throw std::invalid_argument("evolve_pulsed: step " + std::to_string(dt / substeps) +
                                    " exceeds the stability limit " + std::to_string(h_lim));
    }
    const double h = dt / substeps;

    auto rhs = [&](double t, const ComplexVector& psi) -> ComplexVector {
        return -kI * (h0 * psi + pulse.rabi(t) * (d * psi));
    };
    ComplexVector psi = psi0;
    double t = grid(0);
    for (Eigen::Index k = 1; k < grid.size(); ++k) {
        for (int s = 0; s < substeps; ++s) {
            const ComplexVector k1 = rhs(t, psi);
            const ComplexVector k2 = rhs(t + 0.5 * h, psi + 0.5 * h * k1);
            const ComplexVector k3 = rhs(t + 0.5 * h, psi + 0.5 * h * k2);
            const ComplexVector k4 = rhs(t + h, psi + h * k3);
            psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        t = grid(k);
        out.push_back(psi);
    }
    return out;
}

ComplexMatrix battery_state(const SystemSpec& spec, const ComplexVector& psi) {
    return partial_trace_pure(psi, {spec.n_max + 1, spec.atom_dim()}, Keep::B);
}

ErgotropyReport battery_report(const SystemSpec& spec, const ComplexVector& psi) {
    const ComplexMatrix rho = battery_state(spec, psi);
    if (spec.basis == Basis::SymmetricDicke && spec.n_atoms == 2) {
        // {G, q, E} -> {G, p, q, E}
        const int map[3] = {0, 2, 3};
        ComplexMatrix r4 = ComplexMatrix::Zero(4, 4);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r4(map[i], map[j]) = rho(i, j);
        return ergotropy_dicke(r4, spec.x1.real(), spec.V);
    }
    return ergotropy(rho, battery_hamiltonian(spec));
}

Observables observables(const SystemSpec& spec, const std::vector<ComplexVector>& states,
                        const Eigen::VectorXd& grid) {
    if (std::size_t(grid.size()) != states.size()) throw DimensionError("observables: grid and state counts differ");
    Observables o{{grid, Eigen::VectorXd(grid.size())}, {grid, Eigen::VectorXd(grid.size())}};
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        const ErgotropyReport r = battery_report(spec, states[std::size_t(k)]);
        o.energy.y(k) = r.energy;
        o.ergotropy.y(k) = r.ergotropy;
    }
    return o;
}

double truncation_leakage(const SystemSpec& spec, const ComplexVector& psi) {
    const int d = spec.atom_dim();
    double p = 0.0;
    for (int n = std::max(0, spec.n_max - 1); n <= spec.n_max; ++n) p += psi.segment(n * d, d).squaredNorm();
    return p;
}

double atomic_population(const SystemSpec& spec, const ComplexVector& psi, int index) {
    const int d = spec.atom_dim();
    if (index < 0 || index >= d) throw std::out_of_range("atomic_population: index out of range");
    double p = 0.0;
    for (int n = 0; n <= spec.n_max; ++n) p += std::norm(psi(n * d + index));
    return p;
}

std::pair<double, double> stark_levels(double delta, double omega_rabi) {
    const double r = std::sqrt(delta * delta + omega_rabi * omega_rabi);
    return {0.5 * (delta + r), 0.5 * (delta - r)};
}

}  // namespace qbeit
