#include "qbeit/scenario.hpp"

#include "qbeit/collective.hpp"
#include "qbeit/eit.hpp"
#include "qbeit/excitation_transfer.hpp"
#include "qbeit/jaynes_cummings.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace qbeit {

namespace {

struct ParamDef {
    const char* name;
    bool integer;
};

const ParamDef kParamDefs[] = {
    {"omega", false},  {"J", false},       {"n", true},       {"alpha", false},    {"beta", false},
    {"omega_d", false}, {"omega_e", false}, {"omega_m", false}, {"Omega1", false},  {"Omega2", false},
    {"omega_a", false}, {"omega_b", false}, {"omega_c", false}, {"kappa", false},   {"n_atoms", true},
    {"n_max", true},    {"V", false},       {"photons", true},  {"excited", true},  {"Omega0", false},
    {"t_c", false},     {"sigma", false},   {"omega_L", false},
};

// Reference values of the physical inputs; a run that changes any of them is
// off the reference set and skips the EIT suppression-ratio check.
const std::map<std::string, double> kReferenceValues = {
    {"omega", 1.0},   {"J", 0.5},       {"omega_d", 0.25}, {"omega_e", 1.0}, {"omega_m", 0.5}, {"Omega1", 50.0},
    {"Omega2", 5.0},  {"omega_a", 1.0}, {"omega_b", 0.5},  {"omega_c", 0.5}, {"kappa", 0.05},
};

const ParamDef* find_param(const std::string& key) {
    for (const ParamDef& d : kParamDefs)
        if (key == d.name) return &d;
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& raw, const std::string& where) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError(where + ": '" + s + "' is not a finite number");
    return v;
}

int parse_int(const std::string& raw, const std::string& where) {
    const double v = parse_number(raw, where);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(where + ": '" + trim(raw) + "' is not an integer");
    return int(v);
}

std::vector<double> parse_list(const std::string& raw, const std::string& where) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, where));
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

std::string fmt(double v) { return format_double(v); }

template <typename F>
void parallel_for(std::size_t n, int jobs, F&& f) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex m;
    {
        std::vector<std::jthread> pool;
        const std::size_t workers = std::min<std::size_t>(std::size_t(jobs), n);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next++;
                    if (i >= n) return;
                    try {
                        f(i);
                    } catch (...) {
                        std::lock_guard lk(m);
                        if (!err) err = std::current_exception();
                    }
                }
            });
    }
    if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------------------

class Runner {
public:
    Runner(const ScenarioConfig& cfg, const RunOptions& opt) : cfg_(cfg), opt_(opt) { r_.scenario = cfg.name; }

    RunReport finish() && {
        bool ok = true;
        for (const CheckResult& c : r_.checks) ok = ok && c.pass;
        r_.report.set("status", std::string(ok ? "pass" : "fail"));
        return std::move(r_);
    }

    void header(EitMode mode) {
        rep().set("scenario", cfg_.name);
        rep().set("units", "energies and rates in omega, times in 1/omega");
        rep().set("eit", std::string(mode == EitMode::Off ? "off" : mode == EitMode::On ? "on" : "both"));
    }

    double param(const std::string& key, double def) {
        auto it = cfg_.params.find(key);
        const double v = it == cfg_.params.end() ? def : it->second;
        rep().set("param." + key, v);
        return v;
    }
    int iparam(const std::string& key, int def) { return int(param(key, def)); }
    bool has(const std::string& key) const { return cfg_.params.count(key) != 0; }

    bool reference_params() const {
        for (const auto& [k, v] : cfg_.params) {
            auto it = kReferenceValues.find(k);
            if (it != kReferenceValues.end() && it->second != v) return false;
        }
        return true;
    }

    EitParams eit_params() {
        EitParams e;
        e.omega_d = param("omega_d", 0.25);
        e.omega_e = param("omega_e", 1.0);
        e.omega_m = param("omega_m", 0.5);
        e.Omega1 = param("Omega1", 50.0);
        e.Omega2 = param("Omega2", 5.0);
        e.omega_b = param("omega_b", 0.5);
        if (has("omega_c")) {
            if (has("omega_a")) throw ConfigError("[params] set either omega_a or omega_c, not both");
            e.omega_a = e.omega_b + param("omega_c", 0.5);
        } else {
            e.omega_a = param("omega_a", 1.0);
        }
        e.kappa = param("kappa", 0.05);
        e.validate();
        return e;
    }

    EitMode mode(EitMode def) const { return cfg_.eit.value_or(def); }
    Basis basis(Basis def) const { return cfg_.basis.value_or(def); }

    static std::vector<bool> eit_flags(EitMode m) {
        if (m == EitMode::Off) return {false};
        if (m == EitMode::On) return {true};
        return {false, true};
    }
    static std::string panel_name(bool with_eit) { return with_eit ? "eit" : "noeit"; }

    Eigen::VectorXd grid(double def_t_end, double max_dt = 0.0) {
        if (cfg_.t_end && cfg_.lifetimes) throw ConfigError("[grid] set either t_end or lifetimes, not both");
        const double t_end = cfg_.t_end.value_or(def_t_end);
        Eigen::Index n = cfg_.n_points.value_or(2000);
        if (max_dt > 0.0) n = std::max<Eigen::Index>(n, Eigen::Index(std::ceil(t_end / max_dt)) + 1);
        return uniform_grid(t_end, n);
    }

    void note_grid(const std::string& prefix, const Eigen::VectorXd& t) {
        rep().set(prefix + "t_end", t(t.size() - 1));
        rep().set(prefix + "n_points", int(t.size()));
    }

    void fit(const std::string& panel, NamedSeries& s) {
        const std::string base = "panel." + panel;
        try {
            const DecayFit f = fit_envelope(s.series);
            s.fit = f;
            rep().set(base + ".rate." + s.name, f.rate);
            rep().set(base + ".amplitude." + s.name, f.amplitude);
            rep().set(base + ".peaks." + s.name, f.peaks_used);
            rep().set(base + ".log_residual." + s.name, f.residual);
        } catch (const InsufficientOscillation&) {
            rep().set(base + ".rate." + s.name, "insufficient_oscillation");
        }
    }

    void check(const std::string& name, bool pass, const std::string& detail) {
        r_.checks.push_back({name, pass, detail});
        rep().set("check." + name, std::string(pass ? "pass" : "fail"));
        if (!detail.empty()) rep().set("check." + name + ".detail", detail);
    }

    // 0 <= W <= E holds when the battery Hamiltonian is positive semidefinite
    // with a zero ground level.
    void check_w_bounds(const std::string& panel, const TimeSeries& e, const TimeSeries& w) {
        double worst = 0.0;
        for (Eigen::Index k = 0; k < e.size(); ++k) {
            worst = std::max(worst, -w.y(k));
            worst = std::max(worst, w.y(k) - e.y(k));
        }
        check(panel + ".ergotropy_bounds", worst <= 1e-9, "max violation " + fmt(worst));
    }

    void rate_ratio(const std::string& curve) {
        const auto a = r_.rate("noeit", curve), b = r_.rate("eit", curve);
        if (!a || !b) return;
        const double ratio = *a / *b;
        rep().set("ratio." + curve, ratio);
        if (reference_params()) check("rate_ratio." + curve, ratio >= 50.0, "noeit/eit = " + fmt(ratio));
    }

    Panel& panel(const std::string& name, const std::string& x_name = "t") {
        r_.panels.push_back({name, x_name, {}});
        return r_.panels.back();
    }

    Report& rep() { return r_.report; }
    RunReport& result() { return r_; }
    const ScenarioConfig& cfg() const { return cfg_; }
    const RunOptions& opt() const { return opt_; }

private:
    const ScenarioConfig& cfg_;
    const RunOptions& opt_;
    RunReport r_;
};

std::string vlabel(double v) { return "V" + fmt(v); }

std::vector<double> sweep_values(const ScenarioConfig& cfg, std::vector<double> def) {
    return cfg.sweep ? cfg.sweep->values : def;
}

// --- single atom ----------------------------------------------------------

void run_jc(Runner& R, bool probability_view, int def_n, double def_alpha, double def_beta) {
    const EitMode mode = R.mode(EitMode::Both);
    R.header(mode);
    const EitParams e = R.eit_params();
    const double omega = R.param("omega", 1.0);
    const double J = R.param("J", 0.5);
    const int n = R.iparam("n", def_n);
    const double alpha = R.param("alpha", def_alpha);
    const double beta = R.param("beta", def_beta);
    if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-9)
        throw ConfigError("[params] alpha^2 + beta^2 must equal 1");
    const Eigen::VectorXd t = R.grid(100.0);
    R.note_grid("grid.", t);

    for (bool with : Runner::eit_flags(mode)) {
        const std::string pn = Runner::panel_name(with);
        const EffectiveBattery b = effective_battery(e, with);
        R.rep().set("panel." + pn + ".x1_re", b.x1.real());
        R.rep().set("panel." + pn + ".x1_im", b.x1.imag());
        const EnergySeries s = energy_and_ergotropy_series({b, omega, J, n}, alpha, beta, t);
        Panel& P = R.panel(pn);
        if (probability_view) {
            P.series = {{"p_excited", s.p_excited, {}}, {"p_ground", s.p_ground, {}}};
            double worst = 0.0;
            for (Eigen::Index k = 0; k < t.size(); ++k)
                worst = std::max(worst, s.p_excited.y(k) + s.p_ground.y(k) - 1.0);
            R.check(pn + ".probability_bound", worst <= 1e-9, "max excess " + fmt(worst));
        } else {
            P.series = {{"energy", s.energy, {}}, {"ergotropy", s.ergotropy, {}}};
            R.check_w_bounds(pn, s.energy, s.ergotropy);
        }
        for (NamedSeries& ns : P.series) R.fit(pn, ns);
    }
    if (mode == EitMode::Both) R.rate_ratio(probability_view ? "p_excited" : "ergotropy");
}

void run_fig4(Runner& R) {
    const EitMode mode = R.mode(EitMode::On);
    if (mode != EitMode::On) throw ConfigError("[scenario] fig4 sweeps the dark-state level and needs eit = on");
    R.header(mode);
    const EitParams e = R.eit_params();
    const double J = R.param("J", 0.5);
    std::vector<double> wc;
    for (int k = 0; k < 20; ++k) wc.push_back(0.1 + (2.0 - 0.1) * k / 19.0);
    wc = sweep_values(R.cfg(), wc);
    const Eigen::VectorXd t = R.grid(100.0);
    R.note_grid("grid.", t);

    struct Point {
        double e1, gamma, max_w;
    };
    std::vector<Point> pts(wc.size());
    parallel_for(wc.size(), R.opt().jobs, [&](std::size_t i) {
        EitParams q = e;
        q.omega_a = q.omega_b + wc[i];
        const EffectiveBattery b = effective_battery(q, true);
        // Resonant cavity, charging from |1>|g>.
        const EnergySeries s = energy_and_ergotropy_series({b, b.energy(), J, 0}, 0.0, 1.0, t);
        pts[i] = {b.energy(), b.gamma(), s.ergotropy.y.maxCoeff()};
    });

    const Eigen::Index m = Eigen::Index(wc.size());
    Eigen::VectorXd x(m), e1(m), g(m), w(m);
    bool increasing = true;
    for (Eigen::Index i = 0; i < m; ++i) {
        x(i) = wc[std::size_t(i)];
        e1(i) = pts[std::size_t(i)].e1;
        g(i) = pts[std::size_t(i)].gamma;
        w(i) = pts[std::size_t(i)].max_w;
        if (i > 0 && !(w(i) > w(i - 1))) increasing = false;
        const std::string key = "sweep." + std::to_string(i);
        R.rep().set(key + ".omega_c", x(i));
        R.rep().set(key + ".E1", e1(i));
        R.rep().set(key + ".max_ergotropy", w(i));
    }
    Panel& P = R.panel("sweep", "omega_c");
    P.series = {{"E1", {x, e1}, {}}, {"gamma", {x, g}, {}}, {"max_ergotropy", {x, w}, {}}};
    R.check("max_ergotropy_increasing_in_omega_c", increasing, "");
}

// --- N atoms, one photon --------------------------------------------------

void run_transfer(Runner& R) {
    const EitMode mode = R.mode(EitMode::Both);
    R.header(mode);
    const EitParams e = R.eit_params();
    const int N = R.iparam("n_atoms", 3);
    const double omega = R.param("omega", 1.0);
    const double J = R.param("J", 0.5);
    const Eigen::VectorXd t = R.grid(100.0);
    R.note_grid("grid.", t);

    for (bool with : Runner::eit_flags(mode)) {
        const std::string pn = Runner::panel_name(with);
        const EffectiveBattery b = effective_battery(e, with);
        R.rep().set("panel." + pn + ".x1_re", b.x1.real());
        R.rep().set("panel." + pn + ".x1_im", b.x1.imag());
        const TimeSeries en = battery_energy(N, omega, b.x1, J, t);
        TimeSeries w{t, Eigen::VectorXd(t.size())};
        ComplexMatrix hb = ComplexMatrix::Identity(N + 1, N + 1) * b.energy();
        hb(0, 0) = 0.0;
        for (Eigen::Index k = 0; k < t.size(); ++k)
            w.y(k) = ergotropy(reduced_density_n(amplitudes(N, omega, b.x1, J, t(k))), hb).ergotropy;
        Panel& P = R.panel(pn);
        P.series = {{"energy", en, {}}, {"ergotropy", w, {}}};
        R.check_w_bounds(pn, en, w);
        for (NamedSeries& ns : P.series) R.fit(pn, ns);
    }
    if (mode == EitMode::Both) R.rate_ratio("energy");
}

// --- Fock-space scenarios ---------------------------------------------------

struct FockRun {
    TimeSeries energy, ergotropy;
    double leakage = 0.0;
};

FockRun fock_run(const SystemSpec& spec, const ComplexVector& psi0, const Eigen::VectorXd& t) {
    const std::vector<ComplexVector> states = evolve_series(spec, psi0, t);
    Observables o = observables(spec, states, t);
    double leak = 0.0;
    for (const ComplexVector& s : states) leak = std::max(leak, truncation_leakage(spec, s));
    return {std::move(o.energy), std::move(o.ergotropy), leak};
}

bool battery_psd(const SystemSpec& spec) {
    return eig_hermitian(battery_hamiltonian(spec)).values.real().minCoeff() >= -1e-12;
}

void run_fock_decay(Runner& R, int def_atoms, int def_photons, bool with_hp) {
    const EitMode mode = R.mode(EitMode::Both);
    R.header(mode);
    const EitParams e = R.eit_params();
    SystemSpec base;
    base.n_atoms = R.iparam("n_atoms", def_atoms);
    const int photons = R.iparam("photons", def_photons);
    const int excited = R.iparam("excited", 0);
    base.n_max = R.iparam("n_max", photons + excited + 4);
    base.omega = R.param("omega", 1.0);
    base.J = R.param("J", 0.5);
    base.V = R.param("V", 0.0);
    base.basis = R.basis(Basis::SymmetricDicke);
    const double lifetimes = R.cfg().lifetimes.value_or(1.0);
    R.rep().set("grid.lifetimes", lifetimes);

    const std::vector<bool> flags = Runner::eit_flags(mode);
    std::vector<FockRun> runs(flags.size());
    std::vector<Eigen::VectorXd> grids(flags.size());
    std::vector<EffectiveBattery> bats(flags.size());
    for (std::size_t i = 0; i < flags.size(); ++i) {
        bats[i] = effective_battery(e, flags[i]);
        // One amplitude lifetime 1/gamma, sampled no coarser than 0.05/omega.
        grids[i] = R.grid(lifetimes / bats[i].gamma(), 0.05);
    }
    parallel_for(flags.size(), R.opt().jobs, [&](std::size_t i) {
        SystemSpec s = base;
        s.x1 = bats[i].x1;
        runs[i] = fock_run(s, initial_state(s, photons, excited), grids[i]);
    });

    for (std::size_t i = 0; i < flags.size(); ++i) {
        const std::string pn = Runner::panel_name(flags[i]);
        R.rep().set("panel." + pn + ".x1_re", bats[i].x1.real());
        R.rep().set("panel." + pn + ".x1_im", bats[i].x1.imag());
        R.note_grid("panel." + pn + ".", grids[i]);
        R.rep().set("panel." + pn + ".truncation_leakage", runs[i].leakage);
        SystemSpec s = base;
        s.x1 = bats[i].x1;
        if (battery_psd(s)) R.check_w_bounds(pn, runs[i].energy, runs[i].ergotropy);
        R.check(pn + ".truncation", runs[i].leakage <= 1e-6, "max top-two-level population " + fmt(runs[i].leakage));
        Panel& P = R.panel(pn);
        P.series = {{"energy", runs[i].energy, {}}, {"ergotropy", runs[i].ergotropy, {}}};
        for (NamedSeries& ns : P.series) R.fit(pn, ns);
    }
    if (mode == EitMode::Both) R.rate_ratio("energy");

    if (with_hp) {
        // Dissipation-free collective reference: coherent cavity |sqrt(N)>,
        // resonant cavity, HP mean fields against exact Dicke numerics.
        EitParams e0 = e;
        e0.kappa = 0.0;
        const double e1 = effective_battery(e0, true).energy();
        SystemSpec s = base;
        s.basis = Basis::SymmetricDicke;
        s.x1 = e1;
        s.omega = e1;
        s.n_max = oracle_dim(s.n_atoms);
        const HpParams hp = hp_hamiltonian(s.n_atoms, s.omega, s.x1, s.J);
        const Eigen::VectorXd t = uniform_grid(std::numbers::pi / hp.J_N, 2000);
        const std::vector<ComplexVector> states =
            evolve_series(s, initial_coherent(s, std::sqrt(double(s.n_atoms)), 0), t);
        const Observables o = observables(s, states, t);
        TimeSeries e_hp{t, Eigen::VectorXd(t.size())}, w_hp{t, Eigen::VectorXd(t.size())};
        double dev = 0.0;
        for (Eigen::Index k = 0; k < t.size(); ++k) {
            const HpBatteryReport b = hp_battery(s.n_atoms, hp, t(k), s.n_max);
            e_hp.y(k) = b.energy;
            w_hp.y(k) = b.ergotropy;
            if (b.hp_valid) dev = std::max(dev, std::abs(b.energy - o.energy.y(k)));
        }
        R.rep().set("panel.hp.J_N", hp.J_N);
        R.note_grid("panel.hp.", t);
        R.rep().set("panel.hp.max_energy_deviation_valid_region", dev);
        Panel& P = R.panel("hp");
        P.series = {{"energy_fock", o.energy, {}},
                    {"energy_hp", e_hp, {}},
                    {"ergotropy_fock", o.ergotropy, {}},
                    {"ergotropy_hp", w_hp, {}}};
    }
}

double first_major_max_time(const TimeSeries& w) {
    const double top = w.y.maxCoeff();
    for (Eigen::Index i = 1; i + 1 < w.size(); ++i)
        if (w.y(i) >= w.y(i - 1) && w.y(i) >= w.y(i + 1) && w.y(i) >= 0.9 * top) return w.t(i);
    Eigen::Index imax = 0;
    w.y.maxCoeff(&imax);
    return w.t(imax);
}

// Sweep over V; returns ergotropy series per (flag, V) with the flag outer.
std::vector<TimeSeries> v_sweep(Runner& R, const std::vector<bool>& flags, const std::vector<double>& vs,
                                const EitParams& e, SystemSpec base, int photons, const Eigen::VectorXd& t) {
    std::vector<TimeSeries> out(flags.size() * vs.size());
    parallel_for(out.size(), R.opt().jobs, [&](std::size_t idx) {
        const std::size_t fi = idx / vs.size(), vi = idx % vs.size();
        SystemSpec s = base;
        s.x1 = effective_battery(e, flags[fi]).x1;
        s.V = vs[vi];
        out[idx] = fock_run(s, initial_state(s, photons, 0), t).ergotropy;
    });
    return out;
}

void run_fig9(Runner& R) {
    const EitMode mode = R.mode(EitMode::Both);
    R.header(mode);
    const EitParams e = R.eit_params();
    SystemSpec base;
    base.n_atoms = 2;
    const int photons = R.iparam("photons", 2);
    base.n_max = R.iparam("n_max", photons + 4);
    base.omega = R.param("omega", 1.0);
    base.J = R.param("J", 0.5);
    base.basis = R.basis(Basis::SymmetricDicke);
    const std::vector<double> vs = sweep_values(R.cfg(), {0.0, 0.5, 1.0, 2.0});
    const Eigen::VectorXd t = R.grid(20.0);
    R.note_grid("grid.", t);

    const std::vector<bool> flags = Runner::eit_flags(mode);
    const std::vector<TimeSeries> w = v_sweep(R, flags, vs, e, base, photons, t);
    for (std::size_t fi = 0; fi < flags.size(); ++fi) {
        const std::string pn = Runner::panel_name(flags[fi]);
        Panel& P = R.panel(pn);
        std::vector<double> times;
        for (std::size_t vi = 0; vi < vs.size(); ++vi) {
            const TimeSeries& s = w[fi * vs.size() + vi];
            P.series.push_back({"W_" + vlabel(vs[vi]), s, {}});
            times.push_back(first_major_max_time(s));
            R.rep().set("panel." + pn + ".first_max_time." + vlabel(vs[vi]), times.back());
            R.rep().set("panel." + pn + ".max_ergotropy." + vlabel(vs[vi]), s.y.maxCoeff());
        }
        if (flags[fi]) {
            bool ok = true;
            std::string detail;
            for (std::size_t k = 0; k < times.size(); ++k) {
                if (k > 0 && times[k] < times[k - 1]) ok = false;
                detail += (k ? ", " : "") + fmt(times[k]);
            }
            R.check("first_max_time_nondecreasing_in_V", ok, "times " + detail);
        }
    }
}

void run_fig10(Runner& R) {
    const EitMode mode = R.mode(EitMode::On);
    R.header(mode);
    const EitParams e = R.eit_params();
    SystemSpec base;
    base.n_atoms = 3;
    const int photons = R.iparam("photons", 3);
    base.n_max = R.iparam("n_max", photons + 4);
    base.omega = R.param("omega", 1.0);
    base.J = R.param("J", 0.5);
    base.basis = R.basis(Basis::SymmetricDicke);
    const std::vector<double> vs = sweep_values(R.cfg(), {0.0, 0.5, 1.0, 2.0});
    const Eigen::VectorXd t = R.grid(20.0);
    R.note_grid("grid.", t);

    const std::vector<bool> flags = Runner::eit_flags(mode);
    const std::vector<TimeSeries> w = v_sweep(R, flags, vs, e, base, photons, t);
    for (std::size_t fi = 0; fi < flags.size(); ++fi) {
        const std::string pn = Runner::panel_name(flags[fi]);
        Panel& P = R.panel(pn);
        std::vector<double> peaks;
        for (std::size_t vi = 0; vi < vs.size(); ++vi) {
            const TimeSeries& s = w[fi * vs.size() + vi];
            P.series.push_back({"W_" + vlabel(vs[vi]), s, {}});
            peaks.push_back(s.y.maxCoeff());
            R.rep().set("panel." + pn + ".max_ergotropy." + vlabel(vs[vi]), peaks.back());
        }
        if (flags[fi]) {
            bool ok = true;
            std::string detail;
            for (std::size_t k = 0; k < peaks.size(); ++k) {
                if (k > 0 && peaks[k] > peaks[k - 1]) ok = false;
                detail += (k ? ", " : "") + fmt(peaks[k]);
            }
            R.check("max_ergotropy_nonincreasing_in_V", ok, "max W " + detail);
        }
    }

    // Conventional two-level battery: the lossy level e is the excited state,
    // cavity at half the transition frequency, one photon.
    SystemSpec conv;
    conv.n_atoms = 1;
    conv.n_max = 5;
    conv.J = base.J;
    conv.x1 = effective_battery(e, false).x1;
    conv.omega = 0.5 * e.omega_e;
    conv.basis = Basis::SymmetricDicke;
    const FockRun c = fock_run(conv, initial_state(conv, 1, 0), t);
    const double wmax = c.ergotropy.y.maxCoeff();
    R.rep().set("panel.conventional.max_ergotropy", wmax);
    Panel& P = R.panel("conventional");
    P.series = {{"energy", c.energy, {}}, {"ergotropy", c.ergotropy, {}}};
    R.check("conventional.max_ergotropy_bound", wmax <= e.omega_e + 1e-9,
            "max W " + fmt(wmax) + " vs omega_e " + fmt(e.omega_e));
}

void run_fig11(Runner& R) {
    R.header(EitMode::Both);
    const EitParams e = R.eit_params();
    EitParams e0 = e;
    e0.kappa = 0.0;
    const EffectiveBattery b_eit = effective_battery(e, true);
    const EffectiveBattery b_ref = effective_battery(e0, true);
    const EffectiveBattery b_bare = effective_battery(e, false);

    PulseSpec pulse;
    pulse.t_c = R.param("t_c", 1.6);
    pulse.sigma = R.param("sigma", 0.8);
    // Default peak gives pulse area pi.
    pulse.Omega0 = R.param("Omega0", std::numbers::pi / (pulse.sigma * std::sqrt(2.0 * std::numbers::pi)));
    pulse.omega_L = R.param("omega_L", b_eit.energy());
    pulse.validate();

    SystemSpec base;
    base.n_atoms = R.iparam("n_atoms", 2);
    base.n_max = 0;  // atoms only
    base.J = 0.0;
    base.omega = 1.0;
    base.basis = R.basis(Basis::SymmetricDicke);
    const std::vector<double> vs = sweep_values(R.cfg(), {2.0, 1.0});
    const Eigen::VectorXd t = R.grid(10.0);
    R.note_grid("grid.", t);
    R.rep().set("x1_eit_re", b_eit.x1.real());
    R.rep().set("x1_eit_im", b_eit.x1.imag());
    R.rep().set("x1_reference_re", b_ref.x1.real());

    const Complex levels[3] = {b_ref.x1, b_eit.x1, b_bare.x1};
    const char* names[3] = {"W_kappa0", "W_eit", "W_noeit"};
    std::vector<TimeSeries> w(vs.size() * 3);
    parallel_for(w.size(), R.opt().jobs, [&](std::size_t idx) {
        SystemSpec s = base;
        s.V = vs[idx / 3];
        s.x1 = levels[idx % 3];
        const auto states = evolve_pulsed(s, pulse, initial_state(s, 0, 0), t);
        w[idx] = observables(s, states, t).ergotropy;
    });

    for (std::size_t vi = 0; vi < vs.size(); ++vi) {
        const std::string pn = vlabel(vs[vi]);
        Panel& P = R.panel(pn);
        for (int k = 0; k < 3; ++k) P.series.push_back({names[k], w[vi * 3 + std::size_t(k)], {}});
        const TimeSeries& ref = w[vi * 3];
        const double peak = ref.y.maxCoeff();
        const double d_eit = (w[vi * 3 + 1].y - ref.y).cwiseAbs().maxCoeff() / peak;
        const double d_bare = (w[vi * 3 + 2].y - ref.y).cwiseAbs().maxCoeff() / peak;
        R.rep().set("panel." + pn + ".peak_ergotropy", peak);
        R.rep().set("panel." + pn + ".relative_deviation.eit", d_eit);
        R.rep().set("panel." + pn + ".relative_deviation.noeit", d_bare);
        R.check(pn + ".eit_overlaps_reference", d_eit < 0.05, "deviation " + fmt(d_eit) + " of peak");
        R.check(pn + ".noeit_departs_from_reference", d_bare > 0.20, "deviation " + fmt(d_bare) + " of peak");
    }
}

void run_custom(Runner& R) {
    const std::string& m = R.cfg().model;
    R.rep().set("model", m);
    if (m == "jc") return run_jc(R, false, 0, 1.0, 0.0);
    if (m == "transfer") return run_transfer(R);
    if (m == "fock") return run_fock_decay(R, 2, 2, false);
    throw ConfigError("[scenario] model must be jc, transfer or fock");
}

std::filesystem::path with_suffix(const std::string& file, const std::string& suffix) {
    std::filesystem::path p(file);
    if (suffix.empty()) return p;
    const std::string stem = p.stem().string();
    return p.replace_filename(stem + "_" + suffix + p.extension().string());
}

void write_outputs(const ScenarioConfig& cfg, const RunOptions& opt, const RunReport& r) {
    const bool multi = r.panels.size() > 1;
    for (const Panel& P : r.panels) {
        const std::string suffix = multi ? P.name : "";
        if (!cfg.outputs.csv.empty()) emit_csv(P.series, opt.out_dir / with_suffix(cfg.outputs.csv, suffix), P.x_name);
        if (!cfg.outputs.svg.empty()) {
            SvgStyle st;
            st.title = cfg.name + (multi ? " / " + P.name : "");
            st.x_label = P.x_name;
            emit_svg(P.series, opt.out_dir / with_suffix(cfg.outputs.svg, suffix), st);
        }
    }
    if (!cfg.outputs.report.empty()) r.report.write(opt.out_dir / cfg.outputs.report);
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<ScenarioInfo>& scenario_catalog() {
    static const std::vector<ScenarioInfo> cat = {
        {"fig3", "single atom + cavity, n-photon sector: energy and ergotropy decay with/without EIT"},
        {"fig4", "dark-state level and peak ergotropy versus omega_c (resonant cavity, charging)"},
        {"fig5", "single atom: populations of |0>|E1> and |1>|g> with/without EIT"},
        {"fig6", "N atoms sharing one photon: battery energy decay with/without EIT"},
        {"fig7", "N=3 atoms, 3 photons: energy/ergotropy decay, plus collective HP reference"},
        {"fig8", "N=2 atoms, 2 photons: energy/ergotropy decay with/without EIT"},
        {"fig9", "N=2 atoms, 2 photons: ergotropy versus dipole coupling V"},
        {"fig10", "N=3 atoms, 3 photons: peak ergotropy versus V; conventional two-level baseline"},
        {"fig11", "Gaussian-pulse charging of two dipole-coupled atoms, with/without EIT"},
        {"custom", "free-form run: model = jc | transfer | fock with [params] overrides"},
    };
    return cat;
}

const std::vector<std::string>& parameter_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const ParamDef& d : kParamDefs) v.emplace_back(d.name);
        return v;
    }();
    return names;
}

void ScenarioConfig::set_param(const std::string& key, double value) {
    const ParamDef* d = find_param(key);
    if (!d) throw ConfigError("[params] unknown parameter '" + key + "'");
    if (!std::isfinite(value)) throw ConfigError("[params] " + key + ": value must be finite");
    if (d->integer && value != std::floor(value)) throw ConfigError("[params] " + key + ": expected an integer");
    params[key] = value;
}

void ScenarioConfig::validate() const {
    bool known = false;
    for (const ScenarioInfo& s : scenario_catalog()) known = known || s.name == name;
    if (!known) throw ConfigError("[scenario] name: unknown scenario '" + name + "'");
    if (t_end && !(*t_end > 0.0)) throw ConfigError("[grid] t_end must be > 0");
    if (n_points && *n_points < 16) throw ConfigError("[grid] n_points must be >= 16");
    if (lifetimes && !(*lifetimes > 0.0)) throw ConfigError("[grid] lifetimes must be > 0");
    if (t_end && lifetimes) throw ConfigError("[grid] set either t_end or lifetimes, not both");
    if (model != "jc" && model != "transfer" && model != "fock")
        throw ConfigError("[scenario] model must be jc, transfer or fock");
    for (const auto& [k, v] : params) {
        const ParamDef* d = find_param(k);
        if (!d) throw ConfigError("[params] unknown parameter '" + k + "'");
        if (d->integer && v != std::floor(v)) throw ConfigError("[params] " + k + ": expected an integer");
    }
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    ScenarioConfig c;
    auto where = [&](const std::string& sec, const std::string& key) { return source + ": [" + sec + "] " + key; };
    for (const auto& [sec, body] : tree) {
        if (!body.data().empty()) throw ConfigError(source + ": key '" + sec + "' must be inside a section");
        for (const auto& [key, node] : body) {
            const std::string val = trim(node.data());
            const std::string w = where(sec, key);
            if (sec == "scenario") {
                if (key == "name") {
                    c.name = val;
                } else if (key == "eit") {
                    if (val == "on") c.eit = EitMode::On;
                    else if (val == "off") c.eit = EitMode::Off;
                    else if (val == "both") c.eit = EitMode::Both;
                    else throw ConfigError(w + ": expected on, off or both");
                } else if (key == "basis") {
                    if (val == "dicke") c.basis = Basis::SymmetricDicke;
                    else if (val == "full") c.basis = Basis::FullTensor;
                    else throw ConfigError(w + ": expected dicke or full");
                } else if (key == "model") {
                    c.model = val;
                } else {
                    throw ConfigError(w + ": unknown key");
                }
            } else if (sec == "grid") {
                if (key == "t_end") c.t_end = parse_number(val, w);
                else if (key == "n_points") c.n_points = parse_int(val, w);
                else if (key == "lifetimes") c.lifetimes = parse_number(val, w);
                else throw ConfigError(w + ": unknown key");
            } else if (sec == "params") {
                if (!find_param(key)) throw ConfigError(w + ": unknown parameter");
                try {
                    c.set_param(key, find_param(key)->integer ? double(parse_int(val, w)) : parse_number(val, w));
                } catch (const ConfigError& e) {
                    throw ConfigError(source + ": " + e.what());
                }
            } else if (sec == "sweep") {
                if (!c.sweep) c.sweep = SweepSpec{};
                if (key == "values") {
                    c.sweep->values = parse_list(val, w);
                } else if (key == "from" || key == "to" || key == "points") {
                    // assembled below
                } else {
                    throw ConfigError(w + ": unknown key");
                }
            } else if (sec == "outputs") {
                if (key == "csv") c.outputs.csv = val;
                else if (key == "svg") c.outputs.svg = val;
                else if (key == "report") c.outputs.report = val;
                else throw ConfigError(w + ": unknown key");
            } else {
                throw ConfigError(source + ": unknown section [" + sec + "]");
            }
        }
    }

    if (auto sw = tree.get_child_optional("sweep")) {
        const auto from = sw->get_optional<std::string>("from");
        const auto to = sw->get_optional<std::string>("to");
        const auto points = sw->get_optional<std::string>("points");
        if (from || to || points) {
            if (!(from && to && points)) throw ConfigError(source + ": [sweep] from, to and points go together");
            if (sw->get_optional<std::string>("values"))
                throw ConfigError(source + ": [sweep] use either values or from/to/points");
            const double a = parse_number(*from, where("sweep", "from"));
            const double b = parse_number(*to, where("sweep", "to"));
            const int n = parse_int(*points, where("sweep", "points"));
            if (n < 2) throw ConfigError(where("sweep", "points") + ": need at least 2");
            c.sweep->values.clear();
            for (int k = 0; k < n; ++k) c.sweep->values.push_back(a + (b - a) * k / (n - 1));
        }
        if (c.sweep->values.empty()) throw ConfigError(source + ": [sweep] has no values");
    }

    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_config(in, path.string());
}

bool RunReport::ok() const {
    for (const CheckResult& c : checks)
        if (!c.pass) return false;
    return true;
}

std::optional<double> RunReport::rate(const std::string& panel, const std::string& curve) const {
    const auto v = report.get("panel." + panel + ".rate." + curve);
    if (!v) return std::nullopt;
    double x = 0.0;
    const auto r = std::from_chars(v->data(), v->data() + v->size(), x);
    if (r.ec != std::errc() || r.ptr != v->data() + v->size()) return std::nullopt;
    return x;
}

const Panel* RunReport::find_panel(const std::string& name) const {
    for (const Panel& p : panels)
        if (p.name == name) return &p;
    return nullptr;
}

RunReport run(const ScenarioConfig& config, const RunOptions& options) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();
    Runner R(config, options);
    const std::string& n = config.name;
    if (n == "fig3") run_jc(R, false, 1, 1.0, 0.0);
    else if (n == "fig4") run_fig4(R);
    else if (n == "fig5") run_jc(R, true, 0, 1.0, 0.0);
    else if (n == "fig6") run_transfer(R);
    else if (n == "fig7") run_fock_decay(R, 3, 3, true);
    else if (n == "fig8") run_fock_decay(R, 2, 2, false);
    else if (n == "fig9") run_fig9(R);
    else if (n == "fig10") run_fig10(R);
    else if (n == "fig11") run_fig11(R);
    else run_custom(R);

    RunReport r = std::move(R).finish();
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (options.write_outputs) write_outputs(config, options, r);
    return r;
}

}  // namespace qbeit
