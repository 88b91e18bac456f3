#include "qbeit/fit.hpp"

#include <algorithm>
#include <cmath>

namespace qbeit {

void TimeSeries::validate() const {
    if (t.size() != y.size()) throw std::invalid_argument("TimeSeries: t and y lengths differ");
    if (t.size() < 2) return;
    const double h = t(1) - t(0);
    if (!(h > 0.0)) throw std::invalid_argument("TimeSeries: grid not strictly increasing");
    const double span = std::abs(t(t.size() - 1) - t(0));
    for (Eigen::Index i = 1; i < t.size(); ++i) {
        if (!(t(i) > t(i - 1))) throw std::invalid_argument("TimeSeries: grid not strictly increasing");
        if (std::abs((t(i) - t(i - 1)) - h) > 1e-12 * std::max(span, 1.0))
            throw std::invalid_argument("TimeSeries: grid not uniform at index " + std::to_string(i));
    }
}

Eigen::VectorXd uniform_grid(double t_end, Eigen::Index n_points) {
    if (!(t_end > 0.0)) throw std::invalid_argument("uniform_grid: t_end must be > 0");
    if (n_points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    Eigen::VectorXd t(n_points);
    const double h = t_end / double(n_points - 1);
    for (Eigen::Index i = 0; i < n_points; ++i) t(i) = h * double(i);
    return t;
}

double DecayFit::envelope(double t) const { return amplitude * std::exp(-rate * t); }

std::vector<Peak> envelope_peaks(const TimeSeries& s) {
    s.validate();
    if (s.size() < 3) throw InsufficientOscillation("envelope_peaks: fewer than 3 samples");

    const double floor = 1e-6 * s.y.maxCoeff();
    const double h = s.step();
    std::vector<Peak> out;
    for (Eigen::Index i = 1; i + 1 < s.size(); ++i) {
        const double ym = s.y(i - 1), y0 = s.y(i), yp = s.y(i + 1);
        if (!(y0 > ym && y0 > yp && y0 > floor)) continue;
        const double curv = ym - 2.0 * y0 + yp;  // < 0 at a strict maximum
        const double delta = 0.5 * (ym - yp) / curv;
        out.push_back({s.t(i) + delta * h, y0 - 0.25 * (ym - yp) * delta});
    }
    if (out.size() < 3)
        throw InsufficientOscillation("envelope_peaks: found " + std::to_string(out.size()) +
                                      " peaks, need at least 3");
    return out;
}

std::vector<Peak> drop_transient(std::vector<Peak> peaks, double t0) {
    if (peaks.size() < 2) return peaks;
    std::vector<double> gaps;
    gaps.reserve(peaks.size() - 1);
    for (std::size_t k = 1; k < peaks.size(); ++k) gaps.push_back(peaks[k].t - peaks[k - 1].t);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    const double period = gaps[gaps.size() / 2];
    // 5% slack absorbs the sub-sample shift of the parabolic refinement
    if (peaks.front().t - t0 < 0.95 * period) peaks.erase(peaks.begin());
    return peaks;
}

DecayFit fit_exponential(const std::vector<Peak>& peaks) {
    if (peaks.size() < 3)
        throw InsufficientOscillation("fit_exponential: " + std::to_string(peaks.size()) + " peaks, need at least 3");
    const double n = double(peaks.size());
    double st = 0.0, sl = 0.0;
    for (const Peak& p : peaks) {
        if (!(p.y > 0.0)) throw std::invalid_argument("fit_exponential: non-positive peak value");
        st += p.t;
        sl += std::log(p.y);
    }
    const double tm = st / n, lm = sl / n;
    double stt = 0.0, stl = 0.0;
    for (const Peak& p : peaks) {
        stt += (p.t - tm) * (p.t - tm);
        stl += (p.t - tm) * (std::log(p.y) - lm);
    }
    if (!(stt > 0.0)) throw std::invalid_argument("fit_exponential: peaks share a single time");
    const double slope = stl / stt;
    const double intercept = lm - slope * tm;

    double ss = 0.0;
    for (const Peak& p : peaks) {
        const double r = std::log(p.y) - (intercept + slope * p.t);
        ss += r * r;
    }
    DecayFit fit;
    fit.rate = -slope;
    fit.amplitude = std::exp(intercept);
    fit.residual = std::sqrt(ss / n);
    fit.peaks_used = int(peaks.size());
    return fit;
}

DecayFit fit_envelope(const TimeSeries& s) {
    return fit_exponential(drop_transient(envelope_peaks(s), s.t(0)));
}

}  // namespace qbeit
