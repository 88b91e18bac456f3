// Uniformly sampled series and exponential envelope fits.
#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace qbeit {

struct TimeSeries {
    Eigen::VectorXd t;
    Eigen::VectorXd y;

    Eigen::Index size() const { return t.size(); }
    double step() const { return t.size() > 1 ? t(1) - t(0) : 0.0; }

    /// Throws std::invalid_argument unless t is strictly increasing with
    /// uniform spacing (to 1e-12 relative to the span) and |y| == |t|.
    void validate() const;
};

/// n points from 0 to t_end inclusive.
Eigen::VectorXd uniform_grid(double t_end, Eigen::Index n_points);

struct Peak {
    double t;
    double y;
};

struct DecayFit {
    double rate = 0.0;
    double amplitude = 0.0;
    double residual = 0.0;  // RMS of log residuals
    int peaks_used = 0;

    double envelope(double t) const;
};

class InsufficientOscillation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Strict local maxima above 1e-6 max(y), each refined by a parabola through
/// the bracketing samples.
std::vector<Peak> envelope_peaks(const TimeSeries& s);

/// Drops the first peak when it arrives less than one median peak spacing
/// after t0.
std::vector<Peak> drop_transient(std::vector<Peak> peaks, double t0);

/// Least-squares line through (t_k, ln y_k); rate = -slope.
DecayFit fit_exponential(const std::vector<Peak>& peaks);

/// envelope_peaks -> drop_transient -> fit_exponential.
DecayFit fit_envelope(const TimeSeries& s);

}  // namespace qbeit
