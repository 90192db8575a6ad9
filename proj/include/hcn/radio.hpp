#pragma once

#include <cmath>
#include <stdexcept>

namespace hcn {

/// Link-level parameters. Powers are linear watts and thresholds linear SIR;
/// dB/dBm conversion happens at the configuration boundary only.
struct RadioParams {
    double alpha = 4.0;           // path-loss exponent, > 2
    double eps = 0.01;            // smoothing of the singular path loss
    double fading_mean = 1.0;     // E[h]
    double fading_sq_mean = 2.0;  // E[h^2]; 2 for unit-mean exponential power
    double power_mbs = 1.0;       // P_m (W)
    double power_sbs = 1.0;       // P_s (W)
    double beta_m = 1.0;          // MU SIR threshold (linear)
    double beta_s = 1.0;          // SU SIR threshold (linear)

    double delta() const { return 2.0 / alpha; }
    double fading_ratio() const { return fading_sq_mean / (fading_mean * fading_mean); }

    void validate() const {
        if (!(alpha > 2.0)) throw std::invalid_argument("RadioParams: alpha must exceed 2");
        if (!(eps > 0.0)) throw std::invalid_argument("RadioParams: eps must be > 0");
        if (!(fading_mean > 0.0)) throw std::invalid_argument("RadioParams: fading_mean must be > 0");
        if (fading_sq_mean < fading_mean * fading_mean)
            throw std::invalid_argument("RadioParams: E[h^2] must be >= E[h]^2");
        if (!(power_mbs > 0.0) || !(power_sbs > 0.0))
            throw std::invalid_argument("RadioParams: powers must be > 0");
        if (!(beta_m > 0.0) || !(beta_s > 0.0))
            throw std::invalid_argument("RadioParams: thresholds must be > 0");
    }
};

/// Smoothed path-loss gain 1/(eps + x^alpha); tends to x^-alpha as eps -> 0.
inline double g_eps(double x, const RadioParams& p) {
    return 1.0 / (p.eps + std::pow(x, p.alpha));
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

}  // namespace hcn
