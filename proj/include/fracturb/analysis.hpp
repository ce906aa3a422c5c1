#pragma once

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fracturb/grid.hpp"
#include "fracturb/scaling_laws.hpp"

namespace fracturb {

/// Energy per unit-width wavenumber shell. Shell s collects modes with
/// s - 1/2 <= |m| < s + 1/2, m the integer wavevector.
struct SpectrumSeries {
    std::vector<int> shells;
    std::vector<double> k_center;
    std::vector<double> values;
    double total_energy = 0.0;
};

namespace detail {

inline int shell_of(const GridSpec& g, std::size_t i) {
    const auto m = mode_of(g, i);
    const double r = std::sqrt(double(m[0]) * m[0] + double(m[1]) * m[1]);
    return static_cast<int>(std::floor(r + 0.5));
}

template <class ModeEnergy>
SpectrumSeries accumulate_shells(const GridSpec& g, ModeEnergy&& energy_of) {
    const int half = static_cast<int>(g.n / 2);
    const int max_shell = g.dims == 1 ? half : static_cast<int>(std::ceil(std::sqrt(2.0) * half)) + 1;
    SpectrumSeries s;
    s.shells.resize(max_shell + 1);
    s.k_center.resize(max_shell + 1);
    s.values.assign(max_shell + 1, 0.0);
    for (int i = 0; i <= max_shell; ++i) {
        s.shells[i] = i;
        s.k_center[i] = i * g.dk();
    }
    for (std::size_t i = 0; i < g.size(); ++i) s.values[shell_of(g, i)] += energy_of(i);
    for (double v : s.values) s.total_energy += v;
    return s;
}

} // namespace detail

/// Spectrum of a scalar field: mode energy |f_hat|^2 / 2.
inline SpectrumSeries shell_spectrum(const SpectralField& f) {
    return detail::accumulate_shells(f.grid(), [&](std::size_t i) { return 0.5 * std::norm(f[i]); });
}

/// Kinetic-energy spectrum of a velocity pair.
inline SpectrumSeries shell_spectrum(const SpectralField& u, const SpectralField& v) {
    u.check_same_grid(v);
    return detail::accumulate_shells(u.grid(),
                                     [&](std::size_t i) { return 0.5 * (std::norm(u[i]) + std::norm(v[i])); });
}

/// Kinetic-energy spectrum from 2D vorticity, |u_hat|^2 = |omega_hat|^2 / |k|^2.
inline SpectrumSeries shell_spectrum_from_vorticity(const SpectralField& omega) {
    const auto& g = omega.grid();
    return detail::accumulate_shells(g, [&](std::size_t i) {
        const double k2 = k_squared(g, i);
        return k2 == 0.0 ? 0.0 : 0.5 * std::norm(omega[i]) / k2;
    });
}

struct PowerLawFit {
    double exponent = 0.0;
    double intercept = 0.0; ///< natural log of the prefactor
    double std_error = 0.0; ///< standard error of the exponent
    double k_min = 0.0;
    double k_max = 0.0;
    double r_squared = 0.0;
    std::size_t points = 0;
};

/// Ordinary least squares of log y on log x over all supplied points.
inline PowerLawFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw UsageError("fit_loglog: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw FitDomainError("power-law fit needs at least three points");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) {
            std::ostringstream os;
            os << "power-law fit needs positive finite values, got (" << x[i] << ", " << y[i] << ")";
            throw FitDomainError(os.str());
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw FitDomainError("power-law fit needs distinct abscissae");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.exponent * lx[i]);
        ssr += r * r;
    }
    fit.std_error = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ssr / syy;
    fit.k_min = *std::min_element(x.begin(), x.end());
    fit.k_max = *std::max_element(x.begin(), x.end());
    fit.points = n;
    return fit;
}

/// Power-law fit of a spectrum over shells with k_min <= k_center <= k_max.
inline PowerLawFit fit_power_law(const SpectrumSeries& series, double k_min, double k_max) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double k = series.k_center[i];
        if (k >= k_min && k <= k_max) {
            x.push_back(k);
            y.push_back(series.values[i]);
        }
    }
    if (x.size() < 4) {
        std::ostringstream os;
        os << "fit window [" << k_min << ", " << k_max << "] holds " << x.size() << " shells; need at least 4";
        throw FitDomainError(os.str());
    }
    auto fit = fit_loglog(x, y);
    fit.k_min = k_min;
    fit.k_max = k_max;
    return fit;
}

/// Hill estimates at or above this are reported as Gaussian-compatible:
/// stable indices only exist in (0, 2].
inline constexpr double kNoStableTailThreshold = 4.0;

struct TailEstimate {
    double index = 0.0;
    std::size_t order_statistics = 0;
    bool stable_tail = false;
};

/// Hill estimator on |samples| using the top `top_fraction` order statistics.
inline TailEstimate hill_tail_index(std::span<const double> samples, double top_fraction) {
    if (!(top_fraction > 0.0 && top_fraction <= 0.1)) throw UsageError("hill_tail_index: top_fraction must lie in (0, 0.1]");
    if (samples.size() < 1000) throw UsageError("hill_tail_index: need at least 1000 samples");
    std::vector<double> a(samples.size());
    std::transform(samples.begin(), samples.end(), a.begin(), [](double v) { return std::abs(v); });
    const auto k = std::max<std::size_t>(2, static_cast<std::size_t>(top_fraction * a.size()));
    // Largest k + 1 values moved to the front; a[k] is the threshold X_(k+1).
    std::nth_element(a.begin(), a.begin() + k, a.end(), std::greater<>());
    const double threshold = a[k];
    if (!(threshold > 0.0)) throw UsageError("hill_tail_index: threshold order statistic is zero");
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += std::log(a[i] / threshold);
    TailEstimate t;
    t.order_statistics = k;
    t.index = acc > 0.0 ? static_cast<double>(k) / acc : std::numeric_limits<double>::infinity();
    t.stable_tail = t.index < kNoStableTailThreshold;
    return t;
}

/// Central fourth moment over squared variance; 3 for a Gaussian.
inline double flatness(std::span<const double> samples) {
    if (samples.size() < 100) throw UsageError("flatness: need at least 100 samples");
    // Rounding in the mean would leave a tiny spurious variance for constant input.
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    if (*lo == *hi) throw DomainError("flatness: samples have zero variance");
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= samples.size();
    double m2 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= samples.size();
    m4 /= samples.size();
    if (!(m2 > 0.0)) throw DomainError("flatness: samples have zero variance");
    return m4 / (m2 * m2);
}

struct PredictionReport {
    double predicted = 0.0;
    double fitted = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool extrapolated = false;
};

inline PredictionReport compare_prediction(const PowerLawFit& fit, const ScalingPrediction& pred,
                                           double z_threshold = 3.0) {
    PredictionReport r;
    r.predicted = pred.spectrum_exponent;
    r.fitted = fit.exponent;
    r.std_error = fit.std_error;
    r.threshold = z_threshold;
    r.extrapolated = pred.extrapolated;
    const double diff = fit.exponent - pred.spectrum_exponent;
    if (fit.std_error > 0.0) {
        r.z_score = diff / fit.std_error;
    } else {
        r.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    r.pass = std::abs(r.z_score) <= z_threshold;
    return r;
}

inline std::string format_report(const PredictionReport& r) {
    std::ostringstream os;
    os.precision(6);
    os << "predicted exponent " << r.predicted << '\n'
       << "fitted exponent    " << r.fitted << " +/- " << r.std_error << '\n'
       << "z-score            " << r.z_score << " (threshold " << r.threshold << ")\n"
       << "extrapolated       " << (r.extrapolated ? "yes" : "no") << '\n'
       << "result             " << (r.pass ? "PASS" : "FAIL") << '\n';
    return os.str();
}

} // namespace fracturb
