#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include "fracturb/grid.hpp"
#include "fracturb/scaling_laws.hpp"

namespace fracturb {

/// Fourier symbol |k|^beta of (-Laplacian)^{beta/2}, one entry per grid slot.
/// Evaluated as (|k|^2)^{beta/2}, so beta = 2 gives |k|^2 bit-for-bit.
inline std::vector<double> laplacian_symbol(const GridSpec& grid, double beta) {
    detail::require_beta(beta);
    grid.validate();
    std::vector<double> s(grid.size());
    const double half = 0.5 * beta;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double k2 = k_squared(grid, i);
        s[i] = k2 == 0.0 ? 0.0 : std::pow(k2, half);
    }
    return s;
}

/// Spectral fractional Laplacian on a periodic box, symbol precomputed.
class FractionalLaplacian {
public:
    FractionalLaplacian(GridSpec grid, double beta)
        : grid_(grid), beta_(beta), symbol_(laplacian_symbol(grid, beta)) {}

    const GridSpec& grid() const { return grid_; }
    double beta() const { return beta_; }
    std::span<const double> symbol() const { return symbol_; }

    SpectralField apply(const SpectralField& field) const {
        if (!(field.grid() == grid_)) throw UsageError("field grid does not match operator grid");
        SpectralField out = field;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] *= symbol_[i];
        return out;
    }

private:
    GridSpec grid_;
    double beta_;
    std::vector<double> symbol_;
};

inline SpectralField apply_fractional_laplacian(const SpectralField& field, double beta) {
    return FractionalLaplacian(field.grid(), beta).apply(field);
}

/// Grunwald-Letnikov weights w_j = (-1)^j C(mu, j).
struct GlWeights {
    double mu = 0.0;
    std::vector<double> w;

    /// Partial sum S_m = sum_{j<=m} w_j. Since sum_j w_j = 0 for mu > 0, this is
    /// also the magnitude of the discarded tail when the series stops at m.
    double partial_sum(std::size_t m) const {
        double s = 0.0;
        for (std::size_t j = 0; j <= m && j < w.size(); ++j) s += w[j];
        return s;
    }
};

inline GlWeights gl_weights(double mu, std::size_t n) {
    detail::require_mu(mu);
    if (n == 0) throw UsageError("need at least one Grunwald-Letnikov weight");
    GlWeights g{mu, std::vector<double>(n)};
    g.w[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j)
        g.w[j] = g.w[j - 1] * (1.0 - (mu + 1.0) / static_cast<double>(j));
    return g;
}

/// Caputo derivative of order mu of uniformly sampled f, via Grunwald-Letnikov
/// applied to f - f(t_0). First-order accurate in dt. Order zero is the identity.
inline std::vector<double> caputo_derivative(std::span<const double> samples, double dt, double mu) {
    detail::require_mu(mu);
    if (samples.empty()) throw UsageError("caputo_derivative needs at least one sample");
    if (!(dt > 0.0)) throw UsageError("caputo_derivative needs dt > 0");
    if (mu == 0.0) return {samples.begin(), samples.end()};

    const auto w = gl_weights(mu, samples.size()).w;
    const double scale = std::pow(dt, -mu);
    const double f0 = samples[0];
    std::vector<double> out(samples.size());
    for (std::size_t n = 0; n < samples.size(); ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= n; ++j) acc += w[j] * (samples[n - j] - f0);
        out[n] = scale * acc;
    }
    return out;
}

} // namespace fracturb
