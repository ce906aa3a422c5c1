#pragma once

// FFTW-backed transforms between physical samples and SpectralField.
//
// Plans are created once per (dims, n, direction) with FFTW_ESTIMATE |
// FFTW_UNALIGNED and cached. FFTW planning is not thread-safe, so lookups take
// a mutex; executing a plan through the new-array interface is. ESTIMATE
// planning involves no timing measurements, so the same plan (and therefore
// the same floating-point results) is chosen on every run.

#include <fftw3.h>

#include <map>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "fracturb/grid.hpp"

namespace fracturb {

namespace detail {

class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const GridSpec& g, int sign) {
        const auto key = std::make_tuple(g.dims, g.n, sign);
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const std::size_t total = g.size();
        auto* in = fftw_alloc_complex(total);
        auto* out = fftw_alloc_complex(total);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        const int n = static_cast<int>(g.n);
        fftw_plan p = g.dims == 1 ? fftw_plan_dft_1d(n, in, out, sign, flags)
                                  : fftw_plan_dft_2d(n, n, in, out, sign, flags);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, p);
        return p;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

    std::mutex mutex_;
    std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans_;
};

inline void execute(const GridSpec& g, int sign, std::span<const Complex> in, std::span<Complex> out) {
    if (in.size() != g.size() || out.size() != g.size()) throw UsageError("transform buffer size mismatch");
    if (in.data() == out.data()) throw UsageError("transforms are out-of-place");
    fftw_plan p = PlanCache::instance().get(g, sign);
    // Out-of-place c2c plans preserve their input.
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace detail

/// Unnormalized inverse DFT of raw coefficients: out_j = sum_k c_k e^{+i k x_j}.
inline void inverse_transform(const GridSpec& g, std::span<const Complex> coeffs, std::span<Complex> out) {
    detail::execute(g, FFTW_BACKWARD, coeffs, out);
}

/// Forward DFT scaled by 1/N: coefficients of the Fourier series.
inline void forward_transform(const GridSpec& g, std::span<const Complex> samples, std::span<Complex> out) {
    detail::execute(g, FFTW_FORWARD, samples, out);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& c : out) c *= scale;
}

inline SpectralField to_spectral(const GridSpec& g, std::span<const double> samples) {
    if (samples.size() != g.size()) throw UsageError("sample count does not match grid");
    std::vector<Complex> in(samples.begin(), samples.end());
    SpectralField f(g);
    forward_transform(g, in, f.coeffs());
    return f;
}

/// Real part of the physical field; exact for Hermitian-symmetric inputs.
inline std::vector<double> to_physical(const SpectralField& f) {
    std::vector<Complex> out(f.size());
    inverse_transform(f.grid(), f.coeffs(), out);
    std::vector<double> re(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) re[i] = out[i].real();
    return re;
}

/// Physical sample coordinates x_j = j L / n (1D) or (x_jx, y_jy) (2D).
inline std::array<double, 2> grid_point(const GridSpec& g, std::size_t i) {
    if (g.dims == 1) return {g.dx() * static_cast<double>(i), 0.0};
    return {g.dx() * static_cast<double>(i % g.n), g.dx() * static_cast<double>(i / g.n)};
}

} // namespace fracturb
