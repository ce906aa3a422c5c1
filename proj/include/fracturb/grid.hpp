#pragma once

// Periodic grids and Fourier-space fields.
//
// Layout (used by every module):
//   * A field on an n (1D) or n x n (2D) grid is stored in one contiguous array.
//     In 2D the linear index is  i = jy * n + jx  (x fastest).
//   * Array index j in [0, n) holds integer wavenumber m(j) = j for j < n/2 and
//     j - n otherwise, so the Nyquist slot j = n/2 carries m = -n/2.
//   * Physical wavenumber is k = m * 2 pi / L.
//   * Coefficients are Fourier-series amplitudes: u(x) = sum_k u_hat(k) e^{i k.x},
//     so u_hat = DFT(u) / N with N the number of grid points. With this scaling
//     the grid mean of |u|^2 equals sum_k |u_hat(k)|^2.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "fracturb/errors.hpp"

namespace fracturb {

using Complex = std::complex<double>;

struct GridSpec {
    int dims = 2;
    std::size_t n = 64;
    double length = 2.0 * std::numbers::pi;

    void validate() const {
        std::ostringstream os;
        auto note = [&os] { return os.tellp() > 0 ? "; " : ""; };
        if (dims != 1 && dims != 2) os << note() << "grid dims must be 1 or 2 (got " << dims << ")";
        if (n < 8 || (n & (n - 1)) != 0) os << note() << "grid n must be a power of two >= 8 (got " << n << ")";
        if (!(length > 0.0) || !std::isfinite(length)) os << note() << "grid length must be positive (got " << length << ")";
        if (os.tellp() > 0) throw UsageError(os.str());
    }

    std::size_t size() const { return dims == 1 ? n : n * n; }
    double dk() const { return 2.0 * std::numbers::pi / length; }
    double dx() const { return length / static_cast<double>(n); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Integer wavenumber stored at array slot j.
inline int wavenumber_index(std::size_t j, std::size_t n) {
    return j < n / 2 ? static_cast<int>(j) : static_cast<int>(j) - static_cast<int>(n);
}

/// Array slot holding integer wavenumber m (taken modulo n).
inline std::size_t slot_of(int m, std::size_t n) {
    const auto nn = static_cast<long>(n);
    long s = m % nn;
    if (s < 0) s += nn;
    return static_cast<std::size_t>(s);
}

/// Integer wavevector (mx, my) of linear index i; my = 0 in 1D.
inline std::array<int, 2> mode_of(const GridSpec& g, std::size_t i) {
    if (g.dims == 1) return {wavenumber_index(i, g.n), 0};
    return {wavenumber_index(i % g.n, g.n), wavenumber_index(i / g.n, g.n)};
}

inline std::size_t index_of(const GridSpec& g, int mx, int my = 0) {
    if (g.dims == 1) return slot_of(mx, g.n);
    return slot_of(my, g.n) * g.n + slot_of(mx, g.n);
}

/// Squared physical wavenumber |k|^2 of linear index i.
inline double k_squared(const GridSpec& g, std::size_t i) {
    const auto m = mode_of(g, i);
    const double kx = g.dk() * m[0];
    const double ky = g.dk() * m[1];
    return kx * kx + ky * ky;
}

/// True if linear index i touches a Nyquist slot in any direction.
inline bool is_nyquist(const GridSpec& g, std::size_t i) {
    const int half = static_cast<int>(g.n / 2);
    const auto m = mode_of(g, i);
    return m[0] == -half || (g.dims == 2 && m[1] == -half);
}

/// Fourier coefficients of a real periodic field.
class SpectralField {
public:
    SpectralField() = default;

    explicit SpectralField(GridSpec grid) : grid_(grid) {
        grid_.validate();
        coeffs_.assign(grid_.size(), Complex{0.0, 0.0});
    }

    SpectralField(GridSpec grid, std::vector<Complex> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
        grid_.validate();
        if (coeffs_.size() != grid_.size()) throw UsageError("coefficient count does not match grid");
    }

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return coeffs_.size(); }

    Complex& operator[](std::size_t i) { return coeffs_[i]; }
    const Complex& operator[](std::size_t i) const { return coeffs_[i]; }

    Complex& at_mode(int mx, int my = 0) { return coeffs_[index_of(grid_, mx, my)]; }
    const Complex& at_mode(int mx, int my = 0) const { return coeffs_[index_of(grid_, mx, my)]; }

    std::span<Complex> coeffs() { return coeffs_; }
    std::span<const Complex> coeffs() const { return coeffs_; }

    /// Index of the mode -k for linear index i.
    std::size_t conjugate_index(std::size_t i) const {
        const auto m = mode_of(grid_, i);
        return index_of(grid_, -m[0], -m[1]);
    }

    /// Largest |u_hat(-k) - conj(u_hat(k))|.
    double hermitian_defect() const {
        double worst = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            worst = std::max(worst, std::abs(coeffs_[conjugate_index(i)] - std::conj(coeffs_[i])));
        return worst;
    }

    bool is_finite() const {
        for (const auto& c : coeffs_)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        return true;
    }

    SpectralField& operator+=(const SpectralField& o) {
        check_same_grid(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }

    SpectralField& operator*=(double s) {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }

    void check_same_grid(const SpectralField& o) const {
        if (!(grid_ == o.grid_)) throw UsageError("spectral fields live on different grids");
    }

    friend bool operator==(const SpectralField&, const SpectralField&) = default;

private:
    GridSpec grid_{};
    std::vector<Complex> coeffs_;
};

} // namespace fracturb
