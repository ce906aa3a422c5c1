#pragma once

// One-parameter Mittag-Leffler function E_alpha(z) on the completely monotone
// branch 0 < alpha <= 1, z <= 0.
//
// Two evaluation routes, chosen by t = |z|^{1/alpha}:
//
//   t <= kMittagLefflerSeriesLimit: power series sum_k z^k / Gamma(alpha k + 1).
//     The largest term is about E_alpha(|z|) ~ e^t / alpha, so cancellation
//     costs roughly t / ln(10) digits; the limit keeps that near one.
//
//   t > limit: the spectral representation of the relaxation function,
//       E_alpha(-x) = sin(alpha pi)/(alpha pi)
//                     * int_0^inf exp(-(u x)^{1/alpha}) / (u^2 + 2 u cos(alpha pi) + 1) du,
//     split at the peak u = -cos(alpha pi) and at u = 1/x. The integrand is positive, so no
//     cancellation occurs. Adaptive Gauss-Kronrod is used unless the peak is
//     sharper than sin(alpha pi) < 0.05 (alpha near 1), where tanh-sinh
//     resolves the near-endpoint spike far more cheaply. For large x it reproduces the algebraic tail
//     1 / (x Gamma(1 - alpha)).
//
// alpha = 1 is evaluated as exp(z).

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracturb/errors.hpp"

namespace fracturb {

inline constexpr double kMittagLefflerSeriesLimit = 3.0;

namespace detail {

inline double mittag_leffler_series(double alpha, double z) {
    const double log_abs = std::log(std::abs(z));
    const double t = std::pow(std::abs(z), 1.0 / alpha);
    double sum = 1.0;
    for (int k = 1; k < 5000; ++k) {
        const double mag = std::exp(k * log_abs - std::lgamma(alpha * k + 1.0));
        const double term = (k % 2 == 0) ? mag : -mag;
        sum += term;
        // Past the peak term (alpha k > t) the series is monotonically decreasing.
        if (alpha * k > t && mag < 1e-17 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

inline double mittag_leffler_integral(double alpha, double x) {
    const double c = std::cos(alpha * std::numbers::pi);
    const double inv_alpha = 1.0 / alpha;
    auto f = [&](double u) {
        const double denom = u * u + 2.0 * u * c + 1.0;
        return std::exp(-std::pow(u * x, inv_alpha)) / denom;
    };
    // exp(-s) underflows for s > ~745. For small alpha the exponential factor
    // drops from 1 to 0 sharply around u = 1/x, so that point is a breakpoint too.
    const double upper = std::pow(745.0, alpha) / x;
    std::vector<double> cuts{0.0, std::clamp(-c, 0.0, upper), std::min(1.0 / x, upper), upper};
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double s = std::sin(alpha * std::numbers::pi);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (s >= 0.05) {
            using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
            total += Quad::integrate(f, cuts[i], cuts[i + 1], 10, 1e-12);
        } else {
            // integrate() may extend its node tables, so each thread keeps its own.
            thread_local boost::math::quadrature::tanh_sinh<double> quad;
            total += quad.integrate(f, cuts[i], cuts[i + 1], 1e-13);
        }
    }
    return s / (alpha * std::numbers::pi) * total;
}

} // namespace detail

inline double mittag_leffler(double alpha, double z) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        std::ostringstream os;
        os << "mittag_leffler supports 0 < alpha <= 1, got alpha = " << alpha;
        throw DomainError(os.str());
    }
    if (!(z <= 0.0) || !std::isfinite(z)) {
        std::ostringstream os;
        os << "mittag_leffler supports finite z <= 0, got z = " << z;
        throw DomainError(os.str());
    }
    if (z == 0.0) return 1.0;
    if (alpha == 1.0) return std::exp(z);
    const double t = std::pow(-z, 1.0 / alpha);
    if (t <= kMittagLefflerSeriesLimit) return detail::mittag_leffler_series(alpha, z);
    return detail::mittag_leffler_integral(alpha, -z);
}

} // namespace fracturb
