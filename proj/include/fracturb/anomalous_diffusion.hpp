#pragma once

// Anomalous diffusion two ways: the exact Fourier propagator of
//
//   D_t^{1-mu} u + gamma (-Laplacian)^{beta/2} u = 0,
//
// and a 1D continuous-time random walk whose jumps are symmetric beta-stable
// and whose waits are one-sided (1-mu)-stable (exponential when mu = 0).
// Both produce <x^2> ~ t^{2(1-mu)/beta}.
//
// Sampling algorithms:
//   symmetric stable, characteristic function exp(-|k|^beta): Chambers-Mallows-Stuck,
//     X = sin(beta V) / cos(V)^{1/beta} * (cos((1-beta) V) / W)^{(1-beta)/beta},
//     V uniform on (-pi/2, pi/2), W unit exponential;
//   one-sided stable of index a = 1-mu, Laplace transform exp(-s^a): Kanter,
//     T = sin(a U) / sin(U)^{1/a} * (sin((1-a) U) / W)^{(1-a)/a}, U uniform on (0, pi).
//
// Untruncated stable jumps with beta < 2 have no finite moment of order >= beta,
// so widths are measured through fractional moments <|x|^q>^{2/q}, q < beta.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fracturb/analysis.hpp"
#include "fracturb/errors.hpp"
#include "fracturb/grid.hpp"
#include "fracturb/mittag_leffler.hpp"
#include "fracturb/random.hpp"
#include "fracturb/scaling_laws.hpp"

namespace fracturb {

/// Truncated sampling refuses to continue once fewer than this fraction of
/// draws land inside the cutoff.
inline constexpr double kMinTruncationAcceptance = 1e-3;

namespace detail {

inline double levy_stable_variate(double beta, Rng& rng) {
    const double v = std::numbers::pi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    if (beta == 2.0) return 2.0 * std::sin(v) * std::sqrt(w);
    if (beta == 1.0) return std::tan(v);
    const double a = std::sin(beta * v) / std::pow(std::cos(v), 1.0 / beta);
    return a * std::pow(std::cos((1.0 - beta) * v) / w, (1.0 - beta) / beta);
}

inline double waiting_time_variate(double mu, Rng& rng) {
    if (mu == 0.0) return rng.exponential();
    const double a = 1.0 - mu;
    const double u = std::numbers::pi * rng.uniform();
    const double w = rng.exponential();
    const double lead = std::sin(a * u) / std::pow(std::sin(u), 1.0 / a);
    return lead * std::pow(std::sin((1.0 - a) * u) / w, (1.0 - a) / a);
}

/// Rejection sampler for |x| <= cutoff that watches its own acceptance rate.
class TruncatedLevy {
public:
    TruncatedLevy(double beta, double cutoff) : beta_(beta), cutoff_(cutoff) {}

    double operator()(Rng& rng) {
        for (;;) {
            const double x = levy_stable_variate(beta_, rng);
            ++attempts_;
            if (std::abs(x) <= cutoff_) {
                ++accepted_;
                return x;
            }
            if (attempts_ % kCheckEvery == 0) check();
        }
    }

    void check() const {
        if (attempts_ >= kCheckEvery && static_cast<double>(accepted_) < kMinTruncationAcceptance * attempts_) {
            std::ostringstream os;
            os << "truncated Levy acceptance rate " << static_cast<double>(accepted_) / attempts_
               << " is below " << kMinTruncationAcceptance << " (beta " << beta_ << ", cutoff " << cutoff_ << ")";
            throw ConfigError({os.str()});
        }
    }

private:
    static constexpr std::uint64_t kCheckEvery = 1 << 16;
    double beta_;
    double cutoff_;
    std::uint64_t attempts_ = 0;
    std::uint64_t accepted_ = 0;
};

inline void require_cutoff(double cutoff) {
    if (!(cutoff > 0.0)) {
        std::ostringstream os;
        os << "truncation cutoff must be positive, got " << cutoff;
        throw ConfigError({os.str()});
    }
}

} // namespace detail

/// Symmetric beta-stable samples with characteristic function exp(-|k|^beta).
inline std::vector<double> sample_levy_stable(double beta, std::size_t n, std::uint64_t seed) {
    detail::require_beta(beta);
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& x : out) x = detail::levy_stable_variate(beta, rng);
    return out;
}

/// Stable samples conditioned on |x| <= cutoff (rejection).
inline std::vector<double> sample_truncated_levy(double beta, double cutoff, std::size_t n, std::uint64_t seed) {
    detail::require_beta(beta);
    detail::require_cutoff(cutoff);
    Rng rng(seed);
    detail::TruncatedLevy draw(beta, cutoff);
    std::vector<double> out(n);
    for (auto& x : out) x = draw(rng);
    draw.check();
    return out;
}

/// Unit-mean exponential waits for mu = 0, one-sided (1-mu)-stable otherwise.
inline std::vector<double> sample_waiting_time(double mu, std::size_t n, std::uint64_t seed) {
    detail::require_mu(mu);
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& t : out) t = detail::waiting_time_variate(mu, rng);
    return out;
}

/// Positions of independent walkers sampled on a shared time grid.
struct ParticleEnsemble {
    std::size_t n_particles = 0;
    std::vector<double> observation_times;
    std::vector<double> positions; ///< particle-major: positions[p * times + i]
    std::uint64_t seed = 0;
    FractionalOrders orders{2.0, 0.0};
    std::optional<double> truncation;

    double position(std::size_t particle, std::size_t time_index) const {
        return positions[particle * observation_times.size() + time_index];
    }

    void validate() const {
        if (positions.size() != n_particles * observation_times.size())
            throw UsageError("ensemble positions do not match particles x times");
        for (std::size_t i = 1; i < observation_times.size(); ++i)
            if (!(observation_times[i] > observation_times[i - 1]))
                throw UsageError("observation times must be strictly increasing");
        for (double x : positions)
            if (!std::isfinite(x)) throw UsageError("ensemble positions must be finite");
    }
};

struct CtrwConfig {
    FractionalOrders orders{2.0, 0.0};
    std::size_t n_particles = 100000;
    double t_max = 1000.0;
    std::uint64_t seed = 0;
    std::optional<double> truncation;
    std::size_t n_times = 31; ///< log-spaced over [1e-3 t_max, t_max]

    void validate() const {
        std::vector<std::string> problems;
        if (n_particles < 1) problems.push_back("n_particles must be >= 1");
        if (!(t_max > 0.0) || !std::isfinite(t_max)) problems.push_back("t_max must be positive and finite");
        if (n_times < 3) problems.push_back("n_times must be >= 3");
        if (truncation && !(*truncation > 0.0)) problems.push_back("truncation cutoff must be positive");
        if (orders.beta() < 2.0 && !truncation)
            problems.push_back("beta < 2 needs a truncation cutoff (untruncated jumps have no finite variance)");
        if (!problems.empty()) throw ConfigError(problems);
    }
};

inline std::vector<double> observation_grid(double t_max, std::size_t n_times) {
    std::vector<double> t(n_times);
    for (std::size_t i = 0; i < n_times; ++i)
        t[i] = t_max * std::pow(10.0, -3.0 + 3.0 * static_cast<double>(i) / static_cast<double>(n_times - 1));
    t.back() = t_max;
    return t;
}

/// Runs the walk. Particle p draws from its own stream stream_seed(seed, p), so
/// the result does not depend on `threads` (0 means hardware concurrency).
inline ParticleEnsemble ctrw_simulate(const CtrwConfig& cfg, unsigned threads = 1) {
    cfg.validate();
    const double beta = cfg.orders.beta();
    const double mu = cfg.orders.mu();
    if (cfg.truncation) sample_truncated_levy(beta, *cfg.truncation, 128, cfg.seed);

    ParticleEnsemble ens;
    ens.n_particles = cfg.n_particles;
    ens.observation_times = observation_grid(cfg.t_max, cfg.n_times);
    ens.positions.assign(cfg.n_particles * cfg.n_times, 0.0);
    ens.seed = cfg.seed;
    ens.orders = cfg.orders;
    ens.truncation = cfg.truncation;

    const auto& obs = ens.observation_times;
    auto walk = [&](std::size_t p) {
        Rng rng(stream_seed(cfg.seed, p));
        detail::TruncatedLevy truncated(beta, cfg.truncation.value_or(1.0));
        double* row = ens.positions.data() + p * obs.size();
        double t = 0.0, x = 0.0;
        std::size_t next = 0;
        while (next < obs.size()) {
            t += detail::waiting_time_variate(mu, rng);
            while (next < obs.size() && obs[next] < t) row[next++] = x;
            if (next == obs.size()) break;
            x += cfg.truncation ? truncated(rng) : detail::levy_stable_variate(beta, rng);
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.n_particles));
    if (threads <= 1) {
        for (std::size_t p = 0; p < cfg.n_particles; ++p) walk(p);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t p = w; p < cfg.n_particles; p += threads) walk(p);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return ens;
}

/// Width <|x|^q>^{2/q} at each observation time.
struct MsdSeries {
    std::vector<double> times;
    std::vector<double> width_sq;
    double q = 2.0;
};

namespace detail {

inline void require_moment_order(const ParticleEnsemble& ens, double q) {
    if (!(q > 0.0) || !std::isfinite(q)) {
        std::ostringstream os;
        os << "moment order q must be positive, got " << q;
        throw UsageError(os.str());
    }
    // Gaussian jumps (beta = 2) have moments of every order.
    const double beta = ens.orders.beta();
    if (beta < 2.0 && !ens.truncation && q >= beta) {
        std::ostringstream os;
        os << "moment order q = " << q << " is not below beta = " << beta
           << "; untruncated stable jumps have no finite moment of that order";
        throw EstimatorValidityError(os.str());
    }
}

} // namespace detail

inline double default_moment_order(const ParticleEnsemble& ens) { return ens.orders.beta() / 3.0; }

inline MsdSeries width_series(const ParticleEnsemble& ens, double q) {
    ens.validate();
    detail::require_moment_order(ens, q);
    const std::size_t nt = ens.observation_times.size();
    MsdSeries s;
    s.q = q;
    s.times = ens.observation_times;
    s.width_sq.assign(nt, 0.0);
    // Particle-ordered summation keeps the result independent of how the
    // ensemble was generated.
    for (std::size_t i = 0; i < nt; ++i) {
        double acc = 0.0;
        for (std::size_t p = 0; p < ens.n_particles; ++p) acc += std::pow(std::abs(ens.position(p, i)), q);
        s.width_sq[i] = std::pow(acc / static_cast<double>(ens.n_particles), 2.0 / q);
    }
    return s;
}

/// Default fit window: the observation span minus half a decade at each end.
struct TimeWindow {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

inline TimeWindow default_fit_window(const std::vector<double>& times) {
    if (times.empty()) throw UsageError("no observation times");
    const double pad = std::sqrt(10.0);
    return {times.front() * pad, times.back() / pad};
}

struct WidthFit {
    double eta = 0.0;
    double std_error = 0.0;
    double q = 0.0;
    TimeWindow window;
    std::size_t points = 0;
};

inline WidthFit fit_width(const MsdSeries& s, TimeWindow window) {
    std::vector<double> t, w;
    // Relative slack so that nominal window edges on the grid are kept.
    const double lo = window.t_lo * (1.0 - 1e-9), hi = window.t_hi * (1.0 + 1e-9);
    for (std::size_t i = 0; i < s.times.size(); ++i)
        if (s.times[i] >= lo && s.times[i] <= hi) {
            t.push_back(s.times[i]);
            w.push_back(s.width_sq[i]);
        }
    const auto fit = fit_loglog(t, w);
    return WidthFit{fit.exponent, fit.std_error, s.q, window, fit.points};
}

/// Slope of log <|x|^q>^{2/q} against log t over `window`.
inline WidthFit width_exponent(const ParticleEnsemble& ens, double q, std::optional<TimeWindow> window = {}) {
    if (ens.observation_times.size() < 3) throw UsageError("width_exponent needs at least three observation times");
    const auto series = width_series(ens, q);
    return fit_width(series, window.value_or(default_fit_window(ens.observation_times)));
}

inline WidthFit width_exponent(const ParticleEnsemble& ens) { return width_exponent(ens, default_moment_order(ens)); }

/// u_hat(k, t) = E_{1-mu}(-gamma |k|^beta t^{1-mu}) u_hat(k, 0).
inline SpectralField propagator(const GridSpec& grid, const FractionalOrders& orders, double gamma, double t,
                                const SpectralField& initial) {
    if (!(initial.grid() == grid)) throw UsageError("initial field grid does not match propagator grid");
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw UsageError("gamma must be finite and >= 0");
    if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("propagator time must be finite and >= 0");
    const double alpha = 1.0 - orders.mu();
    const double beta = orders.beta();
    const double tau = std::pow(t, alpha);
    SpectralField out = initial;
    if (t == 0.0) return out;
    std::map<double, double> cache; // many modes share |k|^2
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double k2 = k_squared(grid, i);
        if (k2 == 0.0) continue;
        auto [it, fresh] = cache.try_emplace(k2, 0.0);
        if (fresh) it->second = mittag_leffler(alpha, -gamma * std::pow(k2, 0.5 * beta) * tau);
        out[i] *= it->second;
    }
    return out;
}

} // namespace fracturb
