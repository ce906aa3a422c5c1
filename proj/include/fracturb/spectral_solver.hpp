#pragma once

// Pseudo-spectral solver for 2D incompressible flow with fractional dissipation,
// in vorticity form on the periodic box [0, L)^2:
//
//   d omega/dt + u . grad omega = -nu D_t^mu (-Laplacian)^{beta/2} omega + f
//
// mu = 0: the dissipation is integrated exactly by the factor exp(-nu |k|^beta dt);
// the advection term uses classical RK4 in the integrating-factor frame.
//
// mu > 0: D_t^mu is the Grunwald-Letnikov (Riemann-Liouville) derivative with
// zero pre-history, D^mu g(t_n) ~ dt^-mu sum_{j<H} w_j g_{n-j}. The operator is
// split as nu L omega + nu L (D^mu omega - omega): the first part keeps the exact
// integrating factor, the second (the memory correction) is evaluated once per
// step from the stored history and held fixed through the RK4 stages. At mu = 0
// the correction vanishes identically and the step coincides with the mu = 0
// step. For a single linear mode this reproduces the relaxation
// E_{1-mu}(-nu |k|^beta t^{1-mu}) with first-order accuracy in dt.
//
// Quadratic products are dealiased with the 2/3 rule: modes with
// |m_x| > (n-1)/3 or |m_y| > (n-1)/3 are removed from the advection term.
//
// A solver instance holds no mutable state; FlowState carries everything that
// evolves. Distinct states may be stepped concurrently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fracturb/analysis.hpp"
#include "fracturb/errors.hpp"
#include "fracturb/fft.hpp"
#include "fracturb/fractional_operators.hpp"
#include "fracturb/grid.hpp"
#include "fracturb/random.hpp"
#include "fracturb/scaling_laws.hpp"

namespace fracturb {

/// White-in-time forcing on the shells k_lo <= |m| <= k_hi. Each step adds
/// amplitude * sqrt(dt) * exp(i theta_k) to every forced vorticity mode with
/// fresh phases drawn from stream (seed, step), so the mean injection rate
/// does not depend on dt.
struct BandForcing {
    double k_lo = 3.0;
    double k_hi = 5.0;
    double amplitude = 1.0;
    std::uint64_t seed = 1;
};

/// Isotropic envelope for the initial vorticity.
struct SpectrumShape {
    enum class Kind { shell, gaussian };
    Kind kind = Kind::gaussian;
    double k_peak = 4.0; ///< integer-wavenumber units
    double width = 1.0;  ///< gaussian only
    double energy = 0.5; ///< total kinetic energy (grid mean of |u|^2 / 2)
};

struct SolverConfig {
    GridSpec grid{2, 64, 2.0 * std::numbers::pi};
    FractionalOrders orders{2.0, 0.0};
    double nu = 1e-3; ///< dissipation coefficient, 1 / (scaled Reynolds number)
    double dt = 1e-3;
    double t_end = 1.0;
    std::optional<BandForcing> forcing;
    bool dealias = true;
    bool advection = true;
    std::size_t history_len = 256; ///< Grunwald-Letnikov terms kept when mu > 0
    std::uint64_t seed = 0;
    double cfl = 0.5;
    double memory_tolerance = 1e-2; ///< warn when the discarded GL weight mass exceeds this
    SpectrumShape initial{};
    std::vector<double> snapshot_times;

    /// Collects every problem before throwing.
    void validate() const {
        std::vector<std::string> problems;
        auto bad = [&](const std::string& s) { problems.push_back(s); };
        try {
            grid.validate();
        } catch (const UsageError& e) {
            bad(e.what());
        }
        if (grid.dims != 2) bad("solver grid must be two-dimensional");
        if (!(nu >= 0.0) || !std::isfinite(nu)) bad("nu must be finite and >= 0");
        if (!(dt > 0.0) || !std::isfinite(dt)) bad("dt must be positive");
        if (!(t_end >= 0.0) || !std::isfinite(t_end)) bad("t_end must be >= 0");
        if (!(cfl > 0.0)) bad("cfl must be positive");
        if (orders.mu() > 0.0 && history_len < 1) bad("history_len must be >= 1 when mu > 0");
        if (!(memory_tolerance > 0.0)) bad("memory_tolerance must be positive");
        if (forcing) {
            if (!(forcing->k_lo > 0.0) || !(forcing->k_hi >= forcing->k_lo))
                bad("forcing band needs 0 < k_lo <= k_hi");
            if (!(forcing->amplitude >= 0.0)) bad("forcing amplitude must be >= 0");
            const double cutoff = static_cast<double>((grid.n - 1) / 3);
            if (dealias && forcing->k_hi > cutoff) bad("forcing band extends past the dealiasing cutoff");
        }
        for (double t : snapshot_times)
            if (!(t >= 0.0)) bad("snapshot times must be >= 0");
        if (!problems.empty()) throw ConfigError(problems);
    }
};

/// Ring of past vorticity fields, newest first.
class VorticityHistory {
public:
    VorticityHistory() = default;
    explicit VorticityHistory(std::size_t capacity) : slots_(capacity) {}

    std::size_t capacity() const { return slots_.size(); }
    std::size_t size() const { return count_; }

    void push(const SpectralField& f) {
        if (slots_.empty()) return;
        head_ = (head_ + slots_.size() - 1) % slots_.size();
        slots_[head_] = f;
        count_ = std::min(count_ + 1, slots_.size());
    }

    /// Field from `ago` steps back; ago = 0 is the most recent entry.
    const SpectralField& ago(std::size_t ago) const { return slots_[(head_ + ago) % slots_.size()]; }

private:
    std::vector<SpectralField> slots_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
};

struct FlowState {
    SpectralField omega_hat;
    double time = 0.0;
    std::size_t step = 0;
    VorticityHistory history; ///< previous states omega_{n-1}, omega_{n-2}, ...; empty when mu = 0
};

struct VelocityPair {
    SpectralField u;
    SpectralField v;
};

/// u_hat = i k_y omega_hat / |k|^2, v_hat = -i k_x omega_hat / |k|^2. Nyquist
/// slots are zeroed so the result stays Hermitian.
inline VelocityPair velocity_from_vorticity(const SpectralField& omega_hat) {
    const auto& g = omega_hat.grid();
    if (g.dims != 2) throw UsageError("velocity_from_vorticity needs a 2D field");
    VelocityPair vel{SpectralField(g), SpectralField(g)};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double k2 = k_squared(g, i);
        if (k2 == 0.0 || is_nyquist(g, i)) continue;
        const auto m = mode_of(g, i);
        const double kx = g.dk() * m[0];
        const double ky = g.dk() * m[1];
        const Complex w = omega_hat[i] / k2;
        vel.u[i] = Complex(0.0, ky) * w;
        vel.v[i] = Complex(0.0, -kx) * w;
    }
    return vel;
}

/// Per-step bookkeeping used by the energy-budget diagnostics.
struct StepReport {
    double energy_before = 0.0;
    double energy_after_dynamics = 0.0; ///< after advection and dissipation, before forcing
    double energy_after = 0.0;
    double dissipation_before = 0.0;
    double dissipation_after_dynamics = 0.0;
    double injection_rate = 0.0; ///< energy added by forcing this step, divided by dt
    double cfl_number = 0.0;
    double memory_tail = 0.0; ///< discarded GL weight mass times max |L omega|
};

struct StepDiagnostics {
    std::size_t step = 0;
    double time = 0.0;
    double energy = 0.0;
    double enstrophy = 0.0;
    double dissipation_rate = 0.0;
    double injection_rate = 0.0;
};

struct SpectrumSnapshot {
    double time = 0.0;
    SpectrumSeries spectrum;
};

struct RunOutput {
    std::vector<StepDiagnostics> diagnostics;
    std::vector<SpectrumSnapshot> snapshots;
    SpectrumSeries final_spectrum;
    FlowState final_state;
    std::vector<std::string> warnings;
};

class SpectralSolver {
public:
    explicit SpectralSolver(SolverConfig config) : SpectralSolver(config, {}) {}

    /// Uses `symbol` in place of |k|^beta (for cross-checking against
    /// independently built operators). Empty means |k|^beta.
    SpectralSolver(SolverConfig config, std::vector<double> symbol) : config_(std::move(config)) {
        config_.validate();
        const auto& g = config_.grid;
        symbol_ = symbol.empty() ? laplacian_symbol(g, config_.orders.beta()) : std::move(symbol);
        if (symbol_.size() != g.size()) throw UsageError("dissipation symbol size does not match grid");

        const std::size_t total = g.size();
        kx_.resize(total);
        ky_.resize(total);
        inv_k2_.resize(total);
        mask_.resize(total);
        decay_.resize(total);
        half_decay_.resize(total);
        const int cutoff = static_cast<int>((g.n - 1) / 3);
        for (std::size_t i = 0; i < total; ++i) {
            const auto m = mode_of(g, i);
            const bool nyq = is_nyquist(g, i);
            kx_[i] = nyq ? 0.0 : g.dk() * m[0];
            ky_[i] = nyq ? 0.0 : g.dk() * m[1];
            const double k2 = k_squared(g, i);
            inv_k2_[i] = k2 == 0.0 ? 0.0 : 1.0 / k2;
            const bool keep = !config_.dealias || (std::abs(m[0]) <= cutoff && std::abs(m[1]) <= cutoff);
            mask_[i] = keep && !nyq && k2 > 0.0 ? 1.0 : 0.0;
            const double rate = config_.nu * symbol_[i];
            decay_[i] = std::exp(-rate * config_.dt);
            half_decay_[i] = std::exp(-rate * 0.5 * config_.dt);
        }
        if (config_.orders.mu() > 0.0) {
            gl_ = gl_weights(config_.orders.mu(), std::max<std::size_t>(config_.history_len, 1));
            discarded_weight_ = gl_.partial_sum(gl_.w.size() - 1);
        }
    }

    const SolverConfig& config() const { return config_; }
    std::span<const double> symbol() const { return symbol_; }
    std::span<const double> dealias_mask() const { return mask_; }

    FlowState init_state() const { return init_state(config_.initial); }

    /// Random-phase vorticity whose kinetic-energy spectrum follows `shape`,
    /// rescaled to exactly shape.energy. Deterministic in the config seed.
    FlowState init_state(const SpectrumShape& shape) const {
        const auto& g = config_.grid;
        const double cutoff = static_cast<double>((g.n - 1) / 3);
        std::vector<std::string> problems;
        if (!(shape.energy >= 0.0) || !std::isfinite(shape.energy)) problems.push_back("initial energy must be >= 0");
        if (!(shape.k_peak > 0.0)) problems.push_back("initial k_peak must be positive");
        if (shape.k_peak > cutoff) problems.push_back("initial k_peak lies beyond the dealiasing cutoff");
        if (shape.kind == SpectrumShape::Kind::gaussian && !(shape.width > 0.0))
            problems.push_back("gaussian envelope needs width > 0");
        if (!problems.empty()) throw UsageError("invalid spectrum shape: " + std::string(ConfigError(problems).what()));

        FlowState state{SpectralField(g), 0.0, 0, make_history()};
        if (shape.energy == 0.0) return state;

        // Modes per shell, so that the envelope describes shell energy.
        std::vector<double> shell_count(static_cast<std::size_t>(g.n) * 2, 0.0);
        auto shell = [&](std::size_t i) { return detail::shell_of(g, i); };
        for (std::size_t i = 0; i < g.size(); ++i)
            if (mask_[i] > 0.0 && inv_k2_[i] > 0.0) shell_count[shell(i)] += 1.0;

        auto envelope = [&](int s) -> double {
            if (shape.kind == SpectrumShape::Kind::shell)
                return s == static_cast<int>(std::lround(shape.k_peak)) ? 1.0 : 0.0;
            const double d = (s - shape.k_peak) / shape.width;
            return std::exp(-0.5 * d * d);
        };

        Rng rng(stream_seed(config_.seed, 0));
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            if (mask_[i] == 0.0 || inv_k2_[i] == 0.0) continue;
            const auto m = mode_of(g, i);
            // One representative per +/- pair; its partner is set to the conjugate.
            if (!(m[1] > 0 || (m[1] == 0 && m[0] > 0))) continue;
            const int s = shell(i);
            const double mode_energy = envelope(s) / shell_count[s];
            // Energy of the pair is |omega|^2 / |k|^2.
            const double amp = std::sqrt(mode_energy / inv_k2_[i]);
            state.omega_hat[i] = std::polar(amp, phase);
            state.omega_hat[state.omega_hat.conjugate_index(i)] = std::polar(amp, -phase);
        }
        const double e = energy(state.omega_hat);
        if (e == 0.0) throw UsageError("invalid spectrum shape: envelope selects no resolved modes");
        state.omega_hat *= std::sqrt(shape.energy / e);
        return state;
    }

    /// Grid-mean kinetic energy sum_k |omega_hat|^2 / (2 |k|^2).
    double energy(const SpectralField& w) const {
        double e = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) e += std::norm(w[i]) * inv_k2_[i];
        return 0.5 * e;
    }

    double enstrophy(const SpectralField& w) const {
        double z = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) z += std::norm(w[i]);
        return 0.5 * z;
    }

    /// Energy dissipation rate 2 nu sum_k |k|^beta E(k) of the instantaneous operator.
    double dissipation_rate(const SpectralField& w) const {
        double d = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) d += symbol_[i] * std::norm(w[i]) * inv_k2_[i];
        return config_.nu * d;
    }

    /// Energy dissipation rate including memory: nu sum Re(conj(psi_hat) L D^mu omega).
    double dissipation_rate(const FlowState& s) const {
        if (config_.orders.mu() == 0.0) return dissipation_rate(s.omega_hat);
        const SpectralField gl = memory_derivative(s);
        double d = 0.0;
        for (std::size_t i = 0; i < gl.size(); ++i)
            d += symbol_[i] * inv_k2_[i] * (std::conj(s.omega_hat[i]) * gl[i]).real();
        return config_.nu * d;
    }

    /// -(u . grad omega), dealiased. `max_speed` receives max |u| on the grid.
    SpectralField nonlinear_term(const SpectralField& omega_hat, double* max_speed = nullptr) const {
        const auto& g = config_.grid;
        const std::size_t total = g.size();
        std::vector<Complex> vel(total), grad(total);
        // Pack (u, v) and (omega_x, omega_y) as real/imaginary parts: both
        // fields are Hermitian, so one inverse transform yields two real fields.
        for (std::size_t i = 0; i < total; ++i) {
            const Complex w = omega_hat[i];
            const Complex uh = Complex(0.0, ky_[i] * inv_k2_[i]) * w;
            const Complex vh = Complex(0.0, -kx_[i] * inv_k2_[i]) * w;
            const Complex wx = Complex(0.0, kx_[i]) * w;
            const Complex wy = Complex(0.0, ky_[i]) * w;
            vel[i] = uh + Complex(0.0, 1.0) * vh;
            grad[i] = wx + Complex(0.0, 1.0) * wy;
        }
        std::vector<Complex> vel_x(total), grad_x(total);
        inverse_transform(g, vel, vel_x);
        inverse_transform(g, grad, grad_x);
        double umax2 = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            const double u = vel_x[i].real(), v = vel_x[i].imag();
            umax2 = std::max(umax2, u * u + v * v);
            vel[i] = Complex(-(u * grad_x[i].real() + v * grad_x[i].imag()), 0.0);
        }
        if (max_speed) *max_speed = std::sqrt(umax2);
        SpectralField out(g);
        forward_transform(g, vel, out.coeffs());
        for (std::size_t i = 0; i < total; ++i) out[i] *= mask_[i];
        return out;
    }

    /// One step of the mu = 0 equation.
    StepReport step(FlowState& s) const {
        if (config_.orders.mu() != 0.0) throw UsageError("step() is the mu = 0 path; use step_memory()");
        StepReport r;
        r.energy_before = energy(s.omega_hat);
        r.dissipation_before = dissipation_rate(s.omega_hat);
        s.omega_hat = integrate(s.omega_hat, nullptr, r.cfl_number);
        finish_step(s, r);
        return r;
    }

    /// One step with the fractional-time memory dissipation (mu > 0).
    StepReport step_memory(FlowState& s) const {
        if (!(config_.orders.mu() > 0.0)) throw UsageError("step_memory() needs mu > 0");
        StepReport r;
        r.energy_before = energy(s.omega_hat);
        r.dissipation_before = dissipation_rate(s);

        // Memory correction nu L (D^mu omega - omega), held fixed over the step.
        SpectralField correction = memory_derivative(s);
        double max_field = 0.0;
        for (std::size_t i = 0; i < correction.size(); ++i) {
            correction[i] = config_.nu * symbol_[i] * (correction[i] - s.omega_hat[i]);
            max_field = std::max(max_field, symbol_[i] * std::abs(s.omega_hat[i]));
        }
        if (s.step + 1 >= gl_.w.size()) r.memory_tail = discarded_weight_ * max_field;

        const SpectralField previous = s.omega_hat;
        s.omega_hat = integrate(s.omega_hat, &correction, r.cfl_number);
        s.history.push(previous);
        finish_step(s, r);
        return r;
    }

    /// Dispatches to step() or step_memory() by mu.
    StepReport advance(FlowState& s) const { return config_.orders.mu() > 0.0 ? step_memory(s) : step(s); }

    /// Magnitude of the GL weights beyond history_len (0 when mu = 0).
    double discarded_weight() const { return discarded_weight_; }

    RunOutput run() const { return run(init_state()); }

    RunOutput run(FlowState state) const {
        RunOutput out;
        auto snapshots = config_.snapshot_times;
        std::sort(snapshots.begin(), snapshots.end());
        std::size_t next_snapshot = 0;
        auto take_snapshots = [&](const FlowState& st) {
            while (next_snapshot < snapshots.size() && st.time >= snapshots[next_snapshot] - 1e-9 * config_.dt) {
                out.snapshots.push_back({st.time, shell_spectrum_from_vorticity(st.omega_hat)});
                ++next_snapshot;
            }
        };
        auto record = [&](const FlowState& st, double injection) {
            out.diagnostics.push_back({st.step, st.time, energy(st.omega_hat), enstrophy(st.omega_hat),
                                       dissipation_rate(st), injection});
        };

        record(state, 0.0);
        take_snapshots(state);
        const auto steps = static_cast<std::size_t>(std::llround(config_.t_end / config_.dt));
        double worst_tail = 0.0;
        for (std::size_t n = 0; n < steps; ++n) {
            const StepDiagnostics last_good = out.diagnostics.back();
            FlowState trial = state;
            StepReport r;
            r = advance(trial);
            if (!trial.omega_hat.is_finite() || !std::isfinite(r.energy_after)) {
                std::ostringstream os;
                os.precision(17);
                os << "non-finite vorticity at step " << trial.step << "; last good state: step " << last_good.step
                   << ", time " << last_good.time << ", energy " << last_good.energy << ", enstrophy "
                   << last_good.enstrophy;
                throw NumericalFailure(os.str());
            }
            state = std::move(trial);
            worst_tail = std::max(worst_tail, r.memory_tail);
            record(state, r.injection_rate);
            take_snapshots(state);
        }
        if (config_.orders.mu() > 0.0 && steps >= gl_.w.size() && discarded_weight_ > config_.memory_tolerance) {
            std::ostringstream os;
            os << "memory history truncated at " << gl_.w.size() << " terms: discarded weight "
               << discarded_weight_ << " exceeds tolerance " << config_.memory_tolerance
               << " (tail estimate " << worst_tail << ")";
            out.warnings.push_back(os.str());
        }
        out.final_spectrum = shell_spectrum_from_vorticity(state.omega_hat);
        out.final_state = std::move(state);
        return out;
    }

private:
    VorticityHistory make_history() const {
        if (config_.orders.mu() == 0.0) return {};
        return VorticityHistory(config_.history_len > 0 ? config_.history_len - 1 : 0);
    }

    /// dt^-mu sum_{j<H} w_j omega_{n-j}, omega_n being the current state.
    SpectralField memory_derivative(const FlowState& s) const {
        SpectralField acc = s.omega_hat;
        for (std::size_t j = 1; j <= s.history.size() && j < gl_.w.size(); ++j) {
            const SpectralField& past = s.history.ago(j - 1);
            const double w = gl_.w[j];
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * past[i];
        }
        acc *= std::pow(config_.dt, -config_.orders.mu());
        return acc;
    }

    SpectralField rhs(const SpectralField& w, const SpectralField* correction, double* max_speed) const {
        SpectralField out = config_.advection ? nonlinear_term(w, max_speed) : SpectralField(w.grid());
        if (correction)
            for (std::size_t i = 0; i < out.size(); ++i) out[i] -= (*correction)[i];
        return out;
    }

    /// Integrating-factor RK4 for d omega/dt = -nu L omega + N(omega) - correction.
    SpectralField integrate(const SpectralField& w, const SpectralField* correction, double& cfl_number) const {
        const double dt = config_.dt;
        const std::size_t total = w.size();
        double umax = 0.0;
        SpectralField a = rhs(w, correction, &umax);
        cfl_number = umax * dt / config_.grid.dx();
        if (config_.advection && cfl_number > config_.cfl) {
            std::ostringstream os;
            os << "CFL violated: dt * max|u| / dx = " << cfl_number << " > " << config_.cfl << " (dt " << dt
               << ", max|u| " << umax << ", dx " << config_.grid.dx() << "); reduce dt below "
               << config_.cfl * config_.grid.dx() / umax;
            throw StepSizeError(os.str());
        }
        a *= dt;
        SpectralField tmp(w.grid());
        for (std::size_t i = 0; i < total; ++i) tmp[i] = half_decay_[i] * (w[i] + 0.5 * a[i]);
        SpectralField b = rhs(tmp, correction, nullptr);
        b *= dt;
        for (std::size_t i = 0; i < total; ++i) tmp[i] = half_decay_[i] * w[i] + 0.5 * b[i];
        SpectralField c = rhs(tmp, correction, nullptr);
        c *= dt;
        for (std::size_t i = 0; i < total; ++i) tmp[i] = decay_[i] * w[i] + half_decay_[i] * c[i];
        SpectralField d = rhs(tmp, correction, nullptr);
        d *= dt;
        SpectralField next(w.grid());
        for (std::size_t i = 0; i < total; ++i)
            next[i] = decay_[i] * w[i] +
                      (decay_[i] * a[i] + 2.0 * half_decay_[i] * (b[i] + c[i]) + d[i]) / 6.0;
        return next;
    }

    void finish_step(FlowState& s, StepReport& r) const {
        r.energy_after_dynamics = energy(s.omega_hat);
        s.time = static_cast<double>(s.step + 1) * config_.dt;
        r.dissipation_after_dynamics = dissipation_rate(s.omega_hat);
        if (config_.orders.mu() > 0.0) {
            // History already holds the pre-step state; the rate uses the new state as j = 0.
            r.dissipation_after_dynamics = dissipation_rate(s);
        }
        if (config_.forcing && config_.forcing->amplitude > 0.0) add_forcing(s.omega_hat, s.step + 1);
        s.step += 1;
        r.energy_after = energy(s.omega_hat);
        r.injection_rate = (r.energy_after - r.energy_after_dynamics) / config_.dt;
    }

    void add_forcing(SpectralField& w, std::size_t step_index) const {
        const auto& g = config_.grid;
        const auto& f = *config_.forcing;
        const double amp = f.amplitude * std::sqrt(config_.dt);
        Rng rng(stream_seed(f.seed, step_index));
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto m = mode_of(g, i);
            if (!(m[1] > 0 || (m[1] == 0 && m[0] > 0))) continue;
            if (mask_[i] == 0.0) continue;
            const double r = std::sqrt(double(m[0]) * m[0] + double(m[1]) * m[1]);
            if (r < f.k_lo || r > f.k_hi) continue;
            const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const Complex kick = std::polar(amp, phase);
            w[i] += kick;
            w[w.conjugate_index(i)] += std::conj(kick);
        }
    }

    SolverConfig config_;
    std::vector<double> symbol_;
    std::vector<double> kx_, ky_, inv_k2_, mask_;
    std::vector<double> decay_, half_decay_;
    GlWeights gl_{};
    double discarded_weight_ = 0.0;
};

} // namespace fracturb
