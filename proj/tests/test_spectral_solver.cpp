#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fracturb/fft.hpp"
#include "fracturb/mittag_leffler.hpp"
#include "fracturb/spectral_solver.hpp"

using namespace fracturb;

namespace {

SolverConfig base_config(std::size_t n = 32) {
    SolverConfig c;
    c.grid = GridSpec{2, n, 2.0 * std::numbers::pi};
    c.nu = 1e-2;
    c.dt = 1e-3;
    c.t_end = 0.0;
    c.seed = 42;
    return c;
}

/// Random vorticity restricted to the dealiased band, zero mean.
SpectralField band_limited_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    std::vector<double> x(g.size());
    for (auto& v : x) v = nd(gen);
    auto f = to_spectral(g, x);
    const int cutoff = static_cast<int>((g.n - 1) / 3);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto m = mode_of(g, i);
        if (std::abs(m[0]) > cutoff || std::abs(m[1]) > cutoff || (m[0] == 0 && m[1] == 0)) f[i] = 0.0;
    }
    return f;
}

/// -(u . grad omega) by direct convolution over all pairs of input modes.
/// Valid when the input lies inside the dealiased band.
SpectralField convolution_advection(const SpectralField& w) {
    const auto& g = w.grid();
    const double dk = g.dk();
    SpectralField out(g);
    const int cutoff = static_cast<int>((g.n - 1) / 3);
    for (std::size_t kk = 0; kk < g.size(); ++kk) {
        const auto k = mode_of(g, kk);
        if (std::abs(k[0]) > cutoff || std::abs(k[1]) > cutoff) continue;
        Complex acc = 0.0;
        for (std::size_t pp = 0; pp < g.size(); ++pp) {
            const auto p = mode_of(g, pp);
            const int qx = k[0] - p[0], qy = k[1] - p[1];
            if (std::abs(qx) > cutoff || std::abs(qy) > cutoff) continue;
            const double p2 = dk * dk * (p[0] * p[0] + p[1] * p[1]);
            if (p2 == 0.0) continue;
            const Complex wp = w[pp];
            const Complex wq = w.at_mode(qx, qy);
            const Complex up = Complex(0.0, dk * p[1] / p2) * wp;
            const Complex vp = Complex(0.0, -dk * p[0] / p2) * wp;
            acc += up * Complex(0.0, dk * qx) * wq + vp * Complex(0.0, dk * qy) * wq;
        }
        out[kk] = -acc;
    }
    return out;
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double max_abs(const SpectralField& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i]));
    return worst;
}

} // namespace

TEST(SolverConfig, ValidationCollectsEveryProblem) {
    SolverConfig c = base_config();
    c.dt = -1.0;
    c.nu = -2.0;
    c.cfl = 0.0;
    c.grid.n = 12;
    try {
        c.validate();
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_GE(e.problems().size(), 4u);
    }
    SolverConfig m = base_config();
    m.orders = FractionalOrders(2.0, 0.5);
    m.history_len = 0;
    EXPECT_THROW(m.validate(), ConfigError);
    SolverConfig one_d = base_config();
    one_d.grid.dims = 1;
    EXPECT_THROW(one_d.validate(), ConfigError);
}

TEST(Velocity, SingleModeAndZeroField) {
    const GridSpec g{2, 16, 2.0 * std::numbers::pi};
    SpectralField w(g);
    w.at_mode(3, -4) = Complex(1.5, -0.5);
    w.at_mode(-3, 4) = Complex(1.5, 0.5);
    const auto vel = velocity_from_vorticity(w);
    const double k = 5.0;
    EXPECT_NEAR(std::abs(vel.u.at_mode(3, -4)), std::abs(w.at_mode(3, -4)) * 4.0 / (k * k), 1e-15);
    EXPECT_NEAR(std::hypot(std::abs(vel.u.at_mode(3, -4)), std::abs(vel.v.at_mode(3, -4))), std::abs(w.at_mode(3, -4)) / k,
                1e-15);
    double elsewhere = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (i != index_of(g, 3, -4) && i != index_of(g, -3, 4)) elsewhere += std::abs(vel.u[i]) + std::abs(vel.v[i]);
    EXPECT_EQ(elsewhere, 0.0);

    const auto zero = velocity_from_vorticity(SpectralField(g));
    EXPECT_EQ(max_abs(zero.u), 0.0);
    EXPECT_EQ(max_abs(zero.v), 0.0);
}

TEST(Velocity, SineVorticity) {
    // omega = sin x  =>  u = 0, v = -cos x.
    const GridSpec g{2, 16, 2.0 * std::numbers::pi};
    std::vector<double> x(g.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(grid_point(g, i)[0]);
    const auto vel = velocity_from_vorticity(to_spectral(g, x));
    const auto u = to_physical(vel.u), v = to_physical(vel.v);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_NEAR(u[i], 0.0, 1e-15);
        EXPECT_NEAR(v[i], -std::cos(grid_point(g, i)[0]), 1e-14);
    }
}

TEST(Velocity, DivergenceFreeAndCurlRecoversVorticity) {
    const GridSpec g{2, 32, 3.0};
    const auto w = band_limited_field(g, 5);
    const auto vel = velocity_from_vorticity(w);
    double div = 0.0, curl_err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto m = mode_of(g, i);
        const double kx = g.dk() * m[0], ky = g.dk() * m[1];
        div = std::max(div, std::abs(kx * vel.u[i] + ky * vel.v[i]));
        // curl: i kx v - i ky u
        curl_err = std::max(curl_err, std::abs(Complex(0.0, kx) * vel.v[i] - Complex(0.0, ky) * vel.u[i] - w[i]));
    }
    EXPECT_LT(div, 1e-13);
    EXPECT_LT(curl_err, 1e-13);
}

TEST(Nonlinear, ZeroAndParallelShear) {
    const SpectralSolver solver(base_config(16));
    const GridSpec& g = solver.config().grid;
    EXPECT_EQ(max_abs(solver.nonlinear_term(SpectralField(g))), 0.0);
    SpectralField shear(g);
    shear.at_mode(3, 0) = 0.5;
    shear.at_mode(-3, 0) = 0.5;
    EXPECT_LT(max_abs(solver.nonlinear_term(shear)), 1e-15);
}

TEST(Nonlinear, TwoModesMatchDirectConvolution) {
    const SpectralSolver solver(base_config(16));
    const GridSpec& g = solver.config().grid;
    SpectralField w(g);
    w.at_mode(1, 2) = Complex(0.7, 0.2);
    w.at_mode(-1, -2) = std::conj(w.at_mode(1, 2));
    w.at_mode(-3, 1) = Complex(-0.4, 0.9);
    w.at_mode(3, -1) = std::conj(w.at_mode(-3, 1));
    const auto got = solver.nonlinear_term(w);
    const auto ref = convolution_advection(w);
    EXPECT_LT(max_abs_diff(got, ref), 1e-12);
    EXPECT_GT(max_abs(ref), 0.1);
}

TEST(Nonlinear, RandomBandLimitedFieldMatchesDirectConvolution) {
    const SpectralSolver solver(base_config(16));
    const auto w = band_limited_field(solver.config().grid, 77);
    EXPECT_LT(max_abs_diff(solver.nonlinear_term(w), convolution_advection(w)), 1e-12);
}

TEST(Nonlinear, ConservesEnergyAndEnstrophyInstantaneously) {
    const SpectralSolver solver(base_config(32));
    const auto w = band_limited_field(solver.config().grid, 3);
    const auto n = solver.nonlinear_term(w);
    const auto& g = w.grid();
    double de = 0.0, dz = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double k2 = k_squared(g, i);
        const double r = (std::conj(w[i]) * n[i]).real();
        dz += r;
        if (k2 > 0.0) de += r / k2;
        scale += std::abs(w[i]) * std::abs(n[i]);
    }
    EXPECT_LT(std::abs(de), 1e-13 * scale);
    EXPECT_LT(std::abs(dz), 1e-13 * scale);
}

TEST(InitState, PrescribedEnergyParsevalAndDeterminism) {
    SolverConfig c = base_config(64);
    c.initial = SpectrumShape{SpectrumShape::Kind::shell, 4.0, 1.0, 0.37};
    const SpectralSolver solver(c);
    const auto s = solver.init_state();
    EXPECT_NEAR(solver.energy(s.omega_hat), 0.37, 1e-10);
    EXPECT_EQ(s.omega_hat[0], Complex(0.0, 0.0));
    EXPECT_LT(s.omega_hat.hermitian_defect(), 1e-15);
    // Physical-space kinetic energy.
    const auto vel = velocity_from_vorticity(s.omega_hat);
    const auto u = to_physical(vel.u), v = to_physical(vel.v);
    double e = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) e += 0.5 * (u[i] * u[i] + v[i] * v[i]);
    EXPECT_NEAR(e / u.size(), 0.37, 1e-10);
    // Shell envelope puts everything in shell 4.
    const auto spec = shell_spectrum_from_vorticity(s.omega_hat);
    EXPECT_NEAR(spec.values[4], 0.37, 1e-10);
    EXPECT_EQ(solver.init_state().omega_hat, s.omega_hat);
    SolverConfig other = c;
    other.seed = 43;
    EXPECT_FALSE(SpectralSolver(other).init_state().omega_hat == s.omega_hat);
}

TEST(InitState, ZeroEnergyAndInvalidShapes) {
    const SpectralSolver solver(base_config(32));
    const auto z = solver.init_state(SpectrumShape{SpectrumShape::Kind::gaussian, 4.0, 1.0, 0.0});
    EXPECT_EQ(max_abs(z.omega_hat), 0.0);
    EXPECT_THROW(solver.init_state(SpectrumShape{SpectrumShape::Kind::gaussian, -1.0, 1.0, 1.0}), UsageError);
    EXPECT_THROW(solver.init_state(SpectrumShape{SpectrumShape::Kind::gaussian, 4.0, 0.0, 1.0}), UsageError);
    EXPECT_THROW(solver.init_state(SpectrumShape{SpectrumShape::Kind::shell, 4.0, 1.0, -1.0}), UsageError);
    EXPECT_THROW(solver.init_state(SpectrumShape{SpectrumShape::Kind::shell, 30.0, 1.0, 1.0}), UsageError);
}

TEST(Step, LinearDecayIsExactForEveryMode) {
    for (double beta : {0.5, 1.0, 1.5, 2.0}) {
        SolverConfig c = base_config(64);
        c.orders = FractionalOrders(beta, 0.0);
        c.advection = false;
        c.nu = 0.05;
        c.dt = 0.01;
        const SpectralSolver solver(c);
        auto s = solver.init_state();
        const auto initial = s.omega_hat;
        for (int m = 0; m < 100; ++m) solver.step(s);
        const auto sym = laplacian_symbol(c.grid, beta);
        double worst = 0.0;
        for (std::size_t i = 0; i < initial.size(); ++i) {
            const Complex expected = initial[i] * std::exp(-c.nu * sym[i] * 100 * c.dt);
            if (std::abs(initial[i]) > 0.0) worst = std::max(worst, std::abs(s.omega_hat[i] - expected) / std::abs(initial[i]));
        }
        EXPECT_LT(worst, 1e-12) << beta;
    }
}

TEST(Step, InviscidInvariantsConserved) {
    SolverConfig c = base_config(64);
    c.nu = 0.0;
    c.dt = 1e-3;
    const SpectralSolver solver(c);
    auto s = solver.init_state();
    const double e0 = solver.energy(s.omega_hat), z0 = solver.enstrophy(s.omega_hat);
    for (int m = 0; m < 1000; ++m) solver.step(s);
    EXPECT_LT(std::abs(solver.energy(s.omega_hat) - e0) / e0, 1e-8);
    EXPECT_LT(std::abs(solver.enstrophy(s.omega_hat) - z0) / z0, 1e-8);
}

TEST(Step, ClassicalLaplacianBitForBit) {
    SolverConfig c = base_config(32);
    c.dt = 5e-3;
    // Classical viscous operator coded directly: |k|^2 = kx^2 + ky^2.
    std::vector<double> classical(c.grid.size());
    const double dk = 2.0 * std::numbers::pi / c.grid.length;
    for (std::size_t jy = 0; jy < c.grid.n; ++jy)
        for (std::size_t jx = 0; jx < c.grid.n; ++jx) {
            const int mx = jx < c.grid.n / 2 ? int(jx) : int(jx) - int(c.grid.n);
            const int my = jy < c.grid.n / 2 ? int(jy) : int(jy) - int(c.grid.n);
            const double kx = dk * mx, ky = dk * my;
            classical[jy * c.grid.n + jx] = kx * kx + ky * ky;
        }
    const SpectralSolver fractional(c), reference(c, classical);
    auto a = fractional.init_state(), b = reference.init_state();
    for (int m = 0; m < 20; ++m) {
        fractional.step(a);
        reference.step(b);
    }
    EXPECT_TRUE(a.omega_hat == b.omega_hat);
}

TEST(Step, LinearEnergyBudgetMatchesFiniteDifference) {
    for (double beta : {0.7, 2.0}) {
        SolverConfig c = base_config(32);
        c.orders = FractionalOrders(beta, 0.0);
        c.advection = false;
        c.nu = 0.02;
        c.dt = 1e-4;
        const SpectralSolver solver(c);
        auto s = solver.init_state();
        solver.step(s);
        const double e_prev = solver.energy(s.omega_hat);
        auto mid = s;
        solver.step(mid);
        auto next = mid;
        solver.step(next);
        const double dEdt = (solver.energy(next.omega_hat) - e_prev) / (2.0 * c.dt);
        // 2 nu sum_k |k|^beta E(k), E(k) = |omega_hat|^2 / (2 |k|^2).
        double rate = 0.0;
        const auto sym = laplacian_symbol(c.grid, beta);
        for (std::size_t i = 0; i < c.grid.size(); ++i) {
            const double k2 = k_squared(c.grid, i);
            if (k2 > 0.0) rate += 2.0 * c.nu * sym[i] * 0.5 * std::norm(mid.omega_hat[i]) / k2;
        }
        EXPECT_NEAR(dEdt, -rate, 1e-6 * rate) << beta;
        EXPECT_NEAR(solver.dissipation_rate(mid.omega_hat), rate, 1e-12 * rate);
    }
}

TEST(Step, DissipationIsNonNegativeAndDecayingEnergyNonIncreasing) {
    for (double beta : {0.3, 1.0, 2.0}) {
        SolverConfig c = base_config(32);
        c.orders = FractionalOrders(beta, 0.0);
        c.dt = 5e-3;
        c.t_end = 0.5;
        const SpectralSolver solver(c);
        const auto out = solver.run();
        for (std::size_t i = 1; i < out.diagnostics.size(); ++i) {
            EXPECT_GE(out.diagnostics[i].dissipation_rate, 0.0);
            EXPECT_LE(out.diagnostics[i].energy, out.diagnostics[i - 1].energy) << beta << " step " << i;
        }
    }
}

TEST(Step, StaysHermitianAndDivergenceFree) {
    SolverConfig c = base_config(32);
    c.dt = 5e-3;
    c.forcing = BandForcing{2.0, 4.0, 0.5, 9};
    const SpectralSolver solver(c);
    auto s = solver.init_state();
    for (int m = 0; m < 50; ++m) {
        solver.step(s);
        ASSERT_LT(s.omega_hat.hermitian_defect(), 1e-14);
        const auto vel = velocity_from_vorticity(s.omega_hat);
        double div = 0.0;
        for (std::size_t i = 0; i < c.grid.size(); ++i) {
            const auto mo = mode_of(c.grid, i);
            div = std::max(div, std::abs(c.grid.dk() * mo[0] * vel.u[i] + c.grid.dk() * mo[1] * vel.v[i]));
        }
        ASSERT_LT(div, 1e-12);
        ASSERT_EQ(s.omega_hat[0], Complex(0.0, 0.0));
    }
}

TEST(Step, CflViolationThrows) {
    SolverConfig c = base_config(32);
    c.dt = 1.0;
    const SpectralSolver solver(c);
    auto s = solver.init_state();
    try {
        solver.step(s);
        FAIL() << "expected StepSizeError";
    } catch (const StepSizeError& e) {
        EXPECT_NE(std::string(e.what()).find("CFL"), std::string::npos);
    }
    c.advection = false;
    auto s2 = SpectralSolver(c).init_state();
    EXPECT_NO_THROW(SpectralSolver(c).step(s2));
}

TEST(Step, ForcingInjectsExpectedMeanPower) {
    SolverConfig c = base_config(32);
    c.advection = false;
    c.nu = 0.2;
    c.dt = 1e-2;
    c.forcing = BandForcing{3.0, 5.0, 0.8, 4};
    c.initial.energy = 0.0;
    const SpectralSolver solver(c);
    // Each forced +/- pair gains A^2 dt / |k|^2 on average.
    double expected = 0.0;
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
        const auto m = mode_of(c.grid, i);
        if (!(m[1] > 0 || (m[1] == 0 && m[0] > 0))) continue;
        const double r = std::hypot(double(m[0]), double(m[1]));
        if (r >= 3.0 && r <= 5.0) expected += 0.8 * 0.8 / k_squared(c.grid, i);
    }
    // From rest the cross term vanishes and the first kick injects exactly the mean power.
    auto s = solver.init_state();
    const auto first = solver.step(s);
    EXPECT_NEAR(first.injection_rate, expected, 1e-12 * expected);
    // Afterwards each kick phase is independent of the state, so per-step rates are uncorrelated.
    double sum = 0.0, sum_sq = 0.0;
    const int steps = 40000;
    for (int m = 0; m < steps; ++m) {
        const auto r = solver.step(s);
        EXPECT_NEAR((r.energy_after - r.energy_after_dynamics) / c.dt, r.injection_rate, 1e-9 * (1.0 + std::abs(r.injection_rate)));
        sum += r.injection_rate;
        sum_sq += r.injection_rate * r.injection_rate;
    }
    const double mean = sum / steps;
    const double se = std::sqrt((sum_sq / steps - mean * mean) / (steps - 1));
    EXPECT_NEAR(mean, expected, 4.0 * se);
    EXPECT_LT(se, 0.1 * expected);
}

TEST(Memory, SingleModeFollowsMittagLefflerRelaxation) {
    SolverConfig c = base_config(16);
    c.orders = FractionalOrders(2.0, 0.5);
    c.advection = false;
    c.nu = 0.25;
    c.dt = 1e-3;
    c.history_len = 1001;
    const SpectralSolver solver(c);
    FlowState s = solver.init_state(SpectrumShape{SpectrumShape::Kind::gaussian, 4.0, 1.0, 0.0});
    s.omega_hat.at_mode(2, 0) = 1.0;
    s.omega_hat.at_mode(-2, 0) = 1.0;
    const double lambda = c.nu * 4.0;
    double worst = 0.0;
    for (int m = 1; m <= 1000; ++m) {
        solver.step_memory(s);
        if (m % 100 == 0) {
            const double exact = mittag_leffler(0.5, -lambda * std::sqrt(m * c.dt));
            worst = std::max(worst, std::abs(s.omega_hat.at_mode(2, 0).real() - exact) / exact);
        }
    }
    EXPECT_LT(worst, 0.02);
}

TEST(Memory, RefiningStepReducesErrorAtFirstOrder) {
    auto error_at_one = [](double dt) {
        SolverConfig c = base_config(16);
        c.orders = FractionalOrders(2.0, 0.5);
        c.advection = false;
        c.nu = 1.0;
        c.dt = dt;
        c.history_len = static_cast<std::size_t>(std::llround(1.0 / dt)) + 1;
        const SpectralSolver solver(c);
        FlowState s = solver.init_state(SpectrumShape{SpectrumShape::Kind::gaussian, 4.0, 1.0, 0.0});
        s.omega_hat.at_mode(1, 0) = 1.0;
        s.omega_hat.at_mode(-1, 0) = 1.0;
        for (std::size_t m = 0; m + 1 < c.history_len; ++m) solver.step_memory(s);
        return std::abs(s.omega_hat.at_mode(1, 0).real() - mittag_leffler(0.5, -1.0));
    };
    const double e1 = error_at_one(1e-2), e2 = error_at_one(5e-3);
    EXPECT_NEAR(std::log2(e1 / e2), 1.0, 0.2);
}

TEST(Memory, ConvergesToMemorylessStepAsMuVanishes) {
    SolverConfig c0 = base_config(32);
    c0.dt = 5e-3;
    const SpectralSolver classic(c0);
    auto ref = classic.init_state();
    const auto start = ref;
    for (int m = 0; m < 20; ++m) classic.step(ref);
    double prev = INFINITY;
    for (double mu : {1e-2, 1e-3, 1e-4, 1e-6}) {
        SolverConfig c = c0;
        c.orders = FractionalOrders(2.0, mu);
        c.history_len = 64;
        const SpectralSolver mem(c);
        FlowState s = start;
        s.history = VorticityHistory(c.history_len - 1);
        for (int m = 0; m < 20; ++m) mem.step_memory(s);
        const double d = max_abs_diff(s.omega_hat, ref.omega_hat);
        EXPECT_LT(d, prev) << mu;
        prev = d;
    }
    EXPECT_LT(prev, 1e-6);
}

TEST(Memory, ZeroFieldStaysZero) {
    SolverConfig c = base_config(16);
    c.orders = FractionalOrders(1.5, 0.4);
    c.initial.energy = 0.0;
    const SpectralSolver solver(c);
    auto s = solver.init_state();
    for (int m = 0; m < 30; ++m) solver.step_memory(s);
    EXPECT_EQ(max_abs(s.omega_hat), 0.0);
}

TEST(Memory, StepDispatchAndShortHistoryWarning) {
    SolverConfig c = base_config(16);
    c.orders = FractionalOrders(2.0, 0.5);
    c.history_len = 8;
    c.t_end = 0.05;
    const SpectralSolver solver(c);
    auto s = solver.init_state();
    EXPECT_THROW(solver.step(s), UsageError);
    EXPECT_GT(solver.discarded_weight(), c.memory_tolerance);
    const auto out = solver.run();
    ASSERT_EQ(out.warnings.size(), 1u);
    EXPECT_NE(out.warnings[0].find("truncated"), std::string::npos);

    SolverConfig plain = base_config(16);
    auto p = SpectralSolver(plain).init_state();
    EXPECT_THROW(SpectralSolver(plain).step_memory(p), UsageError);
}

TEST(Run, ZeroEndTimeGivesInitialDiagnosticsOnly) {
    SolverConfig c = base_config(32);
    c.snapshot_times = {0.0};
    const SpectralSolver solver(c);
    const auto out = solver.run();
    ASSERT_EQ(out.diagnostics.size(), 1u);
    EXPECT_EQ(out.diagnostics[0].step, 0u);
    EXPECT_EQ(out.diagnostics[0].time, 0.0);
    EXPECT_NEAR(out.diagnostics[0].energy, c.initial.energy, 1e-12);
    EXPECT_EQ(out.snapshots.size(), 1u);
}

TEST(Run, DeterministicAndSnapshotsAtRequestedTimes) {
    SolverConfig c = base_config(32);
    c.dt = 5e-3;
    c.t_end = 0.2;
    c.forcing = BandForcing{2.0, 4.0, 0.5, 3};
    c.snapshot_times = {0.1, 0.05, 0.2};
    const auto a = SpectralSolver(c).run(), b = SpectralSolver(c).run();
    ASSERT_EQ(a.diagnostics.size(), 41u);
    for (std::size_t i = 0; i < a.diagnostics.size(); ++i) {
        EXPECT_EQ(a.diagnostics[i].energy, b.diagnostics[i].energy);
        EXPECT_EQ(a.diagnostics[i].enstrophy, b.diagnostics[i].enstrophy);
        EXPECT_EQ(a.diagnostics[i].dissipation_rate, b.diagnostics[i].dissipation_rate);
    }
    EXPECT_TRUE(a.final_state.omega_hat == b.final_state.omega_hat);
    ASSERT_EQ(a.snapshots.size(), 3u);
    EXPECT_NEAR(a.snapshots[0].time, 0.05, 1e-12);
    EXPECT_NEAR(a.snapshots[1].time, 0.1, 1e-12);
    EXPECT_NEAR(a.snapshots[2].time, 0.2, 1e-12);
}

TEST(Run, NonFiniteStateAbortsWithLastGoodReport) {
    SolverConfig c = base_config(16);
    c.advection = false;
    c.nu = 1.0;
    c.dt = 0.1;
    c.t_end = 1.0;
    // An anti-dissipative symbol overflows the integrating factor.
    const std::vector<double> growing(c.grid.size(), -1e4);
    const SpectralSolver solver(c, growing);
    try {
        solver.run();
        FAIL() << "expected NumericalFailure";
    } catch (const NumericalFailure& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("last good state: step 0"), std::string::npos) << msg;
    }
}
