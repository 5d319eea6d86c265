#include "memwave/functionals.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace memwave;

namespace {

std::vector<double> grid(double lo, double hi, std::size_t n) { return linspace(lo, hi, n); }

ProcessConfig small_config(std::size_t modes = 8)
{
    ProcessConfig c;
    c.basis = ModeBasis(modes);
    c.g = default_forcing(modes);
    c.t_min = -10.0;
    c.t_max = 0.0;
    c.sample_every = 20;
    return c;
}

} // namespace

TEST(Phi, Examples)
{
    EXPECT_EQ(phi(SpectralField(4), SpectralField(4), 0.0), 0.0);
    const auto e1 = SpectralField::unit(4, 1), e2 = SpectralField::unit(4, 2);
    EXPECT_DOUBLE_EQ(phi(e1, e1, 0.0), 2.0);
    EXPECT_DOUBLE_EQ(phi(e2, e2, 1.0), 8.0);
}

TEST(Psi, ZeroHistory)
{
    MemoryIntegrals m;
    m.linear = SpectralField(4);
    EXPECT_EQ(psi(SpectralField::unit(4, 1), m, 2.0, 0.0), 0.0);
}

TEST(Psi, ExponentialHistoryClosedForm)
{
    const auto k = arctan_exponential_kernel();
    const auto quad = SQuadrature::build(k, -10.0, 20.0);
    for (double t : {-5.0, 0.0, 3.0}) {
        std::vector<double> scratch;
        const auto mi = integrate_memory(k, quad, t, 4, [](double s, double* out) { out[0] = std::exp(-s); }, false,
                                         scratch);
        const double eps = arctan_epsilon(t), kappa = 1.0 / eps;
        const double expected = -(2.0 / kappa) / (eps + eps * eps);
        EXPECT_NEAR(psi(SpectralField::unit(4, 1), mi, kappa, 0.0), expected, 1e-5 * std::abs(expected));
    }
}

TEST(Lambda, ZeroStateZeroForcing)
{
    Sample s;
    s.u = SpectralField(4);
    s.v = SpectralField(4);
    s.memory.linear = s.memory.squared = SpectralField(4);
    const ModeBasis basis(4);
    EXPECT_EQ(lambda_functional(s, arctan_exponential_kernel(), 1.0 / 3.0, 0.1, basis, cubic_nonlinearity(),
                                SpectralField(4)),
              0.0);
}

TEST(Lambda, CollapsesToNormsForLinearUnforcedCase)
{
    auto c = small_config();
    c.nl = zero_nonlinearity();
    c.g = SpectralField(8);
    const Process p(c);
    const auto z = random_initial_data(p, -10.0, 2.0, 1.0 / 3.0, 3);
    const auto tr = evolve(p, z, -10.0, -9.5);
    for (const auto& s : tr.samples) {
        const double norms = sigma_norm_squared(s.u, 4.0 / 3.0) + sigma_norm_squared(s.v, 1.0 / 3.0) +
                             s.memory.norm_squared(1.0 / 3.0);
        EXPECT_NEAR(lambda_functional(s, p, 1.0 / 3.0, 1e-9), norms, 1e-6 * norms);
    }
}

TEST(Lambda, EpsilonOutsideUnitIntervalRejected)
{
    Sample s;
    s.u = s.v = SpectralField(4);
    s.memory.linear = s.memory.squared = SpectralField(4);
    const ModeBasis basis(4);
    const auto k = arctan_exponential_kernel();
    EXPECT_THROW(lambda_functional(s, k, 1.0, 0.0, basis, cubic_nonlinearity(), SpectralField(4)), DomainError);
    EXPECT_THROW(lambda_functional(s, k, 1.0, 1.5, basis, cubic_nonlinearity(), SpectralField(4)), DomainError);
}

TEST(PhiPsi, CauchySchwarzBoundAlongTrajectory)
{
    const Process p(small_config());
    const double C = phi_psi_bound_constant(4.0 / std::numbers::pi);
    for (double sigma : {0.0, 1.0 / 3.0, 1.0}) {
        const auto z = random_initial_data(p, -10.0, 4.0, sigma, 21);
        const auto tr = evolve(p, z, -10.0, -8.0);
        for (const auto& s : tr.samples) {
            const double lhs = std::abs(phi(s, sigma)) + std::abs(psi(s, p.kernel(), sigma));
            EXPECT_LE(lhs, C * s.energy(sigma) * (1.0 + 1e-9));
        }
    }
}

TEST(Gronwall, PureDecay)
{
    // Hypothesis holds with equality; the grid keeps trapezoid error below tol.
    const double eps = 0.3;
    const auto t = grid(0.0, 10.0, 4001);
    std::vector<double> L(t.size()), zero(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i)
        L[i] = 4.0 * std::exp(-2.0 * eps * t[i]);
    const auto r = gronwall_check(t, L, zero, zero, eps, 0.0, 0.0, 1e-6);
    EXPECT_TRUE(r.hypothesis_holds);
    EXPECT_TRUE(r.conclusion_holds);
    // Tight at t = tau only.
    EXPECT_LE(r.conclusion_violation, 0.0);
    EXPECT_DOUBLE_EQ(r.worst_conclusion.b, 0.0);
}

TEST(Gronwall, ConstantWithMatchingSource)
{
    const double eps = 0.2, K = 3.0;
    const auto t = grid(0.0, 10.0, 501);
    std::vector<double> L(t.size(), K), q1(t.size(), 0.0), q2(t.size(), 2.0 * eps * K);
    const auto r = gronwall_check(t, L, q1, q2, eps, 0.0, 2.0 * eps * K);
    EXPECT_TRUE(r.hypothesis_holds);
    EXPECT_NEAR(r.hypothesis_violation, 0.0, 1e-12);
    EXPECT_TRUE(r.conclusion_holds);
    const double floor_term = 2.0 * eps * K * std::exp(eps) / (1.0 - std::exp(-eps));
    EXPECT_GT(floor_term, K);
}

TEST(Gronwall, ViolatedHypothesisDetected)
{
    const double eps = 0.2;
    const auto t = grid(0.0, 5.0, 251);
    std::vector<double> L(t.size()), zero(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i)
        L[i] = 1.0 + t[i];
    EXPECT_FALSE(gronwall_check(t, L, zero, zero, eps, 0.0, 0.0).hypothesis_holds);
}

TEST(Gronwall, SyntheticInstancesSatisfyConclusion)
{
    std::mt19937_64 rng(123);
    for (int i = 0; i < 100; ++i) {
        const auto g = synthetic_gronwall_instance(rng);
        const auto r = gronwall_check(g.t, g.Lambda, g.q1, g.q2, g.eps, g.c1, g.c2);
        ASSERT_TRUE(r.hypothesis_holds) << i;
        ASSERT_TRUE(r.side_conditions_hold) << i;
        EXPECT_TRUE(r.conclusion_holds) << i;
    }
}

TEST(Gronwall, MinimalQ2MakesHypothesisTight)
{
    const double eps = 0.1;
    const auto t = grid(0.0, 4.0, 201);
    std::vector<double> L(t.size()), q1(t.size(), 0.05);
    for (std::size_t i = 0; i < t.size(); ++i)
        L[i] = 2.0 + std::sin(3.0 * t[i]);
    const double q2 = minimal_constant_q2(t, L, q1, eps);
    const std::vector<double> q2v(t.size(), q2);
    const auto r = gronwall_check(t, L, q1, q2v, eps, 1.0, 1.0, 1e-9);
    EXPECT_TRUE(r.hypothesis_holds);
    EXPECT_GT(r.hypothesis_violation, -1e-6);
}

TEST(Gronwall, NonUniformGridRejected)
{
    const std::vector<double> t{0.0, 0.1, 0.3}, y{1.0, 1.0, 1.0};
    EXPECT_THROW(gronwall_check(t, y, y, y, 0.1, 0.0, 0.0), GridError);
}

TEST(MemoryInequality, HoldsAlongSimulatedTrajectory)
{
    const Process p(small_config());
    const auto z = random_initial_data(p, -10.0, 5.0, 0.0, 31);
    const auto tr = evolve(p, z, -10.0, -8.0);
    const auto r = memory_inequality_check(tr, 0.0, 5.0 * p.dt());
    EXPECT_GT(r.pairs, 0u);
    EXPECT_GE(r.worst_margin, -1e-4);
}

TEST(MemoryInequality, DetectsUnsourcedGrowth)
{
    Trajectory tr;
    for (int i = 0; i < 10; ++i) {
        Sample s;
        s.t = 0.1 * i;
        s.u = s.v = SpectralField(2);
        s.memory.linear = s.memory.squared = SpectralField(2);
        s.memory.squared[0] = 1.0 + i;
        s.dissipation_integral = s.cross_integral = SpectralField(2);
        tr.samples.push_back(s);
    }
    EXPECT_LT(memory_inequality_check(tr, 0.0, 0.0).worst_margin, 0.0);
}

TEST(FitDecay, ExponentialPlusPlateau)
{
    const auto t = grid(0.0, 30.0, 601);
    std::vector<double> E(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        E[i] = 5.0 * std::exp(-0.3 * t[i]) + 1.0;
    const auto f = fit_decay(t, E);
    EXPECT_NEAR(f.omega, 0.3, 0.003);
    EXPECT_NEAR(f.Q, 5.0, 0.05);
    EXPECT_NEAR(f.R0, 1.0, 0.01);
}

TEST(FitDecay, PureExponential)
{
    const auto t = grid(0.0, 10.0, 201);
    std::vector<double> E(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        E[i] = std::exp(-t[i]);
    const auto f = fit_decay(t, E);
    EXPECT_NEAR(f.omega, 1.0, 0.01);
    EXPECT_NEAR(f.R0, 0.0, 0.01 * E.back() + 1e-6);
}

TEST(FitExponential, RecoversRateWithoutPlateau)
{
    const auto t = grid(2.0, 12.0, 201);
    std::vector<double> E(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        E[i] = 3.0 * std::exp(-0.7 * (t[i] - 2.0));
    const auto f = fit_exponential(t, E);
    EXPECT_NEAR(f.omega, 0.7, 1e-12);
    EXPECT_NEAR(f.Q, 3.0, 1e-10);
    EXPECT_EQ(f.R0, 0.0);
    EXPECT_LT(f.relative_residual, 1e-12);
    E[5] = 0.0;
    EXPECT_THROW(fit_exponential(t, E), DomainError);
    EXPECT_THROW(fit_exponential(t, E, 8.0, 8.5), DomainError);
}

TEST(FitDecay, ConstantFlag)
{
    const auto t = grid(0.0, 5.0, 50);
    const std::vector<double> E(t.size(), 2.5);
    const auto f = fit_decay(t, E);
    EXPECT_TRUE(f.constant);
    EXPECT_EQ(f.omega, 0.0);
    EXPECT_EQ(f.R0, 2.5);
}

TEST(FitDecay, ScaleEquivariant)
{
    const auto t = grid(0.0, 20.0, 401);
    std::vector<double> E(t.size()), E3(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        E[i] = 2.0 * std::exp(-0.7 * t[i]) + 0.4 + 0.01 * std::sin(t[i]);
        E3[i] = 3.0 * E[i];
    }
    const auto a = fit_decay(t, E), b = fit_decay(t, E3);
    EXPECT_NEAR(b.omega, a.omega, 1e-8);
    EXPECT_NEAR(b.Q, 3.0 * a.Q, 1e-6 * b.Q);
    EXPECT_NEAR(b.R0, 3.0 * a.R0, 1e-6 * b.R0);
}

TEST(FitDecay, WindowAndErrors)
{
    const auto t = grid(0.0, 10.0, 101);
    std::vector<double> E(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        E[i] = std::exp(-0.5 * t[i]) + 0.1;
    const auto f = fit_decay(t, E, 5.0, 10.0);
    EXPECT_EQ(f.window_lo, 5.0);
    EXPECT_EQ(f.samples, 51u);
    EXPECT_THROW(fit_decay(t, E, 9.5, 10.0), DomainError);
    std::vector<double> bad = E;
    bad[3] = -1.0;
    EXPECT_THROW(fit_decay(t, bad), DomainError);
}

TEST(TailSupremum, IsNonincreasingUpperEnvelope)
{
    const std::vector<double> E{3.0, 1.0, 2.0, 0.5, 0.7, 0.2};
    const std::vector<double> expected{3.0, 2.0, 2.0, 0.7, 0.7, 0.2};
    EXPECT_EQ(tail_supremum(E), expected);
}

TEST(DimensionBound, Examples)
{
    EXPECT_EQ(dimension_bound(0.25, 0.5, 1.0), 0.0);
    EXPECT_NEAR(dimension_bound(0.25, 0.5, 4.0), 2.0, 1e-15);
    EXPECT_NEAR(dimension_bound(0.1, 0.5, 25.0), 2.0, 1e-15);
    EXPECT_THROW(dimension_bound(0.5, 1.0, 3.0), DomainError);
}

TEST(DimensionBound, MonotoneInCountAndEta)
{
    double prev = -1.0;
    for (double m = 1.0; m < 100.0; m += 1.0) {
        EXPECT_GT(dimension_bound(0.2, 1.0, m), prev);
        prev = dimension_bound(0.2, 1.0, m);
    }
    prev = 0.0;
    for (double eta : linspace(0.01, 0.49, 50)) {
        EXPECT_GT(dimension_bound(eta, 1.0, 7.0), prev);
        prev = dimension_bound(eta, 1.0, 7.0);
    }
}

TEST(RateCompose, Examples)
{
    const auto a = rate_compose(1.0, 1.0, 3.0, std::exp(1.0));
    EXPECT_DOUBLE_EQ(a.theta, 0.25);
    EXPECT_DOUBLE_EQ(a.beta_prime, 0.5);
    EXPECT_DOUBLE_EQ(rate_compose(1.0, 1.0, 1.0, std::exp(1.0)).beta_prime, 0.25);
    EXPECT_DOUBLE_EQ(rate_compose(1.0, 1.0, std::numeric_limits<double>::infinity(), 3.0).beta_prime, 0.5);
    const auto c = rate_compose(1.0, 2.0, 1.5, 1.0);
    EXPECT_DOUBLE_EQ(c.theta, 0.5);
    EXPECT_DOUBLE_EQ(c.beta_prime, 0.75);
    EXPECT_THROW(rate_compose(1.0, 1.0, 1.0, 0.5), DomainError);
}

TEST(QuasiStability, FitDominatesSyntheticRuns)
{
    std::vector<DifferenceRun> runs;
    for (int r = 0; r < 4; ++r) {
        DifferenceRun run;
        double gap = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double t = 0.1 * i;
            gap += 0.1 * 0.01 * (1.0 + r);
            const double d = (1.0 + r) * (2.0 * std::exp(-0.4 * t) + 0.05 * std::sin(t) * std::sin(t));
            run.samples.push_back({t, d, gap});
        }
        runs.push_back(run);
    }
    const auto fit = fit_quasistability(runs);
    EXPECT_GT(fit.kappa, 0.0);
    for (const auto& run : runs)
        EXPECT_LE(quasistability_worst_ratio(fit, run), 1.0);
}

TEST(Reports, CsvHeaders)
{
    std::ostringstream a, b;
    write_report_csv(a, {{"x", 0.0, 1.0, 2.0, 3.0, 1.0}});
    write_fit_csv(b, {DecayFit{}});
    EXPECT_EQ(a.str().rfind("check_name,a,b,lhs,rhs,margin\n", 0), 0u);
    EXPECT_EQ(b.str().rfind("omega,Q,R0,residual\n", 0), 0u);
}
