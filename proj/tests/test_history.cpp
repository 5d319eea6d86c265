#include "memwave/history.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace memwave;

namespace {

constexpr std::size_t modes = 4;

HistoryBuffer ramp_buffer(double dt, double t_end, double window = 50.0)
{
    HistoryBuffer b(dt, window, 0.0, SpectralField(modes), InitialHistory::zero());
    const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
    for (std::size_t n = 1; n <= steps; ++n)
        b.push(static_cast<double>(n) * dt * SpectralField::unit(modes, 1));
    return b;
}

} // namespace

TEST(History, ConstantDisplacementHasZeroHistory)
{
    const auto u = 0.7 * SpectralField::unit(modes, 2);
    HistoryBuffer b(0.01, 10.0, -1.0, u, InitialHistory::zero());
    for (int n = 0; n < 200; ++n)
        b.push(u);
    for (double s : {0.005, 0.5, 1.9, 2.5, 40.0}) {
        const auto eta = b.eta_at(b.head_time(), s);
        for (std::size_t k = 0; k < modes; ++k)
            EXPECT_NEAR(eta[k], 0.0, 1e-15);
    }
}

TEST(History, RampGivesLinearThenFlatHistory)
{
    const auto b = ramp_buffer(0.01, 2.0);
    const double t = 2.0;
    for (double s : {0.013, 0.5, 1.377, 2.0, 2.7, 30.0}) {
        const auto eta = b.eta_at(t, s);
        EXPECT_NEAR(eta.mode(1), std::min(s, t), 1e-12) << s;
        EXPECT_NEAR(eta.mode(2), 0.0, 1e-15);
    }
}

TEST(History, AtOriginEqualsInitialHistory)
{
    const auto nodes = logspace(1e-3, 20.0, 60);
    const auto init = InitialHistory::sample(nodes, [](double s) {
        SpectralField f(modes);
        f[0] = std::sin(s);
        f[2] = s / (1.0 + s);
        return f;
    });
    HistoryBuffer b(0.01, 30.0, 3.0, SpectralField::unit(modes, 1), init);
    for (double s : {0.1, 1.0, 5.0}) {
        const auto eta = b.eta_at(3.0, s);
        const auto ref = init.at(s, modes);
        for (std::size_t k = 0; k < modes; ++k)
            EXPECT_NEAR(eta[k], ref[k], 1e-15);
    }
}

TEST(History, BranchContinuityAtElapsedTime)
{
    const auto nodes = linspace(0.0, 20.0, 4001);
    const auto init = InitialHistory::sample(nodes, [](double s) {
        SpectralField f(modes);
        f[0] = 1.0 - std::exp(-s);
        f[1] = 0.5 * std::sin(s);
        return f;
    });
    const double dt = 0.01;
    HistoryBuffer b(dt, 30.0, 0.0, SpectralField(modes), init);
    for (int n = 1; n <= 150; ++n) {
        const double t = n * dt;
        SpectralField u(modes);
        u[0] = std::sin(t);
        u[1] = t * t;
        b.push(u);
    }
    const double t = b.head_time();
    const double gap = 1e-9;
    const auto below = b.eta_at(t, t - gap);
    const auto above = b.eta_at(t, t + gap);
    for (std::size_t k = 0; k < modes; ++k)
        EXPECT_NEAR(below[k], above[k], 1e-6);
}

TEST(History, QueriesOutsideStoredRangeThrow)
{
    auto b = ramp_buffer(0.1, 5.0, 0.5);
    EXPECT_THROW(b.eta_at(b.head_time() + 0.5, 0.1), DomainError);
    EXPECT_THROW(b.eta_at(b.head_time(), 2.0), WindowUnderrunError);
    EXPECT_NO_THROW(b.eta_at(b.head_time(), 0.3));
}

TEST(History, ProvisionalHeadInterpolates)
{
    const auto b = ramp_buffer(0.1, 1.0);
    const auto head_u = 1.1 * SpectralField::unit(modes, 1);
    const HistoryBuffer::Head head{1.1, &head_u};
    SpectralField out(modes);
    b.eta_into(1.05, 0.25, out.coeffs().data(), head);
    EXPECT_NEAR(out.mode(1), 0.25, 1e-12);
}

TEST(History, InitialHistoryRejectsUnorderedNodes)
{
    EXPECT_THROW(InitialHistory({1.0, 0.5}, {SpectralField(1), SpectralField(1)}), DomainError);
    EXPECT_THROW(InitialHistory({1.0}, {}), DomainError);
}

TEST(History, SnapshotCsvHasOneRowPerModeAndTime)
{
    const auto b = ramp_buffer(0.5, 1.0);
    std::ostringstream os;
    b.write_snapshots_csv(os);
    const std::string text = os.str();
    EXPECT_EQ(text.rfind("t,mode,coefficient\n", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * static_cast<long>(modes));
}

TEST(Memory, RampForceMatchesClosedForm)
{
    const double eps = 0.4;
    const auto k = exponential_kernel(eps);
    const auto quad = SQuadrature::build(k, 0.0, 3.0);
    const auto b = ramp_buffer(0.001, 3.0);
    for (double t : {0.5, 1.5, 3.0}) {
        const double expected = 1.0 - std::exp(-t / eps);
        const auto f = memory_force(b, k, quad, t);
        EXPECT_NEAR(f.mode(1), expected, 1e-5 * expected) << t;
        EXPECT_NEAR(f.mode(2), 0.0, 1e-15);
    }
}

TEST(Memory, ExponentialHistoryClosedForms)
{
    const auto k = arctan_exponential_kernel();
    const auto quad = SQuadrature::build(k, -10.0, 20.0);
    for (double t : {-10.0, -2.0, 0.0, 5.0, 20.0}) {
        const double eps = arctan_epsilon(t);
        const auto eta = [](double s) { return std::exp(-s) * SpectralField::unit(modes, 1); };
        const double norm = memory_norm_of(eta, k, quad, t, 0.0, modes);
        const double expected_norm = 1.0 / (2.0 * eps * eps + eps);
        EXPECT_NEAR(norm, expected_norm, 1e-5 * expected_norm) << t;

        std::vector<double> scratch;
        const auto mi = integrate_memory(
            k, quad, t, modes, [](double s, double* out) { out[0] = std::exp(-s); }, true, scratch);
        const double expected_force = 1.0 / (eps * eps + eps);
        EXPECT_NEAR(mi.force().mode(1), expected_force, 1e-5 * expected_force) << t;
    }
}

TEST(Memory, ExponentialHistoryHigherSigma)
{
    const auto k = arctan_exponential_kernel();
    const auto quad = SQuadrature::build(k, -10.0, 20.0);
    const double t = 1.0, eps = arctan_epsilon(t);
    const auto eta = [](double s) { return std::exp(-s) * SpectralField::unit(modes, 3); };
    const double expected = std::pow(9.0, 2.0) / (2.0 * eps * eps + eps);
    EXPECT_NEAR(memory_norm_of(eta, k, quad, t, 1.0, modes), expected, 1e-5 * expected);
}

TEST(Memory, ZeroHistoryGivesZero)
{
    const auto k = arctan_exponential_kernel();
    const auto quad = SQuadrature::build(k, 0.0, 1.0);
    const auto u = SpectralField::unit(modes, 1);
    HistoryBuffer b(0.01, quad.s_max, 0.0, u, InitialHistory::zero());
    for (int n = 0; n < 100; ++n)
        b.push(u);
    EXPECT_NEAR(memory_norm(b, k, quad, 1.0, 0.0), 0.0, 1e-30);
    EXPECT_NEAR(memory_force(b, k, quad, 1.0).mode(1), 0.0, 1e-15);
}

TEST(Memory, QuadratureCapturesKernelMass)
{
    const auto k = arctan_exponential_kernel();
    const auto quad = SQuadrature::build(k, -10.0, 20.0);
    for (double t : linspace(-10.0, 20.0, 31)) {
        const double grid = quad.rule.integrate([&](double s) { return k.mu(t, s); });
        EXPECT_NEAR(grid, total_mass(k, t), 1e-6 * total_mass(k, t)) << t;
    }
}

TEST(Memory, TailErrorOutsideRange)
{
    const auto k = arctan_exponential_kernel();
    const auto quad = SQuadrature::build(k, -10.0, -9.0, 1e-8, 8, 1.0);
    std::vector<double> scratch;
    EXPECT_THROW(integrate_memory(k, quad, 1e6, modes, [](double, double*) {}, false, scratch), TailError);
}
