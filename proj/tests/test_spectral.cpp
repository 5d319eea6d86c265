#include "memwave/quadrature.hpp"
#include "memwave/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace memwave;

namespace {

const double pi = std::numbers::pi;

SpectralField random_field(std::size_t n, std::uint64_t seed, double decay = 1.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(0.0, 1.0);
    SpectralField f(n);
    for (std::size_t i = 0; i < n; ++i)
        f[i] = N(rng) / std::pow(static_cast<double>(i + 1), decay);
    return f;
}

} // namespace

TEST(SigmaNorm, UnitModes)
{
    for (double sigma : {0.0, 1.0 / 3.0, 1.0, 2.5})
        EXPECT_DOUBLE_EQ(sigma_norm(SpectralField::unit(8, 1), sigma), 1.0);
    EXPECT_NEAR(sigma_norm(SpectralField::unit(8, 3), 1.0), 3.0, 1e-15);
    EXPECT_NEAR(sigma_norm(SpectralField::unit(8, 2), 1.0 / 3.0), std::pow(4.0, 1.0 / 6.0), 1e-15);
}

TEST(ApplyAPower, IdentityAndHalf)
{
    const auto f = random_field(16, 1);
    EXPECT_EQ(apply_A_power(f, 0.0), f);
    const auto g = apply_A_power(SpectralField::unit(8, 2), 0.5);
    EXPECT_NEAR(g.mode(2), 2.0, 1e-15);
}

TEST(ApplyAPower, ComposesAdditively)
{
    const auto f = random_field(16, 2);
    const auto a = apply_A_power(apply_A_power(f, 0.3), 0.45);
    const auto b = apply_A_power(f, 0.75);
    for (std::size_t i = 0; i < f.size(); ++i)
        EXPECT_NEAR(a[i], b[i], 1e-12 * (1.0 + std::abs(b[i])));
}

TEST(Basis, RoundTripBandLimited)
{
    const ModeBasis basis(32);
    const auto f = random_field(32, 3, 0.0);
    const auto back = basis.from_grid(basis.to_grid(f));
    for (std::size_t i = 0; i < f.size(); ++i)
        EXPECT_NEAR(back[i], f[i], 1e-12);
}

TEST(Basis, ParsevalOnCollocationGrid)
{
    const ModeBasis basis(32);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto f = random_field(32, seed);
        const double n2 = sigma_norm_squared(f, 0.0);
        EXPECT_NEAR(basis.grid_l2_squared(f), n2, 1e-10 * n2);
    }
}

TEST(Nonlinearity, CubicOnFirstMode)
{
    const ModeBasis basis(32);
    const auto e1 = SpectralField::unit(32, 1);
    const auto f = apply_nonlinearity(basis, cubic_nonlinearity(), NonlinearPart::full, e1);
    EXPECT_NEAR(f.mode(1), 3.0 / (2.0 * pi), 1e-12);
    EXPECT_NEAR(f.mode(3), -1.0 / (2.0 * pi), 1e-12);
    for (std::size_t k = 1; k <= 32; ++k)
        if (k != 1 && k != 3)
            EXPECT_NEAR(f.mode(k), 0.0, 1e-12);
}

TEST(Nonlinearity, ZeroFieldMapsToZero)
{
    const ModeBasis basis(16);
    for (const auto& nl : {cubic_nonlinearity(), zero_nonlinearity()})
        for (auto part : {NonlinearPart::full, NonlinearPart::f0, NonlinearPart::f1}) {
            const auto f = apply_nonlinearity(basis, nl, part, SpectralField(16));
            for (std::size_t i = 0; i < 16; ++i)
                EXPECT_EQ(f[i], 0.0);
        }
}

TEST(Nonlinearity, F0VanishesInsideUnitInterval)
{
    const ModeBasis basis(32);
    auto f = random_field(32, 4);
    const auto g = basis.to_grid(f);
    double peak = 0.0;
    for (double x : g)
        peak = std::max(peak, std::abs(x));
    f *= 0.9 / peak;
    const auto r = apply_nonlinearity(basis, cubic_nonlinearity(), NonlinearPart::f0, f);
    for (std::size_t i = 0; i < 32; ++i)
        EXPECT_EQ(r[i], 0.0);
}

TEST(Nonlinearity, SplittingIsConsistent)
{
    const ModeBasis basis(32);
    const auto nl = cubic_nonlinearity();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto u = 3.0 * random_field(32, seed);
        const auto full = apply_nonlinearity(basis, nl, NonlinearPart::full, u);
        const auto sum = apply_nonlinearity(basis, nl, NonlinearPart::f0, u) +
                         apply_nonlinearity(basis, nl, NonlinearPart::f1, u);
        for (std::size_t i = 0; i < 32; ++i)
            EXPECT_NEAR(full[i], sum[i], 1e-12 * (1.0 + std::abs(full[i])));
    }
}

TEST(Nonlinearity, F0IsMonotone)
{
    const auto nl = cubic_nonlinearity();
    for (double u : linspace(-10.0, 10.0, 10000))
        EXPECT_GE(nl.df0(u), 0.0) << u;
    double prev = nl.f0(-10.0);
    for (double u : linspace(-10.0, 10.0, 10000)) {
        EXPECT_GE(nl.f0(u), prev - 1e-12);
        prev = nl.f0(u);
    }
}

TEST(Nonlinearity, F1HasBoundedSlope)
{
    const auto nl = cubic_nonlinearity();
    const auto x = linspace(-5.0, 5.0, 2001);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double slope = (nl.f1(x[i]) - nl.f1(x[i - 1])) / (x[i] - x[i - 1]);
        EXPECT_LE(slope, 3.0 + 1e-9);
        EXPECT_GE(slope, -1e-12);
    }
}

TEST(Forcing, DefaultCoefficients)
{
    const auto g = default_forcing(32);
    for (std::size_t k = 1; k <= 32; ++k)
        EXPECT_DOUBLE_EQ(g.mode(k), 0.5 / static_cast<double>(k * k));
}

TEST(Basis, RejectsZeroModes) { EXPECT_THROW(ModeBasis(0), DomainError); }
