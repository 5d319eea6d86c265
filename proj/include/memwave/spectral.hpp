#ifndef MEMWAVE_SPECTRAL_HPP
#define MEMWAVE_SPECTRAL_HPP

// Dirichlet sine basis on (0, pi), H^sigma norms, and pseudo-spectral
// evaluation of the nonlinearity with its f = f0 + f1 splitting.

#include "memwave/errors.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace memwave {

/// Coefficients on the normalized eigenbasis e_k = sqrt(2/pi) sin(kx), k = 1..N.
/// Index 0 holds mode 1.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(std::size_t modes) : c_(modes, 0.0) {}
    explicit SpectralField(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    static SpectralField unit(std::size_t modes, std::size_t k)
    {
        SpectralField f(modes);
        f.c_.at(k - 1) = 1.0;
        return f;
    }

    std::size_t size() const { return c_.size(); }
    double& operator[](std::size_t i) { return c_[i]; }
    double operator[](std::size_t i) const { return c_[i]; }
    /// Coefficient of mode k (1-based).
    double mode(std::size_t k) const { return c_.at(k - 1); }
    std::span<const double> coeffs() const { return c_; }
    std::span<double> coeffs() { return c_; }

    SpectralField& operator+=(const SpectralField& o)
    {
        assert(o.size() == size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            c_[i] += o.c_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o)
    {
        assert(o.size() == size());
        for (std::size_t i = 0; i < c_.size(); ++i)
            c_[i] -= o.c_[i];
        return *this;
    }
    SpectralField& operator*=(double a)
    {
        for (double& x : c_)
            x *= a;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
    friend SpectralField operator-(SpectralField a) { return a *= -1.0; }
    friend bool operator==(const SpectralField&, const SpectralField&) = default;

    bool is_finite() const
    {
        for (double x : c_)
            if (!std::isfinite(x))
                return false;
        return true;
    }

private:
    std::vector<double> c_;
};

/// Eigenpairs of the Dirichlet Laplacian on (0, pi): lambda_k = k^2, and a
/// 4N-point interior collocation grid x_i = i pi / (4N + 1) with exact
/// sine transforms (DST-I) for every mode up to 4N.
class ModeBasis {
public:
    ModeBasis() : ModeBasis(32) {}

    explicit ModeBasis(std::size_t n_modes)
        : n_(n_modes), m_(4 * n_modes), synth_(std::make_shared<std::vector<double>>(m_ * n_))
    {
        if (n_modes == 0)
            throw DomainError("ModeBasis: need at least one mode");
        const double norm = std::sqrt(2.0 / std::numbers::pi);
        auto& s = *synth_;
        for (std::size_t i = 0; i < m_; ++i) {
            const double x = grid_point(i);
            for (std::size_t k = 1; k <= n_; ++k)
                s[i * n_ + (k - 1)] = norm * std::sin(static_cast<double>(k) * x);
        }
    }

    std::size_t modes() const { return n_; }
    std::size_t grid_size() const { return m_; }
    static constexpr double domain_length() { return std::numbers::pi; }

    /// lambda_k = k^2 (1-based k).
    double eigenvalue(std::size_t k) const { return static_cast<double>(k * k); }

    /// lambda_k^alpha for k = 1..N.
    std::vector<double> eigen_powers(double alpha) const
    {
        std::vector<double> w(n_);
        for (std::size_t k = 1; k <= n_; ++k)
            w[k - 1] = std::pow(eigenvalue(k), alpha);
        return w;
    }

    double grid_point(std::size_t i) const
    {
        return static_cast<double>(i + 1) * std::numbers::pi / static_cast<double>(m_ + 1);
    }

    std::vector<double> to_grid(const SpectralField& f) const
    {
        assert(f.size() == n_);
        std::vector<double> g(m_, 0.0);
        const auto& s = *synth_;
        for (std::size_t i = 0; i < m_; ++i) {
            double acc = 0.0;
            const double* row = &s[i * n_];
            for (std::size_t k = 0; k < n_; ++k)
                acc += row[k] * f[k];
            g[i] = acc;
        }
        return g;
    }

    /// Projection of grid values onto the first N modes.
    SpectralField from_grid(std::span<const double> g) const
    {
        assert(g.size() == m_);
        SpectralField f(n_);
        const auto& s = *synth_;
        const double w = std::numbers::pi / static_cast<double>(m_ + 1);
        for (std::size_t i = 0; i < m_; ++i) {
            const double gi = g[i] * w;
            const double* row = &s[i * n_];
            for (std::size_t k = 0; k < n_; ++k)
                f[k] += row[k] * gi;
        }
        return f;
    }

    /// Trapezoid quadrature of u^2 on the collocation grid (endpoints vanish).
    double grid_l2_squared(const SpectralField& f) const
    {
        const auto g = to_grid(f);
        double acc = 0.0;
        for (double x : g)
            acc += x * x;
        return acc * std::numbers::pi / static_cast<double>(m_ + 1);
    }

private:
    std::size_t n_;
    std::size_t m_;
    std::shared_ptr<std::vector<double>> synth_;  // immutable after construction
};

/// ||u||_sigma = ||A^{sigma/2} u||, i.e. sqrt(sum_k lambda_k^sigma c_k^2).
inline double sigma_norm_squared(const SpectralField& f, double sigma)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        acc += std::pow(k * k, sigma) * f[i] * f[i];
    }
    return acc;
}

inline double sigma_norm(const SpectralField& f, double sigma) { return std::sqrt(sigma_norm_squared(f, sigma)); }

/// <A^{sigma/2} a, A^{sigma/2} b>.
inline double sigma_inner(const SpectralField& a, const SpectralField& b, double sigma)
{
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        acc += std::pow(k * k, sigma) * a[i] * b[i];
    }
    return acc;
}

inline SpectralField apply_A_power(SpectralField f, double alpha)
{
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        f[i] *= std::pow(k * k, alpha);
    }
    return f;
}

using ScalarMap = std::function<double(double)>;

/// f with f', f'' and a splitting f = f0 + f1, f0 vanishing on [-1, 1].
struct Nonlinearity {
    std::string name;
    ScalarMap f, df, d2f;
    ScalarMap f0, f1, df0;
    bool identically_zero = false;
};

/// f(u) = u^3. f1' = min(3u^2, 3), so f1 = u^3 on [-1, 1] and 3u - 2 sign(u)
/// beyond; f0 = f - f1 = u^3 - 3u + 2 sign(u) outside [-1, 1].
inline Nonlinearity cubic_nonlinearity()
{
    Nonlinearity nl;
    nl.name = "cubic";
    nl.f = [](double u) { return u * u * u; };
    nl.df = [](double u) { return 3.0 * u * u; };
    nl.d2f = [](double u) { return 6.0 * u; };
    nl.f1 = [](double u) {
        if (std::abs(u) <= 1.0)
            return u * u * u;
        return 3.0 * u - 2.0 * std::copysign(1.0, u);
    };
    nl.f0 = [](double u) {
        if (std::abs(u) <= 1.0)
            return 0.0;
        return u * u * u - 3.0 * u + 2.0 * std::copysign(1.0, u);
    };
    nl.df0 = [](double u) { return std::abs(u) <= 1.0 ? 0.0 : 3.0 * u * u - 3.0; };
    return nl;
}

inline Nonlinearity zero_nonlinearity()
{
    Nonlinearity nl;
    nl.name = "zero";
    nl.f = nl.df = nl.d2f = nl.f0 = nl.f1 = nl.df0 = [](double) { return 0.0; };
    nl.identically_zero = true;
    return nl;
}

enum class NonlinearPart { full, f0, f1 };

/// Pseudo-spectral f(u): synthesize on the 4N grid, apply the scalar map,
/// project back onto N modes.
inline SpectralField apply_nonlinearity(const ModeBasis& basis, const Nonlinearity& nl, NonlinearPart part,
                                        const SpectralField& field)
{
    if (nl.identically_zero)
        return SpectralField(field.size());
    const ScalarMap& map = part == NonlinearPart::full ? nl.f : part == NonlinearPart::f0 ? nl.f0 : nl.f1;
    auto g = basis.to_grid(field);
    for (double& x : g)
        x = map(x);
    return basis.from_grid(g);
}

/// g_k = amplitude / k^2.
inline SpectralField default_forcing(std::size_t modes, double amplitude = 0.5)
{
    SpectralField g(modes);
    for (std::size_t i = 0; i < modes; ++i) {
        const double k = static_cast<double>(i + 1);
        g[i] = amplitude / (k * k);
    }
    return g;
}

} // namespace memwave

#endif // MEMWAVE_SPECTRAL_HPP
