#ifndef MEMWAVE_KERNEL_HPP
#define MEMWAVE_KERNEL_HPP

// Time-dependent memory kernels mu_t(s) and grid certification of the
// admissibility conditions M1..M8.

#include "memwave/errors.hpp"
#include "memwave/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace memwave {

using KernelField = std::function<double(double t, double s)>;
using KernelProfile = std::function<double(double t)>;
/// Row evaluation at one t over many ages: mu[j] = mu_t(s[j]) and, when
/// `rate` is non-null, rate[j] = (d_t mu + d_s mu)(t, s[j]).
using KernelRows = std::function<void(double t, const std::vector<double>& s, double* mu, double* rate)>;

/// A map (t, s) -> mu_t(s) with its partial derivatives.
///
/// `mass`, `mu_at_zero` and `scale` are optional closed forms. When `mass` is
/// empty the total mass is computed by quadrature. `scale` is the memory-age
/// length on which mu_t varies; grids in s are laid out relative to it.
struct Kernel {
    std::string name;
    KernelField density;
    KernelField rate_t;
    KernelField rate_s;
    KernelProfile mass;
    KernelProfile mu_at_zero;
    KernelProfile scale;
    KernelRows rows;
    bool identically_zero = false;

    double mu(double t, double s) const
    {
        if (!(s > 0.0))
            throw DomainError("kernel " + name + ": memory age must be positive");
        return density(t, s);
    }

    double dmu_dt(double t, double s) const { return rate_t(t, s); }
    double dmu_ds(double t, double s) const { return rate_s(t, s); }

    /// Fills mu and (optionally) d_t mu + d_s mu over the ages s.
    void evaluate_rows(double t, const std::vector<double>& s, double* mu_out, double* rate_out) const
    {
        if (rows) {
            rows(t, s, mu_out, rate_out);
            return;
        }
        for (std::size_t j = 0; j < s.size(); ++j) {
            mu_out[j] = density(t, s[j]);
            if (rate_out)
                rate_out[j] = rate_t(t, s[j]) + rate_s(t, s[j]);
        }
    }

    double memory_scale(double t) const
    {
        if (scale)
            return scale(t);
        if (mass && mu_at_zero) {
            const double m0 = mu_at_zero(t);
            if (m0 > 0.0)
                return mass(t) / m0;
        }
        return 1.0;
    }
};

namespace detail {

inline double central_dt(const KernelField& f, double t, double s)
{
    const double h = 1e-5 * std::max(1.0, std::abs(t));
    return (f(t + h, s) - f(t - h, s)) / (2.0 * h);
}

inline double central_ds(const KernelField& f, double t, double s)
{
    const double h = 1e-5 * s;
    return (f(t, s + h) - f(t, s - h)) / (2.0 * h);
}

} // namespace detail

/// eps(t) = (pi/2 - arctan t) / 4, computed as atan2(1, t) / 4 to keep full
/// relative precision for large t.
inline double arctan_epsilon(double t) { return 0.25 * std::atan2(1.0, t); }

inline double arctan_epsilon_rate(double t) { return -0.25 / (1.0 + t * t); }

/// mu_t(s) = eps(t)^-2 exp(-s / eps(t)) with eps(t) = (pi/2 - arctan t) / 4.
/// Total mass 1/eps(t); eps decreases from pi/4 to 0 so the kernel sharpens
/// and gains mass as t grows.
inline Kernel arctan_exponential_kernel()
{
    Kernel k;
    k.name = "arctan_exponential";
    k.density = [](double t, double s) {
        const double e = arctan_epsilon(t);
        return std::exp(-s / e) / (e * e);
    };
    k.rate_s = [](double t, double s) {
        const double e = arctan_epsilon(t);
        return -std::exp(-s / e) / (e * e * e);
    };
    k.rate_t = [](double t, double s) {
        const double e = arctan_epsilon(t);
        const double de = arctan_epsilon_rate(t);
        const double mu = std::exp(-s / e) / (e * e);
        return mu * de * (s - 2.0 * e) / (e * e);
    };
    k.mass = [](double t) { return 1.0 / arctan_epsilon(t); };
    k.mu_at_zero = [](double t) {
        const double e = arctan_epsilon(t);
        return 1.0 / (e * e);
    };
    k.scale = [](double t) { return arctan_epsilon(t); };
    k.rows = [](double t, const std::vector<double>& s, double* mu, double* rate) {
        const double e = arctan_epsilon(t);
        const double de = arctan_epsilon_rate(t);
        const double inv = 1.0 / e, inv2 = inv * inv;
        for (std::size_t j = 0; j < s.size(); ++j) {
            mu[j] = std::exp(-s[j] * inv) * inv2;
            if (rate)
                rate[j] = mu[j] * (de * (s[j] - 2.0 * e) * inv2 - inv);
        }
    };
    return k;
}

/// Autonomous kernel eps^-2 exp(-s / eps); eps = 1 gives exp(-s).
inline Kernel exponential_kernel(double eps)
{
    if (!(eps > 0.0))
        throw DomainError("exponential_kernel: eps must be positive");
    Kernel k;
    k.name = "exponential";
    k.density = [eps](double, double s) { return std::exp(-s / eps) / (eps * eps); };
    k.rate_s = [eps](double, double s) { return -std::exp(-s / eps) / (eps * eps * eps); };
    k.rate_t = [](double, double) { return 0.0; };
    k.mass = [eps](double) { return 1.0 / eps; };
    k.mu_at_zero = [eps](double) { return 1.0 / (eps * eps); };
    k.scale = [eps](double) { return eps; };
    k.rows = [eps](double, const std::vector<double>& s, double* mu, double* rate) {
        const double inv = 1.0 / eps;
        for (std::size_t j = 0; j < s.size(); ++j) {
            mu[j] = std::exp(-s[j] * inv) * inv * inv;
            if (rate)
                rate[j] = -mu[j] * inv;
        }
    };
    return k;
}

inline Kernel zero_kernel()
{
    Kernel k;
    k.name = "zero";
    k.density = [](double, double) { return 0.0; };
    k.rate_s = [](double, double) { return 0.0; };
    k.rate_t = [](double, double) { return 0.0; };
    k.mass = [](double) { return 0.0; };
    k.mu_at_zero = [](double) { return 0.0; };
    k.scale = [](double) { return 1.0; };
    k.identically_zero = true;
    return k;
}

inline Kernel scaled_kernel(const Kernel& base, double factor)
{
    Kernel k = base;
    k.name = base.name + "*" + std::to_string(factor);
    k.density = [d = base.density, factor](double t, double s) { return factor * d(t, s); };
    k.rate_t = [d = base.rate_t, factor](double t, double s) { return factor * d(t, s); };
    k.rate_s = [d = base.rate_s, factor](double t, double s) { return factor * d(t, s); };
    if (base.mass)
        k.mass = [m = base.mass, factor](double t) { return factor * m(t); };
    if (base.mu_at_zero)
        k.mu_at_zero = [m = base.mu_at_zero, factor](double t) { return factor * m(t); };
    if (base.rows)
        k.rows = [r = base.rows, factor](double t, const std::vector<double>& s, double* mu, double* rate) {
            r(t, s, mu, rate);
            for (std::size_t j = 0; j < s.size(); ++j) {
                mu[j] *= factor;
                if (rate)
                    rate[j] *= factor;
            }
        };
    k.identically_zero = base.identically_zero || factor == 0.0;
    return k;
}

/// User kernel from a density alone. Derivatives fall back to central
/// differences with relative step 1e-5; the mass is computed by quadrature.
inline Kernel custom_kernel(std::string name, KernelField density,
                            KernelField rate_t = {}, KernelField rate_s = {})
{
    Kernel k;
    k.name = std::move(name);
    k.density = density;
    k.rate_t = rate_t ? std::move(rate_t)
                      : KernelField([density](double t, double s) { return detail::central_dt(density, t, s); });
    k.rate_s = rate_s ? std::move(rate_s)
                      : KernelField([density](double t, double s) { return detail::central_ds(density, t, s); });
    return k;
}

/// mu_t(s). Throws DomainError for s <= 0.
inline double eval_mu(const Kernel& kernel, double t, double s) { return kernel.mu(t, s); }

/// Quadrature of s -> mu_t(s) over (0, inf). The cutoff doubles until the
/// tail estimate s * mu_t(s) falls below `rel_tol` of the running integral.
inline double quadrature_mass(const Kernel& kernel, double t, double rel_tol = 1e-12)
{
    if (kernel.identically_zero)
        return 0.0;
    const double scale = kernel.memory_scale(t);
    double cutoff = 40.0 * scale;
    for (int doubling = 0; doubling < 40; ++doubling, cutoff *= 2.0) {
        const auto rule = geometric_rule(1e-7 * scale, cutoff, 64);
        const double integral = rule.integrate([&](double s) { return kernel.density(t, s); });
        const double tail = cutoff * kernel.density(t, cutoff);
        if (integral > 0.0 && tail <= rel_tol * integral)
            return integral;
    }
    throw TailError("kernel " + kernel.name + ": tail mass does not converge at t = " + std::to_string(t));
}

/// kappa(t): the closed form when the kernel has one, quadrature otherwise.
inline double total_mass(const Kernel& kernel, double t)
{
    if (kernel.mass)
        return kernel.mass(t);
    return quadrature_mass(kernel, t);
}

/// s-grid used by the audit: 201 log-spaced ages in [1e-4, 40], in units of
/// the kernel's memory scale.
inline std::vector<double> default_unit_s_grid() { return logspace(1e-4, 40.0, 201); }

/// K_tau(t) = sup_s mu_t(s) / mu_tau(s) over s = unit * scale, where scale is
/// the smaller of the two memory scales. When the kernel has a closed-form
/// mu(0+), the s -> 0 ratio is included in the supremum.
inline double embedding_bound(const Kernel& kernel, double tau, double t,
                              const std::vector<double>& unit_s_grid = default_unit_s_grid())
{
    if (t < tau)
        throw DomainError("embedding_bound: requires t >= tau");
    if (t == tau || kernel.identically_zero)
        return 1.0;
    const double scale = std::min(kernel.memory_scale(tau), kernel.memory_scale(t));
    double sup = 0.0;
    auto consider = [&](double num, double den, double s) {
        if (den > 0.0) {
            sup = std::max(sup, num / den);
        } else if (num > 0.0) {
            throw UnboundedRatioError("embedding_bound: mu_tau vanishes where mu_t does not (s = " +
                                      std::to_string(s) + ")");
        }
    };
    if (kernel.mu_at_zero)
        consider(kernel.mu_at_zero(t), kernel.mu_at_zero(tau), 0.0);
    for (double unit : unit_s_grid) {
        const double s = unit * scale;
        consider(kernel.density(t, s), kernel.density(tau, s), s);
    }
    return sup;
}

enum class Condition { M1 = 0, M2, M3, M4, M5, M6, M7, M8 };

inline constexpr std::array<Condition, 8> all_conditions{Condition::M1, Condition::M2, Condition::M3,
                                                         Condition::M4, Condition::M5, Condition::M6,
                                                         Condition::M7, Condition::M8};

inline std::string to_string(Condition c)
{
    return "M" + std::to_string(static_cast<int>(c) + 1);
}

struct AuditTolerances {
    double residual_rel = 1e-10;    ///< relative slack on pointwise inequalities
    double mass_rtol = 1e-8;        ///< closed-form vs quadrature mass
    double derivative_rtol = 1e-5;  ///< analytic vs finite-difference d/dt
    double delta_abs = 1e-4;        ///< bisection tolerance for delta_star
    double delta_max = 2.0;
    double nu_min = 1e-8;
};

struct AuditRow {
    std::string condition;
    double t;
    double s;
    double residual;
    bool pass;
};

struct KernelAudit {
    std::vector<double> t_grid;
    std::vector<double> unit_s_grid;  ///< s nodes at time t are unit * scale(t)
    double delta_star = 0.0;
    double m6_sup = 0.0;
    double m7_sup = 0.0;
    double inf_mass = 0.0;
    std::map<std::pair<double, double>, double> nu_found;
    std::map<std::pair<double, double>, double> K_bound;
    std::array<bool, 8> pass_flags{};
    std::vector<AuditRow> rows;

    bool passes(Condition c) const { return pass_flags[static_cast<std::size_t>(c)]; }

    bool all_pass() const
    {
        return std::all_of(pass_flags.begin(), pass_flags.end(), [](bool b) { return b; });
    }
};

namespace detail {

inline std::vector<double> scaled_grid(const Kernel& kernel, double t, const std::vector<double>& unit)
{
    const double scale = kernel.memory_scale(t);
    std::vector<double> out(unit.size());
    std::transform(unit.begin(), unit.end(), out.begin(), [scale](double u) { return u * scale; });
    return out;
}

/// Largest residual of dt mu + ds mu + delta kappa mu, normalized by the size
/// of its terms, over the grid. <= residual_rel means the inequality holds.
inline bool m4_holds_on(const Kernel& kernel, const std::vector<double>& t_grid,
                        const std::vector<std::vector<double>>& s_grids, const std::vector<double>& masses,
                        double delta, double residual_rel)
{
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        for (double s : s_grids[i]) {
            const double a = kernel.dmu_dt(t, s);
            const double b = kernel.dmu_ds(t, s);
            const double c = delta * masses[i] * kernel.density(t, s);
            const double r = a + b + c;
            if (r > residual_rel * (std::abs(a) + std::abs(b) + std::abs(c)))
                return false;
        }
    }
    return true;
}

inline double mass_between(const Kernel& kernel, double t, double lo, double hi)
{
    const auto rule = log_simpson(lo, hi, 256);
    return rule.integrate([&](double s) { return kernel.density(t, s); });
}

} // namespace detail

/// True iff dt mu + ds mu + delta kappa mu <= 0 (within the relative
/// tolerance) at every audited grid point.
inline bool m4_holds(const Kernel& kernel, const std::vector<double>& t_grid,
                     const std::vector<double>& unit_s_grid, double delta, double residual_rel = 1e-10)
{
    std::vector<std::vector<double>> grids;
    std::vector<double> masses;
    for (double t : t_grid) {
        grids.push_back(detail::scaled_grid(kernel, t, unit_s_grid));
        masses.push_back(total_mass(kernel, t));
    }
    return detail::m4_holds_on(kernel, t_grid, grids, masses, delta, residual_rel);
}

/// Certifies M1..M8 on the grid t_grid x (unit_s_grid * scale(t)).
/// Failures are reported in pass_flags, never thrown.
inline KernelAudit audit(const Kernel& kernel, const std::vector<double>& t_grid,
                         const std::vector<double>& unit_s_grid, const AuditTolerances& tol = {})
{
    if (t_grid.empty() || unit_s_grid.empty())
        throw DomainError("audit: grids must be nonempty");
    for (double u : unit_s_grid)
        if (!(u > 0.0))
            throw DomainError("audit: s grid must lie in (0, inf)");

    KernelAudit out;
    out.t_grid = t_grid;
    out.unit_s_grid = unit_s_grid;
    auto flag = [&](Condition c) -> bool& { return out.pass_flags[static_cast<std::size_t>(c)]; };
    for (auto c : all_conditions)
        flag(c) = true;

    const std::size_t nt = t_grid.size();
    std::vector<std::vector<double>> s_grids(nt);
    std::vector<double> masses(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        s_grids[i] = detail::scaled_grid(kernel, t_grid[i], unit_s_grid);
        try {
            masses[i] = total_mass(kernel, t_grid[i]);
        } catch (const TailError&) {
            masses[i] = std::numeric_limits<double>::quiet_NaN();
        }
    }

    // M1: nonnegative, nonincreasing in s, summable with consistent mass.
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = t_grid[i];
        const auto& sg = s_grids[i];
        double prev = std::numeric_limits<double>::infinity();
        for (double s : sg) {
            const double m = kernel.density(t, s);
            const double step = m - prev;
            const bool ok = m >= 0.0 && std::isfinite(m) &&
                            (std::isinf(prev) || step <= tol.residual_rel * prev);
            if (!ok)
                flag(Condition::M1) = false;
            out.rows.push_back({"M1", t, s, std::isinf(prev) ? -m : step, ok});
            prev = m;
        }
        bool mass_ok = std::isfinite(masses[i]);
        if (mass_ok && kernel.mass) {
            try {
                const double q = quadrature_mass(kernel, t);
                mass_ok = std::abs(q - masses[i]) <= tol.mass_rtol * std::abs(masses[i]);
            } catch (const TailError&) {
                mass_ok = false;
            }
        }
        if (!mass_ok)
            flag(Condition::M1) = false;
    }

    // M2: pointwise domination mu_t <= K_tau(t) mu_tau for tau <= t on the grid.
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = i; j < nt; ++j) {
            double k = std::numeric_limits<double>::infinity();
            try {
                k = embedding_bound(kernel, t_grid[i], t_grid[j], unit_s_grid);
            } catch (const UnboundedRatioError&) {
                flag(Condition::M2) = false;
            }
            out.K_bound[{t_grid[i], t_grid[j]}] = k;
            if (i == 0)
                out.rows.push_back({"M2", t_grid[j], 0.0, k, std::isfinite(k)});
        }
    }

    // M3: d/dt mu finite and consistent with a central difference of mu.
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = t_grid[i];
        double scale_mu = 0.0;
        for (double s : s_grids[i])
            scale_mu = std::max(scale_mu, std::abs(kernel.density(t, s)));
        for (double s : s_grids[i]) {
            const double analytic = kernel.dmu_dt(t, s);
            const double fd = detail::central_dt(kernel.density, t, s);
            const double err = std::abs(analytic - fd);
            const bool ok = std::isfinite(analytic) &&
                            err <= tol.derivative_rtol * (std::abs(analytic) + 1e-6 * scale_mu);
            if (!ok)
                flag(Condition::M3) = false;
        }
    }

    // M4: delta_star by bisection on (0, delta_max].
    {
        double lo = 0.0, hi = tol.delta_max;
        if (detail::m4_holds_on(kernel, t_grid, s_grids, masses, hi, tol.residual_rel)) {
            lo = hi;
        } else if (!detail::m4_holds_on(kernel, t_grid, s_grids, masses, tol.delta_abs, tol.residual_rel)) {
            lo = 0.0;
        } else {
            lo = tol.delta_abs;
            while (hi - lo > tol.delta_abs) {
                const double mid = 0.5 * (lo + hi);
                if (detail::m4_holds_on(kernel, t_grid, s_grids, masses, mid, tol.residual_rel))
                    lo = mid;
                else
                    hi = mid;
            }
        }
        out.delta_star = lo;
        flag(Condition::M4) = lo > 0.0;
        for (std::size_t i = 0; i < nt; ++i) {
            const double t = t_grid[i];
            for (double s : s_grids[i]) {
                const double a = kernel.dmu_dt(t, s), b = kernel.dmu_ds(t, s);
                const double c = lo * masses[i] * kernel.density(t, s);
                const double r = a + b + c;
                out.rows.push_back(
                    {"M4", t, s, r, r <= tol.residual_rel * (std::abs(a) + std::abs(b) + std::abs(c))});
            }
        }
    }

    // M5: inf kappa > 0.
    out.inf_mass = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nt; ++i) {
        const bool ok = masses[i] > 0.0;
        if (!ok)
            flag(Condition::M5) = false;
        out.inf_mass = std::min(out.inf_mass, masses[i]);
        out.rows.push_back({"M5", t_grid[i], 0.0, -masses[i], ok});
    }

    // M6: sup_t int |dt mu| ds / kappa^2.
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = t_grid[i];
        const double scale = kernel.memory_scale(t);
        const auto rule = geometric_rule(1e-7 * scale, 40.0 * scale, 64);
        const double integral = rule.integrate([&](double s) { return std::abs(kernel.dmu_dt(t, s)); });
        const double ratio = integral / (masses[i] * masses[i]);
        const bool ok = std::isfinite(ratio);
        if (!ok)
            flag(Condition::M6) = false;
        out.m6_sup = std::max(out.m6_sup, ratio);
        out.rows.push_back({"M6", t, 0.0, ratio, ok});
    }

    // M7: mu_t(0+) / kappa^2, closed form when available, smallest node otherwise.
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = t_grid[i];
        const double m0 = kernel.mu_at_zero ? kernel.mu_at_zero(t) : kernel.density(t, s_grids[i].front());
        const double ratio = m0 / (masses[i] * masses[i]);
        const bool ok = std::isfinite(ratio);
        if (!ok)
            flag(Condition::M7) = false;
        out.m7_sup = std::max(out.m7_sup, ratio);
        out.rows.push_back({"M7", t, 0.0, ratio, ok});
    }

    // M8: per-t largest nu on a geometric scan; intervals take the minimum.
    std::vector<double> nu_t(nt, 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = t_grid[i];
        for (double nu = std::pow(10.0, -1.0 / 16.0); nu >= tol.nu_min; nu *= std::pow(10.0, -1.0 / 16.0)) {
            if (detail::mass_between(kernel, t, nu, 1.0 / nu) >= 0.5 * masses[i]) {
                nu_t[i] = nu;
                break;
            }
        }
        const bool ok = nu_t[i] > 0.0;
        if (!ok)
            flag(Condition::M8) = false;
        out.rows.push_back({"M8", t, nu_t[i], nu_t[i], ok});
    }
    for (std::size_t i = 0; i + 1 < nt; ++i)
        out.nu_found[{t_grid[i], t_grid[i + 1]}] = std::min(nu_t[i], nu_t[i + 1]);
    out.nu_found[{t_grid.front(), t_grid.back()}] = *std::min_element(nu_t.begin(), nu_t.end());

    return out;
}

/// Audit with the default grids: the given t grid and 201 unit s-nodes.
inline KernelAudit audit(const Kernel& kernel, const std::vector<double>& t_grid)
{
    return audit(kernel, t_grid, default_unit_s_grid());
}

} // namespace memwave

#endif // MEMWAVE_KERNEL_HPP
