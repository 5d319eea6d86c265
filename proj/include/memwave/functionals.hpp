#ifndef MEMWAVE_FUNCTIONALS_HPP
#define MEMWAVE_FUNCTIONALS_HPP

// Energy and Lyapunov functionals, the integral Gronwall checker, the memory
// inequality monitor, and decay-rate fitting.

#include "memwave/dynamics.hpp"
#include "memwave/errors.hpp"
#include "memwave/kernel.hpp"
#include "memwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace memwave {

/// Phi = 2 <A^{sigma/2} u, A^{sigma/2} v>.
inline double phi(const SpectralField& u, const SpectralField& v, double sigma) { return 2.0 * sigma_inner(u, v, sigma); }

inline double phi(const Sample& s, double sigma) { return phi(s.u, s.v, sigma); }

/// Psi = -(2/kappa) int mu_t(s) <A^{sigma/2} eta(s), A^{sigma/2} v> ds, from the
/// per-mode memory integrals of the sample.
inline double psi(const SpectralField& v, const MemoryIntegrals& memory, double kappa, double sigma)
{
    if (kappa == 0.0)
        return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        acc += std::pow(k * k, sigma) * v[i] * memory.linear[i];
    }
    return -2.0 / kappa * acc;
}

inline double psi(const Sample& s, const Kernel& kernel, double sigma)
{
    return psi(s.v, s.memory, total_mass(kernel, s.t), sigma);
}

/// L_sigma = ||u||^2_{sigma+1} + ||v||^2_sigma + 2 <A^{sigma/2}(f(u) - g), A^{sigma/2} u>.
inline double l_functional(const Sample& s, double sigma, const ModeBasis& basis, const Nonlinearity& nl,
                           const SpectralField& g)
{
    const SpectralField gamma = apply_nonlinearity(basis, nl, NonlinearPart::full, s.u) - g;
    return sigma_norm_squared(s.u, sigma + 1.0) + sigma_norm_squared(s.v, sigma) + 2.0 * sigma_inner(gamma, s.u, sigma);
}

/// Lambda_sigma = L_sigma + ||eta||^2_{M^sigma} + 2 eps (Phi + 4 Psi).
inline double lambda_functional(const Sample& s, const Kernel& kernel, double sigma, double eps, const ModeBasis& basis,
                                const Nonlinearity& nl, const SpectralField& g)
{
    if (!(eps > 0.0 && eps <= 1.0))
        throw DomainError("lambda_functional: eps must lie in (0, 1]");
    return l_functional(s, sigma, basis, nl, g) + s.memory.norm_squared(sigma) +
           2.0 * eps * (phi(s, sigma) + 4.0 * psi(s, kernel, sigma));
}

inline double lambda_functional(const Sample& s, const Process& p, double sigma, double eps)
{
    return lambda_functional(s, p.kernel(), sigma, eps, p.basis(), p.config().nl, p.config().g);
}

struct EnergyRecord {
    double t = 0.0;
    double E_0 = 0.0, E_1_3 = 0.0, E_1 = 0.0;
    double Phi = 0.0, Psi = 0.0;
    double L_functional = 0.0, Lambda_functional = 0.0;
    double memory_norm_0 = 0.0, memory_norm_1_3 = 0.0, memory_norm_1 = 0.0;

    bool finite() const
    {
        for (double x : {E_0, E_1_3, E_1, Phi, Psi, L_functional, Lambda_functional, memory_norm_0, memory_norm_1_3,
                         memory_norm_1})
            if (!std::isfinite(x))
                return false;
        return true;
    }
};

inline EnergyRecord energy_record(const Sample& s, const Process& p, double sigma, double eps)
{
    EnergyRecord r;
    r.t = s.t;
    r.E_0 = s.energy(0.0);
    r.E_1_3 = s.energy(1.0 / 3.0);
    r.E_1 = s.energy(1.0);
    r.Phi = phi(s, sigma);
    r.Psi = psi(s, p.kernel(), sigma);
    r.L_functional = l_functional(s, sigma, p.basis(), p.config().nl, p.config().g);
    r.Lambda_functional = lambda_functional(s, p, sigma, eps);
    r.memory_norm_0 = s.memory.norm_squared(0.0);
    r.memory_norm_1_3 = s.memory.norm_squared(1.0 / 3.0);
    r.memory_norm_1 = s.memory.norm_squared(1.0);
    return r;
}

/// Constant C with |Phi| + |Psi| <= C E_sigma, E_sigma = ||(p, p_t, psi)||^2 / 2:
/// |Phi| <= ||p||^2 + ||p_t||^2 (lambda_1 = 1) and, by Cauchy-Schwarz in
/// L^2_mu, |Psi| <= (2 / sqrt(kappa)) ||p_t|| ||psi||_M <= (1/sqrt(kappa)) (..).
inline double phi_psi_bound_constant(double inf_kappa)
{
    if (!(inf_kappa > 0.0))
        throw DomainError("phi_psi_bound_constant: kernel mass must be positive");
    return 2.0 * (1.0 + 1.0 / std::sqrt(inf_kappa));
}

/// eps for Lambda: 0.05 * delta * inf kappa.
inline double default_lambda_eps(double delta, double inf_kappa)
{
    return std::clamp(0.05 * delta * inf_kappa, 1e-6, 1.0);
}

/// Smallest Q >= 0 with E - Q <= Lambda <= 3E + Q on every sample.
inline double sandwich_constant(const std::vector<double>& E, const std::vector<double>& Lambda)
{
    double q = 0.0;
    for (std::size_t i = 0; i < E.size(); ++i)
        q = std::max({q, E[i] - Lambda[i], Lambda[i] - 3.0 * E[i]});
    return q;
}

// ---------------------------------------------------------------------------
// Integral inequality reports

struct ReportRow {
    std::string check_name;
    double a = 0.0, b = 0.0, lhs = 0.0, rhs = 0.0, margin = 0.0;
};

inline void write_report_csv(std::ostream& os, const std::vector<ReportRow>& rows)
{
    os << "check_name,a,b,lhs,rhs,margin\n";
    os.precision(12);
    for (const auto& r : rows)
        os << r.check_name << ',' << r.a << ',' << r.b << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << '\n';
}

namespace detail {

inline double uniform_step(const std::vector<double>& t)
{
    if (t.size() < 2)
        throw GridError("need at least two samples");
    const double h = t[1] - t[0];
    if (!(h > 0.0))
        throw GridError("samples must increase");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - h) > 1e-6 * h)
            throw GridError("samples are not on a uniform time grid");
    return h;
}

/// Prefix trapezoid integrals: P[i] = int_{t_0}^{t_i} y.
inline std::vector<double> prefix_trapezoid(const std::vector<double>& y, double h)
{
    std::vector<double> p(y.size(), 0.0);
    for (std::size_t i = 1; i < y.size(); ++i)
        p[i] = p[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
    return p;
}

} // namespace detail

struct GronwallReport {
    double eps = 0.0, c1 = 0.0, c2 = 0.0;
    double hypothesis_violation = 0.0;  // max over pairs of lhs - rhs (relative)
    double q1_side_violation = 0.0;     // max of int q1 - eps (b-a) - c1
    double q2_side_violation = 0.0;     // max of int_t^{t+1} q2 - c2
    double conclusion_violation = 0.0;  // max of Lambda(t) - bound(t) (relative)
    bool hypothesis_holds = false;
    bool side_conditions_hold = false;
    bool conclusion_holds = false;
    ReportRow worst_hypothesis, worst_conclusion;
};

/// Checks, on a uniform grid:
///  (a) Lambda(b) + 2 eps int_a^b Lambda <= Lambda(a) + int_a^b q1 Lambda + int_a^b q2 for all a < b;
///  (b) int_a^b q1 <= eps (b - a) + c1 and sup_t int_t^{t+1} q2 <= c2;
///  (c) Lambda(t) <= e^{c1} [|Lambda(tau)| e^{-eps (t - tau)} + c2 e^eps / (1 - e^{-eps})].
/// Violations are relative to the magnitude of the terms involved; `tol`
/// absorbs rounding.
inline GronwallReport gronwall_check(const std::vector<double>& t, const std::vector<double>& Lambda,
                                     const std::vector<double>& q1, const std::vector<double>& q2, double eps, double c1,
                                     double c2, double tol = 1e-9)
{
    if (Lambda.size() != t.size() || q1.size() != t.size() || q2.size() != t.size())
        throw DomainError("gronwall_check: sample arrays differ in length");
    if (!(eps > 0.0))
        throw DomainError("gronwall_check: eps must be positive");
    const double h = detail::uniform_step(t);
    const std::size_t n = t.size();
    std::vector<double> q1L(n);
    for (std::size_t i = 0; i < n; ++i)
        q1L[i] = q1[i] * Lambda[i];
    const auto P_L = detail::prefix_trapezoid(Lambda, h);
    const auto P_q1L = detail::prefix_trapezoid(q1L, h);
    const auto P_q1 = detail::prefix_trapezoid(q1, h);
    const auto P_q2 = detail::prefix_trapezoid(q2, h);

    GronwallReport r;
    r.eps = eps;
    r.c1 = c1;
    r.c2 = c2;
    r.hypothesis_violation = -std::numeric_limits<double>::infinity();
    r.q1_side_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const double IL = P_L[b] - P_L[a];
            const double Iq1L = P_q1L[b] - P_q1L[a];
            const double Iq2 = P_q2[b] - P_q2[a];
            const double lhs = Lambda[b] + 2.0 * eps * IL;
            const double rhs = Lambda[a] + Iq1L + Iq2;
            const double scale =
                1.0 + std::abs(Lambda[a]) + std::abs(Lambda[b]) + 2.0 * eps * std::abs(IL) + std::abs(Iq1L) + Iq2;
            const double v = (lhs - rhs) / scale;
            if (v > r.hypothesis_violation) {
                r.hypothesis_violation = v;
                r.worst_hypothesis = {"gronwall_hypothesis", t[a], t[b], lhs, rhs, -v};
            }
            r.q1_side_violation = std::max(r.q1_side_violation, (P_q1[b] - P_q1[a]) - eps * (t[b] - t[a]) - c1);
        }
    }
    const auto window = static_cast<std::size_t>(std::llround(1.0 / h));
    double q2_sup = 0.0;
    if (window >= n - 1) {
        q2_sup = P_q2[n - 1];
    } else {
        for (std::size_t a = 0; a + window < n; ++a)
            q2_sup = std::max(q2_sup, P_q2[a + window] - P_q2[a]);
    }
    r.q2_side_violation = q2_sup - c2;

    const double floor_term = c2 * std::exp(eps) / (1.0 - std::exp(-eps));
    r.conclusion_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double bound = std::exp(c1) * (std::abs(Lambda[0]) * std::exp(-eps * (t[i] - t[0])) + floor_term);
        const double v = (Lambda[i] - bound) / (1.0 + std::abs(bound));
        if (v > r.conclusion_violation) {
            r.conclusion_violation = v;
            r.worst_conclusion = {"gronwall_conclusion", t[0], t[i], Lambda[i], bound, -v};
        }
    }
    r.hypothesis_holds = r.hypothesis_violation <= tol;
    r.side_conditions_hold = r.q1_side_violation <= tol * (1.0 + c1) && r.q2_side_violation <= tol * (1.0 + c2);
    r.conclusion_holds = r.conclusion_violation <= tol;
    return r;
}

/// Side constants measured from data: c1 = max (int_a^b q1 - eps (b - a))_+,
/// c2 = sup int_t^{t+1} q2.
inline std::pair<double, double> measure_side_constants(const std::vector<double>& t, const std::vector<double>& q1,
                                                        const std::vector<double>& q2, double eps)
{
    const double h = detail::uniform_step(t);
    const auto P1 = detail::prefix_trapezoid(q1, h);
    const auto P2 = detail::prefix_trapezoid(q2, h);
    const std::size_t n = t.size();
    double c1 = 0.0;
    // max over a < b of (P1[b] - eps t_b) - (P1[a] - eps t_a)
    double lowest = P1[0] - eps * t[0];
    for (std::size_t b = 1; b < n; ++b) {
        const double cur = P1[b] - eps * t[b];
        c1 = std::max(c1, cur - lowest);
        lowest = std::min(lowest, cur);
    }
    const auto window = static_cast<std::size_t>(std::llround(1.0 / h));
    double c2 = 0.0;
    if (window >= n - 1) {
        c2 = P2[n - 1];
    } else {
        for (std::size_t a = 0; a + window < n; ++a)
            c2 = std::max(c2, P2[a + window] - P2[a]);
    }
    return {c1, c2};
}

struct GronwallInstance {
    std::vector<double> t, Lambda, q1, q2;
    double eps = 0.0, c1 = 0.0, c2 = 0.0;
};

/// Random instance satisfying the hypothesis exactly in trapezoid form: on
/// every step
///   Lambda_{i+1} (1 + eps h - h q1_{i+1}/2) = Lambda_i (1 - eps h + h q1_i/2) + h (q2_i + q2_{i+1})/2 - d_i
/// with slack d_i >= 0, so the inequality holds on every pair by additivity.
/// q1 and q2 are random nonnegative piecewise-constant profiles; c1, c2 are
/// measured from them.
inline GronwallInstance synthetic_gronwall_instance(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(0.0, 1.0);
    GronwallInstance g;
    g.eps = 0.02 + 0.98 * U(rng);
    const double h = 0.02;
    const auto n = static_cast<std::size_t>(250 + 500 * U(rng));
    g.t.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        g.t[i] = static_cast<double>(i) * h;

    auto piecewise = [&](double level) {
        std::vector<double> y(n);
        std::size_t i = 0;
        while (i < n) {
            const auto len = static_cast<std::size_t>(1 + 100 * U(rng));
            const double value = U(rng) < 0.15 ? level * 8.0 * U(rng) : level * U(rng);
            for (std::size_t j = i; j < std::min(n, i + len); ++j)
                y[j] = value;
            i += len;
        }
        return y;
    };
    g.q1 = piecewise(g.eps);
    g.q2 = piecewise(5.0 * U(rng));
    const double slack_level = U(rng) < 0.5 ? 0.0 : 0.05 * U(rng);
    g.Lambda.resize(n);
    g.Lambda[0] = -5.0 + 25.0 * U(rng);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double lhs_coeff = 1.0 + g.eps * h - 0.5 * h * g.q1[i + 1];
        const double rhs = g.Lambda[i] * (1.0 - g.eps * h + 0.5 * h * g.q1[i]) + 0.5 * h * (g.q2[i] + g.q2[i + 1]) -
                           slack_level * h * U(rng);
        g.Lambda[i + 1] = rhs / lhs_coeff;
    }
    const auto [c1, c2] = measure_side_constants(g.t, g.q1, g.q2, g.eps);
    g.c1 = c1;
    g.c2 = c2;
    return g;
}

/// Smallest constant q2 making the hypothesis hold for the given Lambda, q1.
inline double minimal_constant_q2(const std::vector<double>& t, const std::vector<double>& Lambda,
                                  const std::vector<double>& q1, double eps)
{
    const double h = detail::uniform_step(t);
    const std::size_t n = t.size();
    std::vector<double> q1L(n);
    for (std::size_t i = 0; i < n; ++i)
        q1L[i] = q1[i] * Lambda[i];
    const auto P_L = detail::prefix_trapezoid(Lambda, h);
    const auto P_q1L = detail::prefix_trapezoid(q1L, h);
    double q2 = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const double excess = Lambda[b] + 2.0 * eps * (P_L[b] - P_L[a]) - Lambda[a] - (P_q1L[b] - P_q1L[a]);
            q2 = std::max(q2, excess / (t[b] - t[a]));
        }
    return q2;
}

struct MemoryInequalityReport {
    double sigma = 0.0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::size_t pairs = 0;
    ReportRow worst;
};

/// Along a trajectory, for sample pairs a < b with b - a >= min_gap:
///   N(b) - int_a^b int (d_t mu + d_s mu) ||eta||^2_{sigma+1} <= N(a) + 2 int_a^b <v, eta>_{M^sigma}
/// with N = ||eta||^2_{M^sigma}. The margin is (rhs - lhs) divided by
/// N(a) + N(b) + |dissipation| + 2 |cross|.
inline MemoryInequalityReport memory_inequality_check(const Trajectory& tr, double sigma, double min_gap)
{
    const auto& S = tr.samples;
    const std::size_t n = S.size();
    std::vector<double> N(n), D(n), C(n);
    for (std::size_t i = 0; i < n; ++i) {
        N[i] = S[i].memory.norm_squared(sigma);
        D[i] = MemoryIntegrals::weighted(S[i].dissipation_integral, sigma + 1.0);
        C[i] = MemoryIntegrals::weighted(S[i].cross_integral, sigma + 1.0);
    }
    MemoryInequalityReport r;
    r.sigma = sigma;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            if (S[b].t - S[a].t < min_gap * (1.0 - 1e-9))
                continue;
            const double dD = D[b] - D[a];
            const double dC = C[b] - C[a];
            const double lhs = N[b] - dD;
            const double rhs = N[a] + 2.0 * dC;
            const double scale = std::max(N[a] + N[b] + std::abs(dD) + 2.0 * std::abs(dC), 1e-300);
            const double margin = (rhs - lhs) / scale;
            ++r.pairs;
            if (margin < r.worst_margin) {
                r.worst_margin = margin;
                r.worst = {"memory_inequality", S[a].t, S[b].t, lhs, rhs, margin};
            }
        }
    if (r.pairs == 0)
        r.worst_margin = 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Decay fitting

struct DecayFit {
    double omega = 0.0;
    double Q = 0.0;
    double R0 = 0.0;
    double rms_residual = 0.0;       // of log(E - R0) about the fitted line
    double relative_residual = 0.0;  // rms_residual / span of log(E - R0)
    double window_lo = 0.0, window_hi = 0.0;
    std::size_t samples = 0;
    bool constant = false;
};

namespace detail {

struct LogLine {
    double intercept, slope, rms, span;
};

inline LogLine fit_log_line(const std::vector<double>& x, const std::vector<double>& E, double R0)
{
    const std::size_t n = x.size();
    std::vector<double> y(n);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::log(E[i] - R0);
        lo = std::min(lo, y[i]);
        hi = std::max(hi, y[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    const double intercept = my - slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - intercept - slope * x[i];
        ss += r * r;
    }
    return {intercept, slope, std::sqrt(ss / static_cast<double>(n)), hi - lo};
}

} // namespace detail

/// Log-linear fit E(t) ~ Q exp(-omega (t - t0)) with no plateau, over samples
/// in [window_lo, window_hi]. For quantities that decay to zero.
inline DecayFit fit_exponential(const std::vector<double>& t, const std::vector<double>& E,
                                double window_lo = -std::numeric_limits<double>::infinity(),
                                double window_hi = std::numeric_limits<double>::infinity())
{
    if (t.size() != E.size())
        throw DomainError("fit_exponential: time and value arrays differ in length");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= window_lo && t[i] <= window_hi) {
            if (!(E[i] > 0.0))
                throw DomainError("fit_exponential: samples must be positive");
            x.push_back(t[i]);
            y.push_back(E[i]);
        }
    if (x.size() < 20)
        throw DomainError("fit_exponential: need at least 20 samples in the window");
    DecayFit fit;
    fit.samples = x.size();
    fit.window_lo = x.front();
    fit.window_hi = x.back();
    for (double& xi : x)
        xi -= fit.window_lo;
    const auto line = detail::fit_log_line(x, y, 0.0);
    fit.omega = std::max(0.0, -line.slope);
    fit.Q = std::exp(line.intercept);
    fit.rms_residual = line.rms;
    fit.relative_residual = line.span > 0 ? line.rms / line.span : 0.0;
    return fit;
}

/// Fits E(t) ~ Q exp(-omega (t - t0)) + R0 over samples in [window_lo, window_hi]
/// (t0 = first sample in the window). R0 is searched over 200 candidates
/// R0 = minE - gap with gap log-spaced in [1e-6 minE, minE] (the first is R0 = 0), then
/// refined by golden section in log(gap). Each candidate gets the least-squares
/// line through log(E - R0) and is scored by the rms misfit of the resulting
/// model in E itself.
inline DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& E,
                          double window_lo = -std::numeric_limits<double>::infinity(),
                          double window_hi = std::numeric_limits<double>::infinity())
{
    if (t.size() != E.size())
        throw DomainError("fit_decay: time and value arrays differ in length");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= window_lo && t[i] <= window_hi) {
            x.push_back(t[i]);
            y.push_back(E[i]);
        }
    if (x.size() < 20)
        throw DomainError("fit_decay: need at least 20 samples in the window");
    DecayFit fit;
    fit.samples = x.size();
    fit.window_lo = x.front();
    fit.window_hi = x.back();
    const double t0 = x.front();
    for (double& xi : x)
        xi -= t0;
    const auto [mn, mx] = std::minmax_element(y.begin(), y.end());
    const double minE = *mn, maxE = *mx;
    if (!(maxE - minE > 1e-12 * std::max(std::abs(maxE), 1e-300))) {
        fit.constant = true;
        fit.R0 = std::max(minE, 0.0);
        return fit;
    }
    if (!(minE > 0.0))
        throw DomainError("fit_decay: samples must be positive");

    auto score = [&](double log_gap) {
        const double R0 = std::max(minE - std::exp(log_gap), 0.0);
        const auto line = detail::fit_log_line(x, y, R0);
        double ss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - R0 - std::exp(line.intercept + line.slope * x[i]);
            ss += r * r;
        }
        return std::sqrt(ss / static_cast<double>(x.size()));
    };
    const double g_hi = std::log(minE), g_lo = std::log(minE * 1e-6);
    const int n_cand = 200;
    std::vector<double> grid(n_cand);
    for (int j = 0; j < n_cand; ++j)
        grid[j] = g_hi + (g_lo - g_hi) * j / (n_cand - 1);
    int best = 0;
    double best_score = score(grid[0]);
    for (int j = 1; j < n_cand; ++j) {
        const double sc = score(grid[j]);
        if (sc < best_score) {
            best_score = sc;
            best = j;
        }
    }
    double a = grid[std::max(best - 1, 0)], b = grid[std::min(best + 1, n_cand - 1)];
    const double phi_g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi_g * (b - a), d = a + phi_g * (b - a);
    double fc = score(c), fd = score(d);
    for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi_g * (b - a);
            fc = score(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi_g * (b - a);
            fd = score(d);
        }
    }
    double log_gap = grid[best];
    if (std::min(fc, fd) < best_score)
        log_gap = fc < fd ? c : d;
    const double R0 = std::max(minE - std::exp(log_gap), 0.0);
    const auto line = detail::fit_log_line(x, y, R0);
    fit.R0 = R0;
    fit.omega = std::max(0.0, -line.slope);
    fit.Q = std::exp(line.intercept);
    fit.rms_residual = line.rms;
    fit.relative_residual = line.span > 0 ? line.rms / line.span : 0.0;
    return fit;
}

/// Running supremum over the future, sup_{s >= t_i} E(s). Decay fits use it
/// so that oscillation below the plateau does not cap the R0 search.
inline std::vector<double> tail_supremum(const std::vector<double>& E)
{
    std::vector<double> out(E.size());
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = E.size(); i-- > 0;) {
        m = std::max(m, E[i]);
        out[i] = m;
    }
    return out;
}

inline void write_fit_csv(std::ostream& os, const std::vector<DecayFit>& fits)
{
    os << "omega,Q,R0,residual\n";
    os.precision(12);
    for (const auto& f : fits)
        os << f.omega << ',' << f.Q << ',' << f.R0 << ',' << f.rms_residual << '\n';
}

// ---------------------------------------------------------------------------
// Closed-form bounds

/// ln(m) / ln(1 / (2 eta)).
inline double dimension_bound(double eta, double L, double m_Z_value)
{
    (void)L;  // enters only through the argument 2L/eta at which m_Z was evaluated
    if (!(eta > 0.0) || !(eta < 0.5))
        throw DomainError("dimension_bound: eta must lie in (0, 1/2)");
    if (!(m_Z_value >= 1.0))
        throw DomainError("dimension_bound: packing number must be at least 1");
    return std::log(m_Z_value) / std::log(1.0 / (2.0 * eta));
}

struct ComposedRate {
    double theta;
    double beta_prime;
};

/// theta = T kappa / (2 (ln L1 + T kappa)), beta' = min(kappa/2, theta beta).
inline ComposedRate rate_compose(double T, double kappa, double beta, double L1)
{
    if (!(T > 0.0) || !(kappa > 0.0) || !(beta > 0.0))
        throw DomainError("rate_compose: T, kappa and beta must be positive");
    if (!(L1 >= 1.0))
        throw DomainError("rate_compose: L1 must be at least 1");
    const double ln_L1 = std::max(std::log(L1), 0.0);
    const double theta = T * kappa / (2.0 * (ln_L1 + T * kappa));
    const double beta_prime = std::isinf(beta) ? kappa / 2.0 : std::min(kappa / 2.0, theta * beta);
    return {theta, beta_prime};
}

// ---------------------------------------------------------------------------
// Quasi-stability bound fitting

/// d(t) <= C e^{-kappa (t - tau)} d(tau) + Q e^{t - tau} int_tau^t ||u1 - u2||^2.
struct QuasiStabilityFit {
    double C = 0.0;
    double kappa = 0.0;
    double Q = 0.0;
};

inline double quasistability_bound(const QuasiStabilityFit& f, double elapsed, double d0, double gap_integral)
{
    return f.C * std::exp(-f.kappa * elapsed) * d0 + f.Q * std::exp(elapsed) * gap_integral;
}

/// Worst ratio measured / bound over a run (<= 1 means dominated everywhere).
inline double quasistability_worst_ratio(const QuasiStabilityFit& f, const DifferenceRun& run)
{
    const auto& S = run.samples;
    const double d0 = S.front().distance_sq;
    double worst = 0.0;
    for (const auto& s : S) {
        const double bound = quasistability_bound(f, s.t - S.front().t, d0, s.u_gap_integral);
        if (s.distance_sq == 0.0)
            continue;
        worst = std::max(worst, bound > 0.0 ? s.distance_sq / bound : std::numeric_limits<double>::infinity());
    }
    return worst;
}

/// For each kappa on a grid over [0.02, 2]: C is the largest ratio
/// d(t) / (e^{-kappa (t - tau)} d0) over the first unit of time, Q the largest
/// ratio of the remaining excess to e^{t - tau} int ||u-bar||^2, both times
/// `margin`. The kappa with the smallest total log-overshoot of the bound is
/// returned.
inline QuasiStabilityFit fit_quasistability(const std::vector<DifferenceRun>& runs, double margin = 1.25)
{
    if (runs.empty())
        throw DomainError("fit_quasistability: no runs");
    QuasiStabilityFit best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (double kappa : logspace(0.02, 2.0, 60)) {
        double C = 1.0;
        for (const auto& run : runs) {
            const auto& S = run.samples;
            const double d0 = S.front().distance_sq;
            for (const auto& s : S) {
                const double el = s.t - S.front().t;
                if (el > 1.0 + 1e-12 || d0 == 0.0)
                    continue;
                C = std::max(C, s.distance_sq / (d0 * std::exp(-kappa * el)));
            }
        }
        C *= margin;
        double Q = 0.0;
        for (const auto& run : runs) {
            const auto& S = run.samples;
            const double d0 = S.front().distance_sq;
            for (const auto& s : S) {
                const double el = s.t - S.front().t;
                const double excess = s.distance_sq - C * std::exp(-kappa * el) * d0;
                if (excess <= 0.0)
                    continue;
                const double denom = std::exp(el) * s.u_gap_integral;
                if (denom > 0.0)
                    Q = std::max(Q, excess / denom);
            }
        }
        Q *= margin;
        const QuasiStabilityFit f{C, kappa, Q};
        double cost = 0.0;
        for (const auto& run : runs) {
            const auto& S = run.samples;
            for (const auto& s : S) {
                if (s.distance_sq <= 0.0)
                    continue;
                cost += std::log(quasistability_bound(f, s.t - S.front().t, S.front().distance_sq, s.u_gap_integral) /
                                 s.distance_sq);
            }
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = f;
        }
    }
    return best;
}

} // namespace memwave

#endif // MEMWAVE_FUNCTIONALS_HPP
