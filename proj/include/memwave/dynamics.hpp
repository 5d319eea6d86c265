#ifndef MEMWAVE_DYNAMICS_HPP
#define MEMWAVE_DYNAMICS_HPP

// Time integration of u_tt + A u + int mu_t(s) A eta^t(s) ds + f(u) = g in the
// sine basis, the U0/U1 splitting, and paired difference runs.

#include "memwave/errors.hpp"
#include "memwave/history.hpp"
#include "memwave/kernel.hpp"
#include "memwave/spectral.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace memwave {

struct ProcessConfig {
    ModeBasis basis{32};
    Kernel kernel = arctan_exponential_kernel();
    Nonlinearity nl = cubic_nonlinearity();
    SpectralField g = default_forcing(32);
    double dt = 1e-3;
    double tail_tol = 1e-8;
    double blowup_threshold = 1e8;
    // The s-quadrature is built once for this time range, so that runs that
    // share a config share the discretization exactly.
    double t_min = -10.0;
    double t_max = 20.0;
    std::size_t sample_every = 100;
    int s_per_decade = 64;
    double s_max_spacing = 0.015;

    void validate() const
    {
        if (!(dt > 0.0))
            throw DomainError("ProcessConfig: dt must be positive");
        if (!(blowup_threshold > 0.0))
            throw DomainError("ProcessConfig: blowup_threshold must be positive");
        if (g.size() != basis.modes())
            throw DomainError("ProcessConfig: forcing has the wrong number of modes");
        if (!(t_max >= t_min))
            throw DomainError("ProcessConfig: t_max < t_min");
        if (sample_every == 0)
            throw DomainError("ProcessConfig: sample_every must be positive");
    }
};

/// A validated config with its s-quadrature and per-mode propagators.
class Process {
public:
    explicit Process(ProcessConfig cfg) : cfg_(std::move(cfg))
    {
        cfg_.validate();
        quad_ = SQuadrature::build(cfg_.kernel, cfg_.t_min, cfg_.t_max, cfg_.tail_tol, cfg_.s_per_decade,
                                    cfg_.s_max_spacing);
        full_ = Propagator(cfg_.basis.modes(), cfg_.dt);
        half_ = Propagator(cfg_.basis.modes(), 0.5 * cfg_.dt);
    }

    const ProcessConfig& config() const { return cfg_; }
    const SQuadrature& quadrature() const { return quad_; }
    const ModeBasis& basis() const { return cfg_.basis; }
    const Kernel& kernel() const { return cfg_.kernel; }
    std::size_t modes() const { return cfg_.basis.modes(); }
    double dt() const { return cfg_.dt; }

    /// Exact flow over h of u'' + lambda u = F with F frozen, per mode.
    struct Propagator {
        std::vector<double> c, s_over_w, w_s, one_minus_c_over_l;

        Propagator() = default;
        Propagator(std::size_t modes, double h) : c(modes), s_over_w(modes), w_s(modes), one_minus_c_over_l(modes)
        {
            for (std::size_t i = 0; i < modes; ++i) {
                const double w = static_cast<double>(i + 1);
                const double cs = std::cos(w * h), sn = std::sin(w * h);
                c[i] = cs;
                s_over_w[i] = sn / w;
                w_s[i] = w * sn;
                one_minus_c_over_l[i] = (1.0 - cs) / (w * w);
            }
        }

        void apply(const SpectralField& u, const SpectralField& v, const SpectralField& force, SpectralField& u_out,
                   SpectralField& v_out) const
        {
            for (std::size_t i = 0; i < c.size(); ++i) {
                const double uu = u[i], vv = v[i], ff = force[i];
                u_out[i] = c[i] * uu + s_over_w[i] * vv + one_minus_c_over_l[i] * ff;
                v_out[i] = -w_s[i] * uu + c[i] * vv + s_over_w[i] * ff;
            }
        }
    };

    const Propagator& full_step() const { return full_; }
    const Propagator& half_step() const { return half_; }

private:
    ProcessConfig cfg_;
    SQuadrature quad_;
    Propagator full_, half_;
};

/// z_tau = (u_tau, v_tau, eta_tau).
struct InitialData {
    SpectralField u;
    SpectralField v;
    InitialHistory eta;

    static InitialData zero(std::size_t modes) { return {SpectralField(modes), SpectralField(modes), {}}; }
};

/// The live state (t, u, v, eta^t) of one trajectory together with the memory
/// integrals at t and the per-mode running integrals
///   dissipation_integral[k] = int_tau^t b_k,  cross_integral[k] = int_tau^t v_k c_k
/// (trapezoid over the step grid).
class ExtendedState {
public:
    ExtendedState(const Process& process, const InitialData& z, double tau)
        : process_(&process), tau_(tau), u_(z.u), v_(z.v),
          history_(process.dt(), process.quadrature().s_max, tau, z.u, z.eta),
          dissipation_integral_(process.modes()), cross_integral_(process.modes())
    {
        if (z.u.size() != process.modes() || z.v.size() != process.modes())
            throw DomainError("ExtendedState: initial data has the wrong number of modes");
        if (!z.u.is_finite() || !z.v.is_finite())
            throw NumericalFault("ExtendedState: non-finite initial data");
        memory_ = integrate_buffer(history_, process.kernel(), process.quadrature(), tau_, true);
    }

    double time() const { return tau_ + static_cast<double>(n_) * process_->dt(); }
    double origin() const { return tau_; }
    std::size_t steps() const { return n_; }
    const SpectralField& u() const { return u_; }
    const SpectralField& v() const { return v_; }
    const HistoryBuffer& history() const { return history_; }
    const MemoryIntegrals& memory() const { return memory_; }
    const SpectralField& dissipation_integral() const { return dissipation_integral_; }
    const SpectralField& cross_integral() const { return cross_integral_; }
    const Process& process() const { return *process_; }

    /// Half-step predictor with frozen force; returns (u, v) at t + dt/2.
    std::pair<SpectralField, SpectralField> predict(const SpectralField& force) const
    {
        SpectralField um(u_.size()), vm(v_.size());
        process_->half_step().apply(u_, v_, force, um, vm);
        return {std::move(um), std::move(vm)};
    }

    MemoryIntegrals memory_at_midpoint(const SpectralField& u_mid) const
    {
        const double tm = time() + 0.5 * process_->dt();
        return integrate_buffer(history_, process_->kernel(), process_->quadrature(), tm, false,
                                HistoryBuffer::Head{tm, &u_mid});
    }

    /// Full step with the midpoint force; stores the new snapshot and
    /// refreshes the memory integrals and running integrals.
    void advance(const SpectralField& force_mid)
    {
        SpectralField un(u_.size()), vn(v_.size());
        process_->full_step().apply(u_, v_, force_mid, un, vn);
        const double h = process_->dt();
        const SpectralField cross_old = cross_term();
        const SpectralField diss_old = memory_.dissipation;
        u_ = std::move(un);
        v_ = std::move(vn);
        ++n_;
        history_.push(u_);
        check_state();
        memory_ = integrate_buffer(history_, process_->kernel(), process_->quadrature(), time(), true);
        const SpectralField cross_new = cross_term();
        for (std::size_t k = 0; k < u_.size(); ++k) {
            dissipation_integral_[k] += 0.5 * h * (diss_old[k] + memory_.dissipation[k]);
            cross_integral_[k] += 0.5 * h * (cross_old[k] + cross_new[k]);
        }
    }

private:
    SpectralField cross_term() const
    {
        SpectralField x(v_.size());
        for (std::size_t k = 0; k < v_.size(); ++k)
            x[k] = v_[k] * memory_.linear[k];
        return x;
    }

    void check_state() const
    {
        if (!u_.is_finite() || !v_.is_finite())
            throw NumericalFault("non-finite state at t = " + std::to_string(time()));
        const double size = sigma_norm(u_, 1.0) + sigma_norm(v_, 0.0);
        if (size > process_->config().blowup_threshold)
            throw NumericalFault("blow-up threshold exceeded at t = " + std::to_string(time()));
    }

    const Process* process_;
    double tau_;
    std::size_t n_ = 0;
    SpectralField u_, v_;
    HistoryBuffer history_;
    MemoryIntegrals memory_;
    SpectralField dissipation_integral_, cross_integral_;
};

/// Recorded state at a sample time.
struct Sample {
    double t = 0.0;
    SpectralField u, v;
    MemoryIntegrals memory;
    SpectralField dissipation_integral, cross_integral;

    static Sample of(const ExtendedState& s)
    {
        return {s.time(), s.u(), s.v(), s.memory(), s.dissipation_integral(), s.cross_integral()};
    }

    /// E_sigma = (||u||^2_{sigma+1} + ||v||^2_sigma + ||eta||^2_{M^sigma}) / 2.
    double energy(double sigma) const
    {
        return 0.5 * (sigma_norm_squared(u, sigma + 1.0) + sigma_norm_squared(v, sigma) + memory.norm_squared(sigma));
    }
};

struct Trajectory {
    std::vector<Sample> samples;

    std::vector<double> times() const
    {
        std::vector<double> t;
        t.reserve(samples.size());
        for (const auto& s : samples)
            t.push_back(s.t);
        return t;
    }

    std::vector<double> energies(double sigma) const
    {
        std::vector<double> e;
        e.reserve(samples.size());
        for (const auto& s : samples)
            e.push_back(s.energy(sigma));
        return e;
    }
};

inline SpectralField nonlinear_force(const Process& p, NonlinearPart part, const SpectralField& u)
{
    return apply_nonlinearity(p.basis(), p.config().nl, part, u);
}

/// One step of the full equation.
inline void step(ExtendedState& state)
{
    const Process& p = state.process();
    const auto& g = p.config().g;
    const SpectralField force = g - nonlinear_force(p, NonlinearPart::full, state.u()) - state.memory().force();
    const auto [um, vm] = state.predict(force);
    const auto mem_mid = state.memory_at_midpoint(um);
    const SpectralField force_mid = g - nonlinear_force(p, NonlinearPart::full, um) - mem_mid.force();
    state.advance(force_mid);
}

inline std::size_t steps_between(const Process& p, double t0, double t_end)
{
    if (t_end < t0)
        throw DomainError("evolve: t_end precedes the current time");
    return static_cast<std::size_t>(std::llround((t_end - t0) / p.dt()));
}

/// Advances `state` to t_end, sampling every sample_every steps (counted from
/// tau) and at the final time.
inline Trajectory evolve(ExtendedState& state, double t_end)
{
    const Process& p = state.process();
    const std::size_t n_steps = steps_between(p, state.time(), t_end);
    const std::size_t every = p.config().sample_every;
    Trajectory tr;
    tr.samples.push_back(Sample::of(state));
    for (std::size_t i = 0; i < n_steps; ++i) {
        step(state);
        if (state.steps() % every == 0 || i + 1 == n_steps)
            tr.samples.push_back(Sample::of(state));
    }
    return tr;
}

inline Trajectory evolve(const Process& p, const InitialData& z, double tau, double t_end)
{
    ExtendedState state(p, z, tau);
    return evolve(state, t_end);
}

/// ||sum_i coeff_i eta_i^t||^2_{M^sigma} for histories held by several buffers
/// at the same time t.
inline double combined_memory_norm(const Process& p, double t,
                                   const std::vector<std::pair<const HistoryBuffer*, double>>& parts, double sigma)
{
    std::vector<double> scratch, tmp(p.modes());
    const auto mi = integrate_memory(
        p.kernel(), p.quadrature(), t, p.modes(),
        [&](double s, double* out) {
            for (const auto& [buffer, coeff] : parts) {
                buffer->eta_into(t, s, tmp.data());
                for (std::size_t k = 0; k < tmp.size(); ++k)
                    out[k] += coeff * tmp[k];
            }
        },
        false, scratch, parts.empty() ? 0.0 : t - parts.front().first->origin());
    return mi.norm_squared(sigma);
}

/// nonlinear_split: decaying part keeps f0(v), the rest of f drives the smoothing
/// part. linear_split: decaying part is linear, all of f drives the smoothing part.
enum class SplitMode { nonlinear_split, linear_split };

inline std::string to_string(SplitMode m) { return m == SplitMode::nonlinear_split ? "nonlinear_split" : "linear_split"; }

/// Full trajectory and its decomposition into a decaying part (full initial
/// data, homogeneous equation with f0 or no nonlinearity) and a smoothing part
/// (zero initial data, driven by g and the full solution's nonlinearity).
struct SplitRun {
    SplitMode mode = SplitMode::nonlinear_split;
    Trajectory full, u0_part, u1_part;
    /// ||full - u0 - u1||^2_{H_t} (sigma = 0) at each sample.
    std::vector<double> residual;
};

inline SplitRun evolve_split(const Process& p, const InitialData& z, double tau, double t_end, SplitMode mode)
{
    ExtendedState full(p, z, tau);
    ExtendedState s0(p, z, tau);
    ExtendedState s1(p, InitialData::zero(p.modes()), tau);
    const auto& g = p.config().g;
    const bool use_f0 = mode == SplitMode::nonlinear_split;
    const std::size_t n_steps = steps_between(p, tau, t_end);
    const std::size_t every = p.config().sample_every;

    SplitRun run;
    run.mode = mode;
    auto record = [&] {
        run.full.samples.push_back(Sample::of(full));
        run.u0_part.samples.push_back(Sample::of(s0));
        run.u1_part.samples.push_back(Sample::of(s1));
        const SpectralField du = full.u() - s0.u() - s1.u();
        const SpectralField dv = full.v() - s0.v() - s1.v();
        const double mem = combined_memory_norm(
            p, full.time(), {{&full.history(), 1.0}, {&s0.history(), -1.0}, {&s1.history(), -1.0}}, 0.0);
        run.residual.push_back(sigma_norm_squared(du, 1.0) + sigma_norm_squared(dv, 0.0) + mem);
    };
    auto drives = [&](const SpectralField& u_full, const SpectralField& u0) {
        const SpectralField nf = nonlinear_force(p, NonlinearPart::full, u_full);
        const SpectralField n0 = use_f0 ? nonlinear_force(p, NonlinearPart::f0, u0) : SpectralField(p.modes());
        return std::tuple{g - nf, -n0, g - nf + n0};
    };

    record();
    for (std::size_t i = 0; i < n_steps; ++i) {
        const auto [d, d0, d1] = drives(full.u(), s0.u());
        const auto [um, vm] = full.predict(d - full.memory().force());
        const auto [um0, vm0] = s0.predict(d0 - s0.memory().force());
        const auto [um1, vm1] = s1.predict(d1 - s1.memory().force());
        const auto [dm, dm0, dm1] = drives(um, um0);
        const SpectralField fm = dm - full.memory_at_midpoint(um).force();
        const SpectralField fm0 = dm0 - s0.memory_at_midpoint(um0).force();
        const SpectralField fm1 = dm1 - s1.memory_at_midpoint(um1).force();
        full.advance(fm);
        s0.advance(fm0);
        s1.advance(fm1);
        if (full.steps() % every == 0 || i + 1 == n_steps)
            record();
    }
    return run;
}

struct DifferenceSample {
    double t = 0.0;
    double distance_sq = 0.0;   // ||z1(t) - z2(t)||^2_{H_t}
    double u_gap_integral = 0.0; // int_tau^t ||u1 - u2||^2 ds
};

struct DifferenceRun {
    std::vector<DifferenceSample> samples;
};

/// Two trajectories stepped side by side.
inline DifferenceRun difference_run(const Process& p, const InitialData& z1, const InitialData& z2, double tau,
                                    double t_end)
{
    ExtendedState a(p, z1, tau), b(p, z2, tau);
    const std::size_t n_steps = steps_between(p, tau, t_end);
    const std::size_t every = p.config().sample_every;
    DifferenceRun run;
    double integral = 0.0;
    double gap_prev = sigma_norm_squared(a.u() - b.u(), 0.0);
    auto record = [&] {
        const SpectralField du = a.u() - b.u();
        const SpectralField dv = a.v() - b.v();
        const double mem = combined_memory_norm(p, a.time(), {{&a.history(), 1.0}, {&b.history(), -1.0}}, 0.0);
        run.samples.push_back(
            {a.time(), sigma_norm_squared(du, 1.0) + sigma_norm_squared(dv, 0.0) + mem, integral});
    };
    record();
    for (std::size_t i = 0; i < n_steps; ++i) {
        step(a);
        step(b);
        const double gap = sigma_norm_squared(a.u() - b.u(), 0.0);
        integral += 0.5 * p.dt() * (gap_prev + gap);
        gap_prev = gap;
        if (a.steps() % every == 0 || i + 1 == n_steps)
            record();
    }
    return run;
}

/// ||z||^2 in H^sigma_tau: ||u||^2_{sigma+1} + ||v||^2_sigma + ||eta||^2_{M_tau^sigma}.
inline double initial_norm_squared(const Process& p, const InitialData& z, double tau, double sigma)
{
    std::vector<double> scratch;
    const auto mi = integrate_memory(
        p.kernel(), p.quadrature(), tau, p.modes(), [&](double s, double* out) { z.eta.accumulate(s, 1.0, out); },
        false, scratch);
    return sigma_norm_squared(z.u, sigma + 1.0) + sigma_norm_squared(z.v, sigma) + mi.norm_squared(sigma);
}

/// Random z_tau of exact H^sigma_tau norm R. Coefficients are Gaussian with
/// variance lambda_k^{-(sigma+1)} k^{-2} (u, and the history profile h) and
/// lambda_k^{-sigma} k^{-2} (v); eta_tau(s) = (1 - e^{-s}) h.
inline InitialData random_initial_data(const Process& p, double tau, double R, double sigma, std::uint64_t seed)
{
    if (R < 0.0)
        throw DomainError("random_initial_data: radius must be nonnegative");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t n = p.modes();
    SpectralField u(n), v(n), h(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = static_cast<double>(i + 1), lam = k * k;
        u[i] = normal(rng) * std::sqrt(std::pow(lam, -(sigma + 1.0))) / k;
        v[i] = normal(rng) * std::sqrt(std::pow(lam, -sigma)) / k;
        h[i] = normal(rng) * std::sqrt(std::pow(lam, -(sigma + 1.0))) / k;
    }
    std::vector<double> nodes{0.0};
    for (double s : logspace(1e-4, 40.0, 400))
        nodes.push_back(s);
    InitialData z{u, v, InitialHistory::sample(nodes, [&](double s) { return (1.0 - std::exp(-s)) * h; })};
    const double norm = std::sqrt(initial_norm_squared(p, z, tau, sigma));
    if (norm == 0.0)
        return z;
    const double scale = R / norm;
    z.u *= scale;
    z.v *= scale;
    z.eta = InitialHistory::sample(nodes, [&](double s) { return (scale * (1.0 - std::exp(-s))) * h; });
    return z;
}

/// CSV rows (t, E_0, E_{1/3}, E_1, ||u||_1, ||v||, ||eta||_{M_t}).
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr)
{
    os << "t,E_0,E_1_3,E_1,u_norm_1,v_norm,eta_norm\n";
    os.precision(12);
    for (const auto& s : tr.samples)
        os << s.t << ',' << s.energy(0.0) << ',' << s.energy(1.0 / 3.0) << ',' << s.energy(1.0) << ','
           << sigma_norm(s.u, 1.0) << ',' << sigma_norm(s.v, 0.0) << ',' << std::sqrt(s.memory.norm_squared(0.0))
           << '\n';
}

} // namespace memwave

#endif // MEMWAVE_DYNAMICS_HPP
