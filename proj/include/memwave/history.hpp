#ifndef MEMWAVE_HISTORY_HPP
#define MEMWAVE_HISTORY_HPP

// History variable eta^t(s) reconstructed from stored past displacements:
//   eta^t(s) = u(t) - u(t - s)                       for s <= t - tau
//   eta^t(s) = eta_tau(s - t + tau) + u(t) - u_tau   for s >  t - tau
// plus the s-quadrature used for every memory integral.

#include "memwave/errors.hpp"
#include "memwave/kernel.hpp"
#include "memwave/quadrature.hpp"
#include "memwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace memwave {

/// eta_tau on increasing memory ages, piecewise linear in s, constant beyond
/// the last node (fading tail) and below the first node.
class InitialHistory {
public:
    InitialHistory() = default;

    InitialHistory(std::vector<double> s_nodes, std::vector<SpectralField> values)
        : s_(std::move(s_nodes)), v_(std::move(values))
    {
        if (s_.size() != v_.size())
            throw DomainError("InitialHistory: node/value count mismatch");
        for (std::size_t i = 1; i < s_.size(); ++i)
            if (!(s_[i] > s_[i - 1]))
                throw DomainError("InitialHistory: s nodes must increase");
    }

    /// eta_tau = 0 (the past displacement was constant, equal to u_tau).
    static InitialHistory zero() { return {}; }

    static InitialHistory sample(std::vector<double> s_nodes,
                                 const std::function<SpectralField(double)>& eta)
    {
        std::vector<SpectralField> values;
        values.reserve(s_nodes.size());
        for (double s : s_nodes)
            values.push_back(eta(s));
        return {std::move(s_nodes), std::move(values)};
    }

    bool empty() const { return s_.empty(); }
    const std::vector<double>& nodes() const { return s_; }
    const std::vector<SpectralField>& values() const { return v_; }

    /// Writes eta_tau(s) into out[0..modes); adds `scale` times the value.
    void accumulate(double s, double scale, double* out) const
    {
        if (s_.empty())
            return;
        if (s <= s_.front()) {
            add(v_.front(), scale, out);
            return;
        }
        if (s >= s_.back()) {
            add(v_.back(), scale, out);
            return;
        }
        const auto it = std::upper_bound(s_.begin(), s_.end(), s);
        const std::size_t hi = static_cast<std::size_t>(it - s_.begin());
        const std::size_t lo = hi - 1;
        const double w = (s - s_[lo]) / (s_[hi] - s_[lo]);
        add(v_[lo], scale * (1.0 - w), out);
        add(v_[hi], scale * w, out);
    }

    SpectralField at(double s, std::size_t modes) const
    {
        SpectralField f(modes);
        accumulate(s, 1.0, f.coeffs().data());
        return f;
    }

private:
    static void add(const SpectralField& f, double scale, double* out)
    {
        for (std::size_t k = 0; k < f.size(); ++k)
            out[k] += scale * f[k];
    }

    std::vector<double> s_;
    std::vector<SpectralField> v_;
};

/// Nodes and weights on (0, s_max] for the memory integrals over a time range.
///
/// The lower node sits at 1e-3 times the smallest memory scale over the range;
/// s_max is the first doubling of 10x the largest scale with kernel tail mass
/// below tail_tol * kappa(t) at every sampled t.
struct SQuadrature {
    QuadratureRule rule;
    double s_min = 0.0;
    double s_max = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double tail_tol = 1e-8;

    std::size_t size() const { return rule.size(); }
    bool empty() const { return rule.size() == 0; }

    static SQuadrature build(const Kernel& kernel, double t_lo, double t_hi, double tail_tol = 1e-8,
                             int per_decade = 64, double max_spacing = 0.015, double lower_factor = 1e-3)
    {
        SQuadrature q;
        q.t_lo = t_lo;
        q.t_hi = std::max(t_lo, t_hi);
        q.tail_tol = tail_tol;
        if (kernel.identically_zero)
            return q;
        const auto times = linspace(q.t_lo, q.t_hi, q.t_hi > q.t_lo ? 65 : 1);
        double min_scale = kernel.memory_scale(times.front()), max_scale = min_scale;
        for (double t : times) {
            min_scale = std::min(min_scale, kernel.memory_scale(t));
            max_scale = std::max(max_scale, kernel.memory_scale(t));
        }
        q.s_min = lower_factor * min_scale;
        double cutoff = 10.0 * max_scale;
        for (int doubling = 0;; ++doubling, cutoff *= 2.0) {
            if (doubling > 40)
                throw TailError("SQuadrature: kernel tail does not fall below tolerance");
            bool ok = true;
            for (double t : times) {
                const double kappa = total_mass(kernel, t);
                const auto fine = geometric_rule(1e-7 * kernel.memory_scale(t), cutoff, 64);
                const double head = fine.integrate([&](double s) { return kernel.density(t, s); });
                if (kappa - head > tail_tol * kappa) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                break;
        }
        q.s_max = cutoff;
        q.rule = capped_geometric_rule(q.s_min, q.s_max, per_decade, max_spacing, 12.0 * max_scale);
        return q;
    }
};

/// Per-mode memory integrals at one time:
///   linear[k]      = sum_j w_j mu_t(s_j) eta_k(s_j)
///   squared[k]     = sum_j w_j mu_t(s_j) eta_k(s_j)^2
///   dissipation[k] = sum_j w_j (d_t mu + d_s mu)(s_j) eta_k(s_j)^2
/// Memory force is lambda_k * linear[k]; ||eta||^2_{M^sigma} is
/// sum_k lambda_k^{sigma+1} squared[k].
struct MemoryIntegrals {
    double t = 0.0;
    double kernel_mass = 0.0;
    SpectralField linear;
    SpectralField squared;
    SpectralField dissipation;
    bool has_dissipation = false;

    SpectralField force() const
    {
        SpectralField f = linear;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            f[i] *= k * k;
        }
        return f;
    }

    double norm_squared(double sigma) const { return weighted(squared, sigma + 1.0); }
    double dissipation_integral(double sigma) const { return weighted(dissipation, sigma + 1.0); }

    static double weighted(const SpectralField& per_mode, double power)
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < per_mode.size(); ++i) {
            const double k = static_cast<double>(i + 1);
            acc += std::pow(k * k, power) * per_mode[i];
        }
        return acc;
    }
};

/// Integrates a history given as a callable eta(s, out) that writes
/// coefficients into out[0..modes). A positive `breakpoint` marks a kink of
/// eta in s; the panel containing it is split there. Throws TailError when the
/// grid misses more than the tolerance of a closed-form kernel mass.
template <class EtaInto>
MemoryIntegrals integrate_memory(const Kernel& kernel, const SQuadrature& quad, double t, std::size_t modes,
                                 EtaInto&& eta_into, bool want_dissipation, std::vector<double>& scratch,
                                 double breakpoint = 0.0)
{
    MemoryIntegrals out;
    out.t = t;
    out.linear = SpectralField(modes);
    out.squared = SpectralField(modes);
    out.dissipation = SpectralField(modes);
    out.has_dissipation = want_dissipation;
    if (quad.empty())
        return out;
    const std::size_t n = quad.size();
    scratch.assign(modes + 2 * n, 0.0);
    double* eta = scratch.data();
    double* mu = eta + modes;
    double* rate = mu + n;
    double grid_mass = 0.0;
    auto accumulate = [&](double s, double w, double m, double r) {
        const double wm = w * m;
        grid_mass += wm;
        std::fill(eta, eta + modes, 0.0);
        eta_into(s, eta);
        for (std::size_t k = 0; k < modes; ++k) {
            const double e = eta[k];
            out.linear[k] += wm * e;
            out.squared[k] += wm * e * e;
        }
        if (want_dissipation) {
            const double wd = w * r;
            for (std::size_t k = 0; k < modes; ++k)
                out.dissipation[k] += wd * eta[k] * eta[k];
        }
    };
    kernel.evaluate_rows(t, quad.rule.nodes, mu, want_dissipation ? rate : nullptr);
    for (std::size_t j = 0; j < n; ++j)
        accumulate(quad.rule.nodes[j], quad.rule.weights[j], mu[j], want_dissipation ? rate[j] : 0.0);
    if (const SimpsonPanel* panel = breakpoint > 0.0 ? quad.rule.panel_containing(breakpoint) : nullptr) {
        const double lo = quad.rule.nodes[panel->first], hi = quad.rule.nodes[panel->first + 2];
        std::vector<double> nodes(9), weights(9), m(9), r(9);
        panel->sub_rule(lo, hi, &nodes[0], &weights[0]);
        panel->sub_rule(lo, breakpoint, &nodes[3], &weights[3]);
        panel->sub_rule(breakpoint, hi, &nodes[6], &weights[6]);
        for (int i = 0; i < 3; ++i)
            weights[i] = -weights[i];
        kernel.evaluate_rows(t, nodes, m.data(), want_dissipation ? r.data() : nullptr);
        for (std::size_t i = 0; i < 9; ++i)
            accumulate(nodes[i], weights[i], m[i], r[i]);
    }
    out.kernel_mass = grid_mass;
    if (kernel.mass && (t < quad.t_lo || t > quad.t_hi)) {
        const double kappa = kernel.mass(t);
        if (std::abs(kappa - grid_mass) > 1e-6 * kappa)
            throw TailError("memory quadrature misses kernel mass at t = " + std::to_string(t));
    }
    return out;
}

/// Uniformly sampled past of u with the assigned initial history.
///
/// Snapshot n is u(tau + n dt); the ring retains enough snapshots to cover the
/// window s_max. Queries may pass a provisional head (t_head, u_head) past the
/// last stored snapshot; values in between are interpolated linearly.
class HistoryBuffer {
public:
    struct Head {
        double t;
        const SpectralField* u;
    };

    HistoryBuffer() = default;

    HistoryBuffer(double dt, double window, double tau, SpectralField u_tau, InitialHistory initial)
        : dt_(dt), window_(window), tau_(tau), modes_(u_tau.size()), u_tau_(std::move(u_tau)),
          initial_(std::move(initial))
    {
        if (!(dt > 0.0))
            throw DomainError("HistoryBuffer: dt must be positive");
        capacity_ = static_cast<std::size_t>(std::ceil(std::max(window, 0.0) / dt)) + 3;
        ring_.assign(capacity_ * modes_, 0.0);
        push(u_tau_);
    }

    double dt() const { return dt_; }
    double window() const { return window_; }
    double origin() const { return tau_; }
    std::size_t modes() const { return modes_; }
    std::size_t count() const { return count_; }
    const SpectralField& u_tau() const { return u_tau_; }
    const InitialHistory& initial() const { return initial_; }

    /// Time of the newest stored snapshot.
    double head_time() const { return time_of(count_ - 1); }
    double time_of(std::size_t n) const { return tau_ + static_cast<double>(n) * dt_; }

    SpectralField latest() const { return snapshot(count_ - 1); }

    SpectralField snapshot(std::size_t n) const
    {
        if (n >= count_ || count_ - n > capacity_)
            throw WindowUnderrunError("HistoryBuffer: snapshot no longer retained");
        SpectralField f(modes_);
        const double* row = slot(n);
        std::copy(row, row + modes_, f.coeffs().begin());
        return f;
    }

    void push(const SpectralField& u)
    {
        double* row = &ring_[(count_ % capacity_) * modes_];
        std::copy(u.coeffs().begin(), u.coeffs().end(), row);
        ++count_;
    }

    /// Adds `scale * u(time)` into out, for tau <= time <= head time.
    void accumulate_u(double time, double scale, double* out, std::optional<Head> head = std::nullopt) const
    {
        const double last = head_time();
        if (time > last + 1e-12 * dt_) {
            if (!head || time > head->t + 1e-12 * dt_)
                throw DomainError("HistoryBuffer: query beyond the stored head");
            const double w = (time - last) / (head->t - last);
            add_row(slot(count_ - 1), scale * (1.0 - w), out);
            add(*head->u, scale * w, out);
            return;
        }
        const double x = (time - tau_) / dt_;
        double fl = std::floor(x);
        double frac = x - fl;
        auto i = static_cast<std::ptrdiff_t>(fl);
        if (i < 0) {
            i = 0;
            frac = 0.0;
        }
        auto n = static_cast<std::size_t>(i);
        if (n >= count_ - 1) {
            n = count_ - 1;
            frac = 0.0;
        }
        if (count_ - n > capacity_ || (frac > 0.0 && count_ - (n + 1) > capacity_))
            throw WindowUnderrunError("HistoryBuffer: requested past time " + std::to_string(time) +
                                      " is older than the retained window");
        add_row(slot(n), scale * (1.0 - frac), out);
        if (frac > 0.0)
            add_row(slot(n + 1), scale * frac, out);
    }

    /// eta^t(s) written into out (out is overwritten).
    void eta_into(double t, double s, double* out, std::optional<Head> head = std::nullopt) const
    {
        std::fill(out, out + modes_, 0.0);
        accumulate_u(t, 1.0, out, head);
        const double elapsed = t - tau_;
        if (s <= elapsed) {
            accumulate_u(t - s, -1.0, out, head);
        } else {
            initial_.accumulate(s - elapsed, 1.0, out);
            add(u_tau_, -1.0, out);
        }
    }

    /// eta^t(.) at a fixed t with u(t) evaluated once; for repeated queries.
    class Reader {
    public:
        Reader(const HistoryBuffer& buffer, double t, std::optional<Head> head)
            : buffer_(&buffer), t_(t), head_(head), elapsed_(t - buffer.tau_), ut_(buffer.modes_, 0.0),
              shifted_(buffer.modes_, 0.0)
        {
            buffer.accumulate_u(t, 1.0, ut_.data(), head);
            for (std::size_t k = 0; k < ut_.size(); ++k)
                shifted_[k] = ut_[k] - buffer.u_tau_[k];
        }

        void operator()(double s, double* out) const
        {
            if (s <= elapsed_) {
                std::copy(ut_.begin(), ut_.end(), out);
                buffer_->accumulate_u(t_ - s, -1.0, out, head_);
            } else {
                std::copy(shifted_.begin(), shifted_.end(), out);
                buffer_->initial_.accumulate(s - elapsed_, 1.0, out);
            }
        }

    private:
        const HistoryBuffer* buffer_;
        double t_;
        std::optional<Head> head_;
        double elapsed_;
        std::vector<double> ut_, shifted_;
    };

    Reader reader(double t, std::optional<Head> head = std::nullopt) const { return Reader(*this, t, head); }

    SpectralField eta_at(double t, double s) const
    {
        SpectralField f(modes_);
        eta_into(t, s, f.coeffs().data());
        return f;
    }

    /// CSV rows (t, mode, coefficient) of the retained snapshots.
    void write_snapshots_csv(std::ostream& os) const
    {
        os << "t,mode,coefficient\n";
        const std::size_t first = count_ > capacity_ ? count_ - capacity_ : 0;
        for (std::size_t n = first; n < count_; ++n) {
            const double* row = slot(n);
            for (std::size_t k = 0; k < modes_; ++k)
                os << time_of(n) << ',' << (k + 1) << ',' << row[k] << '\n';
        }
    }

private:
    const double* slot(std::size_t n) const { return &ring_[(n % capacity_) * modes_]; }

    void add_row(const double* row, double scale, double* out) const
    {
        for (std::size_t k = 0; k < modes_; ++k)
            out[k] += scale * row[k];
    }

    static void add(const SpectralField& f, double scale, double* out)
    {
        for (std::size_t k = 0; k < f.size(); ++k)
            out[k] += scale * f[k];
    }

    double dt_ = 1e-3;
    double window_ = 0.0;
    double tau_ = 0.0;
    std::size_t modes_ = 0;
    std::size_t capacity_ = 0;
    std::size_t count_ = 0;
    std::vector<double> ring_;
    SpectralField u_tau_;
    InitialHistory initial_;
};

/// Memory integrals of the buffered history at time t (t <= head time unless
/// a provisional head is given).
inline MemoryIntegrals integrate_buffer(const HistoryBuffer& buffer, const Kernel& kernel, const SQuadrature& quad,
                                        double t, bool want_dissipation,
                                        std::optional<HistoryBuffer::Head> head = std::nullopt)
{
    std::vector<double> scratch;
    return integrate_memory(kernel, quad, t, buffer.modes(), buffer.reader(t, head), want_dissipation, scratch,
                            t - buffer.origin());
}

/// Per mode k: lambda_k sum_j w_j mu_t(s_j) eta_k(s_j).
inline SpectralField memory_force(const HistoryBuffer& buffer, const Kernel& kernel, const SQuadrature& quad,
                                  double t)
{
    return integrate_buffer(buffer, kernel, quad, t, false).force();
}

/// ||eta^t||^2 in M_t^sigma.
inline double memory_norm(const HistoryBuffer& buffer, const Kernel& kernel, const SQuadrature& quad, double t,
                          double sigma)
{
    return integrate_buffer(buffer, kernel, quad, t, false).norm_squared(sigma);
}

/// ||eta||^2 in M_t^sigma for a history given directly as a function of s.
inline double memory_norm_of(const std::function<SpectralField(double)>& eta, const Kernel& kernel,
                             const SQuadrature& quad, double t, double sigma, std::size_t modes)
{
    std::vector<double> scratch;
    const auto mi = integrate_memory(
        kernel, quad, t, modes,
        [&](double s, double* out) {
            const auto f = eta(s);
            std::copy(f.coeffs().begin(), f.coeffs().end(), out);
        },
        false, scratch);
    return mi.norm_squared(sigma);
}

} // namespace memwave

#endif // MEMWAVE_HISTORY_HPP
