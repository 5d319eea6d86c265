#ifndef MEMWAVE_QUADRATURE_HPP
#define MEMWAVE_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <stdexcept>
#include <vector>

namespace memwave {

/// Three-node Simpson panel over nodes[first .. first + 2], uniform in s or
/// in ln s.
struct SimpsonPanel {
    std::size_t first = 0;
    bool logarithmic = false;

    /// Nodes and weights of the Simpson panel on [a, b] in the same variable.
    void sub_rule(double a, double b, double* nodes_out, double* weights_out) const
    {
        if (logarithmic) {
            const double h = 0.5 * std::log(b / a);
            nodes_out[0] = a;
            nodes_out[1] = std::sqrt(a * b);
            nodes_out[2] = b;
            for (int i = 0; i < 3; ++i)
                weights_out[i] = h / 3.0 * (i == 1 ? 4.0 : 1.0) * nodes_out[i];
        } else {
            const double h = 0.5 * (b - a);
            nodes_out[0] = a;
            nodes_out[1] = a + h;
            nodes_out[2] = b;
            for (int i = 0; i < 3; ++i)
                weights_out[i] = h / 3.0 * (i == 1 ? 4.0 : 1.0);
        }
    }
};

/// Nodes and weights of a rule on (0, s_hi]. `panels` lists the Simpson
/// panels in increasing s; nodes outside every panel have standalone weights.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<SimpsonPanel> panels;

    std::size_t size() const { return nodes.size(); }

    /// Panel whose open interval contains s, if any.
    const SimpsonPanel* panel_containing(double s) const
    {
        auto it = std::upper_bound(panels.begin(), panels.end(), s,
                                   [&](double x, const SimpsonPanel& p) { return x < nodes[p.first]; });
        if (it == panels.begin())
            return nullptr;
        const SimpsonPanel& p = *std::prev(it);
        if (s > nodes[p.first] && s < nodes[p.first + 2])
            return &p;
        return nullptr;
    }

    template <class F>
    double integrate(F&& f) const
    {
        double acc = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j)
            acc += weights[j] * f(nodes[j]);
        return acc;
    }
};

namespace detail {

inline std::size_t even_intervals(double span, double step)
{
    auto n = static_cast<std::size_t>(std::ceil(span / step));
    n = std::max<std::size_t>(n, 2);
    return n + (n % 2);
}

/// Composite Simpson weight multiplier for node j of n (n even).
inline double simpson_factor(std::size_t j, std::size_t n)
{
    if (j == 0 || j == n)
        return 1.0 / 3.0;
    return (j % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
}

} // namespace detail

/// Composite Simpson rule in x = ln s on [s_lo, s_hi] with at least
/// `per_decade` intervals per decade.
inline QuadratureRule log_simpson(double s_lo, double s_hi, int per_decade)
{
    if (!(s_lo > 0.0) || !(s_hi > s_lo) || per_decade < 1)
        throw std::invalid_argument("log_simpson: need 0 < s_lo < s_hi");
    const double span = std::log(s_hi / s_lo);
    const std::size_t intervals = detail::even_intervals(span, std::log(10.0) / per_decade);
    const double h = span / static_cast<double>(intervals);
    QuadratureRule rule;
    rule.nodes.resize(intervals + 1);
    rule.weights.resize(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) {
        const double s = s_lo * std::exp(h * static_cast<double>(j));
        rule.nodes[j] = s;
        rule.weights[j] = h * s * detail::simpson_factor(j, intervals);
    }
    rule.nodes.back() = s_hi;
    for (std::size_t j = 0; j < intervals; j += 2)
        rule.panels.push_back({j, true});
    return rule;
}

/// Rule on (0, s_hi]: one midpoint node covering (0, s_lo] followed by the
/// log-Simpson rule on [s_lo, s_hi]. Never evaluates the integrand at s = 0.
inline QuadratureRule geometric_rule(double s_lo, double s_hi, int per_decade)
{
    QuadratureRule tail = log_simpson(s_lo, s_hi, per_decade);
    QuadratureRule rule;
    rule.nodes.reserve(tail.size() + 1);
    rule.weights.reserve(tail.size() + 1);
    rule.nodes.push_back(0.5 * s_lo);
    rule.weights.push_back(s_lo);
    rule.nodes.insert(rule.nodes.end(), tail.nodes.begin(), tail.nodes.end());
    rule.weights.insert(rule.weights.end(), tail.weights.begin(), tail.weights.end());
    for (SimpsonPanel p : tail.panels) {
        p.first += 1;
        rule.panels.push_back(p);
    }
    return rule;
}

/// Composite Simpson rule in s on [a, b] with spacing at most `max_spacing`.
inline QuadratureRule uniform_simpson(double a, double b, double max_spacing)
{
    if (!(b > a) || !(max_spacing > 0.0))
        throw std::invalid_argument("uniform_simpson: need a < b and positive spacing");
    const std::size_t intervals = detail::even_intervals(b - a, max_spacing);
    const double h = (b - a) / static_cast<double>(intervals);
    QuadratureRule rule;
    rule.nodes.resize(intervals + 1);
    rule.weights.resize(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) {
        rule.nodes[j] = a + h * static_cast<double>(j);
        rule.weights[j] = h * detail::simpson_factor(j, intervals);
    }
    rule.nodes.back() = b;
    for (std::size_t j = 0; j < intervals; j += 2)
        rule.panels.push_back({j, false});
    return rule;
}

/// Joins rules on adjacent intervals; a shared endpoint keeps one node with the
/// summed weight.
inline QuadratureRule join_rules(QuadratureRule left, const QuadratureRule& right)
{
    std::size_t skip = 0;
    if (!left.nodes.empty() && !right.nodes.empty() && left.nodes.back() == right.nodes.front()) {
        left.weights.back() += right.weights.front();
        skip = 1;
    }
    const std::size_t offset = left.nodes.size() - skip;
    for (SimpsonPanel p : right.panels) {
        p.first += offset;
        left.panels.push_back(p);
    }
    left.nodes.insert(left.nodes.end(), right.nodes.begin() + static_cast<std::ptrdiff_t>(skip), right.nodes.end());
    left.weights.insert(left.weights.end(), right.weights.begin() + static_cast<std::ptrdiff_t>(skip),
                        right.weights.end());
    return left;
}

/// geometric_rule whose spacing is capped at `max_spacing` on [s_lo, s_flat]:
/// log-Simpson while the log spacing is finer than the cap, uniform
/// Simpson up to s_flat, log-Simpson again up to s_hi. Resolves
/// integrands that oscillate in s at a fixed frequency over [0, s_flat].
inline QuadratureRule capped_geometric_rule(double s_lo, double s_hi, int per_decade, double max_spacing,
                                            double s_flat)
{
    const double ratio = std::log(10.0) / per_decade;
    const double s_cap = max_spacing / ratio;
    if (!(max_spacing > 0.0) || s_flat <= s_cap || s_cap <= s_lo)
        return geometric_rule(s_lo, s_hi, per_decade);
    const double flat_end = std::min(s_flat, s_hi);
    QuadratureRule rule = geometric_rule(s_lo, s_cap, per_decade);
    rule = join_rules(std::move(rule), uniform_simpson(s_cap, flat_end, max_spacing));
    if (s_hi > flat_end)
        rule = join_rules(std::move(rule), log_simpson(flat_end, s_hi, per_decade));
    return rule;
}

inline std::vector<double> logspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

} // namespace memwave

#endif // MEMWAVE_QUADRATURE_HPP
