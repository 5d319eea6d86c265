#ifndef MEMWAVE_COVERING_HPP
#define MEMWAVE_COVERING_HPP

// Covering construction for finite-dimensional quasi-stable toy processes:
// packing numbers, the level-by-level covering, the E_k(n) nets and box
// counting.

#include "memwave/errors.hpp"
#include "memwave/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace memwave {

using Point = std::vector<double>;

inline double distance(const Point& a, const Point& b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc);
}

inline double norm(const Point& a)
{
    double acc = 0.0;
    for (double x : a)
        acc += x * x;
    return std::sqrt(acc);
}

/// Discrete process on R^d with U(n, n-1) x = contraction part + K_n x,
/// balls B(n) of radius R0 about the origin, and n_Z the Euclidean norm.
/// The decomposition |Ux - Uy| <= eta0 |x - y| + |K_n x - K_n y| and
/// Lip(K_n) <= L are the quasi-stability hypotheses.
struct ToyProcess {
    using Map = std::function<Point(long n, const Point&)>;

    std::string name;
    std::size_t dim = 2;
    double eta0 = 0.25;
    double L = 0.5;
    double L1 = 0.75;  // Lipschitz constant of U(n, n-1)
    double R0 = 2.0;
    Map step;       // U(n, n-1)
    Map smoothing;  // K_n

    Point apply(long n, const Point& x) const { return step(n, x); }
};

/// x -> eta0 x + a (tanh x_1, ..., tanh x_d); K = a tanh, L = a.
inline ToyProcess tanh_toy(std::size_t dim = 2, double eta0 = 0.25, double a = 0.5, double R0 = 2.0)
{
    ToyProcess p;
    p.name = "tanh";
    p.dim = dim;
    p.eta0 = eta0;
    p.L = a;
    p.L1 = eta0 + a;
    p.R0 = R0;
    p.smoothing = [a](long, const Point& x) {
        Point y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = a * std::tanh(x[i]);
        return y;
    };
    p.step = [eta0, K = p.smoothing](long n, const Point& x) {
        Point y = K(n, x);
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] += eta0 * x[i];
        return y;
    };
    return p;
}

/// Coefficient of the smoothing part drifts with n: a_n = a (1 - 0.2 sin^2(n/3)).
inline ToyProcess drifting_tanh_toy(std::size_t dim = 2, double eta0 = 0.25, double a = 0.5, double R0 = 2.0)
{
    ToyProcess p = tanh_toy(dim, eta0, a, R0);
    p.name = "drifting_tanh";
    p.smoothing = [a](long n, const Point& x) {
        const double s = std::sin(static_cast<double>(n) / 3.0);
        const double an = a * (1.0 - 0.2 * s * s);
        Point y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = an * std::tanh(x[i]);
        return y;
    };
    p.step = [eta0, K = p.smoothing](long n, const Point& x) {
        Point y = K(n, x);
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] += eta0 * x[i];
        return y;
    };
    return p;
}

/// x -> eta0 x + a sin(x) coordinatewise.
inline ToyProcess sine_toy(std::size_t dim = 2, double eta0 = 0.2, double a = 0.4, double R0 = 2.0)
{
    ToyProcess p = tanh_toy(dim, eta0, a, R0);
    p.name = "sine";
    p.smoothing = [a](long, const Point& x) {
        Point y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = a * std::sin(x[i]);
        return y;
    };
    p.step = [eta0, K = p.smoothing](long n, const Point& x) {
        Point y = K(n, x);
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] += eta0 * x[i];
        return y;
    };
    return p;
}

/// x -> c.
inline ToyProcess constant_toy(std::size_t dim = 2, double c = 0.3, double R0 = 2.0)
{
    ToyProcess p;
    p.name = "constant";
    p.dim = dim;
    p.eta0 = 0.25;
    p.L = 0.0;
    p.L1 = 0.0;
    p.R0 = R0;
    p.smoothing = [](long, const Point& x) { return Point(x.size(), 0.0); };
    p.step = [c](long, const Point& x) { return Point(x.size(), c); };
    return p;
}

/// x -> eta0 x (no smoothing part).
inline ToyProcess linear_contraction_toy(std::size_t dim = 2, double eta0 = 0.25, double R0 = 2.0)
{
    ToyProcess p;
    p.name = "linear_contraction";
    p.dim = dim;
    p.eta0 = eta0;
    p.L = 0.0;
    p.L1 = eta0;
    p.R0 = R0;
    p.smoothing = [](long, const Point& x) { return Point(x.size(), 0.0); };
    p.step = [eta0](long, const Point& x) {
        Point y = x;
        for (double& v : y)
            v *= eta0;
        return y;
    };
    return p;
}

/// Uniform samples of the ball of radius R about the origin in R^d.
inline std::vector<Point> sample_ball(std::size_t dim, double R, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Point> pts(count, Point(dim));
    for (auto& p : pts) {
        double r2 = 0.0;
        for (double& x : p) {
            x = normal(rng);
            r2 += x * x;
        }
        const double radius = R * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
        const double scale = r2 > 0.0 ? radius / std::sqrt(r2) : 0.0;
        for (double& x : p)
            x *= scale;
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Packing numbers

/// Pairwise separation realizing the strict "> 1".
inline constexpr double packing_separation = 1.0 + 1e-9;

/// Greedy maximal packing of the closed ball of radius R in R^dim: candidate
/// points on a grid of spacing 1/resolution (scan order) are accepted when at
/// distance >= 1 + 1e-9 from all accepted points. d = 1 is exact.
inline std::size_t packing_number(std::size_t dim, double R, int resolution = 20)
{
    if (!(R > 0.0))
        throw DomainError("packing_number: radius must be positive");
    if (dim == 0)
        throw DomainError("packing_number: dimension must be positive");
    if (dim == 1)
        return static_cast<std::size_t>(std::floor(2.0 * R / packing_separation)) + 1;
    const double h = 1.0 / resolution;
    const auto per_axis = static_cast<long>(std::floor(R / h));
    std::vector<Point> accepted;
    Point x(dim);
    std::vector<long> idx(dim, -per_axis);
    while (true) {
        double r2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            x[i] = static_cast<double>(idx[i]) * h;
            r2 += x[i] * x[i];
        }
        if (r2 <= R * R) {
            bool ok = true;
            for (const auto& a : accepted)
                if (distance(a, x) < packing_separation) {
                    ok = false;
                    break;
                }
            if (ok)
                accepted.push_back(x);
        }
        std::size_t d = dim;
        while (d > 0) {
            --d;
            if (++idx[d] <= per_axis)
                break;
            idx[d] = -per_axis;
            if (d == 0)
                return accepted.size();
        }
    }
}

/// Lower bound on the maximal packing number in dimensions 1 and 2: exact in
/// 1D; in 2D the best count of hexagonal or square lattice points (spacing
/// 1 + 1e-9) in the disc over a grid of rotations and offsets.
inline std::size_t packing_number_oracle(std::size_t dim, double R)
{
    if (!(R > 0.0))
        throw DomainError("packing_number_oracle: radius must be positive");
    if (dim == 1)
        return packing_number(1, R);
    if (dim != 2)
        throw DomainError("packing_number_oracle: only dimensions 1 and 2");
    const double a = packing_separation;
    std::size_t best = 1;
    const auto extent = static_cast<long>(std::ceil(R / a)) + 3;
    auto count = [&](double e1x, double e1y, double e2x, double e2y, double ox, double oy) {
        std::size_t c = 0;
        for (long i = -2 * extent; i <= 2 * extent; ++i)
            for (long j = -2 * extent; j <= 2 * extent; ++j) {
                const double x = ox + static_cast<double>(i) * e1x + static_cast<double>(j) * e2x;
                const double y = oy + static_cast<double>(i) * e1y + static_cast<double>(j) * e2y;
                if (x * x + y * y <= R * R)
                    ++c;
            }
        return c;
    };
    const int n_rot = 24, n_off = 16;
    for (int lattice = 0; lattice < 2; ++lattice) {
        const double second_angle = lattice == 0 ? std::numbers::pi / 3.0 : std::numbers::pi / 2.0;
        for (int r = 0; r < n_rot; ++r) {
            const double th = second_angle * r / n_rot;
            const double e1x = a * std::cos(th), e1y = a * std::sin(th);
            const double e2x = a * std::cos(th + second_angle), e2y = a * std::sin(th + second_angle);
            for (int p = 0; p < n_off; ++p)
                for (int q = 0; q < n_off; ++q) {
                    const double s = static_cast<double>(p) / n_off, t = static_cast<double>(q) / n_off;
                    best = std::max(best, count(e1x, e1y, e2x, e2y, s * e1x + t * e2x, s * e1y + t * e2y));
                }
        }
    }
    return best;
}

/// m_Z(2L / eta0) for the process, by the oracle; 1 when L = 0.
inline std::size_t process_packing_bound(const ToyProcess& p)
{
    if (p.L <= 0.0)
        return 1;
    const double R = 2.0 * p.L / p.eta0;
    return p.dim <= 2 ? packing_number_oracle(p.dim, R) : packing_number(p.dim, R);
}

// ---------------------------------------------------------------------------
// Covering construction

struct Cell {
    std::size_t id = 0;
    std::size_t parent = 0;
    Point center;
    double radius = 0.0;    // max distance of members from the center
    double diameter = 0.0;  // max pairwise distance of members
    std::vector<std::size_t> members;  // sample indices
};

struct CoveringLevel {
    int k = 0;
    double scale = 0.0;  // (2 eta0)^k R0
    std::vector<Point> cloud;  // U(n - depth + k, n - depth) applied to the samples
    std::vector<Cell> cells;
    std::size_t max_split = 0;  // most children produced from one parent cell
};

struct CoveringTree {
    long n = 0;
    int depth = 0;
    std::vector<CoveringLevel> levels;  // levels[0] is the ball B(n - depth)
    std::size_t packing_bound = 1;       // m_Z(2L / eta0)
    double decomposition_violation = 0.0;

    std::size_t cardinality(int k) const { return levels.at(static_cast<std::size_t>(k)).cells.size(); }

    /// Largest diameter / (2 (2 eta0)^k R0) over all cells of levels >= 1.
    double worst_diameter_ratio() const
    {
        double w = 0.0;
        for (std::size_t k = 1; k < levels.size(); ++k)
            for (const auto& c : levels[k].cells)
                w = std::max(w, c.diameter / (2.0 * levels[k].scale));
        return w;
    }
};

namespace detail {

inline std::pair<double, double> center_radius_diameter(const std::vector<Point>& cloud,
                                                        const std::vector<std::size_t>& members, Point& center)
{
    const std::size_t d = cloud[members.front()].size();
    Point mean(d, 0.0);
    for (auto i : members)
        for (std::size_t j = 0; j < d; ++j)
            mean[j] += cloud[i][j];
    for (double& x : mean)
        x /= static_cast<double>(members.size());
    std::size_t best = members.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (auto i : members) {
        const double dist = distance(cloud[i], mean);
        if (dist < best_d) {
            best_d = dist;
            best = i;
        }
    }
    center = cloud[best];
    double radius = 0.0, diameter = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
        radius = std::max(radius, distance(center, cloud[members[a]]));
        for (std::size_t b = a + 1; b < members.size(); ++b)
            diameter = std::max(diameter, distance(cloud[members[a]], cloud[members[b]]));
    }
    return {radius, diameter};
}

} // namespace detail

/// Largest excess |Ux - Uy| - eta0 |x - y| - |Kx - Ky| over random pairs.
inline double decomposition_violation(const ToyProcess& p, long n, const std::vector<Point>& cloud,
                                      std::size_t pairs, std::uint64_t seed)
{
    if (cloud.size() < 2)
        return -std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, cloud.size() - 1);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto& x = cloud[pick(rng)];
        const auto& y = cloud[pick(rng)];
        const double lhs = distance(p.step(n, x), p.step(n, y));
        const double rhs = p.eta0 * distance(x, y) + distance(p.smoothing(n, x), p.smoothing(n, y));
        worst = std::max(worst, lhs - rhs);
    }
    return worst;
}

/// Largest |U(n, n-1) x| / R0 over samples of B(n - 1) (<= 1 is semi-invariance).
inline double semi_invariance_ratio(const ToyProcess& p, long n, std::size_t samples, std::uint64_t seed)
{
    double worst = 0.0;
    for (const auto& x : sample_ball(p.dim, p.R0, samples, seed))
        worst = std::max(worst, norm(p.step(n, x)) / p.R0);
    return worst;
}

/// Covering of U(n, n - depth) B(n - depth), one level per step: the K-images
/// of each cell are packed greedily at scale eta0 (2 eta0)^{j-1} R0, the cell
/// is split by nearest packed center, and the pieces are pushed through U.
/// Throws ProcessInvalidError when the decomposition inequality fails on
/// sampled pairs.
inline CoveringTree build_covering(const ToyProcess& p, long n, int depth, std::size_t samples = 10000,
                                   std::uint64_t seed = 1)
{
    if (depth < 1)
        throw DomainError("build_covering: depth must be at least 1");
    CoveringTree tree;
    tree.n = n;
    tree.depth = depth;
    tree.packing_bound = process_packing_bound(p);

    CoveringLevel base;
    base.k = 0;
    base.scale = p.R0;
    base.cloud = sample_ball(p.dim, p.R0, samples, seed);
    Cell root;
    root.members.resize(base.cloud.size());
    for (std::size_t i = 0; i < root.members.size(); ++i)
        root.members[i] = i;
    root.center = Point(p.dim, 0.0);
    root.radius = p.R0;
    root.diameter = 2.0 * p.R0;
    base.cells.push_back(std::move(root));
    tree.levels.push_back(std::move(base));

    double worst_violation = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= depth; ++j) {
        const CoveringLevel& prev = tree.levels.back();
        const long time = n - depth + j;  // the step U(time, time - 1)
        const double violation = decomposition_violation(p, time, prev.cloud, 1000, seed + static_cast<unsigned>(j));
        worst_violation = std::max(worst_violation, violation);
        if (violation > 1e-12)
            throw ProcessInvalidError("decomposition inequality fails for process " + p.name);

        CoveringLevel level;
        level.k = j;
        level.scale = std::pow(2.0 * p.eta0, j) * p.R0;
        level.cloud.reserve(prev.cloud.size());
        std::vector<Point> kimg;
        kimg.reserve(prev.cloud.size());
        for (const auto& x : prev.cloud) {
            level.cloud.push_back(p.step(time, x));
            kimg.push_back(p.smoothing(time, x));
        }
        const double delta = p.eta0 * prev.scale;
        for (std::size_t ci = 0; ci < prev.cells.size(); ++ci) {
            const Cell& cell = prev.cells[ci];
            std::vector<std::size_t> centers;  // sample indices whose K-image is a packing center
            for (auto i : cell.members) {
                bool far = true;
                for (auto c : centers)
                    if (distance(kimg[i], kimg[c]) <= delta) {
                        far = false;
                        break;
                    }
                if (far)
                    centers.push_back(i);
            }
            std::vector<std::vector<std::size_t>> parts(centers.size());
            for (auto i : cell.members) {
                std::size_t best = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < centers.size(); ++c) {
                    const double d = distance(kimg[i], kimg[centers[c]]);
                    if (d < best_d) {
                        best_d = d;
                        best = c;
                    }
                }
                parts[best].push_back(i);
            }
            level.max_split = std::max(level.max_split, centers.size());
            for (auto& members : parts) {
                Cell child;
                child.id = level.cells.size();
                child.parent = ci;
                child.members = std::move(members);
                const auto [r, d] = detail::center_radius_diameter(level.cloud, child.members, child.center);
                child.radius = r;
                child.diameter = d;
                level.cells.push_back(std::move(child));
            }
        }
        tree.levels.push_back(std::move(level));
    }
    tree.decomposition_violation = worst_violation;
    return tree;
}

/// CSV rows (level k, cell id, center coordinates..., radius, parent id).
inline void write_covering_csv(std::ostream& os, const CoveringTree& tree)
{
    const std::size_t dim = tree.levels.front().cloud.empty() ? 0 : tree.levels.front().cloud.front().size();
    os << "level,cell_id";
    for (std::size_t i = 0; i < dim; ++i)
        os << ",center_" << i;
    os << ",radius,parent_id\n";
    os.precision(12);
    for (const auto& level : tree.levels)
        for (const auto& c : level.cells) {
            os << level.k << ',' << c.id;
            for (double x : c.center)
                os << ',' << x;
            os << ',' << c.radius << ',' << (level.k == 0 ? -1 : static_cast<long>(c.parent)) << '\n';
        }
}

// ---------------------------------------------------------------------------
// E_k(n) family

/// Along the chain m_k = n - k_max + k (k = 1..k_max):
///   V_k = centers of the depth-k covering of U(m_k, m_k - k) B(m_k - k),
///   E_k = V_k u U(m_k, m_k - 1) E_{k-1},  E_1 = V_1.
struct EAFamily {
    long n = 0;
    int k_max = 0;
    std::vector<std::vector<Point>> V;  // V[k], index 0 unused
    std::vector<std::vector<Point>> E;  // E[k], index 0 unused
    std::size_t packing_bound = 1;
    double semi_invariance_defect = 0.0;  // largest distance from U(E_k) to E_{k+1}

    const std::vector<Point>& points() const { return E.back(); }

    /// Card(E_k) <= m^{k+1} for every k.
    bool cardinality_bound_holds() const
    {
        const double m = static_cast<double>(packing_bound);
        for (int k = 1; k <= k_max; ++k)
            if (static_cast<double>(E[static_cast<std::size_t>(k)].size()) > std::pow(m, k + 1) + 1e-9)
                return false;
        return true;
    }
};

namespace detail {

inline void append_unique(std::vector<Point>& set, const Point& x, double tol = 1e-12)
{
    for (const auto& y : set)
        if (distance(x, y) <= tol)
            return;
    set.push_back(x);
}

} // namespace detail

inline EAFamily build_E(const ToyProcess& p, long n, int k_max, std::size_t samples = 10000, std::uint64_t seed = 1)
{
    if (k_max < 1)
        throw DomainError("build_E: k_max must be at least 1");
    EAFamily fam;
    fam.n = n;
    fam.k_max = k_max;
    fam.packing_bound = process_packing_bound(p);
    fam.V.resize(static_cast<std::size_t>(k_max) + 1);
    fam.E.resize(static_cast<std::size_t>(k_max) + 1);
    for (int k = 1; k <= k_max; ++k) {
        const long m = n - k_max + k;
        const auto tree = build_covering(p, m, k, samples, seed + static_cast<std::uint64_t>(1000 * k));
        auto& Vk = fam.V[static_cast<std::size_t>(k)];
        for (const auto& c : tree.levels.back().cells)
            detail::append_unique(Vk, c.center);
        auto& Ek = fam.E[static_cast<std::size_t>(k)];
        Ek = Vk;
        if (k > 1)
            for (const auto& x : fam.E[static_cast<std::size_t>(k - 1)])
                detail::append_unique(Ek, p.step(m, x));
    }
    double defect = 0.0;
    for (int k = 1; k < k_max; ++k) {
        const long m_next = n - k_max + k + 1;
        for (const auto& x : fam.E[static_cast<std::size_t>(k)]) {
            const Point y = p.step(m_next, x);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& z : fam.E[static_cast<std::size_t>(k + 1)])
                best = std::min(best, distance(y, z));
            defect = std::max(defect, best);
        }
    }
    fam.semi_invariance_defect = defect;
    return fam;
}

inline void write_family_csv(std::ostream& os, const EAFamily& fam)
{
    const std::size_t dim = fam.points().empty() ? 0 : fam.points().front().size();
    os << "level,cell_id";
    for (std::size_t i = 0; i < dim; ++i)
        os << ",center_" << i;
    os << ",radius,parent_id\n";
    os.precision(12);
    for (int k = 1; k <= fam.k_max; ++k) {
        const auto& Ek = fam.E[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < Ek.size(); ++i) {
            os << k << ',' << i;
            for (double x : Ek[i])
                os << ',' << x;
            os << ",0,-1\n";
        }
    }
}

// ---------------------------------------------------------------------------
// Box counting

struct BoxDimension {
    double dimension = 0.0;
    bool degenerate = false;  // fewer than two distinct occupied-box counts
    std::vector<std::size_t> counts;
};

/// Least-squares slope of ln N(eps) against ln(1/eps), N(eps) the number of
/// occupied cells of the grid eps Z^d. Scales must halve successively.
inline BoxDimension box_dimension(const std::vector<Point>& points, const std::vector<double>& scales)
{
    if (scales.size() < 2)
        throw DomainError("box_dimension: need at least two scales");
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (std::abs(scales[i] - 0.5 * scales[i - 1]) > 1e-9 * scales[i - 1])
            throw DomainError("box_dimension: each scale must halve the previous one");
    BoxDimension out;
    if (points.empty())
        throw DomainError("box_dimension: empty point set");
    std::vector<double> x, y;
    for (double eps : scales) {
        std::map<std::vector<long long>, int> boxes;
        for (const auto& pt : points) {
            std::vector<long long> key(pt.size());
            for (std::size_t i = 0; i < pt.size(); ++i)
                key[i] = static_cast<long long>(std::floor(pt[i] / eps));
            boxes[key] = 1;
        }
        out.counts.push_back(boxes.size());
        x.push_back(std::log(1.0 / eps));
        y.push_back(std::log(static_cast<double>(boxes.size())));
    }
    std::vector<std::size_t> distinct = out.counts;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 2) {
        out.degenerate = true;
        out.dimension = 0.0;
        return out;
    }
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    out.dimension = sxy / sxx;
    return out;
}

/// `count` successively halved scales starting at half the bounding-box extent.
inline std::vector<double> dyadic_scales(const std::vector<Point>& points, int count)
{
    double extent = 0.0;
    if (!points.empty())
        for (std::size_t i = 0; i < points.front().size(); ++i) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& p : points) {
                lo = std::min(lo, p[i]);
                hi = std::max(hi, p[i]);
            }
            extent = std::max(extent, hi - lo);
        }
    if (extent <= 0.0)
        extent = 1.0;
    std::vector<double> s;
    for (int j = 1; j <= count; ++j)
        s.push_back(extent / std::pow(2.0, j));
    return s;
}

} // namespace memwave

#endif // MEMWAVE_COVERING_HPP
