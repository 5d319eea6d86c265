#ifndef MEMWAVE_EXPERIMENTS_HPP
#define MEMWAVE_EXPERIMENTS_HPP

// Named experiments: each runs one scientific check, writes its CSV and plot
// files under <output>/<experiment>/, and reports a summary line.

#include "memwave/config.hpp"
#include "memwave/covering.hpp"
#include "memwave/dynamics.hpp"
#include "memwave/functionals.hpp"
#include "memwave/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace memwave {

struct ExperimentResult {
    std::string experiment;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> fields;

    template <class T>
    void add(const std::string& key, const T& value)
    {
        std::ostringstream os;
        os << std::setprecision(8) << value;
        fields.emplace_back(key, os.str());
    }

    std::string summary_line() const
    {
        std::ostringstream os;
        os << "experiment=" << experiment << " pass=" << (pass ? 1 : 0);
        for (const auto& [k, v] : fields)
            os << ' ' << k << '=' << v;
        return os.str();
    }
};

/// Thread count from MEMWAVE_THREADS, else the hardware concurrency.
inline std::size_t thread_count()
{
    if (const char* env = std::getenv("MEMWAVE_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0)
            return static_cast<std::size_t>(n);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// f(0), ..., f(n-1) on a small worker pool; results in index order. The
/// first exception thrown by any task is rethrown.
template <class F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<decltype(f(std::size_t{}))>
{
    using R = decltype(f(std::size_t{}));
    std::vector<R> out(n);
    const std::size_t workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = f(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    out[i] = f(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return out;
}

/// Files of one experiment; inactive when the output directory is empty.
class OutputDir {
public:
    OutputDir(const std::string& root, const std::string& experiment)
    {
        if (root.empty())
            return;
        dir_ = std::filesystem::path(root) / experiment;
        std::filesystem::create_directories(dir_);
        active_ = true;
    }

    bool active() const { return active_; }
    std::filesystem::path path(const std::string& name) const { return dir_ / name; }

    template <class Writer>
    void write(const std::string& name, Writer&& writer) const
    {
        if (!active_)
            return;
        std::ofstream os(path(name));
        os << std::setprecision(12);
        writer(os);
    }

    /// Two-column (x, y) plot file.
    void curve(const std::string& name, const std::vector<double>& x, const std::vector<double>& y) const
    {
        write(name + ".dat", [&](std::ostream& os) {
            for (std::size_t i = 0; i < x.size(); ++i)
                os << x[i] << ' ' << y[i] << '\n';
        });
    }

private:
    std::filesystem::path dir_;
    bool active_ = false;
};

inline std::uint64_t member_seed(std::uint64_t seed, std::size_t i) { return seed * 1000003ULL + i; }

/// Series has no growth trend over its second half: the maximum over the last
/// quarter does not exceed the maximum over the third quarter by more than 5%.
inline bool no_growth(const std::vector<double>& y, double abs_tol = 1e-12)
{
    const std::size_t n = y.size();
    if (n < 4)
        return true;
    const std::size_t q3 = n / 2, q4 = (3 * n) / 4;
    const double m3 = *std::max_element(y.begin() + static_cast<std::ptrdiff_t>(q3),
                                        y.begin() + static_cast<std::ptrdiff_t>(q4));
    const double m4 = *std::max_element(y.begin() + static_cast<std::ptrdiff_t>(q4), y.end());
    return m4 <= 1.05 * m3 + abs_tol;
}

/// delta_star and inf kappa of the configured kernel over [t_lo, t_hi].
inline std::pair<double, double> kernel_constants(const Kernel& kernel, double t_lo, double t_hi)
{
    if (kernel.identically_zero)
        return {0.0, 0.0};
    const auto a = audit(kernel, linspace(t_lo, t_hi, 41));
    return {a.delta_star, a.inf_mass};
}

// ---------------------------------------------------------------------------

inline ExperimentResult run_kernel_audit(const ExperimentConfig& cfg)
{
    ExperimentResult r{"kernel-audit"};
    const auto pc = cfg.process.to_process_config();
    const auto a = audit(pc.kernel, linspace(cfg.audit_t_lo, cfg.audit_t_hi, cfg.audit_points));
    const bool closed_m7 = static_cast<bool>(pc.kernel.mu_at_zero);
    double m7_min = std::numeric_limits<double>::infinity();
    for (const auto& row : a.rows)
        if (row.condition == "M7")
            m7_min = std::min(m7_min, row.residual);
    r.pass = a.all_pass() && a.delta_star >= 0.45;
    if (pc.kernel.name == "arctan_exponential")
        r.pass = r.pass && closed_m7 && std::abs(a.m7_sup - 1.0) <= 1e-10 && std::abs(m7_min - 1.0) <= 1e-10;
    r.add("kernel", pc.kernel.name);
    r.add("delta_star", a.delta_star);
    r.add("m6_sup", a.m6_sup);
    r.add("m7_sup", a.m7_sup);
    r.add("inf_mass", a.inf_mass);
    std::string flags;
    for (auto c : all_conditions)
        flags += to_string(c) + (a.passes(c) ? "+" : "-");
    r.add("flags", flags);
    OutputDir out(cfg.output, r.experiment);
    out.write("audit.csv", [&](std::ostream& os) {
        os << "condition,t,s,residual,pass\n";
        for (const auto& row : a.rows)
            os << row.condition << ',' << row.t << ',' << row.s << ',' << row.residual << ',' << (row.pass ? 1 : 0)
               << '\n';
    });
    return r;
}

inline ExperimentResult run_free_oscillation(const ExperimentConfig& cfg)
{
    ExperimentResult r{"free-oscillation"};
    auto pc = cfg.process.to_process_config();
    pc.kernel = zero_kernel();
    pc.nl = zero_nonlinearity();
    pc.g = SpectralField(pc.basis.modes());
    const Process p(pc);
    const std::size_t n = p.modes();
    InitialData z = InitialData::zero(n);
    z.u[0] = 1.0;
    z.v[1] = 1.0;
    if (n >= 5)
        z.u[4] = 0.3;
    z.v[n - 1] = 0.05;
    const auto tr = evolve(p, z, cfg.tau, cfg.tau + cfg.horizon);
    std::vector<double> t, err, energy;
    double worst = 0.0;
    const double e0 = 0.5 * (sigma_norm_squared(z.u, 1.0) + sigma_norm_squared(z.v, 0.0));
    double drift = 0.0;
    for (const auto& s : tr.samples) {
        const double el = s.t - cfg.tau;
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = static_cast<double>(i + 1);
            const double exact = z.u[i] * std::cos(w * el) + z.v[i] / w * std::sin(w * el);
            e = std::max(e, std::abs(s.u[i] - exact));
        }
        worst = std::max(worst, e);
        const double en = s.energy(0.0);
        drift = std::max(drift, std::abs(en - e0));
        t.push_back(s.t);
        err.push_back(e);
        energy.push_back(en);
    }
    const double rate = worst / cfg.horizon;
    const double drift_rate = drift / (e0 * cfg.horizon);
    r.pass = rate <= cfg.tolerance && drift_rate <= 1e-9;
    r.add("max_error", worst);
    r.add("error_per_unit_time", rate);
    r.add("energy_drift_per_unit_time", drift_rate);
    OutputDir out(cfg.output, r.experiment);
    out.curve("error", t, err);
    out.curve("energy", t, energy);
    out.write("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, tr); });
    return r;
}

inline ExperimentResult run_absorb(const ExperimentConfig& cfg)
{
    ExperimentResult r{"absorb"};
    const Process p(cfg.process.to_process_config());
    const double t_end = cfg.tau + cfg.horizon;
    const auto trajectories = parallel_map(cfg.radii.size(), [&](std::size_t i) {
        const auto z = random_initial_data(p, cfg.tau, cfg.radii[i], cfg.sigma, member_seed(cfg.seed, i));
        return evolve(p, z, cfg.tau, t_end);
    });
    std::vector<DecayFit> fits;
    bool all_decay = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    OutputDir out(cfg.output, r.experiment);
    for (std::size_t i = 0; i < trajectories.size(); ++i) {
        const auto f = fit_decay(trajectories[i].times(), tail_supremum(trajectories[i].energies(0.0)));
        fits.push_back(f);
        all_decay = all_decay && f.omega > 0.0;
        lo = std::min(lo, f.R0);
        hi = std::max(hi, f.R0);
        std::ostringstream tag;
        tag << "R" << cfg.radii[i];
        r.add("omega_" + tag.str(), f.omega);
        r.add("R0_" + tag.str(), f.R0);
        out.curve("energy_" + tag.str(), trajectories[i].times(), trajectories[i].energies(0.0));
        out.write("trajectory_" + tag.str() + ".csv", [&](std::ostream& os) { write_trajectory_csv(os, trajectories[i]); });
    }
    const double spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
    r.add("plateau_spread", spread);
    r.pass = all_decay && spread <= cfg.plateau_rtol;
    out.write("fits.csv", [&](std::ostream& os) { write_fit_csv(os, fits); });
    return r;
}

inline ExperimentResult run_split_decay(const ExperimentConfig& cfg)
{
    ExperimentResult r{"split-decay"};
    const Process p(cfg.process.to_process_config());
    const double t_end = cfg.tau + cfg.horizon;
    const auto runs = parallel_map(2, [&](std::size_t i) {
        const SplitMode mode = i == 0 ? SplitMode::nonlinear_split : SplitMode::linear_split;
        const double sigma = i == 0 ? cfg.sigma : 1.0;
        const auto z = random_initial_data(p, cfg.tau, cfg.radius, sigma, member_seed(cfg.seed, i));
        return evolve_split(p, z, cfg.tau, t_end, mode);
    });
    const double tail_start = cfg.tau + 0.5 * cfg.horizon;
    bool pass = true;
    OutputDir out(cfg.output, r.experiment);
    for (const auto& run : runs) {
        const std::string tag = to_string(run.mode);
        const auto t = run.u0_part.times();
        std::vector<double> u0_norm;
        for (const auto& s : run.u0_part.samples)
            u0_norm.push_back(2.0 * s.energy(0.0));
        const auto fit = fit_exponential(t, tail_supremum(u0_norm), tail_start);
        const double worst_split = std::sqrt(*std::max_element(run.residual.begin(), run.residual.end()));
        const double u1_sigma = run.mode == SplitMode::nonlinear_split ? 1.0 / 3.0 : 1.0;
        const auto u1 = run.u1_part.energies(u1_sigma);
        const bool bounded = no_growth(u1) && std::all_of(u1.begin(), u1.end(), [](double x) { return std::isfinite(x); });
        const bool ok = fit.omega > 0.0 && fit.relative_residual < 0.05 && worst_split <= 1e-7 && bounded;
        pass = pass && ok;
        r.add("omega0_" + tag, fit.omega);
        r.add("fit_residual_" + tag, fit.relative_residual);
        r.add("split_error_" + tag, worst_split);
        r.add("u1_bounded_" + tag, bounded ? 1 : 0);
        out.curve("u0_norm_" + tag, t, u0_norm);
        out.curve("u1_energy_" + tag, t, u1);
        out.write("full_" + tag + ".csv", [&](std::ostream& os) { write_trajectory_csv(os, run.full); });
        out.write("u0_" + tag + ".csv", [&](std::ostream& os) { write_trajectory_csv(os, run.u0_part); });
        out.write("u1_" + tag + ".csv", [&](std::ostream& os) { write_trajectory_csv(os, run.u1_part); });
        out.write("fit_" + tag + ".csv", [&](std::ostream& os) { write_fit_csv(os, {fit}); });
    }
    r.pass = pass;
    return r;
}

inline ExperimentResult run_regularity_ladder(const ExperimentConfig& cfg)
{
    ExperimentResult r{"regularity-ladder"};
    const Process p(cfg.process.to_process_config());
    const double t_end = cfg.tau + cfg.horizon;
    const std::vector<double> levels{1.0 / 3.0, 1.0};
    const auto trajectories = parallel_map(levels.size(), [&](std::size_t i) {
        const auto z = random_initial_data(p, cfg.tau, cfg.radius, levels[i], member_seed(cfg.seed, i));
        return evolve(p, z, cfg.tau, t_end);
    });
    bool pass = true;
    OutputDir out(cfg.output, r.experiment);
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::string tag = i == 0 ? "sigma_1_3" : "sigma_1";
        const auto E = trajectories[i].energies(levels[i]);
        const auto fit = fit_decay(trajectories[i].times(), tail_supremum(E));
        const bool bounded = no_growth(E) && std::all_of(E.begin(), E.end(), [](double x) { return std::isfinite(x); });
        pass = pass && fit.omega > 0.0 && bounded;
        r.add("omega_" + tag, fit.omega);
        r.add("R0_" + tag, fit.R0);
        r.add("sup_" + tag, *std::max_element(E.begin(), E.end()));
        r.add("bounded_" + tag, bounded ? 1 : 0);
        out.curve("energy_" + tag, trajectories[i].times(), E);
        out.write("trajectory_" + tag + ".csv", [&](std::ostream& os) { write_trajectory_csv(os, trajectories[i]); });
    }
    r.pass = pass;
    return r;
}

inline std::vector<DifferenceRun> difference_ensemble(const Process& p, const ExperimentConfig& cfg, std::size_t count,
                                                      std::size_t offset)
{
    return parallel_map(count, [&](std::size_t i) {
        const std::size_t id = offset + i;
        const auto z1 = random_initial_data(p, cfg.tau, cfg.radius, cfg.sigma, member_seed(cfg.seed, 2 * id));
        const auto z2 = random_initial_data(p, cfg.tau, cfg.radius, cfg.sigma, member_seed(cfg.seed, 2 * id + 1));
        return difference_run(p, z1, z2, cfg.tau, cfg.tau + cfg.horizon);
    });
}

inline ExperimentResult run_quasistability(const ExperimentConfig& cfg)
{
    ExperimentResult r{"quasistability"};
    const Process p(cfg.process.to_process_config());
    const auto train = difference_ensemble(p, cfg, cfg.members, 0);
    const auto fit = fit_quasistability(train);
    const auto valid = difference_ensemble(p, cfg, cfg.validation_pairs, cfg.members);
    double worst_train = 0.0, worst_valid = 0.0;
    for (const auto& run : train)
        worst_train = std::max(worst_train, quasistability_worst_ratio(fit, run));
    for (const auto& run : valid)
        worst_valid = std::max(worst_valid, quasistability_worst_ratio(fit, run));
    r.pass = fit.kappa > 0.0 && worst_train <= 1.0 && worst_valid <= 1.0;
    r.add("C", fit.C);
    r.add("kappa", fit.kappa);
    r.add("Q", fit.Q);
    r.add("worst_ratio_train", worst_train);
    r.add("worst_ratio_validation", worst_valid);
    OutputDir out(cfg.output, r.experiment);
    out.write("pairs.csv", [&](std::ostream& os) {
        os << "set,pair,t,distance_sq,u_gap_integral,bound\n";
        auto dump = [&](const char* set, const std::vector<DifferenceRun>& runs) {
            for (std::size_t i = 0; i < runs.size(); ++i) {
                const auto& S = runs[i].samples;
                for (const auto& s : S)
                    os << set << ',' << i << ',' << s.t << ',' << s.distance_sq << ',' << s.u_gap_integral << ','
                       << quasistability_bound(fit, s.t - S.front().t, S.front().distance_sq, s.u_gap_integral)
                       << '\n';
            }
        };
        dump("train", train);
        dump("validation", valid);
    });
    return r;
}

struct GronwallPipeline {
    GronwallReport report;
    double eps = 0.0, q2 = 0.0, sandwich_Q = 0.0;
};

/// Lambda_{1/3} along the full solution of a nonlinear_split run, q1 = (eps/2)(1 + ||v_U0||_1^2),
/// q2 the smallest constant making the hypothesis hold, c1 and c2 measured.
inline GronwallPipeline gronwall_pipeline(const Process& p, const ExperimentConfig& cfg)
{
    const auto [delta, inf_kappa] = kernel_constants(p.kernel(), cfg.tau, cfg.tau + cfg.horizon);
    const double eps = default_lambda_eps(delta, inf_kappa);
    const auto z = random_initial_data(p, cfg.tau, cfg.radius, 1.0 / 3.0, member_seed(cfg.seed, 7));
    const auto run = evolve_split(p, z, cfg.tau, cfg.tau + cfg.horizon, SplitMode::nonlinear_split);
    const auto t = run.full.times();
    std::vector<double> Lambda, q1, E;
    for (std::size_t i = 0; i < t.size(); ++i) {
        Lambda.push_back(lambda_functional(run.full.samples[i], p, 1.0 / 3.0, eps));
        E.push_back(run.full.samples[i].energy(1.0 / 3.0));
        q1.push_back(0.5 * eps * (1.0 + sigma_norm_squared(run.u0_part.samples[i].v, 1.0)));
    }
    GronwallPipeline g;
    g.eps = eps;
    g.q2 = minimal_constant_q2(t, Lambda, q1, eps);
    const std::vector<double> q2(t.size(), g.q2);
    const auto [c1, c2] = measure_side_constants(t, q1, q2, eps);
    g.report = gronwall_check(t, Lambda, q1, q2, eps, c1, c2, 1e-9);
    g.sandwich_Q = sandwich_constant(E, Lambda);
    return g;
}

inline ExperimentResult run_gronwall(const ExperimentConfig& cfg)
{
    ExperimentResult r{"gronwall"};
    std::mt19937_64 rng(cfg.seed);
    std::size_t hypothesis_failures = 0, conclusion_failures = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfg.trials; ++i) {
        const auto inst = synthetic_gronwall_instance(rng);
        const auto rep = gronwall_check(inst.t, inst.Lambda, inst.q1, inst.q2, inst.eps, inst.c1, inst.c2);
        if (!rep.hypothesis_holds || !rep.side_conditions_hold)
            ++hypothesis_failures;
        else if (!rep.conclusion_holds)
            ++conclusion_failures;
        worst = std::max(worst, rep.conclusion_violation);
    }
    const Process p(cfg.process.to_process_config());
    const auto pipe = gronwall_pipeline(p, cfg);
    r.pass = hypothesis_failures == 0 && conclusion_failures == 0 && pipe.report.hypothesis_holds &&
             pipe.report.conclusion_holds;
    r.add("trials", cfg.trials);
    r.add("hypothesis_failures", hypothesis_failures);
    r.add("conclusion_failures", conclusion_failures);
    r.add("worst_synthetic_violation", worst);
    r.add("pipeline_eps", pipe.eps);
    r.add("pipeline_c1", pipe.report.c1);
    r.add("pipeline_c2", pipe.report.c2);
    r.add("pipeline_conclusion_violation", pipe.report.conclusion_violation);
    r.add("sandwich_Q", pipe.sandwich_Q);
    OutputDir out(cfg.output, r.experiment);
    out.write("pipeline.csv", [&](std::ostream& os) {
        write_report_csv(os, {pipe.report.worst_hypothesis, pipe.report.worst_conclusion});
    });
    return r;
}

struct CoveringOutcome {
    CoveringTree tree;
    EAFamily family;
    BoxDimension box;
    double bound = 0.0;
    bool cardinality_law = true;
    bool diameters_ok = true;
    double semi_invariance = 0.0;
};

inline CoveringOutcome covering_outcome(const ExperimentConfig& cfg)
{
    const auto& cs = cfg.covering;
    const ToyProcess proc = cs.make();
    CoveringOutcome o;
    o.semi_invariance = semi_invariance_ratio(proc, cs.n, cs.samples, cfg.seed + 17);
    o.tree = build_covering(proc, cs.n, cs.depth, cs.samples, cfg.seed);
    const double m = static_cast<double>(o.tree.packing_bound);
    for (int k = 1; k <= cs.depth; ++k)
        if (static_cast<double>(o.tree.cardinality(k)) > std::pow(m, k) + 1e-9)
            o.cardinality_law = false;
    o.diameters_ok = o.tree.worst_diameter_ratio() <= 1.02;
    o.family = build_E(proc, cs.n, cs.depth, cs.samples, cfg.seed);
    o.box = box_dimension(o.family.points(), dyadic_scales(o.family.points(), 4));
    o.bound = proc.L > 0.0 ? dimension_bound(proc.eta0, proc.L, m) : 0.0;
    return o;
}

inline ExperimentResult run_covering_demo(const ExperimentConfig& cfg)
{
    ExperimentResult r{"covering-demo"};
    const auto o = covering_outcome(cfg);
    r.pass = o.cardinality_law && o.diameters_ok && o.family.cardinality_bound_holds() &&
             o.family.semi_invariance_defect <= 1e-12 && o.box.dimension <= o.bound + 0.25 && o.semi_invariance <= 1.0;
    r.add("toy", cfg.covering.toy);
    r.add("m_Z", o.tree.packing_bound);
    std::string counts;
    for (int k = 1; k <= cfg.covering.depth; ++k)
        counts += (k > 1 ? "/" : "") + std::to_string(o.tree.cardinality(k));
    r.add("N_k", counts);
    r.add("card_E", o.family.points().size());
    r.add("diameter_ratio", o.tree.worst_diameter_ratio());
    r.add("box_dimension", o.box.dimension);
    r.add("dimension_bound", o.bound);
    r.add("semi_invariance_ratio", o.semi_invariance);
    OutputDir out(cfg.output, r.experiment);
    out.write("covering.csv", [&](std::ostream& os) { write_covering_csv(os, o.tree); });
    out.write("family.csv", [&](std::ostream& os) { write_family_csv(os, o.family); });
    out.write("cardinalities.csv", [&](std::ostream& os) {
        os << "k,N_k,bound,card_E\n";
        for (int k = 1; k <= cfg.covering.depth; ++k)
            os << k << ',' << o.tree.cardinality(k) << ',' << std::pow(static_cast<double>(o.tree.packing_bound), k)
               << ',' << o.family.E[static_cast<std::size_t>(k)].size() << '\n';
    });
    return r;
}

struct RadiiReport {
    std::array<double, 3> radius{};  // sup of E_0, E_{1/3}, E_1 over the post-transient window, max over members
    std::array<double, 3> spread{};  // (max - min) / max over members
    bool inconclusive = false;
    std::vector<std::array<double, 3>> member_sups;
};

/// Post-transient window is the second half of the horizon. A member has
/// settled when the sup over the window's first half exceeds the sup over its
/// second half by at most 10%, up to 1e-3 of the member's initial energy.
inline RadiiReport estimate_radii(const ExperimentConfig& cfg, const Process& p)
{
    const std::array<double, 3> sigmas{0.0, 1.0 / 3.0, 1.0};
    const double t_end = cfg.tau + cfg.horizon;
    const double mid = cfg.tau + 0.5 * cfg.horizon;
    const double split = cfg.tau + 0.75 * cfg.horizon;
    RadiiReport rep;
    const auto trajectories = parallel_map(cfg.members, [&](std::size_t i) {
        const auto z = random_initial_data(p, cfg.tau, cfg.radius, 1.0, member_seed(cfg.seed, i));
        return evolve(p, z, cfg.tau, t_end);
    });
    for (const auto& tr : trajectories) {
        std::array<double, 3> late{}, first{}, second{}, initial{};
        for (std::size_t j = 0; j < 3; ++j)
            initial[j] = tr.samples.front().energy(sigmas[j]);
        for (const auto& s : tr.samples)
            for (std::size_t j = 0; j < 3; ++j) {
                if (s.t < mid)
                    continue;
                const double e = s.energy(sigmas[j]);
                late[j] = std::max(late[j], e);
                (s.t < split ? first : second)[j] = std::max((s.t < split ? first : second)[j], e);
            }
        for (std::size_t j = 0; j < 3; ++j)
            if (first[j] > 1.1 * second[j] + 1e-3 * initial[j])
                rep.inconclusive = true;
        rep.member_sups.push_back(late);
    }
    for (std::size_t j = 0; j < 3; ++j) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& m : rep.member_sups) {
            lo = std::min(lo, m[j]);
            hi = std::max(hi, m[j]);
        }
        rep.radius[j] = hi;
        rep.spread[j] = hi > 1e-12 ? (hi - lo) / hi : 0.0;
    }
    return rep;
}

inline ExperimentResult run_attractor_radii(const ExperimentConfig& cfg)
{
    ExperimentResult r{"attractor-radii"};
    const auto pc = cfg.process.to_process_config();
    const Process p(pc);
    const auto rep = estimate_radii(cfg, p);
    auto doubled_cfg = pc;
    doubled_cfg.g *= 2.0;
    ExperimentConfig single = cfg;
    single.members = 1;
    const auto doubled = estimate_radii(single, Process(doubled_cfg));
    const bool spread_ok = std::all_of(rep.spread.begin(), rep.spread.end(),
                                       [&](double s) { return s <= cfg.spread_rtol; });
    r.pass = !rep.inconclusive && spread_ok;
    r.add("radius_0", rep.radius[0]);
    r.add("radius_1_3", rep.radius[1]);
    r.add("radius_1", rep.radius[2]);
    r.add("spread_0", rep.spread[0]);
    r.add("spread_1_3", rep.spread[1]);
    r.add("spread_1", rep.spread[2]);
    r.add("inconclusive", rep.inconclusive ? 1 : 0);
    r.add("radius_0_doubled_forcing", doubled.radius[0]);
    OutputDir out(cfg.output, r.experiment);
    out.write("radii.csv", [&](std::ostream& os) {
        os << "member,E_0,E_1_3,E_1\n";
        for (std::size_t i = 0; i < rep.member_sups.size(); ++i)
            os << i << ',' << rep.member_sups[i][0] << ',' << rep.member_sups[i][1] << ',' << rep.member_sups[i][2]
               << '\n';
    });
    return r;
}

/// Runs the named experiment. Throws UsageError for invalid configs and
/// NumericalFault (or another memwave error) on numerical failure.
inline ExperimentResult run_unchecked(const ExperimentConfig& cfg)
{
    const std::string& n = cfg.name;
    if (n == "kernel-audit")
        return run_kernel_audit(cfg);
    if (n == "free-oscillation")
        return run_free_oscillation(cfg);
    if (n == "absorb")
        return run_absorb(cfg);
    if (n == "split-decay")
        return run_split_decay(cfg);
    if (n == "regularity-ladder")
        return run_regularity_ladder(cfg);
    if (n == "quasistability")
        return run_quasistability(cfg);
    if (n == "gronwall")
        return run_gronwall(cfg);
    if (n == "covering-demo")
        return run_covering_demo(cfg);
    return run_attractor_radii(cfg);
}

inline ExperimentResult run(const ExperimentConfig& cfg)
{
    cfg.validate();
    auto r = run_unchecked(cfg);
    r.fields.insert(r.fields.begin(), {"seed", std::to_string(cfg.seed)});
    return r;
}

} // namespace memwave

#endif // MEMWAVE_EXPERIMENTS_HPP
