// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "memwave/memwave.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace memwave;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

ExperimentConfig shipped(const std::string& name)
{
    auto c = load_config(std::string(MEMWAVE_CONFIG_DIR) + "/" + name + ".ini", name);
    c.output.clear();
    return c;
}

Outcome from_result(const ExperimentResult& r)
{
    std::ostringstream os;
    for (const auto& [k, v] : r.fields)
        os << k << '=' << v << ' ';
    return {r.pass, os.str()};
}

Outcome kernel_admissibility()
{
    return from_result(run(shipped("kernel-audit")));
}

Outcome exact_modes()
{
    return from_result(run(shipped("free-oscillation")));
}

Outcome memory_inequality()
{
    const auto cfg = shipped("absorb");
    const Process p(cfg.process.to_process_config());
    const double tau = -10.0, t_end = 10.0, R = 5.0;
    struct Job {
        double data_sigma;
        std::vector<double> check_sigmas;
    };
    std::vector<Job> jobs;
    for (int i = 0; i < 5; ++i)
        jobs.push_back({0.0, {0.0}});
    for (int i = 0; i < 5; ++i)
        jobs.push_back({1.0, {0.0, 1.0}});
    const auto margins = parallel_map(jobs.size(), [&](std::size_t i) {
        const auto z = random_initial_data(p, tau, R, jobs[i].data_sigma, member_seed(cfg.seed, 100 + i));
        const auto tr = evolve(p, z, tau, t_end);
        std::vector<double> out;
        for (double sigma : jobs[i].check_sigmas)
            out.push_back(memory_inequality_check(tr, sigma, 5.0 * p.dt()).worst_margin);
        return out;
    });
    double worst0 = 1.0, worst1 = 1.0;
    for (std::size_t i = 0; i < jobs.size(); ++i)
        for (std::size_t j = 0; j < jobs[i].check_sigmas.size(); ++j)
            (jobs[i].check_sigmas[j] == 0.0 ? worst0 : worst1) =
                std::min(jobs[i].check_sigmas[j] == 0.0 ? worst0 : worst1, margins[i][j]);
    std::ostringstream os;
    os << "worst_margin_sigma0=" << worst0 << " worst_margin_sigma1=" << worst1;
    return {worst0 >= -1e-4 && worst1 >= -1e-4, os.str()};
}

Outcome absorbing() { return from_result(run(shipped("absorb"))); }

Outcome splitting() { return from_result(run(shipped("split-decay"))); }

Outcome ladder() { return from_result(run(shipped("regularity-ladder"))); }

Outcome quasistability() { return from_result(run(shipped("quasistability"))); }

Outcome gronwall() { return from_result(run(shipped("gronwall"))); }

Outcome covering() { return from_result(run(shipped("covering-demo"))); }

Outcome rate_algebra()
{
    bool ok = true;
    for (double beta : {0.5, 1.0, 2.0, 3.0, 10.0}) {
        const auto r = rate_compose(1.0, 1.0, beta, std::exp(1.0));
        ok = ok && r.theta == 0.25 && r.beta_prime == std::min(0.5, beta / 4.0);
    }
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double T = 0.1 + 9.9 * U(rng);
        const double kappa = std::pow(10.0, -2.0 + 4.0 * U(rng));
        const double beta = std::pow(10.0, -2.0 + 4.0 * U(rng));
        const double L1 = std::exp(10.0 * U(rng));
        const double theta = rate_compose(T, kappa, beta, L1).theta;
        lo = std::min(lo, theta);
        hi = std::max(hi, theta);
    }
    ok = ok && lo > 0.0 && hi < 1.0;
    std::ostringstream os;
    os << "theta_range=[" << lo << ", " << hi << "]";
    return {ok, os.str()};
}

Outcome embedding()
{
    const auto k = arctan_exponential_kernel();
    const auto quad = SQuadrature::build(k, -10.0, 10.0);
    const std::size_t modes = 8;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
        double tau = -10.0 + 20.0 * U(rng), t = -10.0 + 20.0 * U(rng);
        if (t < tau)
            std::swap(t, tau);
        std::vector<double> amp(modes), rate(modes), freq(modes);
        for (std::size_t i = 0; i < modes; ++i) {
            amp[i] = (2.0 * U(rng) - 1.0) / static_cast<double>(i + 1);
            rate[i] = 0.1 + 5.0 * U(rng);
            freq[i] = 3.0 * U(rng);
        }
        const auto eta = [&](double s) {
            SpectralField f(modes);
            for (std::size_t i = 0; i < modes; ++i)
                f[i] = amp[i] * (1.0 - std::exp(-rate[i] * s)) * std::cos(freq[i] * s);
            return f;
        };
        const double sigma = U(rng) < 0.5 ? 0.0 : 1.0;
        const double K = embedding_bound(k, tau, t);
        const double lhs = memory_norm_of(eta, k, quad, t, sigma, modes);
        const double rhs = K * memory_norm_of(eta, k, quad, tau, sigma, modes);
        worst = std::min(worst, (rhs - lhs) / rhs);
    }
    std::ostringstream os;
    os << "worst_margin=" << worst;
    return {worst >= -1e-6, os.str()};
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
        double budget_s;  // 0: no runtime requirement
    };
    const std::vector<Criterion> criteria{
        {1, "kernel admissibility", kernel_admissibility, 5.0},
        {2, "exact-mode oracle", exact_modes, 10.0},
        {3, "memory inequality", memory_inequality, 0.0},
        {4, "absorbing behavior", absorbing, 180.0},
        {5, "splitting decay", splitting, 0.0},
        {6, "regularity ladder", ladder, 0.0},
        {7, "quasi-stability", quasistability, 0.0},
        {8, "gronwall inequality", gronwall, 0.0},
        {9, "covering construction", covering, 120.0},
        {10, "rate algebra", rate_algebra, 0.0},
        {11, "embedding constant", embedding, 0.0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_s == 0.0 || secs < c.budget_s;
        const bool pass = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s criterion %d (%s): %s runtime=%.2fs%s\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, in_time ? "" : " (over budget)");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
