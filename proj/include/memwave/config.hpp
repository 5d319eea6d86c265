#ifndef MEMWAVE_CONFIG_HPP
#define MEMWAVE_CONFIG_HPP

// Experiment configuration: INI sections with key = value lines.

#include "memwave/covering.hpp"
#include "memwave/dynamics.hpp"
#include "memwave/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace memwave {

/// Bad command line or config file (exit status 2).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline const std::array<std::string, 9>& experiment_names()
{
    static const std::array<std::string, 9> names{"kernel-audit", "free-oscillation", "absorb",
                                                  "split-decay",  "regularity-ladder", "quasistability",
                                                  "gronwall",     "covering-demo",     "attractor-radii"};
    return names;
}

inline bool is_experiment(const std::string& name)
{
    const auto& n = experiment_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

struct ProcessSettings {
    std::size_t modes = 32;
    double dt = 1e-3;
    std::string kernel = "arctan_exponential";
    double kernel_eps = 1.0;
    std::string nonlinearity = "cubic";
    double forcing_amplitude = 0.5;
    double tail_tol = 1e-8;
    double blowup_threshold = 1e8;
    std::size_t sample_every = 100;
    double t_min = -10.0;
    double t_max = 20.0;
    int s_per_decade = 64;
    double s_max_spacing = 0.015;

    ProcessConfig to_process_config() const
    {
        ProcessConfig c;
        c.basis = ModeBasis(modes);
        if (kernel == "arctan_exponential")
            c.kernel = arctan_exponential_kernel();
        else if (kernel == "exponential")
            c.kernel = exponential_kernel(kernel_eps);
        else if (kernel == "zero")
            c.kernel = zero_kernel();
        else
            throw UsageError("unknown kernel '" + kernel + "'");
        if (nonlinearity == "cubic")
            c.nl = cubic_nonlinearity();
        else if (nonlinearity == "zero")
            c.nl = zero_nonlinearity();
        else
            throw UsageError("unknown nonlinearity '" + nonlinearity + "'");
        c.g = default_forcing(modes, forcing_amplitude);
        c.dt = dt;
        c.tail_tol = tail_tol;
        c.blowup_threshold = blowup_threshold;
        c.sample_every = sample_every;
        c.t_min = t_min;
        c.t_max = t_max;
        c.s_per_decade = s_per_decade;
        c.s_max_spacing = s_max_spacing;
        return c;
    }
};

struct CoveringSettings {
    std::string toy = "tanh";
    std::size_t dim = 2;
    double eta0 = 0.25;
    double amplitude = 0.5;
    double R0 = 2.0;
    int depth = 6;
    std::size_t samples = 10000;
    long n = 0;

    ToyProcess make() const
    {
        if (toy == "tanh")
            return tanh_toy(dim, eta0, amplitude, R0);
        if (toy == "drifting_tanh")
            return drifting_tanh_toy(dim, eta0, amplitude, R0);
        if (toy == "sine")
            return sine_toy(dim, eta0, amplitude, R0);
        if (toy == "constant")
            return constant_toy(dim, amplitude, R0);
        if (toy == "linear_contraction")
            return linear_contraction_toy(dim, eta0, R0);
        throw UsageError("unknown toy process '" + toy + "'");
    }
};

struct ExperimentConfig {
    std::string name;
    std::uint64_t seed = 1;
    double radius = 5.0;
    double sigma = 0.0;  // regularity level of random initial data
    double tau = -10.0;
    double horizon = 20.0;
    std::size_t members = 5;  // trajectories (or pairs) per ensemble
    std::string output = "memwave-out";
    ProcessSettings process;

    // experiment-specific
    std::vector<double> radii{1.0, 5.0, 10.0};   // absorb
    std::size_t validation_pairs = 10;          // quasistability
    std::size_t trials = 1000;                  // gronwall
    double audit_t_lo = -10.0, audit_t_hi = 10.0;
    std::size_t audit_points = 81;
    double tolerance = 1e-8;                    // free-oscillation, per unit time
    double plateau_rtol = 0.10;                 // absorb
    double spread_rtol = 0.15;                  // attractor-radii
    double inequality_margin = -1e-4;           // memory inequality
    CoveringSettings covering;

    void validate() const
    {
        if (!is_experiment(name))
            throw UsageError("unknown experiment '" + name + "'");
        if (!(horizon > 0.0))
            throw UsageError("horizon must be positive");
        if (!(process.dt > 0.0))
            throw UsageError("dt must be positive");
        if (process.modes == 0)
            throw UsageError("modes must be positive");
        if (!(radius >= 0.0))
            throw UsageError("radius must be nonnegative");
        if (members == 0)
            throw UsageError("members must be positive");
        if (process.sample_every == 0)
            throw UsageError("sample_every must be positive");
        if (!(covering.eta0 > 0.0 && covering.eta0 < 0.5))
            throw UsageError("covering eta0 must lie in (0, 1/2)");
        if (covering.depth < 1)
            throw UsageError("covering depth must be at least 1");
        if (tau + horizon > process.t_max + 1e-12 || tau < process.t_min - 1e-12)
            throw UsageError("run interval [tau, tau + horizon] leaves the configured [t_min, t_max]");
    }
};

/// Default config of each experiment (matching the shipped configs/ files).
inline ExperimentConfig default_config(const std::string& name)
{
    ExperimentConfig c;
    c.name = name;
    if (name == "kernel-audit") {
        c.audit_points = 101;
    } else if (name == "free-oscillation") {
        c.process.kernel = "zero";
        c.process.nonlinearity = "zero";
        c.process.forcing_amplitude = 0.0;
        c.horizon = 10.0;
    } else if (name == "absorb") {
        c.horizon = 30.0;
    } else if (name == "split-decay" || name == "regularity-ladder" || name == "gronwall") {
        c.horizon = 20.0;
    } else if (name == "quasistability") {
        c.horizon = 10.0;
        c.members = 20;
    } else if (name == "attractor-radii") {
        c.horizon = 30.0;
        c.members = 8;
    }
    return c;
}


namespace detail {

inline std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::string token;
    std::istringstream in(s);
    while (in >> token) {
        token.erase(std::remove(token.begin(), token.end(), ','), token.end());
        if (!token.empty())
            out.push_back(std::stod(token));
    }
    return out;
}

/// Overwrites `target` when `key` is present; malformed values throw
/// ptree_bad_data instead of falling back to the default.
template <class T>
void read(const boost::property_tree::ptree& tree, const char* key, T& target)
{
    if (tree.get_child_optional(key))
        target = tree.get<T>(key);
}

} // namespace detail

/// Parses INI text. Sections: [experiment], [process], [covering]; unknown
/// sections or keys are usage errors.
inline ExperimentConfig parse_config(std::istream& in, const std::string& default_name = "")
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    ExperimentConfig c = default_config(default_name);
    const std::map<std::string, std::set<std::string>> known{
        {"experiment",
         {"name", "seed", "radius", "sigma", "tau", "horizon", "members", "output", "radii", "validation_pairs",
          "trials", "audit_t_lo", "audit_t_hi", "audit_points", "tolerance", "plateau_rtol", "spread_rtol",
          "inequality_margin"}},
        {"process",
         {"modes", "dt", "kernel", "kernel_eps", "nonlinearity", "forcing_amplitude", "tail_tol", "blowup_threshold",
          "sample_every", "t_min", "t_max", "s_per_decade", "s_max_spacing"}},
        {"covering", {"toy", "dim", "eta0", "amplitude", "R0", "depth", "samples", "n"}}};
    for (const auto& [section, body] : tree) {
        const auto it = known.find(section);
        if (it == known.end())
            throw UsageError("config: unknown section [" + section + "]");
        for (const auto& [key, value] : body)
            if (!it->second.count(key))
                throw UsageError("config: unknown key '" + key + "' in [" + section + "]");
    }
    try {
        if (auto e = tree.get_child_optional("experiment")) {
            detail::read(*e, "name", c.name);
            detail::read(*e, "seed", c.seed);
            detail::read(*e, "radius", c.radius);
            detail::read(*e, "sigma", c.sigma);
            detail::read(*e, "tau", c.tau);
            detail::read(*e, "horizon", c.horizon);
            detail::read(*e, "members", c.members);
            detail::read(*e, "output", c.output);
            if (auto r = e->get_optional<std::string>("radii"))
                c.radii = detail::parse_list(*r);
            detail::read(*e, "validation_pairs", c.validation_pairs);
            detail::read(*e, "trials", c.trials);
            detail::read(*e, "audit_t_lo", c.audit_t_lo);
            detail::read(*e, "audit_t_hi", c.audit_t_hi);
            detail::read(*e, "audit_points", c.audit_points);
            detail::read(*e, "tolerance", c.tolerance);
            detail::read(*e, "plateau_rtol", c.plateau_rtol);
            detail::read(*e, "spread_rtol", c.spread_rtol);
            detail::read(*e, "inequality_margin", c.inequality_margin);
        }
        if (auto p = tree.get_child_optional("process")) {
            auto& s = c.process;
            detail::read(*p, "modes", s.modes);
            detail::read(*p, "dt", s.dt);
            detail::read(*p, "kernel", s.kernel);
            detail::read(*p, "kernel_eps", s.kernel_eps);
            detail::read(*p, "nonlinearity", s.nonlinearity);
            detail::read(*p, "forcing_amplitude", s.forcing_amplitude);
            detail::read(*p, "tail_tol", s.tail_tol);
            detail::read(*p, "blowup_threshold", s.blowup_threshold);
            detail::read(*p, "sample_every", s.sample_every);
            detail::read(*p, "t_min", s.t_min);
            detail::read(*p, "t_max", s.t_max);
            detail::read(*p, "s_per_decade", s.s_per_decade);
            detail::read(*p, "s_max_spacing", s.s_max_spacing);
        }
        if (auto v = tree.get_child_optional("covering")) {
            auto& s = c.covering;
            detail::read(*v, "toy", s.toy);
            detail::read(*v, "dim", s.dim);
            detail::read(*v, "eta0", s.eta0);
            detail::read(*v, "amplitude", s.amplitude);
            detail::read(*v, "R0", s.R0);
            detail::read(*v, "depth", s.depth);
            detail::read(*v, "samples", s.samples);
            detail::read(*v, "n", s.n);
        }
    } catch (const boost::property_tree::ptree_bad_data& e) {
        throw UsageError(std::string("config: bad value: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("config: bad list: ") + e.what());
    }
    return c;
}

inline ExperimentConfig parse_config_string(const std::string& text, const std::string& default_name = "")
{
    std::istringstream in(text);
    return parse_config(in, default_name);
}

inline ExperimentConfig load_config(const std::filesystem::path& path, const std::string& default_name = "")
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open config file " + path.string());
    return parse_config(in, default_name);
}

} // namespace memwave

#endif // MEMWAVE_CONFIG_HPP
