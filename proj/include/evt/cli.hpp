#pragma once

// Batch command-line front end: argument parsing into CliConfig and the
// dispatcher that writes JSON or CSV.
//
// Exit codes: 0 success, 1 computational error, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evt/evt.hpp"
#include "evt/io.hpp"

namespace evt::cli {

enum class Subcommand { classify, norming, moments, regvar, simulate, malmquist, distance };
enum class Format { json, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

struct CliConfig {
    Subcommand subcommand = Subcommand::classify;
    std::string dist;
    std::size_t n = 1000;
    std::size_t m = 1000;
    std::size_t reps = 1000;
    std::optional<double> gamma;
    std::uint64_t seed = 42;
    double x = 1.0;  // abscissa for `moments`
    Format format = Format::json;
    std::optional<std::string> out;
};

/// Raised by parse_args; `exit_code` is 2 for bad input and 0 for --help.
class UsageError : public std::runtime_error {
public:
    UsageError(const std::string& msg, int code = kExitUsage) : std::runtime_error(msg), exit_code(code) {}
    int exit_code;
};

inline CliConfig parse_args(std::vector<std::string> args) {
    CliConfig cfg;
    CLI::App app{"Extreme value toolkit: domain classification, normings, tail moments and maxima simulation", "evt"};
    std::string sub;
    std::string format = "json";
    std::string out;
    double gamma = 0.0;
    app.add_option("subcommand", sub, "classify | norming | moments | regvar | simulate | malmquist | distance")
        ->required()
        ->check(CLI::IsMember({"classify", "norming", "moments", "regvar", "simulate", "malmquist", "distance"}));
    app.add_option("--dist", cfg.dist, "exp | pareto:<a> | uniform | normal | gev:<gamma>,<loc>,<scale>");
    auto* n_opt = app.add_option("--n", cfg.n, "sample size / block size n")->check(CLI::PositiveNumber);
    app.add_option("--m", cfg.m, "block size for simulate")->check(CLI::PositiveNumber);
    app.add_option("--reps", cfg.reps, "number of replicated maxima")->check(CLI::PositiveNumber);
    auto* gamma_opt = app.add_option("--gamma", gamma, "GEV shape of the limit (classified when omitted)");
    app.add_option("--seed", cfg.seed, "master seed");
    app.add_option("--x", cfg.x, "abscissa for moments");
    app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out, "output file (written atomically); stdout when omitted");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        throw UsageError(app.help(), kExitOk);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    static const std::pair<const char*, Subcommand> names[] = {
        {"classify", Subcommand::classify}, {"norming", Subcommand::norming},   {"moments", Subcommand::moments},
        {"regvar", Subcommand::regvar},     {"simulate", Subcommand::simulate}, {"malmquist", Subcommand::malmquist},
        {"distance", Subcommand::distance}};
    for (const auto& [name, value] : names)
        if (sub == name) cfg.subcommand = value;
    cfg.format = format == "csv" ? Format::csv : Format::json;
    if (*gamma_opt) cfg.gamma = gamma;
    if (!out.empty()) cfg.out = out;

    if (cfg.subcommand != Subcommand::malmquist) {
        if (cfg.dist.empty()) throw UsageError("--dist is required for " + sub);
        try {
            (void)parse_dist(cfg.dist);
        } catch (const Error& e) {
            throw UsageError(std::string("invalid --dist: ") + e.what());
        }
    }
    if ((cfg.subcommand == Subcommand::norming || cfg.subcommand == Subcommand::distance) && cfg.n < 2)
        throw UsageError("--n must be at least 2");
    if (cfg.subcommand == Subcommand::simulate && cfg.m < 2) throw UsageError("--m must be at least 2");
    if (cfg.subcommand == Subcommand::malmquist && !*n_opt) cfg.n = 1000;
    return cfg;
}

namespace detail {

inline double resolve_gamma(const CliConfig& cfg, const DistSpec& spec) {
    if (cfg.gamma) return *cfg.gamma;
    const auto verdict = classify(spec);
    if (!verdict.gamma) throw ComputationError("domain undetermined for " + spec.label + "; pass --gamma");
    return *verdict.gamma;
}

inline std::string render(const CliConfig& cfg) {
    std::ostringstream os;
    const bool csv = cfg.format == Format::csv;
    auto json_line = [&](const io::Json& j) { os << j.dump() << '\n'; };

    switch (cfg.subcommand) {
        case Subcommand::classify: {
            const auto verdict = classify(parse_dist(cfg.dist));
            if (csv) io::write_csv(os, verdict);
            else json_line(io::to_json(verdict));
            break;
        }
        case Subcommand::norming: {
            const auto spec = parse_dist(cfg.dist);
            const double gamma = resolve_gamma(cfg, spec);
            const auto p = norming_sequence(spec, gamma, cfg.n);
            if (csv) io::write_csv(os, {"n", "a", "b", "gamma"}, {{static_cast<double>(p.n), p.a, p.b, gamma}});
            else json_line(io::Json{{"a", p.a}, {"b", p.b}, {"n", p.n}, {"gamma", gamma}});
            break;
        }
        case Subcommand::moments: {
            const auto m = asymptotic_moments(parse_dist(cfg.dist), cfg.x);
            if (csv) io::write_csv(os, {"x", "R", "W", "ratio"}, {{m.x, m.R, m.W, m.ratio}});
            else json_line(io::to_json(m));
            break;
        }
        case Subcommand::regvar: {
            const auto fit = tail_rv_index(parse_dist(cfg.dist));
            if (csv) {
                std::vector<std::vector<double>> rows;
                for (const auto& [x, rho] : fit.trace) rows.push_back({x, rho});
                io::write_csv(os, {"x", "rho"}, rows);
            } else {
                json_line(io::to_json(fit));
            }
            break;
        }
        case Subcommand::simulate: {
            const auto spec = parse_dist(cfg.dist);
            const double gamma = resolve_gamma(cfg, spec);
            const auto run = simulate_maxima(spec, cfg.m, cfg.reps, gamma, cfg.seed);
            if (csv) {
                io::write_csv(os, run);
            } else {
                auto j = io::summary_json(run, empirical_sup_distance(run, gamma));
                j["gamma"] = gamma;
                json_line(j);
            }
            break;
        }
        case Subcommand::malmquist: {
            const auto res = malmquist_spacings(cfg.n, cfg.seed);
            if (csv) {
                std::vector<std::vector<double>> rows;
                for (std::size_t j = 0; j < res.n; ++j) rows.push_back({static_cast<double>(j + 1), res.spacings[j]});
                io::write_csv(os, {"j", "spacing"}, rows);
            } else {
                auto j = io::to_json(res);
                j["seed"] = cfg.seed;
                json_line(j);
            }
            break;
        }
        case Subcommand::distance: {
            const auto spec = parse_dist(cfg.dist);
            const double gamma = resolve_gamma(cfg, spec);
            const auto norming = norming_sequence(spec, gamma, cfg.n);
            const auto rep = analytic_sup_distance(spec, norming, gamma, cfg.n);
            if (csv) {
                io::write_csv(os, rep);
            } else {
                json_line(io::Json{{"dist", spec.label},
                                   {"gamma", gamma},
                                   {"n", cfg.n},
                                   {"a", norming.a},
                                   {"b", norming.b},
                                   {"sup_distance", rep.sup_distance},
                                   {"tv_distance", scheffe_tv(spec, norming, gamma, cfg.n)}});
            }
            break;
        }
    }
    return os.str();
}

/// Writes through a sibling temporary file and renames it into place.
inline void write_atomically(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f << content;
        if (!f.flush()) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace detail

/// Dispatches a validated config; output goes to `out` unless cfg.out is set.
inline int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        const std::string text = detail::render(cfg);
        if (cfg.out) detail::write_atomically(*cfg.out, text);
        else out << text;
        return kExitOk;
    } catch (const InvalidParameter& e) {
        err << "evt: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "evt: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "evt: " << e.what() << '\n';
        return kExitComputation;
    }
}

/// parse_args + run with the exit-code contract applied.
inline int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const UsageError& e) {
        (e.exit_code == kExitOk ? out : err) << e.what() << '\n';
        return e.exit_code;
    }
    return run(cfg, out, err);
}

}  // namespace evt::cli
