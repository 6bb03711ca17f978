#pragma once

// JSON and CSV encodings of the result types.

#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "evt/domain.hpp"
#include "evt/regvar.hpp"
#include "evt/simlab.hpp"

namespace evt::io {

using Json = nlohmann::ordered_json;

/// %.17g: round-trip safe, dot decimal mark regardless of locale-free printf.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Json points_json(const std::vector<std::pair<double, double>>& points) {
    Json arr = Json::array();
    for (const auto& [x, v] : points) arr.push_back({x, v});
    return arr;
}

inline Json to_json(const NormingPair& p) { return Json{{"a", p.a}, {"b", p.b}, {"n", p.n}}; }

inline Json to_json(const AsymptoticMoments& m) {
    return Json{{"x", m.x}, {"R", m.R}, {"W", m.W}, {"ratio", m.ratio}};
}

inline Json to_json(const RvFit& fit) {
    return Json{{"rho", fit.rho_est},
                {"dispersion", fit.dispersion},
                {"stabilized", fit.stabilized},
                {"per_multiplier", points_json(fit.per_multiplier)},
                {"trace", points_json(fit.trace)}};
}

inline std::vector<std::pair<double, double>> moment_points(const MomentTrace& t) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& m : t.points) pts.emplace_back(m.x, m.ratio);
    return pts;
}

/// Evidence criteria in a fixed order: name -> [(x, value), ...].
inline std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> evidence(const DomainVerdict& v) {
    return {{"tail_rv_index", v.tail_rv.trace},
            {"frechet_ratio", v.von_mises.frechet_ratio.points},
            {"weibull_ratio", v.von_mises.weibull_ratio.points},
            {"gumbel_q", v.von_mises.gumbel_q.points},
            {"gumbel_ell", v.von_mises.gumbel_ell.points},
            {"moment_ratio", moment_points(v.moments)}};
}

/// {"kind": ..., "gamma": number|null, "alpha"|"beta": number, "evidence": {...}}
inline Json to_json(const DomainVerdict& v) {
    Json j;
    j["kind"] = to_string(v.kind);
    j["gamma"] = v.gamma ? Json(*v.gamma) : Json(nullptr);
    if (v.index) {
        if (v.kind == DomainKind::frechet) j["alpha"] = *v.index;
        if (v.kind == DomainKind::weibull) j["beta"] = *v.index;
    }
    Json ev = Json::object();
    for (const auto& [name, pts] : evidence(v)) ev[name] = points_json(pts);
    j["evidence"] = std::move(ev);
    return j;
}

inline Json to_json(const MalmquistResult& r) {
    double mean = 0.0;
    for (double s : r.spacings) mean += s;
    mean /= static_cast<double>(r.n);
    return Json{{"n", r.n},
                {"ks_statistic", r.ks_statistic},
                {"threshold", r.threshold},
                {"pass", r.pass ? Json(*r.pass) : Json(nullptr)},
                {"mean_spacing", mean}};
}

inline Json summary_json(const MaxRun& run, const ConvergenceReport& rep) {
    double mean = 0.0;
    for (double v : run.normalized_maxima) mean += v;
    mean /= static_cast<double>(run.reps);
    return Json{{"dist", run.spec_label}, {"m", run.block_size},   {"reps", run.reps},
                {"seed", run.seed},       {"a", run.norming.a},    {"b", run.norming.b},
                {"mean", mean},           {"sup_distance", rep.sup_distance}};
}

/// Header row followed by rows of numbers formatted with format_double.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

inline void write_csv(std::ostream& os, const MaxRun& run) {
    std::vector<std::vector<double>> rows;
    rows.reserve(run.reps);
    for (std::size_t r = 0; r < run.reps; ++r) rows.push_back({static_cast<double>(r), run.normalized_maxima[r]});
    write_csv(os, {"replicate", "normalized_max"}, rows);
}

inline void write_csv(std::ostream& os, const ConvergenceReport& rep) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) rows.push_back({rep.grid[i], rep.deviations[i]});
    write_csv(os, {"x", "deviation"}, rows);
}

inline void write_csv(std::ostream& os, const DomainVerdict& v) {
    os << "criterion,x,value\n";
    for (const auto& [name, pts] : evidence(v))
        for (const auto& [x, val] : pts) os << name << ',' << format_double(x) << ',' << format_double(val) << '\n';
}

}  // namespace evt::io
