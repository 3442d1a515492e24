#ifndef FRACNB_IO_HPP
#define FRACNB_IO_HPP

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dist.hpp"
#include "fraccalc.hpp"
#include "paths.hpp"
#include "stats.hpp"
#include "verify.hpp"
#include "version.hpp"

namespace fracnb::io {

using json = nlohmann::ordered_json;

inline json params_json(const std::vector<std::pair<std::string, double>>& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

// Metadata block carried by every output.
struct Metadata {
    std::string command;
    std::string process;
    std::vector<std::pair<std::string, double>> params;
    std::uint64_t seed = default_seed;
    std::vector<std::string> eval_paths;
    std::vector<std::pair<std::string, double>> tolerances;
};

inline json to_json(const Metadata& m) {
    json j;
    j["library"] = "fracnb";
    j["version"] = version;
    j["command"] = m.command;
    if (!m.process.empty()) j["process"] = m.process;
    j["parameters"] = params_json(m.params);
    j["seed"] = m.seed;
    j["evaluation_paths"] = m.eval_paths;
    j["tolerances"] = params_json(m.tolerances);
    return j;
}

inline std::vector<std::string> distinct_paths(const dist::PmfTable& t) {
    std::vector<std::string> out;
    for (auto p : t.paths) {
        std::string s = to_string(p);
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    return out;
}

inline json to_json(const dist::PmfTable& t) {
    json j;
    j["law"] = t.law;
    j["parameters"] = params_json(t.params);
    j["t"] = t.t;
    json rows = json::array();
    for (std::size_t n = 0; n < t.prob.size(); ++n)
        rows.push_back({{"n", n}, {"probability", t.prob[n]}, {"est_error", t.est_error[n]}, {"path", to_string(t.paths[n])}});
    j["entries"] = rows;
    j["entries_sum"] = t.entries_sum();
    j["tail_mass"] = t.tail_mass;
    j["tail_bound"] = t.tail_bound;
    j["tolerance"] = t.tolerance;
    j["normalized"] = t.normalized();
    return j;
}

inline json to_json(const fraccalc::ResidualReport& r) {
    json j;
    j["equation"] = r.equation;
    j["point"] = params_json(r.point);
    j["meshes"] = r.meshes;
    j["residuals"] = r.residuals;
    j["scales"] = r.scales;
    j["ratios"] = r.ratios;
    j["relative"] = r.relative();
    j["decays"] = r.decays();
    j["pass"] = r.pass();
    return j;
}

inline json to_json(const stats::GofResult& g) {
    json j;
    j["test"] = g.test;
    j["statistic"] = g.statistic;
    j["p_value"] = g.p_value;
    j["n"] = g.n;
    if (g.m) j["m"] = g.m;
    if (g.dof >= 0) j["dof"] = g.dof;
    j["level"] = g.level;
    j["pass"] = g.pass();
    return j;
}

inline json to_json(const stats::ExponentFit& f) {
    return {{"d", f.d},           {"intercept", f.intercept}, {"t0", f.t0},
            {"t1", f.t1},         {"stderr", f.stderr_},      {"points", f.points},
            {"classification", stats::to_string(f.classification)}};
}

inline json to_json(const std::vector<stats::CurvePoint>& c) {
    json a = json::array();
    for (const auto& p : c) a.push_back({{"t", p.t}, {"value", p.value}, {"stderr", p.stderr_}, {"degenerate", p.degenerate}});
    return a;
}

inline json to_json(const paths::SamplePath& p) {
    return {{"kind", paths::to_string(p.kind)}, {"times", p.times}, {"values", p.values}};
}

inline json to_json(const verify::Check& c) {
    json j;
    j["criterion"] = c.id;
    j["title"] = c.title;
    j["suite"] = c.suite;
    j["pass"] = c.pass;
    j["seconds"] = c.seconds;
    j["budget_seconds"] = c.budget;
    j["metrics"] = params_json(c.metrics);
    j["notes"] = c.notes;
    return j;
}

inline std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv_metadata(std::ostream& os, const Metadata& m) { os << "# " << to_json(m).dump() << '\n'; }

// Columns: n, probability, est_error.
inline void write_csv(std::ostream& os, const dist::PmfTable& t) {
    os << "n,probability,est_error\n";
    for (std::size_t n = 0; n < t.prob.size(); ++n) os << n << ',' << number(t.prob[n]) << ',' << number(t.est_error[n]) << '\n';
}

// Columns: time, value.
inline void write_csv(std::ostream& os, const paths::SamplePath& p) {
    os << "time,value\n";
    for (std::size_t i = 0; i < p.times.size(); ++i) os << number(p.times[i]) << ',' << number(p.values[i]) << '\n';
}

// Columns: t, value, stderr.
inline void write_csv(std::ostream& os, const std::vector<stats::CurvePoint>& c) {
    os << "t,value,stderr\n";
    for (const auto& p : c) os << number(p.t) << ',' << number(p.value) << ',' << number(p.stderr_) << '\n';
}

}  // namespace fracnb::io

#endif
