#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracnb/fracnb.hpp"

using namespace fracnb;
using io::json;

namespace {

enum Exit { ok = 0, check_failed = 1, usage = 2 };

struct Config {
    std::string process = "fnbp";
    double beta = 0.5;
    double lambda = 1.0;
    double alpha = 2.0;
    double p = 1.0;
    double t = 1.0;
    double t_max = 1.0;
    int steps = 10;
    int n_max = 20;
    std::size_t replicas = 1;
    std::uint64_t seed = default_seed;
    std::string format = "json";
    std::string out;
    std::string suite = "all";
};

class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

dist::ProcessLaw make_law(const Config& c) {
    static const std::map<std::string, dist::ProcessKind> kinds{{"poisson", dist::ProcessKind::poisson},
                                                                {"fpp", dist::ProcessKind::fpp},
                                                                {"fnbp", dist::ProcessKind::fnbp},
                                                                {"polya", dist::ProcessKind::polya},
                                                                {"sfpp", dist::ProcessKind::sfpp}};
    auto it = kinds.find(c.process);
    if (it == kinds.end()) throw usage_error("unknown process '" + c.process + "'");
    const dist::GammaLaw g{c.alpha, c.p};
    switch (it->second) {
        case dist::ProcessKind::poisson:
            if (!(c.lambda > 0.0)) throw domain_error("poisson: requires lambda > 0");
            return dist::ProcessLaw::poisson(c.lambda);
        case dist::ProcessKind::fpp: {
            dist::FppLaw l{c.beta, c.lambda};
            l.validate();
            return dist::ProcessLaw::of(l);
        }
        case dist::ProcessKind::fnbp: {
            dist::FnbpLaw l{{c.beta, c.lambda}, g};
            l.validate();
            return dist::ProcessLaw::of(l);
        }
        case dist::ProcessKind::polya:
            g.validate();
            return dist::ProcessLaw::polya(g);
        case dist::ProcessKind::sfpp: {
            dist::SfppLaw l{c.beta, g};
            l.validate();
            return dist::ProcessLaw::of(l);
        }
    }
    throw usage_error("unknown process");
}

std::vector<std::pair<std::string, double>> law_params(const dist::ProcessLaw& l) {
    switch (l.kind) {
        case dist::ProcessKind::poisson: return {{"lambda", l.lambda}};
        case dist::ProcessKind::fpp: return {{"beta", l.beta}, {"lambda", l.lambda}};
        case dist::ProcessKind::fnbp: return {{"beta", l.beta}, {"lambda", l.lambda}, {"alpha", l.gamma.alpha}, {"p", l.gamma.p}};
        case dist::ProcessKind::polya: return {{"alpha", l.gamma.alpha}, {"p", l.gamma.p}};
        case dist::ProcessKind::sfpp: return {{"beta", l.beta}, {"alpha", l.gamma.alpha}, {"p", l.gamma.p}};
    }
    return {};
}

io::Metadata metadata(const std::string& cmd, const Config& c, const dist::ProcessLaw& law) {
    io::Metadata m;
    m.command = cmd;
    m.process = dist::to_string(law.kind);
    m.params = law_params(law);
    m.seed = c.seed;
    return m;
}

void check_format(const Config& c) {
    if (c.format != "json" && c.format != "csv") throw usage_error("--format must be csv or json");
}

void emit(const Config& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw usage_error("cannot open output file '" + c.out + "'");
    f << text;
}

std::vector<double> time_grid(const Config& c) {
    if (c.steps < 1) throw usage_error("--steps must be >= 1");
    if (!(c.t_max > 0.0)) throw domain_error("requires t-max > 0");
    std::vector<double> g;
    for (int i = 1; i <= c.steps; ++i) g.push_back(c.t_max * i / c.steps);
    return g;
}

int cmd_pmf(const Config& c) {
    check_format(c);
    const auto law = make_law(c);
    if (!(c.t > 0.0)) throw domain_error("requires t > 0");
    if (c.n_max < 0) throw usage_error("--n-max must be >= 0");
    const dist::PmfTable tab = dist::process_table(law, c.t, c.n_max);
    io::Metadata m = metadata("pmf", c, law);
    m.params.emplace_back("t", c.t);
    m.params.emplace_back("n_max", c.n_max);
    m.eval_paths = io::distinct_paths(tab);
    m.tolerances = {{"normalization", tab.tolerance}};
    std::ostringstream os;
    if (c.format == "json") {
        json j;
        j["metadata"] = io::to_json(m);
        j["table"] = io::to_json(tab);
        os << j.dump(2) << '\n';
    } else {
        io::write_csv_metadata(os, m);
        io::write_csv(os, tab);
    }
    emit(c, os.str());
    return ok;
}

json moments_at(const dist::ProcessLaw& law, double t) {
    json j;
    j["t"] = t;
    switch (law.kind) {
        case dist::ProcessKind::poisson:
            j["mean"] = law.lambda * t;
            j["variance"] = law.lambda * t;
            break;
        case dist::ProcessKind::fpp:
            j["mean"] = dist::fpp_mean(t, law.fpp());
            j["variance"] = dist::fpp_var(t, law.fpp());
            j["variance_alternative_form"] = dist::fpp_var(t, law.fpp(), dist::VarForm::alternative);
            break;
        case dist::ProcessKind::fnbp:
            j["mean"] = dist::fnbp_mean(t, law.fnbp());
            j["variance"] = dist::fnbp_var(t, law.fnbp());
            break;
        case dist::ProcessKind::polya: {
            const double m = law.gamma.p * t / law.gamma.alpha;
            j["mean"] = m;
            j["variance"] = m * (1.0 + t / law.gamma.alpha);
            break;
        }
        case dist::ProcessKind::sfpp:
            j["mean"] = "infinite";
            j["variance"] = "infinite";
            break;
    }
    return j;
}

double covariance(const dist::ProcessLaw& law, double s, double t) {
    switch (law.kind) {
        case dist::ProcessKind::poisson: return law.lambda * s;
        case dist::ProcessKind::fpp: return dist::fpp_cov(s, t, law.fpp());
        case dist::ProcessKind::fnbp: return dist::fnbp_cov(s, t, law.fnbp());
        case dist::ProcessKind::polya: {
            const double a = law.gamma.alpha, p = law.gamma.p;
            return p * s / a + p * s * t / (a * a);
        }
        case dist::ProcessKind::sfpp: return NAN;
    }
    return NAN;
}

int cmd_moments(const Config& c) {
    const auto law = make_law(c);
    const auto grid = time_grid(c);
    io::Metadata m = metadata("moments", c, law);
    m.params.emplace_back("t_max", c.t_max);
    m.params.emplace_back("steps", c.steps);
    m.eval_paths = {law.kind == dist::ProcessKind::fnbp ? "quadrature" : "closed_form"};
    json rows = json::array();
    for (double t : grid) rows.push_back(moments_at(law, t));
    json j;
    j["metadata"] = io::to_json(m);
    j["moments"] = rows;
    if (law.kind != dist::ProcessKind::sfpp) {
        json cov = json::array();
        for (double s : grid) {
            json row = json::array();
            for (double t : grid) row.push_back(s <= t ? covariance(law, s, t) : covariance(law, t, s));
            cov.push_back(row);
        }
        j["covariance"] = {{"times", grid}, {"matrix", cov}};
    }
    if (c.format == "csv") {
        check_format(c);
        std::ostringstream os;
        io::write_csv_metadata(os, m);
        os << "t,mean,variance\n";
        for (const auto& r : rows) {
            auto num = [](const json& v) { return v.is_number() ? io::number(v.get<double>()) : v.get<std::string>(); };
            os << io::number(r["t"].get<double>()) << ',' << num(r["mean"]) << ',' << num(r["variance"]) << '\n';
        }
        emit(c, os.str());
        return ok;
    }
    check_format(c);
    emit(c, j.dump(2) + "\n");
    return ok;
}

int cmd_sample(const Config& c) {
    check_format(c);
    const auto law = make_law(c);
    if (c.replicas < 1) throw usage_error("--replicas must be >= 1");
    paths::PathConfig cfg;
    cfg.t_max = c.t_max;
    cfg.steps = c.steps;
    cfg.replicas = c.replicas;
    const auto ps = paths::sample_paths(law, cfg, c.seed);
    io::Metadata m = metadata("sample", c, law);
    m.params.emplace_back("t_max", c.t_max);
    m.params.emplace_back("steps", c.steps);
    m.params.emplace_back("replicas", double(c.replicas));
    m.eval_paths = {"simulation"};
    m.tolerances = {{"operational_mesh", cfg.mesh}};
    if (c.format == "json") {
        json j;
        j["metadata"] = io::to_json(m);
        json a = json::array();
        for (const auto& p : ps) a.push_back(io::to_json(p));
        j["paths"] = a;
        emit(c, j.dump(2) + "\n");
        return ok;
    }
    if (ps.size() == 1 || c.out.empty()) {
        std::ostringstream os;
        io::write_csv_metadata(os, m);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (ps.size() > 1) os << "# replica " << i << '\n';
            io::write_csv(os, ps[i]);
        }
        emit(c, os.str());
        return ok;
    }
    const std::filesystem::path base(c.out);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::filesystem::path f = base.parent_path() / (base.stem().string() + "_" + std::to_string(i) + base.extension().string());
        std::ofstream os(f, std::ios::binary);
        if (!os) throw usage_error("cannot open output file '" + f.string() + "'");
        io::write_csv_metadata(os, m);
        io::write_csv(os, ps[i]);
    }
    return ok;
}

int cmd_verify(const Config& c) {
    std::vector<int> ids;
    if (!c.suite.empty() && std::all_of(c.suite.begin(), c.suite.end(), ::isdigit)) {
        int id = std::stoi(c.suite);
        if (id < 1 || id > verify::criterion_count) throw usage_error("--suite criterion must lie in 1..11");
        ids.push_back(id);
    } else {
        try {
            ids = verify::suite(c.suite);
        } catch (const domain_error& e) {
            throw usage_error(e.what());
        }
    }
    verify::Options opts;
    opts.seed = c.seed;
    io::Metadata m;
    m.command = "verify";
    m.seed = c.seed;
    m.eval_paths = {"series", "quadrature", "simulation"};
    json checks = json::array();
    bool all = true;
    for (int id : ids) {
        auto r = verify::run(id, opts);
        std::fprintf(stderr, "[%s] %2d %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds);
        all = all && r.pass;
        checks.push_back(io::to_json(r));
    }
    json j;
    j["metadata"] = io::to_json(m);
    j["suite"] = c.suite;
    j["checks"] = checks;
    j["pass"] = all;
    emit(c, j.dump(2) + "\n");
    return all ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional negative binomial and related counting processes"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);
    Config c;
    auto add_common = [&](CLI::App* s) {
        s->add_option("--process", c.process, "poisson | fpp | fnbp | polya | sfpp")->capture_default_str();
        s->add_option("--beta", c.beta, "Fractional index in (0,1]")->capture_default_str();
        s->add_option("--lambda", c.lambda, "Rate")->capture_default_str();
        s->add_option("--alpha", c.alpha, "Gamma rate")->capture_default_str();
        s->add_option("--p", c.p, "Gamma shape per unit time")->capture_default_str();
        s->add_option("--t", c.t, "Time")->capture_default_str();
        s->add_option("--t-max", c.t_max, "Horizon of the time grid")->capture_default_str();
        s->add_option("--steps", c.steps, "Number of grid steps")->capture_default_str();
        s->add_option("--n-max", c.n_max, "Largest count in pmf tables")->capture_default_str();
        s->add_option("--replicas", c.replicas, "Number of sample paths")->capture_default_str();
        s->add_option("--seed", c.seed, "Base seed")->capture_default_str();
        s->add_option("--format", c.format, "csv | json")->capture_default_str();
        s->add_option("--out", c.out, "Output file (stdout when omitted)");
        s->add_option("--suite", c.suite, "series | pde | similarity | dependence | all | 1..11")->capture_default_str();
    };
    auto* pmf = app.add_subcommand("pmf", "Probability mass table");
    auto* moments = app.add_subcommand("moments", "Mean, variance and covariance grid");
    auto* sample = app.add_subcommand("sample", "Sample paths");
    auto* ver = app.add_subcommand("verify", "Run verification suites");
    for (auto* s : {pmf, moments, sample, ver}) add_common(s);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }
    try {
        if (*pmf) return cmd_pmf(c);
        if (*moments) return cmd_moments(c);
        if (*sample) return cmd_sample(c);
        if (*ver) return cmd_verify(c);
    } catch (const usage_error& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return usage;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return usage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "evaluation failed: %s\n", e.what());
        return check_failed;
    }
    return usage;
}
