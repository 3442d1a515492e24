#ifndef FRACNB_PATHS_HPP
#define FRACNB_PATHS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <type_traits>
#include <vector>

#include "dist.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace fracnb::paths {

enum class PathKind { gamma, stable, inverse_stable, poisson, fpp, fnbp, polya, sfpp };

inline const char* to_string(PathKind k) {
    switch (k) {
        case PathKind::gamma: return "gamma";
        case PathKind::stable: return "stable";
        case PathKind::inverse_stable: return "inverse_stable";
        case PathKind::poisson: return "poisson";
        case PathKind::fpp: return "fpp";
        case PathKind::fnbp: return "fnbp";
        case PathKind::polya: return "polya";
        case PathKind::sfpp: return "sfpp";
    }
    return "unknown";
}

struct SamplePath {
    std::vector<double> times;
    std::vector<double> values;
    PathKind kind = PathKind::poisson;

    bool counting() const {
        return kind == PathKind::poisson || kind == PathKind::fpp || kind == PathKind::fnbp || kind == PathKind::polya ||
               kind == PathKind::sfpp;
    }
    double at(std::size_t i) const { return values.at(i); }
};

struct PathConfig {
    double t_max = 1.0;
    int steps = 100;
    std::vector<double> times;  // explicit grid; overrides t_max and steps when nonempty
    double mesh = 1e-3;         // operational-time step for inverse-subordinator inversion
    std::size_t replicas = 1;

    void validate() const {
        if (!(mesh > 0.0)) throw domain_error("PathConfig: requires mesh > 0");
        if (times.empty()) {
            if (steps < 1) throw domain_error("PathConfig: requires steps >= 1");
            if (!(t_max > 0.0)) throw domain_error("PathConfig: requires t_max > 0");
        } else {
            if (times.front() < 0.0) throw domain_error("PathConfig: times must be nonnegative");
            for (std::size_t i = 1; i < times.size(); ++i)
                if (!(times[i] > times[i - 1])) throw domain_error("PathConfig: times must be strictly increasing");
        }
    }

    std::vector<double> grid() const {
        validate();
        if (!times.empty()) return times;
        std::vector<double> g(steps + 1);
        for (int i = 0; i <= steps; ++i) g[i] = t_max * i / steps;
        return g;
    }
};

// ---------------------------------------------------------------- variates

inline constexpr std::int64_t count_cap = std::int64_t(1) << 62;

// Poisson count with saturation for means beyond the int64 range.
inline std::int64_t poisson_count(double mu, RngStream& r) {
    if (!(mu > 0.0)) return 0;
    if (mu > 1e15) {
        double v = std::round(mu + std::sqrt(mu) * rng::normal(r));
        return v >= double(count_cap) ? count_cap : static_cast<std::int64_t>(std::max(0.0, v));
    }
    return rng::poisson(r, mu);
}

inline double sample_gamma(double shape, double rate, RngStream& r) {
    if (!(shape > 0.0 && rate > 0.0)) throw domain_error("sample_gamma: requires shape > 0 and rate > 0");
    return rng::gamma(r, shape, rate);
}

inline double sample_stable_oneside(double beta, RngStream& r) {
    if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("sample_stable_oneside: requires beta in (0,1]");
    return rng::stable_oneside(r, beta);
}

// D_beta(t) = t^{1/beta} D_beta(1)
inline double stable_at(double beta, double t, RngStream& r) {
    if (!(t >= 0.0)) throw domain_error("stable_at: requires t >= 0");
    if (beta == 1.0 || t == 0.0) return t;
    return std::pow(t, 1.0 / beta) * sample_stable_oneside(beta, r);
}

// E_beta(t) = (t / D_beta(1))^beta
inline double inverse_stable_marginal(double beta, double t, RngStream& r) {
    if (!(beta > 0.0 && beta <= 1.0)) throw domain_error("inverse_stable_marginal: requires beta in (0,1]");
    if (!(t >= 0.0)) throw domain_error("inverse_stable_marginal: requires t >= 0");
    if (beta == 1.0 || t == 0.0) return t;
    return std::pow(t / sample_stable_oneside(beta, r), beta);
}

// E_{b_1}(E_{b_2}(...E_{b_m}(t))) with betas listed outermost first; the innermost clock is drawn first.
// Its one-dimensional law coincides with that of E_{b_1 ... b_m}(t).
inline double iterated_inverse_marginal(const std::vector<double>& betas, double t, RngStream& r) {
    if (betas.empty()) throw domain_error("iterated_inverse_marginal: requires at least one beta");
    double x = t;
    for (auto it = betas.rbegin(); it != betas.rend(); ++it) x = inverse_stable_marginal(*it, x, r);
    return x;
}

inline std::int64_t nb_compound_ls(double t, const dist::GammaLaw& g, double lambda, RngStream& r) {
    g.validate();
    if (!(t > 0.0)) throw domain_error("nb_compound_ls: requires t > 0");
    if (!(lambda > 0.0)) throw domain_error("nb_compound_ls: requires lambda > 0");
    const double eta = lambda / (g.alpha + lambda);
    std::int64_t k = poisson_count(g.shape(t) * std::log1p(lambda / g.alpha), r);
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < k; ++i) total += rng::log_series(r, eta);
    return total;
}

// ---------------------------------------------------------------- marginals of composed processes

inline std::int64_t fpp_at(double t, const dist::FppLaw& law, RngStream& r) {
    law.validate();
    return poisson_count(law.lambda * inverse_stable_marginal(law.beta, t, r), r);
}

inline std::int64_t fnbp_at(double t, const dist::FnbpLaw& law, RngStream& r) {
    law.validate();
    if (!(t > 0.0)) throw domain_error("fnbp_at: requires t > 0");
    double g = sample_gamma(law.gamma.shape(t), law.gamma.alpha, r);
    return poisson_count(law.fpp.lambda * inverse_stable_marginal(law.fpp.beta, g, r), r);
}

inline std::int64_t polya_at(double t, const dist::GammaLaw& g, RngStream& r) {
    g.validate();
    double lam = sample_gamma(g.p, g.alpha, r);
    return poisson_count(lam * t, r);
}

inline std::int64_t sfpp_at(double t, const dist::SfppLaw& law, RngStream& r) {
    law.validate();
    double lam = sample_gamma(law.gamma.p, law.gamma.alpha, r);
    return poisson_count(lam * stable_at(law.beta, t, r), r);
}

inline std::int64_t sample_at(const dist::ProcessLaw& law, double t, RngStream& r) {
    switch (law.kind) {
        case dist::ProcessKind::poisson: return poisson_count(law.lambda * t, r);
        case dist::ProcessKind::fpp: return fpp_at(t, law.fpp(), r);
        case dist::ProcessKind::fnbp: return fnbp_at(t, law.fnbp(), r);
        case dist::ProcessKind::polya: return polya_at(t, law.gamma, r);
        case dist::ProcessKind::sfpp: return sfpp_at(t, law.sfpp(), r);
    }
    throw domain_error("sample_at: unknown process");
}

// ---------------------------------------------------------------- paths

// First passage of a mesh-discretized D_beta above each of the nondecreasing query times.
inline std::vector<double> inverse_stable_at_times(double beta, const std::vector<double>& times, double mesh, RngStream& r) {
    if (!(mesh > 0.0)) throw domain_error("inverse_stable_path: requires mesh > 0");
    std::vector<double> out(times.size());
    if (beta == 1.0) {
        std::copy(times.begin(), times.end(), out.begin());
        return out;
    }
    const double scale = std::pow(mesh, 1.0 / beta);
    double d = 0.0;
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && times[i] < times[i - 1]) throw domain_error("inverse_stable_path: query times must be nondecreasing");
        if (times[i] <= 0.0) {
            out[i] = 0.0;
            continue;
        }
        while (d <= times[i]) {
            d += scale * rng::stable_oneside(r, beta);
            ++k;
        }
        out[i] = k * mesh;
    }
    return out;
}

inline SamplePath gamma_path(const dist::GammaLaw& g, const PathConfig& cfg, RngStream& r) {
    g.validate();
    SamplePath p{cfg.grid(), {}, PathKind::gamma};
    p.values.resize(p.times.size());
    double v = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        double dt = p.times[i] - prev;
        if (dt > 0.0) v += rng::gamma(r, g.p * dt, g.alpha);
        prev = p.times[i];
        p.values[i] = v;
    }
    return p;
}

inline SamplePath stable_path(double beta, const PathConfig& cfg, RngStream& r) {
    SamplePath p{cfg.grid(), {}, PathKind::stable};
    p.values.resize(p.times.size());
    double v = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < p.times.size(); ++i) {
        v += stable_at(beta, p.times[i] - prev, r);
        prev = p.times[i];
        p.values[i] = v;
    }
    return p;
}

inline SamplePath inverse_stable_path(double beta, const PathConfig& cfg, RngStream& r) {
    SamplePath p{cfg.grid(), {}, PathKind::inverse_stable};
    p.values = inverse_stable_at_times(beta, p.times, cfg.mesh, r);
    return p;
}

namespace detail {

// Counting path N(c_i) of a unit-rate-lambda Poisson process at nondecreasing operational times c_i.
inline std::vector<double> poisson_at_clock(double lambda, const std::vector<double>& clock, RngStream& r) {
    std::vector<double> out(clock.size());
    std::int64_t n = 0;
    double prev = 0.0;
    for (std::size_t i = 0; i < clock.size(); ++i) {
        n += poisson_count(lambda * (clock[i] - prev), r);
        prev = clock[i];
        out[i] = static_cast<double>(n);
    }
    return out;
}

}  // namespace detail

inline SamplePath poisson_path(double lambda, const PathConfig& cfg, RngStream& r) {
    SamplePath p{cfg.grid(), {}, PathKind::poisson};
    p.values = detail::poisson_at_clock(lambda, p.times, r);
    return p;
}

inline SamplePath fpp_path(const dist::FppLaw& law, const PathConfig& cfg, RngStream& r) {
    law.validate();
    SamplePath p{cfg.grid(), {}, PathKind::fpp};
    auto clock = inverse_stable_at_times(law.beta, p.times, cfg.mesh, r);
    p.values = detail::poisson_at_clock(law.lambda, clock, r);
    return p;
}

// One gamma path and one inverse-stable path per replica, so the dependence across times is retained.
inline SamplePath fnbp_path(const dist::FnbpLaw& law, const PathConfig& cfg, RngStream& r) {
    law.validate();
    SamplePath g = gamma_path(law.gamma, cfg, r);
    auto clock = inverse_stable_at_times(law.fpp.beta, g.values, cfg.mesh, r);
    return {g.times, detail::poisson_at_clock(law.fpp.lambda, clock, r), PathKind::fnbp};
}

inline SamplePath polya_path(const dist::GammaLaw& g, const PathConfig& cfg, RngStream& r) {
    g.validate();
    double lam = sample_gamma(g.p, g.alpha, r);
    SamplePath p{cfg.grid(), {}, PathKind::polya};
    p.values = detail::poisson_at_clock(lam, p.times, r);
    return p;
}

inline SamplePath sfpp_path(const dist::SfppLaw& law, const PathConfig& cfg, RngStream& r) {
    law.validate();
    double lam = sample_gamma(law.gamma.p, law.gamma.alpha, r);
    SamplePath d = stable_path(law.beta, cfg, r);
    return {d.times, detail::poisson_at_clock(lam, d.values, r), PathKind::sfpp};
}

inline SamplePath sample_path(const dist::ProcessLaw& law, const PathConfig& cfg, RngStream& r) {
    switch (law.kind) {
        case dist::ProcessKind::poisson: return poisson_path(law.lambda, cfg, r);
        case dist::ProcessKind::fpp: return fpp_path(law.fpp(), cfg, r);
        case dist::ProcessKind::fnbp: return fnbp_path(law.fnbp(), cfg, r);
        case dist::ProcessKind::polya: return polya_path(law.gamma, cfg, r);
        case dist::ProcessKind::sfpp: return sfpp_path(law.sfpp(), cfg, r);
    }
    throw domain_error("sample_path: unknown process");
}

// ---------------------------------------------------------------- ensembles

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// Replica i uses stream (seed, first_stream + i); results are stored in replica order, independent of threads.
template <class F>
auto ensemble(std::size_t replicas, std::uint64_t seed, F&& f, unsigned threads = 0, std::uint64_t first_stream = 0) {
    using R = std::invoke_result_t<F&, RngStream&, std::size_t>;
    std::vector<R> out(replicas);
    if (threads == 0) threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(replicas, 1)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < replicas;) {
            RngStream r(seed, first_stream + i);
            out[i] = f(r, i);
        }
    };
    if (threads <= 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    for (unsigned k = 0; k < threads; ++k)
        pool.emplace_back([&] {
            try {
                work();
            } catch (...) {
                if (!failed.exchange(true)) err = std::current_exception();
                next = replicas;
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

inline std::vector<std::int64_t> sample_marginals(const dist::ProcessLaw& law, double t, std::size_t replicas, std::uint64_t seed,
                                                  unsigned threads = 0) {
    return ensemble(replicas, seed, [&](RngStream& r, std::size_t) { return sample_at(law, t, r); }, threads);
}

inline std::vector<SamplePath> sample_paths(const dist::ProcessLaw& law, const PathConfig& cfg, std::uint64_t seed,
                                            unsigned threads = 0) {
    cfg.validate();
    return ensemble(cfg.replicas, seed, [&](RngStream& r, std::size_t) { return sample_path(law, cfg, r); }, threads);
}

inline std::vector<SamplePath> fnbp_paths(const dist::FnbpLaw& law, const PathConfig& cfg, std::uint64_t seed,
                                          unsigned threads = 0) {
    return sample_paths(dist::ProcessLaw::of(law), cfg, seed, threads);
}

}  // namespace fracnb::paths

#endif
