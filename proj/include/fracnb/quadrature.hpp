#ifndef FRACNB_QUADRATURE_HPP
#define FRACNB_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"

namespace fracnb::quad {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
};

inline constexpr double inf = std::numeric_limits<double>::infinity();

namespace detail {

struct Segment {
    double a, b;
    double value, error, l1;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// Single 31-point Kronrod panel; [a,inf) is mapped to [0,1) by x = a + u/(1-u).
template <class F>
Segment kronrod(F& f, double a, double b) {
    Segment s{a, b, 0.0, 0.0, 0.0};
    if (std::isinf(b)) {
        auto g = [&](double u) {
            double v = 1.0 - u;
            return f(a + u / v) / (v * v);
        };
        s.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 0, 0.0, &s.error, &s.l1);
    } else {
        s.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &s.error, &s.l1);
    }
    return s;
}

inline std::pair<Segment, Segment> split(const Segment& s) {
    if (std::isinf(s.b)) {
        double m = s.a + 1.0;
        return {{s.a, m}, {m, s.b}};
    }
    double m = 0.5 * (s.a + s.b);
    return {{s.a, m}, {m, s.b}};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over the panels delimited by points; the last point may be +inf.
// Refines the worst panel until the summed error is below max(abs_tol, rel_tol |I|, 64 eps |f|_1).
template <class F>
QuadResult integrate_panels(F&& f, std::vector<double> points, double rel_tol = 1e-12, double abs_tol = 0.0,
                            std::size_t max_panels = 4000) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::priority_queue<detail::Segment> heap;
    double value = 0.0, error = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        detail::Segment s = detail::kronrod(f, points[i], points[i + 1]);
        value += s.value;
        error += s.error;
        l1 += s.l1;
        heap.push(s);
    }
    while (!heap.empty() && heap.size() < max_panels && error > std::max({abs_tol, rel_tol * std::fabs(value), 64.0 * eps * l1})) {
        detail::Segment w = heap.top();
        if (!std::isinf(w.b) && std::fabs(w.b - w.a) <= 1e-15 * std::max(std::fabs(w.a), std::fabs(w.b))) break;
        heap.pop();
        auto [lo, hi] = detail::split(w);
        detail::Segment s1 = detail::kronrod(f, lo.a, lo.b);
        detail::Segment s2 = detail::kronrod(f, hi.a, hi.b);
        value += s1.value + s2.value - w.value;
        error += s1.error + s2.error - w.error;
        l1 += s1.l1 + s2.l1 - w.l1;
        heap.push(s1);
        heap.push(s2);
    }
    // recompute sums to shed accumulated rounding from the incremental updates
    QuadResult r;
    while (!heap.empty()) {
        r.value += heap.top().value;
        r.error += heap.top().error;
        r.l1 += heap.top().l1;
        heap.pop();
    }
    return r;
}

template <class F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 0.0) {
    if (a == b) return {};
    return integrate_panels(f, {a, b}, rel_tol, abs_tol);
}

// log of the gamma density y^{k-1} e^{-rate y} rate^k / Gamma(k).
inline double log_gamma_density(double y, double shape, double rate) {
    if (y <= 0.0) return -inf;
    return shape * std::log(rate) + (shape - 1.0) * std::log(y) - rate * y - boost::math::lgamma(shape);
}

inline double gamma_density(double y, double shape, double rate) {
    if (y <= 0.0) {
        if (shape == 1.0 && y == 0.0) return rate;
        return shape < 1.0 && y == 0.0 ? inf : 0.0;
    }
    return std::exp(log_gamma_density(y, shape, rate));
}

// E[f(Y)] for Y ~ Gamma(shape, rate). Small shapes use u = (rate*y)^shape near the origin.
template <class F>
QuadResult gamma_expectation(F&& f, double shape, double rate, double rel_tol = 1e-11) {
    if (!(shape > 0.0 && rate > 0.0)) throw domain_error("gamma_expectation: shape and rate must be positive");
    QuadResult total;
    auto add = [&](const QuadResult& r) {
        total.value += r.value;
        total.error += r.error;
        total.l1 += r.l1;
    };
    const double mean = shape / rate;
    const double sd = std::sqrt(shape) / rate;
    if (shape < 1.0) {
        const double lg1 = boost::math::lgamma(shape + 1.0);
        const double inv_k = 1.0 / shape;
        auto lower = [&](double u) {
            double x = std::pow(u, inv_k);
            return f(x / rate) * std::exp(-x - lg1);
        };
        add(integrate(lower, 0.0, 1.0, rel_tol));
        auto upper = [&](double y) { return f(y) * std::exp(log_gamma_density(y, shape, rate)); };
        add(integrate_panels(upper, {1.0 / rate, mean + 4.0 * sd + 1.0 / rate, inf}, rel_tol,
                             0.5 * rel_tol * std::fabs(total.value)));
        return total;
    }
    auto dens = [&](double y) { return y <= 0.0 ? 0.0 : f(y) * std::exp(log_gamma_density(y, shape, rate)); };
    std::vector<double> pts{0.0, mean, mean + 3.0 * sd, mean + 8.0 * sd, inf};
    if (mean - 3.0 * sd > 0.0) pts.push_back(mean - 3.0 * sd);
    if (mean - 6.0 * sd > 0.0) pts.push_back(mean - 6.0 * sd);
    add(integrate_panels(dens, pts, rel_tol));
    return total;
}

}  // namespace fracnb::quad

#endif
