#ifndef FRACNB_SERIES_HPP
#define FRACNB_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace fracnb {

enum class EvalPath { series, quadrature, closed_form };

inline const char* to_string(EvalPath p) {
    switch (p) {
        case EvalPath::series: return "series";
        case EvalPath::quadrature: return "quadrature";
        case EvalPath::closed_form: return "closed_form";
    }
    return "unknown";
}

struct SeriesControl {
    double rel_tol = 1e-16;
    double abs_tol = 0.0;
    int max_terms = 20000;
    double cancellation_guard = 1e8;
    bool extended = false;  // long double accumulation

    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw domain_error("SeriesControl: rel_tol must lie in (0,1)");
        if (!(abs_tol >= 0.0)) throw domain_error("SeriesControl: abs_tol must be >= 0");
        if (max_terms < 8) throw domain_error("SeriesControl: max_terms must be >= 8");
        if (!(cancellation_guard >= 1.0)) throw domain_error("SeriesControl: cancellation_guard must be >= 1");
    }
};

struct SeriesValue {
    double value = 0.0;
    double est_error = 0.0;
    int terms_used = 0;
    bool reliable = true;
    EvalPath path = EvalPath::series;
};

// A term given as sign * exp(log_abs); sign == 0 marks an exact zero.
struct LogTerm {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;
};

namespace detail {

template <class Real>
struct Neumaier {
    Real sum = 0, comp = 0;
    void add(Real x) {
        Real t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    Real value() const { return sum + comp; }
};

template <class Real, class TermFn>
SeriesValue sum_log_series(TermFn&& term, const SeriesControl& ctl, const char* name) {
    Neumaier<Real> acc;
    Real abs_sum = 0;
    Real max_abs = 0;
    Real prev_mag = -1;
    Real last_mag = 0;
    Real before_last = 0;
    int small_run = 0;
    int k = 0;
    bool overflow = false;
    for (; k < ctl.max_terms; ++k) {
        LogTerm t = term(k);
        if (t.sign == 0) continue;
        if (t.log_abs > 11000.0 || std::isnan(t.log_abs)) {
            overflow = true;
            break;
        }
        Real mag = std::exp(static_cast<Real>(t.log_abs));
        if (!std::isfinite(static_cast<double>(mag))) {
            overflow = true;
            break;
        }
        acc.add(t.sign > 0 ? mag : -mag);
        abs_sum += mag;
        if (mag > max_abs) max_abs = mag;
        Real s = std::fabs(acc.value());
        Real thresh = std::max<Real>(ctl.abs_tol, ctl.rel_tol * s);
        bool small = mag <= thresh || t.log_abs < -740.0;
        bool decaying = prev_mag < 0 || mag <= prev_mag;
        if (small && decaying)
            ++small_run;
        else
            small_run = 0;
        before_last = last_mag;
        prev_mag = mag;
        last_mag = mag;
        if (small_run >= 2) {
            ++k;
            break;
        }
    }
    SeriesValue out;
    out.terms_used = k;
    if (overflow) {
        out.value = std::numeric_limits<double>::quiet_NaN();
        out.est_error = std::numeric_limits<double>::infinity();
        out.reliable = false;
        return out;
    }
    if (small_run < 2) throw truncation_error(std::string(name) + ": series did not converge within max_terms", k);
    Real v = acc.value();
    out.value = static_cast<double>(v);
    const double eps = std::numeric_limits<Real>::epsilon();
    Real tail = 2 * last_mag;
    if (before_last > 0 && last_mag < before_last) {
        Real r = last_mag / before_last;
        tail = std::max<Real>(tail, last_mag / (1 - r));
    }
    out.est_error = static_cast<double>(tail + 4 * eps * abs_sum);
    if (v == 0) {
        out.reliable = (max_abs == 0);
    } else {
        out.reliable = static_cast<double>(max_abs / std::fabs(v)) <= ctl.cancellation_guard;
    }
    if (!std::isfinite(out.est_error)) out.reliable = false;
    return out;
}

}  // namespace detail

// Sums sign*exp(log_abs) terms with compensated accumulation and the two-term stopping rule.
template <class TermFn>
SeriesValue sum_log_series(TermFn&& term, const SeriesControl& ctl, const char* name = "series") {
    ctl.validate();
    if (ctl.extended) return detail::sum_log_series<long double>(term, ctl, name);
    return detail::sum_log_series<double>(term, ctl, name);
}

}  // namespace fracnb

#endif
