#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rcindex/errors.hpp"

namespace rcindex {

namespace detail {

// Regularized lower incomplete gamma P(a,x) by series expansion (x < a+1).
inline double gamma_p_series(double a, double x) {
    const double lga = std::lgamma(a);
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16)
            return sum * std::exp(-x + a * std::log(x) - lga);
    }
    throw numeric_error("incomplete gamma series failed to converge");
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction (x >= a+1).
inline double gamma_q_cf(double a, double x) {
    const double lga = std::lgamma(a);
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16)
            return std::exp(-x + a * std::log(x) - lga) * h;
    }
    throw numeric_error("incomplete gamma continued fraction failed to converge");
}

}  // namespace detail

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x) / Gamma(a).
inline double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw numeric_error("gamma_q domain error");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_cf(a, x);
}

// Upper-tail probability of a chi-square variate.
inline double chi_square_upper_tail(double x, double df) {
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

// Quantile by linear interpolation between order statistics (R type 7):
// h = (n-1)q, result = x[floor(h)] + frac(h) * (x[floor(h)+1] - x[floor(h)]).
// Input must be sorted ascending.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw validation_error("quantile of empty sample");
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? std::numeric_limits<double>::quiet_NaN()
                     : s / static_cast<double>(v.size());
}

// Sample standard deviation (n-1 denominator); 0 when n < 2.
inline double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace rcindex
