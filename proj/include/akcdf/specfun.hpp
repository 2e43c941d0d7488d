#ifndef AKCDF_SPECFUN_HPP
#define AKCDF_SPECFUN_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

// Special functions used by the kernel survival functions and the
// bandwidth formulas: log-gamma, the regularized upper incomplete
// gamma function Q(a,z), the standard normal c.d.f. and digamma.
// All functions are pure and deterministic.

namespace akcdf {

inline double ln_gamma(double a) {
    if (!(a > 0.0)) throw std::domain_error("ln_gamma: argument must be positive");
    return std::lgamma(a);
}

namespace detail {

// Lower regularized incomplete gamma by power series, valid for z < a + 1.
inline double gamma_p_series(double a, double z) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
        term *= z / (a + k);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(a * std::log(z) - z - std::lgamma(a));
}

// Upper regularized incomplete gamma by Lentz continued fraction,
// valid for z >= a + 1.
inline double gamma_q_cf(double a, double z) {
    const double tiny = std::numeric_limits<double>::min() / 1e-30;
    double b = z + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(a * std::log(z) - z - std::lgamma(a));
}

} // namespace detail

// Q(a,z) = Gamma(a,z)/Gamma(a).  Split between a power series (z < a+1)
// and a continued fraction (z >= a+1).  A Chernoff bound short-circuits
// far tails, where Q is 0 or 1 well below double precision; this keeps
// kernel sums over large samples cheap.
inline double reg_upper_inc_gamma(double a, double z) {
    if (!(a > 0.0)) throw std::domain_error("reg_upper_inc_gamma: shape must be positive");
    if (!(z >= 0.0)) throw std::domain_error("reg_upper_inc_gamma: argument must be nonnegative");
    if (z == 0.0) return 1.0;
    const double u = z / a;
    if (u != 1.0) {
        // P(X >= z) <= exp(-a h(u)), h(u) = u - 1 - log u, and the same
        // bound holds for the lower tail when z < a.
        const double h = u - 1.0 - std::log(u);
        if (a * h > 40.0) return (z > a) ? 0.0 : 1.0;
    }
    if (z < a + 1.0) return 1.0 - detail::gamma_p_series(a, z);
    return detail::gamma_q_cf(a, z);
}

inline double std_normal_cdf(double z) {
    if (std::isnan(z)) throw std::domain_error("std_normal_cdf: NaN argument");
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// log Phi(z), stable for very negative z where Phi underflows.
inline double ln_std_normal_cdf(double z) {
    if (z > -30.0) {
        const double p = std_normal_cdf(z);
        if (p > 0.0) return std::log(p);
    }
    // Asymptotic expansion of Mills' ratio: Phi(z) ~ phi(z)/|z| (1 - 1/z^2 + 3/z^4 - ...)
    const double z2 = z * z;
    const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
    return -0.5 * z2 - 0.5 * std::log(2.0 * M_PI) - std::log(-z) + std::log(series);
}

// psi(a) via the recurrence into [10, inf) and the asymptotic series.
inline double digamma(double a) {
    if (!(a > 0.0)) throw std::domain_error("digamma: argument must be positive");
    double result = 0.0;
    while (a < 10.0) {
        result -= 1.0 / a;
        a += 1.0;
    }
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    result += std::log(a) - 0.5 * inv
        - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
    return result;
}

// psi'(a); used by the Newton step in the gamma likelihood solver.
inline double trigamma(double a) {
    if (!(a > 0.0)) throw std::domain_error("trigamma: argument must be positive");
    double result = 0.0;
    while (a < 10.0) {
        result += 1.0 / (a * a);
        a += 1.0;
    }
    const double inv = 1.0 / a;
    const double inv2 = inv * inv;
    result += inv * (1.0 + 0.5 * inv
        + inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 / 30.0))));
    return result;
}

} // namespace akcdf

#endif
