#ifndef AKCDF_KERNELS_HPP
#define AKCDF_KERNELS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "akcdf/distributions.hpp"
#include "akcdf/rng.hpp"
#include "akcdf/specfun.hpp"

// The seven asymmetric kernel survival functions with their evaluation
// point parameter maps.  Each kernel is a law on (0, infinity) whose
// location tracks the evaluation point x and whose spread shrinks with
// the bandwidth b; averaging the survival function over the sample
// gives a smooth c.d.f. estimate that is free of boundary bias.

namespace akcdf {

enum class KernelKind { Gam, IGam, LN, IGau, RIG, BS, W };

namespace detail {

inline void check_kernel_args(KernelKind kind, double x, double b) {
    if (!(x > 0.0)) throw std::domain_error("kernel: x must be positive");
    if (!(b > 0.0)) throw std::domain_error("kernel: b must be positive");
    if (kind == KernelKind::RIG && b >= 1.0)
        throw std::domain_error("kernel: RIG requires b < 1");
}

// Survival function of the inverse Gaussian law.  The e^{2 lambda/mu}
// factor overflows for small bandwidths, so that term is assembled in
// log space with the stable log-Phi.
inline double inverse_gaussian_survival(double t, double mu, double lambda) {
    const double root = std::sqrt(lambda / t);
    const double a = root * (t / mu - 1.0);
    const double c = root * (t / mu + 1.0);
    const double tail = std::exp(2.0 * lambda / mu + ln_std_normal_cdf(-c));
    double s = 1.0 - std_normal_cdf(a) - tail;
    return std::min(1.0, std::max(0.0, s));
}

// Survival of the reciprocal inverse Gaussian law: T ~ RIG(mu, lambda)
// iff 1/T ~ IGau(mu, lambda), so this is the IGau c.d.f. at 1/t.
inline double reciprocal_inverse_gaussian_survival(double t, double mu, double lambda) {
    const double root = std::sqrt(lambda * t);
    const double a = root * (1.0 / (t * mu) - 1.0);
    const double c = root * (1.0 / (t * mu) + 1.0);
    const double tail = std::exp(2.0 * lambda / mu + ln_std_normal_cdf(-c));
    double s = std_normal_cdf(a) + tail;
    return std::min(1.0, std::max(0.0, s));
}

} // namespace detail

// K-bar(t | params(x, b)) for each kernel kind; equals 1 at t = 0 and
// decreases to 0, approximating the indicator 1{t <= x} as b -> 0.
inline double kernel_survival(KernelKind kind, double t, double x, double b) {
    detail::check_kernel_args(kind, x, b);
    if (!(t >= 0.0)) throw std::domain_error("kernel_survival: t must be nonnegative");
    if (t == 0.0) return 1.0;
    switch (kind) {
        case KernelKind::Gam:
            return reg_upper_inc_gamma(x / b + 1.0, t / b);
        case KernelKind::IGam:
            return 1.0 - reg_upper_inc_gamma(1.0 / b + 1.0, x / (t * b));
        case KernelKind::LN:
            return 1.0 - std_normal_cdf((std::log(t) - std::log(x)) / std::sqrt(b));
        case KernelKind::IGau:
            return detail::inverse_gaussian_survival(t, x, x / b);
        case KernelKind::RIG:
            return detail::reciprocal_inverse_gaussian_survival(
                t, 1.0 / (x * (1.0 - b)), 1.0 / (x * b));
        case KernelKind::BS: {
            const double r = std::sqrt(t / x);
            return 1.0 - std_normal_cdf((r - 1.0 / r) / std::sqrt(b));
        }
        case KernelKind::W: {
            const double lambda = x / std::exp(ln_gamma(1.0 + b));
            // (t/lambda)^(1/b) in log space, with tail short-circuits:
            // exp(-e^4) and 1 - exp(-e^-40) are 0 and 1 in doubles
            const double lz = std::log(t / lambda) / b;
            if (lz > 4.0) return 0.0;
            if (lz < -40.0) return 1.0;
            return std::exp(-std::exp(lz));
        }
    }
    return 0.0;
}

// Draws from the kernel law itself (the T in the variance lemmas);
// supported for the two kinds whose limit constant requires Monte
// Carlo approximation.
inline std::vector<double> sample_kernel(KernelKind kind, double x, double b,
                                         RngStream& rng, std::size_t n) {
    detail::check_kernel_args(kind, x, b);
    if (n < 1) throw std::domain_error("sample_kernel: n must be at least 1");
    std::vector<double> out;
    out.reserve(n);
    if (kind == KernelKind::IGau) {
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(detail::inverse_gaussian_variate(rng, x, x / b));
        return out;
    }
    if (kind == KernelKind::RIG) {
        const double mu = 1.0 / (x * (1.0 - b));
        const double lambda = 1.0 / (x * b);
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(1.0 / detail::inverse_gaussian_variate(rng, mu, lambda));
        return out;
    }
    throw std::domain_error("sample_kernel: only IGau and RIG kernels are sampled");
}

} // namespace akcdf

#endif
