#ifndef AKCDF_ASYMPTOTICS_HPP
#define AKCDF_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "akcdf/distributions.hpp"
#include "akcdf/estimators.hpp"
#include "akcdf/kernels.hpp"
#include "akcdf/quadrature.hpp"
#include "akcdf/rng.hpp"
#include "akcdf/specfun.hpp"

// Closed-form evaluators for the bias/variance expansions of the
// asymmetric kernel smoothers, the min-of-two-variates moment
// identities behind the variance corrections, and an empirical
// normality check for the standardized estimator.

namespace akcdf {

// Coefficient of b in the bias expansion.  BS shares the LN leading
// terms (same kernel mean and variance to first order); the W kernel is
// mean-matched, so its bias is of smaller order and the template does
// not apply.
inline double leading_bias(KernelKind kind, double x, double f, double fprime) {
    if (!(x > 0.0)) throw std::domain_error("leading_bias: x must be positive");
    switch (kind) {
        case KernelKind::Gam: return f + 0.5 * x * fprime;
        case KernelKind::IGam:
        case KernelKind::IGau:
        case KernelKind::RIG: return 0.5 * x * x * fprime;
        case KernelKind::LN:
        case KernelKind::BS: return 0.5 * x * (f + x * fprime);
        case KernelKind::W:
            throw std::domain_error("leading_bias: no first-order expansion for the W kernel");
    }
    throw std::domain_error("leading_bias: unsupported kind");
}

// Coefficient of -n^{-1} b^{1/2} in the variance expansion; the
// IGau/RIG forms need the numerically-approximated limit constant c(x).
inline double variance_correction(KernelKind kind, double x, double f,
                                  std::optional<double> c_of_x = std::nullopt) {
    if (!(x > 0.0)) throw std::domain_error("variance_correction: x must be positive");
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    switch (kind) {
        case KernelKind::Gam: return std::sqrt(x) * f * inv_sqrt_pi;
        case KernelKind::IGam:
        case KernelKind::LN:
        case KernelKind::BS: return x * f * inv_sqrt_pi;
        case KernelKind::IGau:
        case KernelKind::RIG:
            if (!c_of_x)
                throw std::domain_error("variance_correction: IGau/RIG need the limit constant");
            return 0.5 * f * (*c_of_x);
        case KernelKind::W:
            throw std::domain_error("variance_correction: no expansion for the W kernel");
    }
    throw std::domain_error("variance_correction: unsupported kind");
}

// Leading terms of the pointwise mean squared error:
//   n^{-1} F (1-F) - n^{-1} b^{1/2} varcorr + b^2 bias^2.
inline double asymptotic_mse(KernelKind kind, double x, double F, double f, double fprime,
                             std::size_t n, double b,
                             std::optional<double> c_of_x = std::nullopt) {
    if (n < 1) throw std::domain_error("asymptotic_mse: n must be at least 1");
    if (!(b >= 0.0)) throw std::domain_error("asymptotic_mse: b must be nonnegative");
    const double nn = static_cast<double>(n);
    const double var_main = F * (1.0 - F) / nn;
    if (b == 0.0) return var_main;
    const double vc = variance_correction(kind, x, f, c_of_x);
    const double lb = leading_bias(kind, x, f, fprime);
    return var_main - std::sqrt(b) * vc / nn + b * b * lb * lb;
}

// Leading terms of the mean integrated squared error under a reference
// law, all three integrals by adaptive quadrature.
inline double asymptotic_mise(KernelKind kind, const TargetDistribution& ref, std::size_t n,
                              double b,
                              const std::function<double(double)>& c_of_x = {},
                              const QuadratureSpec& spec = {}) {
    if (n < 1) throw std::domain_error("asymptotic_mise: n must be at least 1");
    if (!(b >= 0.0)) throw std::domain_error("asymptotic_mise: b must be nonnegative");
    const double nn = static_cast<double>(n);
    const double base = integrate_half_line(
        [&](double x) {
            const double F = ref.cdf(x);
            return F * (1.0 - F);
        },
        spec);
    if (b == 0.0) return base / nn;
    const bool needs_limit = (kind == KernelKind::IGau || kind == KernelKind::RIG);
    if (needs_limit && !c_of_x)
        throw std::domain_error("asymptotic_mise: IGau/RIG need the limit-constant function");
    const double V = integrate_half_line(
        [&](double x) {
            if (needs_limit)
                return variance_correction(kind, x, ref.pdf(x), c_of_x(x));
            return variance_correction(kind, x, ref.pdf(x));
        },
        spec);
    const double B = integrate_half_line(
        [&](double x) {
            const double c = leading_bias(kind, x, ref.pdf(x), ref.pdf_deriv(x));
            return c * c;
        },
        spec);
    return base / nn - std::sqrt(b) * V / nn + b * b * B;
}

// --- Appendix min-moment identities -------------------------------------

// E[(min{X,Y})^j] for X, Y i.i.d. Gamma(alpha, theta), j in {1, 2}.
inline double min_moment_gamma(double alpha, double theta, int j) {
    if (!(alpha > 0.0) || !(theta > 0.0))
        throw std::domain_error("min_moment_gamma: parameters must be positive");
    if (j != 1 && j != 2) throw std::domain_error("min_moment_gamma: j must be 1 or 2");
    const double lg = ln_gamma(alpha);
    const double jd = static_cast<double>(j);
    const double main = std::exp(jd * std::log(theta) + ln_gamma(alpha + jd) - lg);
    const double corr = jd / std::sqrt(M_PI)
        * std::exp(jd * std::log(theta) + ln_gamma(alpha + jd - 0.5) - lg);
    return main - corr;
}

// E[(min{X,Y})^j] for X, Y i.i.d. InverseGamma(alpha, theta), alpha > 2.
inline double min_moment_invgamma(double alpha, double theta, int j) {
    if (!(theta > 0.0)) throw std::domain_error("min_moment_invgamma: theta must be positive");
    if (j != 1 && j != 2) throw std::domain_error("min_moment_invgamma: j must be 1 or 2");
    if (!(alpha > 2.0))
        throw std::domain_error("min_moment_invgamma: alpha must exceed 2");
    const double lg = ln_gamma(alpha);
    const double jd = static_cast<double>(j);
    const double lt = -jd * std::log(theta);
    const double main = std::exp(lt + ln_gamma(alpha - jd) - lg);
    const double corr = jd / std::sqrt(M_PI)
        * std::exp(lt + ln_gamma(alpha - jd) + ln_gamma(alpha - 0.5) - 2.0 * lg);
    return main - corr;
}

// E[(min{X,Y})^a] for X, Y i.i.d. LogNormal(mu, sigma), any a > 0.
inline double min_moment_lognormal(double mu, double sigma, double a) {
    if (!(sigma > 0.0)) throw std::domain_error("min_moment_lognormal: sigma must be positive");
    if (!(a > 0.0)) throw std::domain_error("min_moment_lognormal: a must be positive");
    return 2.0 * std::exp(a * mu + 0.5 * a * a * sigma * sigma
                          + ln_std_normal_cdf(-a * sigma / std::sqrt(2.0)));
}

// Exact centered moments E[min - x] and E[(min - x)^2] for the kernel
// law at (x, b); their leading terms as b -> 0 are
//   Gam:  -sqrt(bx/pi) + b,  bx      IGam/LN: -x sqrt(b/pi) (+bx/2 for LN),  bx^2.
inline std::pair<double, double> corollary_min_expansions(KernelKind kind, double x, double b) {
    if (!(x > 0.0) || !(b > 0.0))
        throw std::domain_error("corollary_min_expansions: x and b must be positive");
    double m1 = 0.0, m2 = 0.0;
    switch (kind) {
        case KernelKind::Gam: {
            const double alpha = x / b + 1.0;
            m1 = min_moment_gamma(alpha, b, 1);
            m2 = min_moment_gamma(alpha, b, 2);
            break;
        }
        case KernelKind::IGam: {
            if (!(b < 1.0))
                throw std::domain_error("corollary_min_expansions: IGam needs b < 1");
            const double alpha = 1.0 / b + 1.0;
            const double theta = b / x;
            m1 = min_moment_invgamma(alpha, theta, 1);
            m2 = min_moment_invgamma(alpha, theta, 2);
            break;
        }
        case KernelKind::LN: {
            const double mu = std::log(x);
            const double sigma = std::sqrt(b);
            m1 = min_moment_lognormal(mu, sigma, 1.0);
            m2 = min_moment_lognormal(mu, sigma, 2.0);
            break;
        }
        default:
            throw std::domain_error("corollary_min_expansions: closed forms exist for Gam, IGam, LN");
    }
    return {m1 - x, m2 - 2.0 * x * m1 + x * x};
}

// --- Kolmogorov-Smirnov helpers -----------------------------------------

// One-sample KS distance between sorted data and a continuous c.d.f.
inline double ks_statistic(const std::vector<double>& sorted_values,
                           const std::function<double(double)>& cdf) {
    const std::size_t m = sorted_values.size();
    if (m == 0) throw std::domain_error("ks_statistic: empty sample");
    double d = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double F = cdf(sorted_values[i]);
        const double lo = static_cast<double>(i) / static_cast<double>(m);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(m);
        d = std::max(d, std::max(std::fabs(F - lo), std::fabs(hi - F)));
    }
    return d;
}

// Asymptotic Kolmogorov tail probability with the Stephens small-sample
// adjustment.
inline double ks_p_value(double d, std::size_t m) {
    if (m == 0) throw std::domain_error("ks_p_value: empty sample");
    const double rm = std::sqrt(static_cast<double>(m));
    const double lambda = (rm + 0.12 + 0.11 / rm) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0)
            * std::exp(-2.0 * k * k * lambda * lambda);
        p += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, p));
}

// --- Empirical normality check ------------------------------------------

struct NormalityReport {
    double ks_stat = 0.0;
    double p_value = 0.0;
    double mean_fhat = 0.0;           // Monte Carlo mean of Fhat(x)
    double mean_shift = 0.0;          // sqrt(n) (mean Fhat - F(x))
    double mean_shift_se = 0.0;       // standard error of the shift
    double predicted_shift = 0.0;     // sqrt(n) b * leading bias coefficient
    std::size_t replicates = 0;
};

// Simulates the standardized estimator at a point and tests it against
// the standard normal; also reports the bias shift sqrt(n)(mean - F(x))
// next to its first-order prediction.
inline NormalityReport normality_check(EstimatorKind kind, const TargetDistribution& truth,
                                       double x, std::size_t n, double b,
                                       std::size_t replicates, std::uint64_t seed) {
    if (!(x > 0.0)) throw std::domain_error("normality_check: x must be positive");
    if (replicates < 10) throw std::domain_error("normality_check: need at least 10 replicates");
    const double F = truth.cdf(x);
    if (!(F > 0.0) || !(F < 1.0))
        throw std::domain_error("normality_check: need 0 < F(x) < 1 at the probe point");
    const double sigma = std::sqrt(F * (1.0 - F));
    std::vector<double> values;
    values.reserve(replicates);
    for (std::size_t k = 0; k < replicates; ++k) {
        RngStream rng(seed, RngStream::cell_index(0, n, k));
        Sample sample(truth.sample(rng, n));
        const FittedEstimator est(kind, std::move(sample),
                                  kind == EstimatorKind::EDF ? 0.0 : b);
        values.push_back(est(x));
    }
    const double rn = std::sqrt(static_cast<double>(n));
    const double rm = static_cast<double>(replicates);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= rm;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (rm - 1.0);

    std::vector<double> z;
    z.reserve(replicates);
    for (double v : values) z.push_back(rn * (v - mean) / sigma);
    std::sort(z.begin(), z.end());
    NormalityReport report;
    report.ks_stat = ks_statistic(z, [](double t) { return std_normal_cdf(t); });
    report.p_value = ks_p_value(report.ks_stat, replicates);
    report.mean_fhat = mean;
    report.mean_shift = rn * (mean - F);
    report.mean_shift_se = rn * std::sqrt(var / rm);
    if (is_asymmetric_kernel(kind) && kind != EstimatorKind::W) {
        report.predicted_shift = rn * b
            * leading_bias(to_kernel_kind(kind), x, truth.pdf(x), truth.pdf_deriv(x));
    }
    report.replicates = replicates;
    return report;
}

} // namespace akcdf

#endif
