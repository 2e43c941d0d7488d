#ifndef AKCDF_BANDWIDTH_HPP
#define AKCDF_BANDWIDTH_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "akcdf/distributions.hpp"
#include "akcdf/estimators.hpp"
#include "akcdf/kernels.hpp"
#include "akcdf/quadrature.hpp"
#include "akcdf/rng.hpp"
#include "akcdf/specfun.hpp"

// Bandwidth selection.  The asymmetric kernels use a plug-in rule: fit
// a Gamma reference by maximum likelihood, then evaluate the
// MISE-optimal bandwidth for that reference, either in closed form
// (Gam/IGam/LN), with a Monte Carlo limit constant (IGau/RIG), or by
// numeric minimization of the asymptotic objective (BS/W).  The two
// Epanechnikov baselines pick their bandwidth from a log grid by
// integrated-squared-error criteria.

namespace akcdf {

class BandwidthError : public std::runtime_error {
public:
    explicit BandwidthError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GammaReference {
    double alpha = 1.0;
    double theta = 1.0;

    TargetDistribution law() const { return TargetDistribution::gamma(alpha, theta); }
    double pdf(double x) const { return law().pdf(x); }
    double pdf_deriv(double x) const { return law().pdf_deriv(x); }
};

// Maximum likelihood Gamma fit: alpha solves log(alpha) - psi(alpha) =
// log(mean) - mean(log), by Newton iteration; theta = mean / alpha.
inline GammaReference fit_gamma_mle(const Sample& sample) {
    const std::size_t n = sample.size();
    if (n < 2) throw std::domain_error("fit_gamma_mle: need at least two observations");
    double mean = 0.0, mean_log = 0.0;
    for (double v : sample.sorted) {
        mean += v;
        mean_log += std::log(v);
    }
    mean /= static_cast<double>(n);
    mean_log /= static_cast<double>(n);
    const double s = std::log(mean) - mean_log;
    if (!(s > 0.0) || !std::isfinite(s))
        throw BandwidthError("fit_gamma_mle: degenerate sample (zero log variance)");
    double alpha = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int iter = 0; iter < 100; ++iter) {
        const double g = std::log(alpha) - digamma(alpha) - s;
        if (std::fabs(g) <= 1e-12) break;
        const double gp = 1.0 / alpha - trigamma(alpha);
        double next = alpha - g / gp;
        if (!(next > 0.0)) next = alpha / 2.0;
        alpha = next;
    }
    if (std::fabs(std::log(alpha) - digamma(alpha) - s) > 1e-10)
        throw BandwidthError("fit_gamma_mle: Newton iteration did not converge");
    return {alpha, mean / alpha};
}

namespace detail {

// The MISE expansion constants: V multiplies -n^{-1} b^{1/2}, B
// multiplies b^2.  b_opt = [V / (4 B n)]^{2/3}.
inline double b_opt_from_integrals(double bias_integral, double var_integral, std::size_t n) {
    if (!(n >= 1)) throw std::domain_error("b_opt: n must be at least 1");
    if (!(bias_integral > 1e-300))
        throw BandwidthError("b_opt: bias integral is numerically zero; optimum undefined");
    return std::pow(var_integral / (4.0 * bias_integral * static_cast<double>(n)), 2.0 / 3.0);
}

inline double bias_integral_closed_form(KernelKind kind, const GammaReference& ref,
                                        const QuadratureSpec& spec) {
    auto integrand = [&](double x) -> double {
        const double f = ref.pdf(x);
        const double fp = ref.pdf_deriv(x);
        double c = 0.0;
        switch (kind) {
            case KernelKind::Gam: c = f + 0.5 * x * fp; break;
            case KernelKind::IGam:
            case KernelKind::IGau:
            case KernelKind::RIG: c = 0.5 * x * x * fp; break;
            case KernelKind::LN:
            case KernelKind::BS: c = 0.5 * x * (f + x * fp); break;
            default:
                throw std::domain_error("bias integral: unsupported kernel kind");
        }
        return c * c;
    };
    return integrate_half_line(integrand, spec);
}

inline double variance_integral_closed_form(KernelKind kind, const GammaReference& ref,
                                            const QuadratureSpec& spec) {
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    auto integrand = [&](double x) -> double {
        const double f = ref.pdf(x);
        switch (kind) {
            case KernelKind::Gam: return std::sqrt(x) * f * inv_sqrt_pi;
            case KernelKind::IGam:
            case KernelKind::LN:
            case KernelKind::BS: return x * f * inv_sqrt_pi;
            default:
                throw std::domain_error("variance integral: unsupported kernel kind");
        }
    };
    return integrate_half_line(integrand, spec);
}

} // namespace detail

// Closed-form plug-in bandwidth for the three kernels whose MISE
// constants reduce to explicit half-line integrals of the reference.
inline double b_opt_closed_form(KernelKind kind, const GammaReference& ref, std::size_t n,
                                const QuadratureSpec& spec = {}) {
    if (kind != KernelKind::Gam && kind != KernelKind::IGam && kind != KernelKind::LN)
        throw std::domain_error("b_opt_closed_form: only Gam, IGam, LN have closed forms");
    const double B = detail::bias_integral_closed_form(kind, ref, spec);
    const double V = detail::variance_integral_closed_form(kind, ref, spec);
    return detail::b_opt_from_integrals(B, V, n);
}

// Monte Carlo estimate of b^{-1/2} E|T1 - T2| at a small probe
// bandwidth, the variance-correction constant of the IGau/RIG kernels.
struct LimitConstant {
    double x = 0.0;
    double c_value = 0.0;
    double std_error = 0.0;
    std::size_t reps = 0;
    double b_probe = 0.0;
};

inline LimitConstant c_limit(KernelKind kind, double x, std::size_t reps, double b_probe,
                             RngStream& rng) {
    if (kind != KernelKind::IGau && kind != KernelKind::RIG)
        throw std::domain_error("c_limit: only IGau and RIG need a limit constant");
    if (reps < 10000) throw std::domain_error("c_limit: need at least 10^4 replicates");
    if (!(b_probe > 0.0) || b_probe > 1e-2)
        throw std::domain_error("c_limit: probe bandwidth must lie in (0, 1e-2]");
    detail::check_kernel_args(kind, x, b_probe);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        double t1, t2;
        if (kind == KernelKind::IGau) {
            t1 = detail::inverse_gaussian_variate(rng, x, x / b_probe);
            t2 = detail::inverse_gaussian_variate(rng, x, x / b_probe);
        } else {
            const double mu = 1.0 / (x * (1.0 - b_probe));
            const double lambda = 1.0 / (x * b_probe);
            t1 = 1.0 / detail::inverse_gaussian_variate(rng, mu, lambda);
            t2 = 1.0 / detail::inverse_gaussian_variate(rng, mu, lambda);
        }
        const double d = std::fabs(t1 - t2);
        sum += d;
        sum_sq += d * d;
    }
    const double m = sum / static_cast<double>(reps);
    const double var = std::max(0.0, sum_sq / static_cast<double>(reps) - m * m);
    const double scale = 1.0 / std::sqrt(b_probe);
    LimitConstant out;
    out.x = x;
    out.c_value = m * scale;
    out.std_error = std::sqrt(var / static_cast<double>(reps)) * scale;
    out.reps = reps;
    out.b_probe = b_probe;
    return out;
}

// Piecewise-linear interpolant of c(x) through the probed points,
// anchored at c(0) = 0 and extended proportionally beyond the largest
// probe (both kernels have c(x) linear in x).
inline std::function<double(double)> make_limit_interpolant(std::vector<LimitConstant> limits) {
    if (limits.empty()) throw std::domain_error("limit interpolant: no probe points");
    std::sort(limits.begin(), limits.end(),
              [](const LimitConstant& a, const LimitConstant& b) { return a.x < b.x; });
    return [limits](double x) -> double {
        if (!(x > 0.0)) return 0.0;
        if (x <= limits.front().x) return limits.front().c_value * x / limits.front().x;
        if (x >= limits.back().x) return limits.back().c_value * x / limits.back().x;
        auto hi = std::lower_bound(limits.begin(), limits.end(), x,
                                   [](const LimitConstant& l, double v) { return l.x < v; });
        auto lo = hi - 1;
        const double w = (x - lo->x) / (hi->x - lo->x);
        return (1.0 - w) * lo->c_value + w * hi->c_value;
    };
}

inline double b_opt_with_limit(KernelKind kind, const GammaReference& ref, std::size_t n,
                               const std::function<double(double)>& c_of_x,
                               const QuadratureSpec& spec = {}) {
    if (kind != KernelKind::IGau && kind != KernelKind::RIG)
        throw std::domain_error("b_opt_with_limit: only IGau and RIG use the limit constant");
    const double B = detail::bias_integral_closed_form(kind, ref, spec);
    auto integrand = [&](double x) { return 0.5 * ref.pdf(x) * c_of_x(x); };
    const double V = integrate_half_line(integrand, spec);
    return detail::b_opt_from_integrals(B, V, n);
}

inline double b_opt_with_limit(KernelKind kind, const GammaReference& ref, std::size_t n,
                               const std::vector<LimitConstant>& limits,
                               const QuadratureSpec& spec = {}) {
    return b_opt_with_limit(kind, ref, n, make_limit_interpolant(limits), spec);
}

namespace detail {

// Fixed composite Gauss-Kronrod rule on (0, infinity) via x = t/(1-t),
// used where the integrand changes with an optimization variable and an
// identical node set across evaluations matters more than adaptivity.
struct FixedRule {
    std::vector<double> x;
    std::vector<double> w;
    explicit FixedRule(int subintervals) {
        const double h = 1.0 / subintervals;
        for (int seg = 0; seg < subintervals; ++seg) {
            for (int j = 0; j < 15; ++j) {
                const double t = (seg + kGk15Nodes[j]) * h;
                const double om = 1.0 - t;
                x.push_back(t / om);
                // tabulated weights sum to 2, hence the factor 1/2
                w.push_back(0.5 * kGk15Weights[j] * h / (om * om));
            }
        }
    }
};

// Golden-section refinement of a bracketed minimum.
template <class F>
double golden_minimize(const F& f, double lo, double hi, int iters) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Minimize over a log-spaced grid, then polish between the neighbors of
// the best grid point.
template <class F>
double log_grid_minimize(const F& f, double lo, double hi, int grid_points, int golden_iters) {
    std::vector<double> grid(grid_points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < grid_points; ++i)
        grid[i] = std::exp(llo + (lhi - llo) * i / (grid_points - 1));
    int best = 0;
    double best_val = f(grid[0]);
    for (int i = 1; i < grid_points; ++i) {
        const double v = f(grid[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double a = grid[std::max(0, best - 1)];
    const double b = grid[std::min(grid_points - 1, best + 1)];
    if (a == b) return grid[best];
    return golden_minimize(f, a, b, golden_iters);
}

} // namespace detail

// Numeric MISE minimization for the two kernels without printed
// constants.  BS shares the LN leading terms (same kernel mean and
// variance to first order), so its objective reuses the LN integrals;
// the W objective integrates the exact smoothing bias of the Weibull
// kernel under the reference, with the generic sqrt(b) variance term.
inline double b_opt_numeric(KernelKind kind, const GammaReference& ref, std::size_t n,
                            const QuadratureSpec& spec = {}) {
    if (!(n >= 1)) throw std::domain_error("b_opt_numeric: n must be at least 1");
    const double nn = static_cast<double>(n);
    if (kind == KernelKind::BS) {
        const double B = detail::bias_integral_closed_form(KernelKind::LN, ref, spec);
        const double V = detail::variance_integral_closed_form(KernelKind::LN, ref, spec);
        if (!(B > 1e-300))
            throw BandwidthError("b_opt_numeric: bias integral is numerically zero");
        auto objective = [&](double b) { return b * b * B - std::sqrt(b) * V / nn; };
        return detail::log_grid_minimize(objective, 1e-6, 0.9, 40, 60);
    }
    if (kind != KernelKind::W)
        throw std::domain_error("b_opt_numeric: only BS and W are minimized numerically");

    static const detail::FixedRule rule(6);  // 90 shared nodes
    std::vector<double> f_nodes(rule.x.size()), F_nodes(rule.x.size());
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        f_nodes[i] = ref.pdf(rule.x[i]);
        F_nodes[i] = ref.law().cdf(rule.x[i]);
    }
    const double V = detail::variance_integral_closed_form(KernelKind::LN, ref, spec);
    auto objective = [&](double b) {
        double bias_sq = 0.0;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double x = rule.x[j];
            // E[F_hat(x)] = integral of K-bar(t | x, b) f(t) dt
            double mean_fhat = 0.0;
            for (std::size_t i = 0; i < rule.x.size(); ++i)
                mean_fhat += rule.w[i] * kernel_survival(KernelKind::W, rule.x[i], x, b) * f_nodes[i];
            const double d = mean_fhat - F_nodes[j];
            bias_sq += rule.w[j] * d * d;
        }
        return bias_sq - std::sqrt(b) * V / nn;
    };
    return detail::log_grid_minimize(objective, 1e-4, 0.9, 25, 25);
}

// Default log-spaced search grid for the data-driven selectors.
struct BandwidthGrid {
    double lo = 1e-4;
    double hi = 0.9;
    int points_per_decade = 40;

    std::vector<double> points() const {
        if (!(lo > 0.0) || !(hi > lo)) throw std::domain_error("BandwidthGrid: need 0 < lo < hi");
        if (points_per_decade < 1)
            throw std::domain_error("BandwidthGrid: points_per_decade must be positive");
        std::vector<double> out;
        const double step = 1.0 / points_per_decade;
        const double llo = std::log10(lo), lhi = std::log10(hi);
        for (double e = llo; e < lhi + 1e-12; e += step)
            out.push_back(std::pow(10.0, std::min(e, lhi)));
        out.back() = hi;
        return out;
    }
};

namespace detail {

// Shared machinery for the grid selectors.  Both criteria are averages
// over i of integral (1{X_i <= x} - Fhat(x))^2 dx, where Fhat is the
// boundary-corrected estimator without X_i (cross-validation) or the
// ordinary estimator on the full sample (leave-none-out).  Expanding
// the square reduces the integrand at each x to the window sums
//   m = #{X_i <= x},   S = sum_i e_i,   A = sum_{X_i <= x} e_i,
//   B2 = sum_i e_i^2,  with e_i = Epa_cdf((x - X_i) / h);
// observations outside (x-h, x+h) contribute exactly 0 or 1, so each
// node costs O(log n + window).
struct CriterionSums {
    double m, S, A, B2;
};

inline CriterionSums criterion_sums(const std::vector<double>& xs, double x, double h) {
    const auto lo = std::lower_bound(xs.begin(), xs.end(), x - h);
    const auto hi = std::lower_bound(xs.begin(), xs.end(), x + h);
    const double left = static_cast<double>(lo - xs.begin());
    CriterionSums out{0.0, left, left, left};
    for (auto it = lo; it != hi; ++it) {
        const double e = epanechnikov_cdf((x - *it) / h);
        out.S += e;
        out.B2 += e * e;
        if (*it <= x) out.A += e;
    }
    out.m = static_cast<double>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    return out;
}

inline std::vector<double> dedup_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw std::domain_error("bandwidth grid is empty");
    std::vector<double> g = grid;
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    for (double b : g)
        if (!(b > 0.0)) throw std::domain_error("bandwidth grid entries must be positive");
    return g;
}

} // namespace detail

// Cross-validation selector for the boundary-corrected estimator:
// argmin over the grid of the mean leave-one-out integrated squared
// error against the indicator.
inline double select_cv(const Sample& sample, const std::vector<double>& grid) {
    const std::size_t n = sample.size();
    if (n < 3) throw std::domain_error("select_cv: need at least three observations");
    const std::vector<double> g = detail::dedup_grid(grid);
    static const detail::FixedRule rule(40);  // 600 shared nodes
    const std::vector<double>& xs = sample.sorted;
    const double nd = static_cast<double>(n);
    double best_b = g.front(), best_val = 0.0;
    bool first = true;
    for (double b : g) {
        double crit = 0.0;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double x = rule.x[j];
            const double h = (x >= b) ? b : x;  // boundary-corrected bandwidth
            const auto s = detail::criterion_sums(xs, x, h);
            // sum_i (1_i - (S - e_i) / (n-1))^2
            //   = m - 2 (m S - A) / (n-1) + ((n-2) S^2 + B2) / (n-1)^2
            const double q = s.m - 2.0 * (s.m * s.S - s.A) / (nd - 1.0)
                + ((nd - 2.0) * s.S * s.S + s.B2) / ((nd - 1.0) * (nd - 1.0));
            crit += rule.w[j] * q;
        }
        crit /= nd;
        if (first || crit < best_val) {
            first = false;
            best_val = crit;
            best_b = b;
        }
    }
    return best_b;
}

// Leave-none-out selector for the ordinary kernel estimator: the same
// integrated criterion without deletion.  Without the leave-one-out
// correction the criterion is minimized by undersmoothing, so the
// selector effectively tracks the smallest grid entries; this matches
// the near-identical behaviour of the ordinary-kernel and empirical
// estimators in the comparison tables.
inline double select_lno(const Sample& sample, const std::vector<double>& grid) {
    const std::size_t n = sample.size();
    if (n < 1) throw std::domain_error("select_lno: need at least one observation");
    const std::vector<double> g = detail::dedup_grid(grid);
    static const detail::FixedRule rule(40);
    const std::vector<double>& xs = sample.sorted;
    const double nd = static_cast<double>(n);
    double best_b = g.front(), best_val = 0.0;
    bool first = true;
    for (double b : g) {
        double crit = 0.0;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double x = rule.x[j];
            const auto s = detail::criterion_sums(xs, x, b);
            // sum_i (1_i - S/n)^2 = m - 2 m S / n + S^2 / n
            const double q = s.m - 2.0 * s.m * s.S / nd + s.S * s.S / nd;
            crit += rule.w[j] * q;
        }
        crit /= nd;
        if (first || crit < best_val) {
            first = false;
            best_val = crit;
            best_b = b;
        }
    }
    return best_b;
}

} // namespace akcdf

#endif
