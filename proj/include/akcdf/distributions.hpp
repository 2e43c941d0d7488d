#ifndef AKCDF_DISTRIBUTIONS_HPP
#define AKCDF_DISTRIBUTIONS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "akcdf/rng.hpp"
#include "akcdf/specfun.hpp"

// The simulation target laws on (0, infinity): density, c.d.f., the
// analytic density derivative (needed by the asymptotic expansions) and
// exact random variate generation.

namespace akcdf {

enum class TargetKind { Burr, Gamma, GeneralizedPareto, HalfNormal, LogNormal, Weibull };

namespace detail {

// Marsaglia-Tsang gamma generator, exact for all shape > 0 (scale 1).
inline double gamma_variate(RngStream& rng, double shape) {
    if (shape < 1.0) {
        const double u = rng.uniform();
        return gamma_variate(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z, v;
        do {
            z = rng.normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double z2 = z * z;
        if (u < 1.0 - 0.0331 * z2 * z2) return d * v;
        if (std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

// Michael-Schucany-Haas inverse Gaussian generator.
inline double inverse_gaussian_variate(RngStream& rng, double mu, double lambda) {
    const double z = rng.normal();
    const double y = z * z;
    const double x = mu + mu * mu * y / (2.0 * lambda)
        - (mu / (2.0 * lambda)) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    const double u = rng.uniform();
    return (u <= mu / (mu + x)) ? x : mu * mu / x;
}

} // namespace detail

class TargetDistribution {
public:
    static TargetDistribution burr(double lambda, double c, double k) {
        require(lambda > 0.0 && c > 0.0 && k > 0.0, "Burr parameters must be positive");
        return {TargetKind::Burr, {lambda, c, k},
                "Burr(" + fmt(lambda) + "," + fmt(c) + "," + fmt(k) + ")"};
    }
    static TargetDistribution gamma(double alpha, double theta) {
        require(alpha > 0.0 && theta > 0.0, "Gamma parameters must be positive");
        return {TargetKind::Gamma, {alpha, theta},
                "Gamma(" + fmt(alpha) + "," + fmt(theta) + ")"};
    }
    static TargetDistribution generalized_pareto(double xi, double sigma, double mu) {
        require(xi > 0.0 && sigma > 0.0, "GPD requires xi, sigma > 0");
        require(mu == 0.0, "GPD is restricted to mu = 0 (support (0,inf))");
        return {TargetKind::GeneralizedPareto, {xi, sigma, mu},
                "GeneralizedPareto(" + fmt(xi) + "," + fmt(sigma) + "," + fmt(mu) + ")"};
    }
    static TargetDistribution half_normal(double sigma) {
        require(sigma > 0.0, "HalfNormal scale must be positive");
        return {TargetKind::HalfNormal, {sigma}, "HalfNormal(" + fmt(sigma) + ")"};
    }
    static TargetDistribution log_normal(double mu, double sigma) {
        require(sigma > 0.0, "LogNormal sigma must be positive");
        return {TargetKind::LogNormal, {mu, sigma},
                "LogNormal(" + fmt(mu) + "," + fmt(sigma) + ")"};
    }
    static TargetDistribution weibull(double lambda, double k) {
        require(lambda > 0.0 && k > 0.0, "Weibull parameters must be positive");
        return {TargetKind::Weibull, {lambda, k},
                "Weibull(" + fmt(lambda) + "," + fmt(k) + ")"};
    }

    TargetKind kind() const { return kind_; }
    const std::vector<double>& params() const { return params_; }
    const std::string& name() const { return name_; }

    double pdf(double x) const {
        if (!(x > 0.0)) throw std::domain_error("pdf: x must be positive");
        switch (kind_) {
            case TargetKind::Burr: {
                const double l = params_[0], c = params_[1], k = params_[2];
                const double r = std::pow(x / l, c);
                return (c * k / l) * std::pow(x / l, c - 1.0) * std::pow(1.0 + r, -k - 1.0);
            }
            case TargetKind::Gamma: {
                const double a = params_[0], t = params_[1];
                return std::exp((a - 1.0) * std::log(x) - x / t - a * std::log(t) - ln_gamma(a));
            }
            case TargetKind::GeneralizedPareto: {
                const double xi = params_[0], s = params_[1];
                return (1.0 / s) * std::pow(1.0 + xi * x / s, -1.0 / xi - 1.0);
            }
            case TargetKind::HalfNormal: {
                const double s = params_[0];
                return std::sqrt(2.0 / (M_PI * s * s)) * std::exp(-x * x / (2.0 * s * s));
            }
            case TargetKind::LogNormal: {
                const double m = params_[0], s = params_[1];
                const double z = (std::log(x) - m) / s;
                return std::exp(-0.5 * z * z) / (x * s * std::sqrt(2.0 * M_PI));
            }
            case TargetKind::Weibull: {
                const double l = params_[0], k = params_[1];
                const double r = std::pow(x / l, k);
                return (k / l) * std::pow(x / l, k - 1.0) * std::exp(-r);
            }
        }
        return 0.0;
    }

    double cdf(double x) const {
        if (x < 0.0) throw std::domain_error("cdf: x must be nonnegative");
        if (x == 0.0) return 0.0;
        switch (kind_) {
            case TargetKind::Burr: {
                const double l = params_[0], c = params_[1], k = params_[2];
                return 1.0 - std::pow(1.0 + std::pow(x / l, c), -k);
            }
            case TargetKind::Gamma:
                return 1.0 - reg_upper_inc_gamma(params_[0], x / params_[1]);
            case TargetKind::GeneralizedPareto: {
                const double xi = params_[0], s = params_[1];
                return 1.0 - std::pow(1.0 + xi * x / s, -1.0 / xi);
            }
            case TargetKind::HalfNormal:
                return std::erf(x / (params_[0] * std::sqrt(2.0)));
            case TargetKind::LogNormal:
                return std_normal_cdf((std::log(x) - params_[0]) / params_[1]);
            case TargetKind::Weibull:
                return -std::expm1(-std::pow(x / params_[0], params_[1]));
        }
        return 0.0;
    }

    // d/dx pdf(x), analytic per law.
    double pdf_deriv(double x) const {
        if (!(x > 0.0)) throw std::domain_error("pdf_deriv: x must be positive");
        const double f = pdf(x);
        switch (kind_) {
            case TargetKind::Burr: {
                const double l = params_[0], c = params_[1], k = params_[2];
                const double r = std::pow(x / l, c);
                return f * ((c - 1.0) / x - (k + 1.0) * c * r / (x * (1.0 + r)));
            }
            case TargetKind::Gamma:
                return f * ((params_[0] - 1.0) / x - 1.0 / params_[1]);
            case TargetKind::GeneralizedPareto: {
                const double xi = params_[0], s = params_[1];
                return f * (-(1.0 / xi + 1.0) * xi / (s + xi * x));
            }
            case TargetKind::HalfNormal:
                return f * (-x / (params_[0] * params_[0]));
            case TargetKind::LogNormal: {
                const double m = params_[0], s = params_[1];
                return -f * (1.0 + (std::log(x) - m) / (s * s)) / x;
            }
            case TargetKind::Weibull: {
                const double l = params_[0], k = params_[1];
                const double r = std::pow(x / l, k);
                return f * ((k - 1.0) / x - k * r / x);
            }
        }
        return 0.0;
    }

    std::vector<double> sample(RngStream& rng, std::size_t n) const {
        if (n < 1) throw std::domain_error("sample: n must be at least 1");
        std::vector<double> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(draw(rng));
        return out;
    }

    double draw(RngStream& rng) const {
        switch (kind_) {
            case TargetKind::Burr: {
                const double l = params_[0], c = params_[1], k = params_[2];
                const double u = rng.uniform();
                return l * std::pow(std::pow(1.0 - u, -1.0 / k) - 1.0, 1.0 / c);
            }
            case TargetKind::Gamma:
                return params_[1] * detail::gamma_variate(rng, params_[0]);
            case TargetKind::GeneralizedPareto: {
                const double xi = params_[0], s = params_[1];
                const double u = rng.uniform();
                return s * (std::pow(1.0 - u, -xi) - 1.0) / xi;
            }
            case TargetKind::HalfNormal:
                return params_[0] * std::fabs(rng.normal());
            case TargetKind::LogNormal:
                return std::exp(params_[0] + params_[1] * rng.normal());
            case TargetKind::Weibull: {
                const double l = params_[0], k = params_[1];
                return l * std::pow(rng.exponential(), 1.0 / k);
            }
        }
        return 0.0;
    }

private:
    TargetDistribution(TargetKind kind, std::vector<double> params, std::string name)
        : kind_(kind), params_(std::move(params)), name_(std::move(name)) {}

    static void require(bool ok, const char* msg) {
        if (!ok) throw std::domain_error(msg);
    }
    static std::string fmt(double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    TargetKind kind_;
    std::vector<double> params_;
    std::string name_;
};

// The eight laws of the simulation study, indexed 1..8.
inline std::vector<TargetDistribution> study_distributions() {
    return {
        TargetDistribution::burr(1.0, 3.0, 1.0),
        TargetDistribution::gamma(0.6, 2.0),
        TargetDistribution::gamma(4.0, 2.0),
        TargetDistribution::generalized_pareto(0.4, 1.0, 0.0),
        TargetDistribution::half_normal(1.0),
        TargetDistribution::log_normal(0.0, 0.75),
        TargetDistribution::weibull(1.5, 1.5),
        TargetDistribution::weibull(3.0, 2.0),
    };
}

} // namespace akcdf

#endif
