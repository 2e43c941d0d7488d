#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "akcdf/distributions.hpp"
#include "akcdf/kernels.hpp"
#include "akcdf/rng.hpp"

using namespace akcdf;

namespace {

// One-sample Kolmogorov-Smirnov distance of draws against a cdf.
double ks_distance(std::vector<double> draws, const std::function<double(double)>& cdf) {
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    double d = 0.0;
    for (std::size_t i = 0; i < draws.size(); ++i) {
        const double F = cdf(draws[i]);
        d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - F));
    }
    return d;
}

} // namespace

TEST_CASE("density reference values") {
    CHECK(TargetDistribution::burr(1.0, 3.0, 1.0).pdf(1.0) == Catch::Approx(0.75).epsilon(1e-14));
    // half-normal density limit at the origin is sqrt(2/pi)/sigma
    CHECK(TargetDistribution::half_normal(1.0).pdf(1e-12)
          == Catch::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-10));
    // frozen high-precision value
    CHECK(TargetDistribution::gamma(4.0, 2.0).pdf(2.0)
          == Catch::Approx(0.030656620097620193466).epsilon(1e-13));
    CHECK(TargetDistribution::weibull(1.0, 1.0).pdf(1.3)
          == Catch::Approx(std::exp(-1.3)).epsilon(1e-14));
    CHECK(TargetDistribution::log_normal(0.0, 1.0).pdf(1.0)
          == Catch::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("cdf reference values and limits") {
    CHECK(TargetDistribution::burr(1.0, 3.0, 1.0).cdf(1.0) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(TargetDistribution::weibull(1.0, 1.0).cdf(2.0)
          == Catch::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
    const auto gpd = TargetDistribution::generalized_pareto(0.4, 1.0, 0.0);
    CHECK(gpd.cdf(1.0) == Catch::Approx(1.0 - std::pow(1.4, -2.5)).epsilon(1e-13));
    for (const auto& law : study_distributions()) {
        INFO(law.name());
        CHECK(law.cdf(0.0) == 0.0);
        CHECK(law.cdf(1e9) == Catch::Approx(1.0).margin(1e-6));
        CHECK_THROWS_AS(law.cdf(-0.1), std::domain_error);
        CHECK_THROWS_AS(law.pdf(0.0), std::domain_error);
    }
}

TEST_CASE("pdf is the derivative of cdf and pdf_deriv the derivative of pdf") {
    for (const auto& law : study_distributions()) {
        INFO(law.name());
        for (double x : {0.4, 1.0, 2.3}) {
            const double h = 1e-5 * x;
            const double dF = (law.cdf(x + h) - law.cdf(x - h)) / (2.0 * h);
            CHECK(dF == Catch::Approx(law.pdf(x)).epsilon(1e-6).margin(1e-9));
            const double df = (law.pdf(x + h) - law.pdf(x - h)) / (2.0 * h);
            CHECK(df == Catch::Approx(law.pdf_deriv(x)).epsilon(1e-5).margin(1e-8));
        }
    }
}

TEST_CASE("samplers pass a Kolmogorov-Smirnov check at the 1% level") {
    const std::size_t n = 10000;
    const double crit = 1.63 / std::sqrt(static_cast<double>(n));
    std::uint64_t stream = 0;
    for (const auto& law : study_distributions()) {
        INFO(law.name());
        RngStream rng(9182736, stream++);
        const double d = ks_distance(law.sample(rng, n), [&](double x) { return law.cdf(x); });
        CHECK(d < crit);
    }
}

TEST_CASE("sampler moments match Weibull theory") {
    // Weibull(lambda=1.5, k=1.5): mean = lambda * Gamma(1 + 1/k)
    const auto w = TargetDistribution::weibull(1.5, 1.5);
    RngStream rng(4, 7);
    const auto draws = w.sample(rng, 200000);
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / draws.size();
    const double expected = 1.5 * std::exp(ln_gamma(1.0 + 2.0 / 3.0));
    CHECK(mean == Catch::Approx(expected).epsilon(0.01));
}

TEST_CASE("sampling is deterministic given the stream") {
    for (const auto& law : study_distributions()) {
        RngStream a(77, 5), b(77, 5), c(77, 6);
        const auto da = law.sample(a, 50);
        const auto db = law.sample(b, 50);
        const auto dc = law.sample(c, 50);
        CHECK(da == db);
        CHECK(da != dc);
        for (double v : da) CHECK(v > 0.0);
    }
}

TEST_CASE("invalid distribution parameters are rejected") {
    CHECK_THROWS_AS(TargetDistribution::gamma(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(TargetDistribution::burr(1.0, -3.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(TargetDistribution::generalized_pareto(0.4, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(TargetDistribution::weibull(1.0, 0.0), std::domain_error);
}

TEST_CASE("kernel survival functions behave like smoothed indicators") {
    const std::vector<KernelKind> kinds = {
        KernelKind::Gam, KernelKind::IGam, KernelKind::LN, KernelKind::IGau,
        KernelKind::RIG, KernelKind::BS, KernelKind::W};
    for (KernelKind kind : kinds) {
        for (double x : {0.3, 1.0, 4.0}) {
            for (double b : {0.3, 0.05, 0.005}) {
                CHECK(kernel_survival(kind, 0.0, x, b) == 1.0);
                double prev = 1.0;
                for (double t = 0.05; t < 6.0 * x; t += 0.05 * x) {
                    const double s = kernel_survival(kind, t, x, b);
                    CHECK(s >= 0.0);
                    CHECK(s <= 1.0);
                    CHECK(s <= prev + 1e-12);
                    prev = s;
                }
                // as b -> 0 the survival approaches 1{t <= x}
                if (b <= 0.005) {
                    CHECK(kernel_survival(kind, 0.5 * x, x, b) > 0.99);
                    CHECK(kernel_survival(kind, 2.0 * x, x, b) < 0.01);
                }
            }
        }
    }
}

TEST_CASE("kernel survival pointwise values") {
    // LN and BS kernels have median exactly x
    for (double x : {0.5, 2.0})
        for (double b : {0.2, 0.01}) {
            CHECK(kernel_survival(KernelKind::LN, x, x, b) == Catch::Approx(0.5).epsilon(1e-12));
            CHECK(kernel_survival(KernelKind::BS, x, x, b) == Catch::Approx(0.5).epsilon(1e-12));
        }
    // Weibull kernel at its scale point: survival = e^-1
    const double b = 0.1;
    const double lambda = 2.0 / std::exp(ln_gamma(1.0 + b));
    CHECK(kernel_survival(KernelKind::W, lambda, 2.0, b)
          == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
    // Gam kernel with x/b+1 = 2: survival at t is e^{-t/b}(1 + t/b)
    CHECK(kernel_survival(KernelKind::Gam, 0.7, 0.5, 0.5)
          == Catch::Approx(std::exp(-1.4) * 2.4).epsilon(1e-12));
}

TEST_CASE("kernel argument checks") {
    CHECK_THROWS_AS(kernel_survival(KernelKind::Gam, 1.0, 0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(kernel_survival(KernelKind::Gam, 1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(kernel_survival(KernelKind::Gam, -1.0, 1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(kernel_survival(KernelKind::RIG, 1.0, 1.0, 1.0), std::domain_error);
    CHECK_NOTHROW(kernel_survival(KernelKind::RIG, 1.0, 1.0, 0.99));
}

TEST_CASE("kernel sampling matches the survival function") {
    for (KernelKind kind : {KernelKind::IGau, KernelKind::RIG}) {
        for (double x : {0.5, 2.0}) {
            const double b = 0.02;
            RngStream rng(31, static_cast<std::uint64_t>(kind));
            auto draws = sample_kernel(kind, x, b, rng, 20000);
            const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / draws.size();
            // both kernels are centered near x for small b
            CHECK(mean == Catch::Approx(x).epsilon(0.05));
            const double crit = 1.63 / std::sqrt(20000.0);
            const double d = ks_distance(std::move(draws), [&](double t) {
                return 1.0 - kernel_survival(kind, t, x, b);
            });
            CHECK(d < crit);
        }
    }
    RngStream rng(1, 1);
    CHECK_THROWS_AS(sample_kernel(KernelKind::Gam, 1.0, 0.1, rng, 10), std::domain_error);
}
