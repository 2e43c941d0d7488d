#ifndef AKCDF_ISE_HPP
#define AKCDF_ISE_HPP

#include <cmath>
#include <vector>

#include "akcdf/distributions.hpp"
#include "akcdf/estimators.hpp"
#include "akcdf/quadrature.hpp"

namespace akcdf {

namespace detail {

// Initial partition hints for piecewise integrands: the EDF jumps at
// every observation, the Epanechnikov estimators have spline knots at
// X_i +/- h.  Smooth kernels need no hints.
inline std::vector<double> ise_breakpoints(const FittedEstimator& est) {
    std::vector<double> pts;
    switch (est.kind()) {
        case EstimatorKind::EDF:
            pts = est.sample().sorted;
            break;
        case EstimatorKind::OK:
        case EstimatorKind::BK: {
            // spline knots sit at X_i +/- h, so isolating each ramp makes
            // every initial interval a smooth piece
            const double b = est.bandwidth();
            pts.reserve(2 * est.sample().size() + 2);
            for (double xi : est.sample().sorted) {
                pts.push_back(xi - b);
                pts.push_back(xi + b);
                // in the boundary strip the bandwidth is x, with a knot
                // where (x - X_i) / x = -1
                if (est.kind() == EstimatorKind::BK && xi < 2.0 * b)
                    pts.push_back(0.5 * xi);
            }
            pts.push_back(b);
            break;
        }
        default:
            pts.push_back(est.sample().sorted.front());
            pts.push_back(est.sample().sorted.back());
            break;
    }
    return pts;
}

} // namespace detail

// Integrated squared error against the true c.d.f.; the squared
// difference is clipped at zero to absorb negative round-off.
inline double ise(const FittedEstimator& est, const TargetDistribution& truth,
                  const QuadratureSpec& spec = {}) {
    auto integrand = [&](double x) {
        const double d = est(x) - truth.cdf(x);
        const double v = d * d;
        return (v > 0.0) ? v : 0.0;
    };
    return integrate_half_line(integrand, spec, detail::ise_breakpoints(est));
}

} // namespace akcdf

#endif
