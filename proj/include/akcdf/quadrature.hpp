#ifndef AKCDF_QUADRATURE_HPP
#define AKCDF_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

// Adaptive integration on (0, infinity).  The half-line is mapped onto
// (0,1) and a 15-point Gauss-Kronrod rule is refined adaptively on the
// subinterval with the largest error estimate.  Two maps are available:
// the algebraic substitution x = t/(1-t) (default) and a double
// exponential substitution x = exp(2 sinh(s)) for heavy-tailed
// integrands.

namespace akcdf {

enum class HalfLineMap { Algebraic, DoubleExponential };

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 200;
    HalfLineMap map = HalfLineMap::Algebraic;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = false;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg, QuadResult best)
        : std::runtime_error(msg), best_estimate(best) {}
    QuadResult best_estimate;
};

namespace detail {

// Kronrod-15 nodes on [0,1]; odd entries carry the embedded Gauss-7 rule.
inline constexpr double kGk15Nodes[15] = {
    0.0042723144395936940576063989283284,
    0.025446043828620756865888097308925,
    0.067567788320115451661251881887438,
    0.12923440720030276995800022632466,
    0.20695638226615442611944217787823,
    0.29707742431130140792205907018797,
    0.3961075224960507457083735971537,
    0.5,
    0.6038924775039492542916264028463,
    0.7029225756886985365667896985542,
    0.79304361773384557388055782212177,
    0.87076559279969723004199977367534,
    0.93243221167988454833874811811256,
    0.97455395617137918762296067143325,
    0.99572768556040625043124236981384};

inline constexpr double kGk15Weights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double kGauss7Weights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Interval {
    double lo, hi, value, error;
    bool operator<(const Interval& other) const { return error < other.error; }
};

template <class F>
Interval gk15(const F& g, double lo, double hi) {
    const double width = hi - lo;
    // The tabulated weights follow the [-1,1] convention (they sum to
    // 2), hence the extra factor 1/2 on a unit-length interval.
    const double scale = 0.5 * width;
    double kronrod = 0.0, gauss = 0.0, resabs = 0.0;
    for (int j = 0; j < 15; ++j) {
        const double y = g(lo + width * kGk15Nodes[j]);
        kronrod += kGk15Weights[j] * y;
        resabs += kGk15Weights[j] * std::fabs(y);
        if (j % 2 == 1) gauss += kGauss7Weights[j / 2] * y;
    }
    kronrod *= scale;
    gauss *= scale;
    resabs *= scale;
    double err = std::fabs(kronrod - gauss);
    // QUADPACK-style rescaling of the raw difference.
    if (resabs > 0.0 && err > 0.0) {
        const double scale = std::pow(200.0 * err / resabs, 1.5);
        err = resabs * std::min(1.0, scale);
    }
    return {lo, hi, kronrod, err};
}

// Adaptive refinement over (0,1) starting from the given breakpoints.
template <class F>
QuadResult adapt01(const F& g, const QuadratureSpec& spec,
                   const std::vector<double>& initial_breaks) {
    std::priority_queue<Interval> heap;
    double total = 0.0, total_err = 0.0;
    double prev = 0.0;
    std::vector<double> breaks = initial_breaks;
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    breaks.push_back(1.0);
    for (double t : breaks) {
        if (!(t > prev) || t > 1.0) continue;
        Interval iv = gk15(g, prev, t);
        total += iv.value;
        total_err += iv.error;
        heap.push(iv);
        prev = t;
    }
    int splits = 0;
    auto tolerance = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)); };
    while (total_err > tolerance() && splits < spec.max_subdivisions && !heap.empty()) {
        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (mid <= worst.lo || mid >= worst.hi) break;  // cannot split further
        Interval left = gk15(g, worst.lo, mid);
        Interval right = gk15(g, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    return {total, total_err, splits, total_err <= tolerance()};
}

} // namespace detail

// Integrate f over (0, infinity), returning the best estimate with its
// error bound; `converged` is false when the subdivision budget ran out.
// `breakpoints` (in the x domain) seed the initial partition, which is
// how piecewise integrands such as squared EDF differences are handled.
inline QuadResult try_integrate_half_line(const std::function<double(double)>& f,
                                          const QuadratureSpec& spec = {},
                                          const std::vector<double>& breakpoints = {}) {
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0))
        throw std::domain_error("quadrature: tolerances must be positive");
    if (spec.max_subdivisions < 10)
        throw std::domain_error("quadrature: max_subdivisions must be at least 10");
    if (spec.map == HalfLineMap::Algebraic) {
        auto g = [&f](double t) {
            const double om = 1.0 - t;
            const double x = t / om;
            return f(x) / (om * om);
        };
        std::vector<double> tbreaks;
        tbreaks.reserve(breakpoints.size());
        for (double x : breakpoints)
            if (x > 0.0 && std::isfinite(x)) tbreaks.push_back(x / (1.0 + x));
        return detail::adapt01(g, spec, tbreaks);
    }
    // Double exponential: x = exp(2 sinh(s)), s mapped from (0,1) via
    // s = S*(2t-1) with a fixed truncation S.
    const double S = 4.0;
    auto g = [&f, S](double t) {
        const double s = S * (2.0 * t - 1.0);
        const double x = std::exp(2.0 * std::sinh(s));
        if (!std::isfinite(x) || x <= 0.0) return 0.0;
        const double dxdt = x * 2.0 * std::cosh(s) * 2.0 * S;
        const double y = f(x) * dxdt;
        return std::isfinite(y) ? y : 0.0;
    };
    std::vector<double> tbreaks;
    for (double x : breakpoints) {
        if (!(x > 0.0) || !std::isfinite(x)) continue;
        const double s = std::asinh(0.5 * std::log(x));
        const double t = 0.5 * (s / S + 1.0);
        if (t > 0.0 && t < 1.0) tbreaks.push_back(t);
    }
    return detail::adapt01(g, spec, tbreaks);
}

inline double integrate_half_line(const std::function<double(double)>& f,
                                  const QuadratureSpec& spec = {},
                                  const std::vector<double>& breakpoints = {}) {
    QuadResult r = try_integrate_half_line(f, spec, breakpoints);
    if (!r.converged)
        throw QuadratureError("integrate_half_line: did not converge within subdivision budget", r);
    return r.value;
}

} // namespace akcdf

#endif
