#ifndef AKCDF_ESTIMATORS_HPP
#define AKCDF_ESTIMATORS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "akcdf/kernels.hpp"

// The ten c.d.f. estimators under comparison: the seven asymmetric
// kernel smoothers, the ordinary (Epanechnikov) kernel estimator, its
// boundary-corrected variant, and the empirical distribution function.

namespace akcdf {

enum class EstimatorKind { Gam, IGam, LN, IGau, RIG, BS, W, OK, BK, EDF };

inline const char* estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Gam: return "Gam";
        case EstimatorKind::IGam: return "IGam";
        case EstimatorKind::LN: return "LN";
        case EstimatorKind::IGau: return "IGau";
        case EstimatorKind::RIG: return "RIG";
        case EstimatorKind::BS: return "BS";
        case EstimatorKind::W: return "W";
        case EstimatorKind::OK: return "OK";
        case EstimatorKind::BK: return "BK";
        case EstimatorKind::EDF: return "EDF";
    }
    return "?";
}

// 1-based index in the fixed comparison order.
inline int estimator_index(EstimatorKind kind) { return static_cast<int>(kind) + 1; }

inline bool is_asymmetric_kernel(EstimatorKind kind) {
    return static_cast<int>(kind) <= static_cast<int>(EstimatorKind::W);
}

inline KernelKind to_kernel_kind(EstimatorKind kind) {
    if (!is_asymmetric_kernel(kind))
        throw std::domain_error("to_kernel_kind: not an asymmetric kernel estimator");
    return static_cast<KernelKind>(static_cast<int>(kind));
}

// Observations sorted ascending; provenance records how they were drawn.
struct Sample {
    std::vector<double> sorted;
    std::uint64_t seed = 0;
    std::string law;

    explicit Sample(std::vector<double> observations,
                    std::uint64_t seed_value = 0, std::string law_name = {})
        : sorted(std::move(observations)), seed(seed_value), law(std::move(law_name)) {
        if (sorted.empty()) throw std::domain_error("Sample: need at least one observation");
        for (double v : sorted)
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::domain_error("Sample: observations must be positive and finite");
        std::sort(sorted.begin(), sorted.end());
    }

    std::size_t size() const { return sorted.size(); }
};

// C.d.f. of the Epanechnikov kernel.
inline double epanechnikov_cdf(double u) {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return 0.5 + 0.75 * u - 0.25 * u * u * u;
}

namespace detail {

// Compensated (Kahan) accumulator so estimator sums are independent of
// evaluation order and deterministic to the last bit.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

namespace detail {

// Mean of Epa_cdf((x - X_i) / h) over the sample; observations outside
// (x-h, x+h) contribute exactly 0 or 1, so only the window is summed.
inline double epanechnikov_mean(const std::vector<double>& sorted, double x, double h) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), x - h);
    const auto hi = std::lower_bound(sorted.begin(), sorted.end(), x + h);
    KahanSum acc;
    acc.add(static_cast<double>(lo - sorted.begin()));
    for (auto it = lo; it != hi; ++it) acc.add(epanechnikov_cdf((x - *it) / h));
    return acc.sum / static_cast<double>(sorted.size());
}

} // namespace detail

// Boundary-corrected Epanechnikov estimator: the bandwidth shrinks to
// x inside the boundary strip (0, b).
inline double evaluate_bk(const Sample& sample, double b, double x) {
    if (!(b > 0.0)) throw std::domain_error("evaluate_bk: b must be positive");
    if (!(x > 0.0)) throw std::domain_error("evaluate_bk: x must be positive");
    const double h = (x >= b) ? b : x;
    return detail::epanechnikov_mean(sample.sorted, x, h);
}

class FittedEstimator {
public:
    FittedEstimator(EstimatorKind kind, Sample sample, double bandwidth = 0.0)
        : kind_(kind), sample_(std::move(sample)), bandwidth_(bandwidth) {
        if (kind != EstimatorKind::EDF) {
            if (!(bandwidth > 0.0))
                throw std::domain_error("FittedEstimator: bandwidth must be positive");
            if (kind == EstimatorKind::RIG && bandwidth >= 1.0)
                throw std::domain_error("FittedEstimator: RIG bandwidth must be below 1");
        }
    }

    EstimatorKind kind() const { return kind_; }
    const Sample& sample() const { return sample_; }
    double bandwidth() const { return bandwidth_; }

    double operator()(double x) const {
        const double n = static_cast<double>(sample_.size());
        switch (kind_) {
            case EstimatorKind::EDF: {
                if (x < 0.0) throw std::domain_error("evaluate: x must be nonnegative");
                const auto it = std::upper_bound(sample_.sorted.begin(), sample_.sorted.end(), x);
                return static_cast<double>(it - sample_.sorted.begin()) / n;
            }
            case EstimatorKind::OK:
                if (x < 0.0) throw std::domain_error("evaluate: x must be nonnegative");
                return detail::epanechnikov_mean(sample_.sorted, x, bandwidth_);
            case EstimatorKind::BK:
                if (x < 0.0) throw std::domain_error("evaluate: x must be nonnegative");
                if (x == 0.0) return 0.0;
                return evaluate_bk(sample_, bandwidth_, x);
            default: {
                if (x < 0.0) throw std::domain_error("evaluate: x must be nonnegative");
                if (x == 0.0) return 0.0;  // continuity limit: all kernel mass is on (0,inf)
                const KernelKind kernel = to_kernel_kind(kind_);
                detail::KahanSum acc;
                for (double xi : sample_.sorted)
                    acc.add(kernel_survival(kernel, xi, x, bandwidth_));
                const double v = acc.sum / n;
                return std::min(1.0, std::max(0.0, v));
            }
        }
    }

private:
    EstimatorKind kind_;
    Sample sample_;
    double bandwidth_;
};

} // namespace akcdf

#endif
