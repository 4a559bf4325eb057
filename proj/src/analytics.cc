#include "ssdlab/analytics.h"

#include <cmath>

#include "ssdlab/errors.h"

namespace ssdlab {

TrimParams trim_params(double q) {
    if (!(q >= 0.0) || q >= 0.5)
        throw UsageError("trim parameters are defined for 0 <= q < 0.5");
    return {(1.0 - 2.0 * q) / (1.0 - q), q / (1.0 - q)};
}

Moments object_moments(uint32_t u, double q) {
    TrimParams t = trim_params(q);
    return {u * t.s, u * t.s_bar};
}

AnalyticMoments page_moments(uint32_t u, double q, const SizeDistribution& dist) {
    Moments obj = object_moments(u, q);
    double mz = dist.mean();
    AnalyticMoments out;
    out.mean_objects = obj.mean;
    out.var_objects = obj.variance;
    out.mean_pages = mz * obj.mean;
    out.var_pages = dist.variance() * obj.mean + mz * mz * obj.variance;
    return out;
}

double pair_in_use_expectation(uint32_t u, double q) {
    if (u < 2)
        throw UsageError("pairwise In-Use expectation needs u >= 2");
    TrimParams t = trim_params(q);
    return t.s * (u * t.s - 1.0 + t.s_bar / t.s) / (u - 1.0);
}

double covariance_chi(uint32_t u, double q) {
    if (u < 2)
        throw UsageError("In-Use covariance needs u >= 2");
    TrimParams t = trim_params(q);
    return t.s_bar * t.s_bar / (u - 1.0);
}

double effective_spare(double q, double s_f) {
    if (!(s_f >= 0.0) || s_f > 1.0)
        throw UsageError("spare factor must lie in [0, 1]");
    TrimParams t = trim_params(q);
    return t.s_bar + t.s * s_f;
}

double gaussian_pdf(double mean, double variance, double x) {
    if (!(variance > 0.0))
        throw UsageError("gaussian pdf needs positive variance");
    double d = x - mean;
    return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * M_PI * variance);
}

}  // namespace ssdlab
