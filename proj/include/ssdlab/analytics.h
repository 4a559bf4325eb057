// Closed-form steady-state utilization and overprovisioning analytics for the
// Trim-modified uniform workload.
#pragma once

#include "ssdlab/workload.h"

namespace ssdlab {

struct TrimParams {
    double s;      // (1-2q)/(1-q): steady-state In-Use fraction
    double s_bar;  // q/(1-q): steady-state not-In-Use (trimmed) fraction
};

TrimParams trim_params(double q);  // 0 <= q < 0.5, else UsageError

struct Moments {
    double mean;
    double variance;
};

// In-Use object count: mean u*s, variance u*s_bar.
Moments object_moments(uint32_t u, double q);

struct AnalyticMoments {
    double mean_objects;
    double var_objects;
    double mean_pages;
    double var_pages;
};

// Valid pages: mean m_Z*u*s, variance sigma_Z^2*u*s + m_Z^2*u*s_bar.
// For Fixed(b) this reduces exactly to (b*u*s, b^2*u*s_bar).
AnalyticMoments page_moments(uint32_t u, double q, const SizeDistribution& dist);

// E[chi_i chi_j] for i != j: s(us - 1 + s_bar/s)/(u-1), algebraically equal
// to s_bar^2/(u-1) + s^2. Requires u >= 2.
double pair_in_use_expectation(uint32_t u, double q);

// Cov(chi_i, chi_j) = s_bar^2/(u-1). Requires u >= 2.
double covariance_chi(uint32_t u, double q);

// Effective spare factor including trimmed space: s_bar + s*S_f.
double effective_spare(double q, double s_f);

// Gaussian density; variance must be positive.
double gaussian_pdf(double mean, double variance, double x);

}  // namespace ssdlab
