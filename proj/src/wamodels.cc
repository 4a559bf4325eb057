#include "ssdlab/wamodels.h"

#include <cmath>

#include "ssdlab/analytics.h"
#include "ssdlab/errors.h"

namespace ssdlab {

namespace {
constexpr double kInvE = 0.36787944117144233;  // 1/e rounded to double
}

double lambert_w0(double x) {
    if (x < -kInvE) {
        // The Xiang argument is z*e^z by construction, so values a few ulps
        // below -1/e are rounding noise, not domain errors.
        if (x > -kInvE - 1e-14)
            x = -kInvE;
        else
            throw ModelError("lambert_w0: argument below -1/e");
    }
    if (x == 0.0)
        return 0.0;

    double w;
    if (x < -0.25) {
        // Series about the branch point: w = -1 + t - t^2/3 + ..., t = sqrt(2(ex+1)).
        double t = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
        w = -1.0 + t * (1.0 - t / 3.0);
    } else if (x < 1.0) {
        w = x * (1.0 - x);  // W = x - x^2 + O(x^3)
    } else {
        double l = std::log(x);
        w = l - std::log(l > 1.0 ? l : 1.0);
    }

    for (int i = 0; i < 64; ++i) {
        double ew = std::exp(w);
        double f = w * ew - x;
        if (std::abs(f) <= 1e-12 * std::max(1.0, std::abs(x)))
            break;
        // Halley step
        double wp1 = w + 1.0;
        double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        w -= f / denom;
        if (w < -1.0)
            w = -1.0;  // stay on the principal branch
    }
    return w;
}

XiangPrediction xiang_wa(double T, double u, double q, uint32_t n_p) {
    if (!(T > 0.0) || !(u > 0.0) || n_p < 1)
        throw ModelError("xiang_wa: non-physical parameters");
    TrimParams t = trim_params(q);
    double core = t.s * (1.0 + t.s_bar) * u;
    if (core <= 1.0)
        throw ModelError("xiang_wa: needs s(1+s_bar)u > 1");

    double a = std::log(1.0 - 1.0 / core);
    double tb = T * (1.0 + t.s_bar);
    // (1 - 1/core)^(T(1+s_bar)) computed as exp(tb * a) to dodge pow()
    // underflow surprises for large exponents.
    double arg = tb * std::exp(tb * a) * a;
    double w = lambert_w0(arg);

    XiangPrediction out;
    out.w_arg = arg;
    out.y = n_p + (-w) / ((T / n_p) * (1.0 + t.s_bar) * a);
    if (!(out.y > 0.0))
        throw ModelError("xiang_wa: model breakdown (y <= 0)");
    out.wa = n_p / out.y;
    return out;
}

std::vector<double> binomial_pmf(uint32_t n, double p) {
    std::vector<double> pmf(n + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }
    // Per-term log evaluation: stable for p arbitrarily close to 0 or 1,
    // where the multiplicative recurrence anchored at pmf(0) underflows.
    double lp = std::log(p);
    double lq = std::log1p(-p);
    double lg_n = std::lgamma(n + 1.0);
    for (uint32_t m = 0; m <= n; ++m) {
        double lc = lg_n - std::lgamma(m + 1.0) - std::lgamma(static_cast<double>(n - m) + 1.0);
        pmf[m] = std::exp(lc + m * lp + (n - m) * lq);
    }
    return pmf;
}

HuPrediction hu_wa(double T, double u, double q, uint32_t n_p, uint32_t window) {
    if (n_p < 2)
        throw ModelError("hu_wa: undefined for fewer than 2 pages per block");
    TrimParams t = trim_params(q);
    double us = u * t.s;
    if (!(us > 1.0) || !(T > 0.0))
        throw ModelError("hu_wa: needs us > 1");

    uint32_t w = window != 0 ? window : static_cast<uint32_t>(T / n_p);
    if (w < 1)
        throw ModelError("hu_wa: window must be >= 1");
    double growth = 1.1 / std::pow(1.0 - 1.0 / us, static_cast<double>(n_p));

    HuPrediction out;
    out.V.assign(n_p, 1.0);
    out.window_used = 0;
    double pj = std::exp(-1.9 * (T / us - 1.0));
    for (uint32_t j = 1; j <= w; ++j) {
        if (j > 1)
            pj = std::min(1.0, pj * growth);
        out.p.push_back(pj);
        if (pj >= 1.0) {
            // Saturated: every later window block contributes v = 1 exactly,
            // so the construction is finished (A(w) == A(w+100) by design).
            break;
        }
        out.window_used = j;
        std::vector<double> pmf = binomial_pmf(n_p, pj);
        // v_{j,k} = P(Bin(n_p, p_j) > k), built as suffix sums of the pmf.
        double tail = 0.0;
        for (uint32_t k = n_p; k-- > 0;) {
            tail += pmf[k + 1];
            out.V[k] *= tail;
        }
    }

    out.p_star.assign(n_p + 1, 0.0);
    out.p_star[0] = 1.0 - out.V[0];
    for (uint32_t k = 1; k < n_p; ++k)
        out.p_star[k] = out.V[k - 1] - out.V[k];
    // The victim holds k valid pages with the law p*; the tail entry is the
    // leftover mass V_{n_p-1} so the vector telescopes to exactly 1.
    out.p_star[n_p] = out.V[n_p - 1];

    double expected_valid = 0.0;
    for (uint32_t k = 1; k <= n_p; ++k)
        expected_valid += static_cast<double>(k) * out.p_star[k];
    double freed = n_p - expected_valid;
    if (!(freed > 0.0))
        throw ModelError("hu_wa: model breakdown (no pages freed)");
    out.wa = n_p / freed;
    return out;
}

}  // namespace ssdlab
