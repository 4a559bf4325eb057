// Analytic write-amplification predictors for the greedy-GC log-structured
// device under the Trim-modified uniform workload:
//  - a pages-per-block-aware fill model solved with the Lambert W function;
//  - an iterative windowed-greedy construction that multiplies per-window
//    binomial survival probabilities into the victim valid-count law.
#pragma once

#include <cstdint>
#include <vector>

namespace ssdlab {

// Principal branch W0 (w >= -1) of w*e^w = x, for x >= -1/e. Initial guess
// plus Halley iteration to |w e^w - x| <= 1e-12 * max(1, |x|).
double lambert_w0(double x);

struct XiangPrediction {
    double wa;     // n_p / y
    double y;      // expected pages freed by a GC pass per block
    double w_arg;  // the argument handed to lambert_w0 (diagnostic)
};

// T total pages, u user objects (one-page equivalents), trim probability q,
// n_p pages per block. u*s is kept as a real number throughout.
XiangPrediction xiang_wa(double T, double u, double q, uint32_t n_p);

struct HuPrediction {
    double wa;
    uint32_t window_used;        // window blocks actually multiplied in
    std::vector<double> p;       // fill probabilities p_j (last may be the cap 1)
    std::vector<double> V;       // V_k, k = 0..n_p-1
    std::vector<double> p_star;  // victim valid-count law, k = 0..n_p
};

// window = 0 selects the default T/n_p (the whole device); the construction
// saturates once p_j hits the cap at 1, so any larger window gives the same
// answer. Undefined for n_p < 2.
HuPrediction hu_wa(double T, double u, double q, uint32_t n_p, uint32_t window = 0);

// Stable binomial pmf over {0..n} (log-gamma based, safe for p near 0 or 1);
// sums to 1 within 1e-9 for n <= a few thousand.
std::vector<double> binomial_pmf(uint32_t n, double p);

}  // namespace ssdlab
