// Single-pass streaming moments. Welford's update keeps the variance stable
// over long windows (~1e7 samples at magnitudes ~1e4 would lose digits with a
// naive sum-of-squares), and the mean increment is Kahan-compensated.
#pragma once

#include <cmath>
#include <cstdint>

namespace ssdlab {

class RunningStat {
  public:
    void add(double x) {
        n_ += 1;
        double delta = x - mean_;
        double term = delta / static_cast<double>(n_) - comp_;
        double next = mean_ + term;
        comp_ = (next - mean_) - term;
        mean_ = next;
        m2_ += delta * (x - mean_);
    }

    uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    // Population variance: these are time averages over a fixed window, not
    // samples from which an unbiased estimate is wanted.
    double variance() const { return n_ > 0 ? m2_ / static_cast<double>(n_) : 0.0; }
    double sd() const { return std::sqrt(variance()); }

  private:
    uint64_t n_ = 0;
    double mean_ = 0.0;
    double comp_ = 0.0;  // Kahan carry for the mean
    double m2_ = 0.0;
};

}  // namespace ssdlab
