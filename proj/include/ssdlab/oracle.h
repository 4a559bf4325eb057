// Object-space ground truth: the per-object In-Use/size tracker that every
// other component is checked against, plus an exact solver for the In-Use
// birth-death chain (birth rate (1-q)(u-x)/u, death rate q) whose stationary
// law underpins the closed-form analytics.
#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ssdlab/rng.h"
#include "ssdlab/workload.h"

namespace ssdlab {

class ObjectState {
  public:
    explicit ObjectState(uint32_t u);

    uint32_t u() const { return u_; }
    uint64_t x() const { return x_; }  // In-Use object count
    uint64_t y() const { return y_; }  // valid page count
    bool in_use(uint32_t id) const { return in_use_[id] != 0; }
    uint32_t size(uint32_t id) const { return size_[id]; }

    void apply(const Request& req);

    // Uniform draw over the current In-Use set (for Trim targeting).
    uint32_t uniform_in_use_id(Rng& rng) const;

    // Recompute (X, Y) from the flag/size vectors; used by audits.
    std::pair<uint64_t, uint64_t> recount() const;

  private:
    uint32_t u_;
    std::vector<uint8_t> in_use_;       // indexed by id, 1..u
    std::vector<uint32_t> size_;        // valid only while in_use_[id]
    std::vector<uint32_t> in_use_ids_;  // dense In-Use set for O(1) sampling
    std::vector<uint32_t> pos_;         // id -> index into in_use_ids_
    uint64_t x_ = 0;
    uint64_t y_ = 0;
};

struct UtilizationStats {
    double mean_objects = 0.0;
    double sd_objects = 0.0;
    double mean_pages = 0.0;
    double sd_pages = 0.0;
    // Valid-page count -> relative frequency over the measurement window.
    std::map<uint32_t, double> histogram_pages;
};

// Drives the workload against an ObjectState; samples X and Y after every
// request, but only inside the measurement window.
UtilizationStats run_utilization(const WorkloadParams& params, uint64_t warmup_requests,
                                 uint64_t measure_requests, Rng& rng);

// Exact stationary law of the In-Use chain over X in {0..u}. Computed from
// the detailed-balance weight ratios in log space (the weights themselves
// overflow double already for moderate u at small q).
std::vector<double> stationary_distribution(uint32_t u, double q);

struct ChainMoments {
    double mean_objects = 0.0;
    double var_objects = 0.0;
    double mean_pages = 0.0;
    double var_pages = 0.0;
    double pair_in_use = 0.0;  // E[chi_i chi_j], i != j, by exchangeability
};

// Exact moments under pi combined with the size law: E[Y] = m_Z E[X] and
// Var[Y] = sigma_Z^2 E[X] + m_Z^2 Var[X] (law of total variance over a random
// count of independent sizes); E[chi_i chi_j] = E[X(X-1)] / (u(u-1)).
ChainMoments moments_from_pi(const std::vector<double>& pi, const SizeDistribution& dist);

}  // namespace ssdlab
