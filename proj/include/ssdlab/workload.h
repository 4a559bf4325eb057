// Trim-modified uniform random object workload.
//
// Each request is a Trim with probability q (target drawn uniformly from the
// current In-Use objects) and otherwise a Write with object ID uniform on
// [1, u] and a size drawn from the configured distribution. The derived
// constants s = (1-2q)/(1-q) and s_bar = q/(1-q) govern the steady state:
// the In-Use count fluctuates around u*s with variance u*s_bar.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssdlab/rng.h"

namespace ssdlab {

class ObjectState;  // oracle.h

enum class SizeKind { Fixed, DiscreteUniform, Binomial };

// Object-size law with closed-form moments. Binomial samples are truncated
// at 1 by redraw unless the flag is cleared; moments are always the
// untruncated n*p and n*p*(1-p) (the truncated mass is ~8e-9 at (32, 0.4),
// far below every tolerance used downstream).
class SizeDistribution {
  public:
    static SizeDistribution fixed(uint32_t b);
    static SizeDistribution discrete_uniform(uint32_t b1, uint32_t b2);
    static SizeDistribution binomial(uint32_t n, double p, bool truncate_at_1 = true);

    SizeKind kind() const { return kind_; }
    uint32_t min_pages() const;  // B1
    uint32_t max_pages() const;  // B2
    double mean() const;         // m_Z
    double variance() const;     // sigma_Z^2
    double sd() const;
    bool truncated() const { return truncate_; }

    uint32_t sample(Rng& rng) const;

    // Short label for CSV metadata / file names, e.g. "fixed32", "duniform1-32",
    // "binomial32x0.4".
    std::string label() const;

  private:
    SizeDistribution() = default;

    SizeKind kind_ = SizeKind::Fixed;
    uint32_t b_ = 1;             // Fixed
    uint32_t b1_ = 1, b2_ = 1;   // DiscreteUniform bounds (also exposed for the others)
    uint32_t n_ = 1;             // Binomial trials
    double p_ = 0.5;             // Binomial success probability
    bool truncate_ = true;
    std::vector<double> cdf_;    // Binomial CDF table for inversion sampling
};

struct WorkloadParams {
    uint32_t u = 1000;  // object-ID universe size
    double q = 0.0;     // trim probability, 0 <= q < 0.5
    SizeDistribution size_dist = SizeDistribution::fixed(1);

    void validate() const;  // throws UsageError
};

struct Request {
    enum Kind : uint8_t { Write, Trim };
    Kind kind;
    uint32_t object_id;   // 1..u
    uint32_t size_pages;  // Write only; 0 for Trim
};

uint32_t sample_size(const SizeDistribution& dist, Rng& rng);

// Draws the next request. A Trim draw against an empty In-Use set degrades to
// a Write (reflecting boundary at X = 0; unreachable in steady state for
// q < 0.5 with non-trivial u, but the rule needs to exist).
Request next_request(const WorkloadParams& params, const ObjectState& state, Rng& rng);

}  // namespace ssdlab
