#include "ssdlab/workload.h"

#include <cmath>
#include <cstdio>

#include "ssdlab/errors.h"
#include "ssdlab/oracle.h"

namespace ssdlab {

SizeDistribution SizeDistribution::fixed(uint32_t b) {
    if (b < 1)
        throw UsageError("fixed object size must be >= 1 page");
    SizeDistribution d;
    d.kind_ = SizeKind::Fixed;
    d.b_ = b;
    d.b1_ = d.b2_ = b;
    return d;
}

SizeDistribution SizeDistribution::discrete_uniform(uint32_t b1, uint32_t b2) {
    if (b1 < 1 || b1 > b2)
        throw UsageError("discrete uniform size bounds need 1 <= B1 <= B2");
    SizeDistribution d;
    d.kind_ = SizeKind::DiscreteUniform;
    d.b1_ = b1;
    d.b2_ = b2;
    return d;
}

SizeDistribution SizeDistribution::binomial(uint32_t n, double p, bool truncate_at_1) {
    if (n < 1 || !(p > 0.0) || !(p < 1.0))
        throw UsageError("binomial size law needs n >= 1 and 0 < p < 1");
    SizeDistribution d;
    d.kind_ = SizeKind::Binomial;
    d.n_ = n;
    d.p_ = p;
    d.truncate_ = truncate_at_1;
    d.b1_ = truncate_at_1 ? 1 : 0;
    d.b2_ = n;
    // CDF table for inversion sampling: running product recurrence for the
    // pmf, accumulated. n is small (tens), so precision is not a concern.
    d.cdf_.resize(n + 1);
    double pmf = std::pow(1.0 - p, n);
    double acc = pmf;
    d.cdf_[0] = acc;
    for (uint32_t m = 0; m < n; ++m) {
        pmf *= (static_cast<double>(n - m) / (m + 1)) * (p / (1.0 - p));
        acc += pmf;
        d.cdf_[m + 1] = acc;
    }
    d.cdf_[n] = 1.0;  // clamp the rounding tail
    return d;
}

uint32_t SizeDistribution::min_pages() const {
    return b1_;
}

uint32_t SizeDistribution::max_pages() const {
    return b2_;
}

double SizeDistribution::mean() const {
    switch (kind_) {
        case SizeKind::Fixed:
            return b_;
        case SizeKind::DiscreteUniform:
            return (static_cast<double>(b1_) + b2_) / 2.0;
        case SizeKind::Binomial:
            return n_ * p_;  // untruncated on purpose, see header
    }
    return 0.0;
}

double SizeDistribution::variance() const {
    switch (kind_) {
        case SizeKind::Fixed:
            return 0.0;
        case SizeKind::DiscreteUniform: {
            double span = static_cast<double>(b2_) - b1_ + 1.0;
            return (span * span - 1.0) / 12.0;
        }
        case SizeKind::Binomial:
            return n_ * p_ * (1.0 - p_);
    }
    return 0.0;
}

double SizeDistribution::sd() const {
    return std::sqrt(variance());
}

uint32_t SizeDistribution::sample(Rng& rng) const {
    switch (kind_) {
        case SizeKind::Fixed:
            return b_;
        case SizeKind::DiscreteUniform:
            return b1_ + static_cast<uint32_t>(rng.below(b2_ - b1_ + 1ULL));
        case SizeKind::Binomial: {
            for (;;) {
                double d = rng.next_double();
                // Inversion: first m with cdf[m] > d. Linear scan; n is tiny.
                uint32_t m = 0;
                while (m < n_ && d >= cdf_[m])
                    ++m;
                if (m == 0 && truncate_)
                    continue;  // redraw zeros
                return m;
            }
        }
    }
    return 0;
}

std::string SizeDistribution::label() const {
    char buf[64];
    switch (kind_) {
        case SizeKind::Fixed:
            std::snprintf(buf, sizeof buf, "fixed%u", b_);
            break;
        case SizeKind::DiscreteUniform:
            std::snprintf(buf, sizeof buf, "duniform%u-%u", b1_, b2_);
            break;
        case SizeKind::Binomial:
            std::snprintf(buf, sizeof buf, "binomial%ux%.6g%s", n_, p_,
                          truncate_ ? "" : "-untruncated");
            break;
    }
    return buf;
}

void WorkloadParams::validate() const {
    if (u < 1)
        throw UsageError("workload needs at least one object id");
    if (!(q >= 0.0) || q >= 0.5)
        throw UsageError("trim probability must satisfy 0 <= q < 0.5");
}

uint32_t sample_size(const SizeDistribution& dist, Rng& rng) {
    return dist.sample(rng);
}

Request next_request(const WorkloadParams& params, const ObjectState& state, Rng& rng) {
    // Stream contract (determinism): one double for the Trim/Write choice,
    // then one bounded draw for the id, then size draws for a Write.
    bool trim = rng.next_double() < params.q;
    if (trim && state.x() > 0)
        return Request{Request::Trim, state.uniform_in_use_id(rng), 0};
    uint32_t id = 1 + static_cast<uint32_t>(rng.below(params.u));
    return Request{Request::Write, id, params.size_dist.sample(rng)};
}

}  // namespace ssdlab
