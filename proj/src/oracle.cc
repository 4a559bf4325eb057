#include "ssdlab/oracle.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ssdlab/errors.h"
#include "ssdlab/stats.h"

namespace ssdlab {

ObjectState::ObjectState(uint32_t u)
    : u_(u), in_use_(u + 1, 0), size_(u + 1, 0), pos_(u + 1, 0) {
    if (u < 1)
        throw UsageError("object state needs u >= 1");
    in_use_ids_.reserve(u);
}

void ObjectState::apply(const Request& req) {
    uint32_t id = req.object_id;
    if (id < 1 || id > u_)
        throw ContractViolation("request object id out of range");
    if (req.kind == Request::Write) {
        if (in_use_[id]) {
            y_ -= size_[id];  // rewrite discards the previous size
        } else {
            in_use_[id] = 1;
            pos_[id] = static_cast<uint32_t>(in_use_ids_.size());
            in_use_ids_.push_back(id);
            x_ += 1;
        }
        size_[id] = req.size_pages;
        y_ += req.size_pages;
    } else {
        if (!in_use_[id])
            throw ContractViolation("trim of a not-In-Use object");
        // swap-pop the dense set
        uint32_t idx = pos_[id];
        uint32_t last = in_use_ids_.back();
        in_use_ids_[idx] = last;
        pos_[last] = idx;
        in_use_ids_.pop_back();
        in_use_[id] = 0;
        x_ -= 1;
        y_ -= size_[id];
        size_[id] = 0;
    }
}

uint32_t ObjectState::uniform_in_use_id(Rng& rng) const {
    if (in_use_ids_.empty())
        throw ContractViolation("uniform draw over an empty In-Use set");
    return in_use_ids_[rng.below(in_use_ids_.size())];
}

std::pair<uint64_t, uint64_t> ObjectState::recount() const {
    uint64_t x = 0, y = 0;
    for (uint32_t id = 1; id <= u_; ++id) {
        if (in_use_[id]) {
            x += 1;
            y += size_[id];
        }
    }
    return {x, y};
}

UtilizationStats run_utilization(const WorkloadParams& params, uint64_t warmup_requests,
                                 uint64_t measure_requests, Rng& rng) {
    params.validate();
    if (warmup_requests < 1 || measure_requests < 1)
        throw UsageError("warmup and measurement windows must be >= 1 request");

    ObjectState state(params.u);
    for (uint64_t i = 0; i < warmup_requests; ++i)
        state.apply(next_request(params, state, rng));

    RunningStat objects, pages;
    std::unordered_map<uint32_t, uint64_t> counts;
    counts.reserve(4096);
    for (uint64_t i = 0; i < measure_requests; ++i) {
        state.apply(next_request(params, state, rng));
        objects.add(static_cast<double>(state.x()));
        pages.add(static_cast<double>(state.y()));
        counts[static_cast<uint32_t>(state.y())] += 1;
    }

    UtilizationStats out;
    out.mean_objects = objects.mean();
    out.sd_objects = objects.sd();
    out.mean_pages = pages.mean();
    out.sd_pages = pages.sd();
    double inv = 1.0 / static_cast<double>(measure_requests);
    for (const auto& [y, c] : counts)
        out.histogram_pages[y] = static_cast<double>(c) * inv;
    return out;
}

std::vector<double> stationary_distribution(uint32_t u, double q) {
    if (u < 1)
        throw UsageError("stationary distribution needs u >= 1");
    if (!(q >= 0.0) || q >= 0.5)
        throw UsageError("stationary distribution needs 0 <= q < 0.5");

    std::vector<double> pi(u + 1, 0.0);
    if (q == 0.0) {
        pi[u] = 1.0;  // no deaths: all mass at the full state
        return pi;
    }
    // Detailed balance: w_{x+1} = w_x * b_x / d, b_x = (1-q)(u-x)/u, d = q.
    // The ratios compound to ~(b_0/d)^u which overflows double quickly, so
    // accumulate the weights in log space and normalize against the max.
    std::vector<double> lw(u + 1, 0.0);
    double log_q = std::log(q);
    for (uint32_t x = 0; x < u; ++x) {
        double b = (1.0 - q) * (static_cast<double>(u - x) / u);
        lw[x + 1] = lw[x] + std::log(b) - log_q;
    }
    double m = *std::max_element(lw.begin(), lw.end());
    double total = 0.0;
    for (uint32_t x = 0; x <= u; ++x) {
        pi[x] = std::exp(lw[x] - m);
        total += pi[x];
    }
    for (double& v : pi)
        v /= total;
    return pi;
}

ChainMoments moments_from_pi(const std::vector<double>& pi, const SizeDistribution& dist) {
    if (pi.size() < 2)
        throw UsageError("pi must cover X in {0..u} with u >= 1");
    uint64_t u = pi.size() - 1;

    double ex = 0.0;
    for (uint64_t x = 0; x <= u; ++x)
        ex += static_cast<double>(x) * pi[x];
    // Central second moment directly (avoids the E[X^2]-E[X]^2 cancellation).
    double var = 0.0;
    double ex_falling = 0.0;  // E[X(X-1)], all-positive sum
    for (uint64_t x = 0; x <= u; ++x) {
        double d = static_cast<double>(x) - ex;
        var += d * d * pi[x];
        ex_falling += static_cast<double>(x) * (static_cast<double>(x) - 1.0) * pi[x];
    }

    ChainMoments out;
    out.mean_objects = ex;
    out.var_objects = var;
    double mz = dist.mean();
    out.mean_pages = mz * ex;
    out.var_pages = dist.variance() * ex + mz * mz * var;
    out.pair_in_use =
        u >= 2 ? ex_falling / (static_cast<double>(u) * (static_cast<double>(u) - 1.0)) : 0.0;
    return out;
}

}  // namespace ssdlab
