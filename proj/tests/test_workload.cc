#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssdlab/errors.h"
#include "ssdlab/oracle.h"
#include "ssdlab/rng.h"
#include "ssdlab/workload.h"

using namespace ssdlab;

TEST_CASE("size distribution moments and bounds") {
    SizeDistribution fixed = SizeDistribution::fixed(32);
    CHECK(fixed.mean() == 32.0);
    CHECK(fixed.variance() == 0.0);
    CHECK(fixed.min_pages() == 32);
    CHECK(fixed.max_pages() == 32);

    // (B2 - B1 + 1)^2 - 1 over 12 for the discrete uniform on [1, 32]
    SizeDistribution du = SizeDistribution::discrete_uniform(1, 32);
    CHECK(du.mean() == doctest::Approx(16.5).epsilon(1e-12));
    CHECK(du.variance() == doctest::Approx(85.25).epsilon(1e-12));
    CHECK(du.min_pages() == 1);
    CHECK(du.max_pages() == 32);

    // truncation at 1 leaves the analytic moments untruncated by design
    SizeDistribution bin = SizeDistribution::binomial(32, 0.4);
    CHECK(bin.mean() == doctest::Approx(12.8).epsilon(1e-12));
    CHECK(bin.variance() == doctest::Approx(7.68).epsilon(1e-12));
    CHECK(bin.min_pages() == 1);
    CHECK(bin.max_pages() == 32);
    CHECK(SizeDistribution::binomial(32, 0.4, false).min_pages() == 0);
}

TEST_CASE("size distribution rejects bad parameters") {
    CHECK_THROWS_AS(SizeDistribution::fixed(0), UsageError);
    CHECK_THROWS_AS(SizeDistribution::discrete_uniform(5, 3), UsageError);
    CHECK_THROWS_AS(SizeDistribution::discrete_uniform(0, 3), UsageError);
    CHECK_THROWS_AS(SizeDistribution::binomial(32, -0.1), UsageError);
    CHECK_THROWS_AS(SizeDistribution::binomial(32, 1.5), UsageError);
    CHECK_THROWS_AS(SizeDistribution::binomial(0, 0.4), UsageError);
}

TEST_CASE("workload params validation") {
    WorkloadParams ok{1000, 0.1, SizeDistribution::fixed(32)};
    CHECK_NOTHROW(ok.validate());
    WorkloadParams no_ids{0, 0.1, SizeDistribution::fixed(32)};
    CHECK_THROWS_AS(no_ids.validate(), UsageError);
    WorkloadParams q_half{1000, 0.5, SizeDistribution::fixed(32)};
    CHECK_THROWS_AS(q_half.validate(), UsageError);
    WorkloadParams q_neg{1000, -0.01, SizeDistribution::fixed(32)};
    CHECK_THROWS_AS(q_neg.validate(), UsageError);
}

TEST_CASE("sampled sizes stay in range and match the analytic mean") {
    const int kDraws = 1000000;
    Rng rng = Rng::for_replica(42, 0);

    SizeDistribution du = SizeDistribution::discrete_uniform(1, 32);
    double sum = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        uint32_t z = sample_size(du, rng);
        REQUIRE(z >= 1);
        REQUIRE(z <= 32);
        sum += z;
    }
    CHECK(sum / kDraws == doctest::Approx(16.5).epsilon(0.002));

    SizeDistribution bin = SizeDistribution::binomial(32, 0.4);
    sum = 0.0;
    for (int i = 0; i < kDraws; ++i) {
        uint32_t z = sample_size(bin, rng);
        REQUIRE(z >= 1);
        REQUIRE(z <= 32);
        sum += z;
    }
    CHECK(sum / kDraws == doctest::Approx(12.8).epsilon(0.002));
}

TEST_CASE("binomial truncation redraws zeros") {
    // Binomial(3, 0.01) emits 0 untruncated about 97% of the time, so a few
    // thousand draws separate the two modes decisively.
    Rng rng = Rng::for_replica(7, 0);
    SizeDistribution trunc = SizeDistribution::binomial(3, 0.01);
    for (int i = 0; i < 5000; ++i)
        CHECK(sample_size(trunc, rng) >= 1);

    SizeDistribution raw = SizeDistribution::binomial(3, 0.01, false);
    int zeros = 0;
    for (int i = 0; i < 5000; ++i)
        zeros += sample_size(raw, rng) == 0;
    CHECK(zeros > 4000);
}

TEST_CASE("request stream mixes trims at rate q once the state is warm") {
    WorkloadParams params{1000, 0.2, SizeDistribution::fixed(4)};
    ObjectState state(params.u);
    Rng rng = Rng::for_replica(9, 0);
    for (int i = 0; i < 100000; ++i)
        state.apply(next_request(params, state, rng));

    int trims = 0;
    const int kSteps = 1000000;
    for (int i = 0; i < kSteps; ++i) {
        Request r = next_request(params, state, rng);
        trims += r.kind == Request::Kind::Trim;
        state.apply(r);
    }
    CHECK(static_cast<double>(trims) / kSteps == doctest::Approx(0.2).epsilon(0.01));
}

TEST_CASE("trim on an empty in-use set degrades to a write") {
    // With u = 1 and a high trim rate the in-use set empties constantly; the
    // stream must never emit a trim for a state with nothing to trim.
    WorkloadParams params{1, 0.45, SizeDistribution::fixed(2)};
    ObjectState state(params.u);
    Rng rng = Rng::for_replica(3, 0);
    for (int i = 0; i < 20000; ++i) {
        Request r = next_request(params, state, rng);
        if (r.kind == Request::Kind::Trim)
            CHECK(state.x() > 0);
        state.apply(r);
        CHECK(state.x() <= 1);
    }
}

TEST_CASE("identical seeds give identical request streams") {
    WorkloadParams params{50, 0.3, SizeDistribution::discrete_uniform(1, 8)};
    ObjectState a(params.u), b(params.u);
    Rng ra = Rng::for_replica(1234, 5), rb = Rng::for_replica(1234, 5);
    for (int i = 0; i < 1000; ++i) {
        Request x = next_request(params, a, ra);
        Request y = next_request(params, b, rb);
        REQUIRE(x.kind == y.kind);
        REQUIRE(x.object_id == y.object_id);
        REQUIRE(x.size_pages == y.size_pages);
        a.apply(x);
        b.apply(y);
    }
    // distinct replicas of the same master seed must diverge
    Rng rc = Rng::for_replica(1234, 6);
    bool differs = false;
    for (int i = 0; i < 64 && !differs; ++i)
        differs = ra.below(1000) != rc.below(1000);
    CHECK(differs);
}
