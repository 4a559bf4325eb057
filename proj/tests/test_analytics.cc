#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssdlab/analytics.h"
#include "ssdlab/errors.h"
#include "ssdlab/harness.h"

using namespace ssdlab;

TEST_CASE("trim-derived workload constants") {
    TrimParams t = trim_params(0.1);
    CHECK(t.s == doctest::Approx(8.0 / 9).epsilon(1e-14));
    CHECK(t.s_bar == doctest::Approx(1.0 / 9).epsilon(1e-14));

    t = trim_params(0.0);
    CHECK(t.s == 1.0);
    CHECK(t.s_bar == 0.0);

    t = trim_params(0.45);
    CHECK(t.s == doctest::Approx(0.1 / 0.55).epsilon(1e-14));
    CHECK(t.s_bar == doctest::Approx(0.45 / 0.55).epsilon(1e-14));

    CHECK_THROWS_AS(trim_params(0.5), UsageError);
    CHECK_THROWS_AS(trim_params(-0.1), UsageError);
}

TEST_CASE("in-use count moments") {
    // u*s and u*s_bar at u=1000, q=0.1: mean 888.889, sd 10.541
    Moments m = object_moments(1000, 0.1);
    CHECK(m.mean == doctest::Approx(8000.0 / 9).epsilon(1e-14));
    CHECK(m.variance == doctest::Approx(1000.0 / 9).epsilon(1e-14));
    CHECK(std::sqrt(m.variance) == doctest::Approx(10.540926).epsilon(1e-6));
}

TEST_CASE("valid-page moments: worked example at q=0.2, discrete uniform") {
    // sigma_Z^2 * us + m_Z^2 * us_bar = 85.25*750 + 272.25*250 = 132000
    AnalyticMoments am = page_moments(1000, 0.2, SizeDistribution::discrete_uniform(1, 32));
    CHECK(am.mean_objects == doctest::Approx(750.0).epsilon(1e-14));
    CHECK(am.var_objects == doctest::Approx(250.0).epsilon(1e-14));
    CHECK(am.mean_pages == doctest::Approx(12375.0).epsilon(1e-12));
    CHECK(am.var_pages == doctest::Approx(132000.0).epsilon(1e-12));
    CHECK(std::sqrt(am.var_pages) == doctest::Approx(363.318317).epsilon(1e-6));
}

TEST_CASE("analytic cells reproduce the bundled reference tables") {
    for (int which = 1; which <= 3; ++which) {
        SizeDistribution dist = reference_table_distribution(which);
        for (const UtilReferenceRow& ref : reference_util_table(which)) {
            CAPTURE(which);
            CAPTURE(ref.q);
            AnalyticMoments am = page_moments(1000, ref.q, dist);
            CHECK(std::fabs(am.mean_objects - ref.mean_obj_analytic) <= 0.005);
            CHECK(std::fabs(std::sqrt(am.var_objects) - ref.sd_obj_analytic) <= 0.005);
            CHECK(std::fabs(am.mean_pages - ref.mean_pages_analytic) <= 0.005);
            CHECK(std::fabs(std::sqrt(am.var_pages) - ref.sd_pages_analytic) <= 0.005);
        }
    }
}

TEST_CASE("pairwise in-use expectation and covariance") {
    // q -> 0 removes trims entirely: everything is In-Use, so E[chi chi] -> 1
    CHECK(pair_in_use_expectation(1000, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

    // covariance is s_bar^2/(u-1): tiny but positive for q > 0
    CHECK(covariance_chi(1000, 0.1) == doctest::Approx((1.0 / 81) / 999).epsilon(1e-12));
    CHECK(covariance_chi(1000, 0.0) == 0.0);

    // consistency: E[chi_i chi_j] = C + s^2
    TrimParams t = trim_params(0.3);
    CHECK(pair_in_use_expectation(500, 0.3) ==
          doctest::Approx(covariance_chi(500, 0.3) + t.s * t.s).epsilon(1e-12));
}

TEST_CASE("effective spare factor combines trimmed space with overprovisioning") {
    // s_bar + s * S_f at q=0.1, S_f=0.2: 1/9 + (8/9)(1/5) = 13/45
    CHECK(effective_spare(0.1, 0.2) == doctest::Approx(13.0 / 45).epsilon(1e-14));
    CHECK(effective_spare(0.0, 0.2) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(effective_spare(0.1, 0.0) == doctest::Approx(1.0 / 9).epsilon(1e-14));
}

TEST_CASE("gaussian pdf normalizes and peaks at the mean") {
    double mean = 24000.0, var = 505.96 * 505.96;
    double sum = 0.0;
    for (int y = 20000; y <= 28000; ++y)
        sum += gaussian_pdf(mean, var, y);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(gaussian_pdf(mean, var, mean) > gaussian_pdf(mean, var, mean + 100.0));
    CHECK_THROWS_AS(gaussian_pdf(0.0, 0.0, 0.0), UsageError);
}
