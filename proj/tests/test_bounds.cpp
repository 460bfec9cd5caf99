#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bounds.hpp"
#include "oracles.hpp"

using namespace sumcs;

namespace {

// Reference evaluation through exact Pascal binomials (the library goes
// through lgamma).
EpsP eps_p_reference(int n, int l, std::int64_t k, double alpha) {
    const int inner = static_cast<int>(std::floor(0.5 * n * (1.0 + std::sqrt(2.0 * alpha))));
    const double ratio = static_cast<double>(oracle::binomial(inner, l)) /
                         static_cast<double>(oracle::binomial(n, l));
    return {1.0 - static_cast<double>(k) * ratio,
            1.0 - static_cast<double>(k * k) * std::exp(-alpha * n)};
}

BoundParams params_of(int n, int d, std::int64_t m, std::int64_t k, double alpha,
                      double lambda = 0.9) {
    BoundParams p;
    p.n = n;
    p.d = d;
    p.m = m;
    p.k = k;
    p.alpha = alpha;
    p.lambda = lambda;
    return p;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("epsilon and p match the exact rational evaluation") {
    // Frozen from an independent rational computation: eps = -87/95.
    EpsP ep = uniqueness_eps_p(20, 2, 4, 0.1);
    CHECK(ep.epsilon == doctest::Approx(-0.9157894736842105).epsilon(1e-12));
    CHECK(ep.p == doctest::Approx(-1.1653645317858032).epsilon(1e-12));

    for (int n : {8, 12, 20, 40, 63})
        for (int l : {1, 2, 4})
            for (std::int64_t k : {std::int64_t(1), std::int64_t(3), std::int64_t(9)})
                for (double alpha : {0.02, 0.1, 0.3}) {
                    EpsP got = uniqueness_eps_p(n, l, k, alpha);
                    EpsP want = eps_p_reference(n, l, k, alpha);
                    CHECK(got.epsilon == doctest::Approx(want.epsilon).epsilon(1e-10));
                    CHECK(got.p == doctest::Approx(want.p).epsilon(1e-10));
                }
}

TEST_CASE("degenerate epsilon cases") {
    CHECK(uniqueness_eps_p(10, 2, 0, 0.1).epsilon == 1.0);
    // Tiny alpha with even n floors the inner argument to exactly n/2.
    EpsP ep = uniqueness_eps_p(8, 2, 1, 1e-12);
    CHECK(ep.epsilon == doctest::Approx(1.0 - 6.0 / 28.0).epsilon(1e-12));
    // Inner argument below l zeroes the binomial.
    CHECK(uniqueness_eps_p(4, 4, 1, 0.4).epsilon == 1.0);
}

TEST_CASE("gamma-mode binomials dominate floored ones") {
    for (int n : {11, 21, 41})
        for (int l : {2, 3}) {
            const double ef = uniqueness_eps_p(n, l, 2, 0.17, BinomialMode::Floor).epsilon;
            const double eg = uniqueness_eps_p(n, l, 2, 0.17, BinomialMode::Gamma).epsilon;
            CHECK(eg <= ef + 1e-12);
        }
}

TEST_CASE("f_s_lower is the power of two") {
    CHECK(f_s_lower(0) == 1);
    CHECK(f_s_lower(3) == 8);
    CHECK(f_s_lower(7) == 128);
}

TEST_CASE("epsilon and p move the right way") {
    double prev_eps = 2.0, prev_p = 2.0;
    for (std::int64_t k = 0; k <= 16; k += 2) {
        EpsP ep = uniqueness_eps_p(24, 3, k, 0.12);
        CHECK(ep.epsilon <= prev_eps);
        CHECK(ep.p <= prev_p);
        prev_eps = ep.epsilon;
        prev_p = ep.p;
    }
    double prev = -10.0;
    for (int n : {12, 16, 24, 40, 63}) {
        EpsP ep = uniqueness_eps_p(n, 3, 4, 0.12);
        CHECK(ep.p >= prev);
        prev = ep.p;
    }
}

TEST_CASE("ssii failure bound matches the frozen spot value") {
    // Independent rational evaluation of the same formula gave
    // 0.4251194374283535 at (n=63, d=5, m=200, k=2, alpha=0.15).
    const double v = ssii_failure_bound(params_of(63, 5, 200, 2, 0.15));
    CHECK(v == doctest::Approx(0.4251194374283535).epsilon(1e-9));
}

TEST_CASE("doubling k more than doubles the ssii bound") {
    const double at_k1 = ssii_failure_bound(params_of(63, 5, 260, 1, 0.15));
    const double at_k2 = ssii_failure_bound(params_of(63, 5, 260, 2, 0.15));
    CHECK(at_k2 > 2.0 * at_k1);
}

TEST_CASE("the tabulated grid matches the golden file bit for bit") {
    std::ostringstream csv;
    csv << "n,d,m,k,alpha,epsilon,p,ssii_failure,ssii_failure_raw,mm_success,mm_success_raw,"
           "ssii_explicit,mm_explicit,k_of_lambda,bp_measurements\n";
    for (int n : {10, 16, 24, 40, 63})
        for (int d : {2, 4, 6})
            for (std::int64_t m : {4, 32, 256})
                for (std::int64_t k : {1, 4, 16})
                    for (double alpha : {0.05, 0.2}) {
                        BoundParams p = params_of(n, d, m, k, alpha);
                        BoundReport r = evaluate_bounds(p);
                        char line[512];
                        std::snprintf(
                            line, sizeof line,
                            "%d,%d,%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                            "%.17g,%.17g,%.17g,%.17g\n",
                            n, d, static_cast<long long>(m), static_cast<long long>(k), alpha,
                            r.epsilon, r.p, r.ssii_failure, r.ssii_failure_raw, r.mm_success,
                            r.mm_success_raw, r.ssii_failure_explicit, r.mm_failure_explicit,
                            r.k_of_lambda, r.bp_measurements);
                        csv << line;
                    }

    std::ifstream golden(std::string(SUMCS_TEST_DATA_DIR) + "/bounds_grid_golden.csv");
    REQUIRE(golden.good());
    std::ostringstream want;
    want << golden.rdbuf();
    CHECK(csv.str() == want.str());
}

TEST_CASE("ssii failure bound is non-increasing in m") {
    double prev = 2.0;
    for (std::int64_t m : {1, 2, 4, 8, 16, 64, 256, 1024, 1 << 14, 1 << 20}) {
        const double v = ssii_failure_bound(params_of(63, 5, m, 2, 0.15));
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    CHECK(prev < 0.05);  // large m drives the bound toward kn(1-p)
}

TEST_CASE("mm success bound behaves at the edges") {
    // epsilon = 1 (zero binomial) makes the bound collapse to p.
    BoundParams edge = params_of(4, 4, 3, 1, 0.4);
    const double p = uniqueness_eps_p(4, 4, 1, 0.4).p;
    CHECK(mm_success_bound(edge) == doctest::Approx(p).epsilon(1e-12));

    // m = 0 gives p(1 - k) <= 0, clamped to zero.
    CHECK(mm_success_bound(params_of(16, 4, 0, 5, 0.1)) == 0.0);

    // Frozen: p < 0 at (16,4,8,5,0.1), so the clamped floor is vacuous.
    CHECK(mm_success_bound(params_of(16, 4, 8, 5, 0.1)) == 0.0);

    double prev = -1.0;
    for (std::int64_t m : {1, 2, 4, 8, 16, 64, 256}) {
        const double v = mm_success_bound(params_of(63, 4, m, 3, 0.1));
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(prev > 0.9);
}

TEST_CASE("explicit rates follow their formulas") {
    ExplicitRates big_m = explicit_rates(params_of(30, 5, 1 << 20, 4, 0.2, 0.9));
    CHECK(big_m.mm_failure_raw ==
          doctest::Approx(16.0 * std::exp(-0.2 * 30.0)).epsilon(1e-9));

    // Alternate route: lambda * (sqrt(alpha/2) + 1/2)^(-d).
    ExplicitRates kk = explicit_rates(params_of(30, 7, 10, 4, 0.08, 0.9));
    CHECK(kk.k_of_lambda ==
          doctest::Approx(0.9 * std::pow(std::sqrt(0.04) + 0.5, -7.0)).epsilon(1e-12));
    CHECK(kk.k_of_lambda == doctest::Approx(10.928391110118117).epsilon(1e-12));

    double prev = 1e9;
    for (std::int64_t m : {1, 4, 16, 64, 256}) {
        ExplicitRates er = explicit_rates(params_of(40, 5, m, 6, 0.1, 0.9));
        CHECK(er.ssii_failure_raw <= prev + 1e-12);
        prev = er.ssii_failure_raw;
    }
}

TEST_CASE("the measurement formula reproduces hand values") {
    for (int n = 5; n <= 12; ++n)
        CHECK(bp_measurement_formula(std::exp2(n), 2) == doctest::Approx(4.0 * n));
    CHECK(bp_measurement_formula(1024, 8) == doctest::Approx(1920.0));
    CHECK(bp_measurement_formula(1024, 1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(bp_measurement_formula(8, 16), Error);
}

TEST_CASE("full reports clamp probabilities and stay finite") {
    for (int n : {8, 16, 32, 63})
        for (int d : {2, 4})
            for (std::int64_t m : {1, 64})
                for (std::int64_t k : {1, 100}) {
                    BoundParams p = params_of(n, d, m, k, 0.2);
                    BoundReport rep = evaluate_bounds(p);
                    for (double v : {rep.ssii_failure, rep.mm_success, rep.ssii_failure_explicit,
                                     rep.mm_failure_explicit}) {
                        CHECK(v >= 0.0);
                        CHECK(v <= 1.0);
                    }
                    for (double v :
                         {rep.epsilon, rep.p, rep.ssii_failure_raw, rep.mm_success_raw,
                          rep.ssii_failure_explicit_raw, rep.mm_failure_explicit_raw,
                          rep.bp_measurements, rep.ssii_measurement_scale,
                          rep.mm_measurement_scale, rep.k_of_lambda})
                        CHECK(std::isfinite(v));
                }
}

TEST_CASE("report JSON is deterministic") {
    BoundParams p = params_of(16, 4, 8, 5, 0.1);
    BoundReport rep = evaluate_bounds(p);
    CHECK(rep.to_json(p) == evaluate_bounds(p).to_json(p));
    CHECK(rep.to_json(p).find("\"mm_success\"") != std::string::npos);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(evaluate_bounds(params_of(16, 20, 8, 5, 0.1)), Error);
    CHECK_THROWS_AS(evaluate_bounds(params_of(16, 4, 8, 5, 0.6)), Error);
    CHECK_THROWS_AS(evaluate_bounds(params_of(16, 4, 8, 0, 0.1)), Error);
    CHECK_THROWS_AS(evaluate_bounds(params_of(16, 4, 8, 5, 0.1, 1.5)), Error);
}

}  // TEST_SUITE
