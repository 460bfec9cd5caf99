#pragma once

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace sumcs {

// Closed-form recovery guarantees for summary codebooks, evaluated as
// machine-checkable predictions for the Monte-Carlo harness.
//
// The core quantities for sparsity k, width-l summaries over n bits and a
// free parameter 0 < alpha < 1/2 are
//
//     epsilon = 1 - k * C(n/2 * (1 + sqrt(2 alpha)), l) / C(n, l)
//     p       = 1 - k^2 * exp(-alpha n)
//
// The binomial's upper argument is generally fractional; Floor mode (the
// default) floors it, Gamma mode evaluates the generalized binomial via
// lgamma. Both are reported since neither choice is canonical.

enum class BinomialMode { Floor, Gamma };

struct EpsP {
    double epsilon = 0.0;
    double p = 0.0;
};

EpsP uniqueness_eps_p(int n, int l, std::int64_t k, double alpha,
                 BinomialMode mode = BinomialMode::Floor);

// Certified sparsity for strong (every-signal) recovery with width-l
// summaries: 2^l. Complete (n,d) codebooks recover every k <= 2^(d-1).
std::int64_t f_s_lower(int l);

// log C(x, l) for real x >= l (lgamma based); -inf stands in for C = 0.
double log_binomial_real(double x, double l);
double log_binomial(std::int64_t n, std::int64_t k);

struct BoundParams {
    int n = 0;
    int d = 0;
    std::int64_t m = 0;
    std::int64_t k = 0;
    double alpha = 0.1;
    double lambda = 0.9;
    BinomialMode binomial = BinomialMode::Floor;

    void validate() const;
};

// Upper bound on the failure probability of ssii decoding over a random
// (m,n,d) codebook: k n (1 - p + p (1 - eps d / n)^m) with (eps, p) taken at
// (n-1, d-1). Clamped to [0,1]; the raw value is in the report.
double ssii_failure_bound(const BoundParams& params);

// Lower bound on the success probability of mix-and-match decoding:
// p (1 - k (1 - eps)^m) with (eps, p) taken at (n, d).
double mm_success_bound(const BoundParams& params);

struct ExplicitRates {
    double ssii_failure = 0.0;  // k^3 n e^(-alpha n) + k n (1 - (1-lambda) d / n)^m
    double mm_failure = 0.0;    // k^2 e^(-alpha n) + k lambda^m
    double ssii_failure_raw = 0.0;
    double mm_failure_raw = 0.0;
    double k_of_lambda = 0.0;   // lambda * 2^(-d log2(sqrt(alpha/2) + 1/2))
};

ExplicitRates explicit_rates(const BoundParams& params);

// Measurement count of the complete-codebook construction sufficient for
// sparsity k at dimension N: 2 k C(log2 N, log2 k). Non-powers of two round
// their logs to the nearest integer.
double bp_measurement_formula(double N, double k);

struct BoundReport {
    double epsilon = 0.0;  // raw, may be negative
    double p = 0.0;        // raw, may be negative

    double ssii_failure = 0.0;
    double ssii_failure_raw = 0.0;
    double mm_success = 0.0;
    double mm_success_raw = 0.0;

    double ssii_failure_explicit = 0.0;
    double ssii_failure_explicit_raw = 0.0;
    double mm_failure_explicit = 0.0;
    double mm_failure_explicit_raw = 0.0;

    double bp_measurements = 0.0;
    double ssii_measurement_scale = 0.0;  // k n log2(n)
    double mm_measurement_scale = 0.0;    // 2 n + k log2(k)
    double k_of_lambda = 0.0;

    std::string to_json(const BoundParams& params) const;
};

BoundReport evaluate_bounds(const BoundParams& params);

}  // namespace sumcs
