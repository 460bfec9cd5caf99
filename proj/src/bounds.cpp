#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "codebook.hpp"
#include "json.hpp"

namespace sumcs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double clamp01(double v) {
    const double c = std::clamp(v, 0.0, 1.0);
    return c == 0.0 ? 0.0 : c;  // fold -0.0
}

}  // namespace

double log_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return kNegInf;
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double log_binomial_real(double x, double l) {
    if (x < l) return kNegInf;
    return std::lgamma(x + 1.0) - std::lgamma(l + 1.0) - std::lgamma(x - l + 1.0);
}

EpsP uniqueness_eps_p(int n, int l, std::int64_t k, double alpha, BinomialMode mode) {
    require(n >= 1, ErrorCode::InvalidArgument, "bounds: n must be >= 1");
    require(l >= 0 && l <= n, ErrorCode::InvalidArgument, "bounds: l must be in [0, n]");
    require(k >= 0, ErrorCode::InvalidArgument, "bounds: k must be >= 0");
    require(alpha > 0.0 && alpha < 0.5, ErrorCode::InvalidArgument,
            "bounds: alpha must be in (0, 1/2)");

    const double inner = 0.5 * n * (1.0 + std::sqrt(2.0 * alpha));
    double log_num;
    if (mode == BinomialMode::Floor)
        log_num = log_binomial(static_cast<std::int64_t>(std::floor(inner)), l);
    else
        log_num = log_binomial_real(inner, l);
    const double ratio = std::isinf(log_num) ? 0.0 : std::exp(log_num - log_binomial(n, l));

    EpsP out;
    out.epsilon = 1.0 - static_cast<double>(k) * ratio;
    out.p = 1.0 - static_cast<double>(k) * static_cast<double>(k) *
                      std::exp(-alpha * static_cast<double>(n));
    return out;
}

std::int64_t f_s_lower(int l) {
    require(l >= 0 && l <= 62, ErrorCode::InvalidArgument, "bounds: l must be in [0, 62]");
    return std::int64_t(1) << l;
}

void BoundParams::validate() const {
    require(n >= 1 && n <= kMaxBits, ErrorCode::InvalidArgument, "bounds: n must be in [1, 63]");
    require(d >= 1 && d <= n, ErrorCode::InvalidArgument, "bounds: d must be in [1, n]");
    require(m >= 1, ErrorCode::InvalidArgument, "bounds: m must be >= 1");
    require(k >= 1, ErrorCode::InvalidArgument, "bounds: k must be >= 1");
    require(n >= 62 || k <= (std::int64_t(1) << n), ErrorCode::InvalidArgument,
            "bounds: k exceeds the signal dimension 2^n");
    require(alpha > 0.0 && alpha < 0.5, ErrorCode::InvalidArgument,
            "bounds: alpha must be in (0, 1/2)");
    require(lambda > 0.0 && lambda < 1.0, ErrorCode::InvalidArgument,
            "bounds: lambda must be in (0, 1)");
}

namespace {

// epsilon and p enter the composite expressions as a fraction and a
// probability; clamping them into [0,1] keeps every raw output finite when
// the closed forms go vacuous (negative).
double ssii_failure_raw(const BoundParams& pp) {
    EpsP ep = uniqueness_eps_p(pp.n - 1, pp.d - 1, pp.k, pp.alpha, pp.binomial);
    const double eps = clamp01(ep.epsilon);
    const double p = clamp01(ep.p);
    const double base = 1.0 - eps * static_cast<double>(pp.d) / static_cast<double>(pp.n);
    return static_cast<double>(pp.k) * static_cast<double>(pp.n) *
           (1.0 - p + p * std::pow(base, static_cast<double>(pp.m)));
}

double mm_success_raw(const BoundParams& pp) {
    EpsP ep = uniqueness_eps_p(pp.n, pp.d, pp.k, pp.alpha, pp.binomial);
    const double eps = clamp01(ep.epsilon);
    const double p = clamp01(ep.p);
    return p * (1.0 - static_cast<double>(pp.k) *
                          std::pow(1.0 - eps, static_cast<double>(pp.m)));
}

}  // namespace

double ssii_failure_bound(const BoundParams& params) {
    require(params.n >= 2 && params.d >= 1, ErrorCode::InvalidArgument,
            "bounds: ssii bound needs n >= 2");
    return clamp01(ssii_failure_raw(params));
}

double mm_success_bound(const BoundParams& params) {
    return clamp01(mm_success_raw(params));
}

ExplicitRates explicit_rates(const BoundParams& params) {
    const double n = static_cast<double>(params.n);
    const double d = static_cast<double>(params.d);
    const double m = static_cast<double>(params.m);
    const double k = static_cast<double>(params.k);

    ExplicitRates out;
    out.ssii_failure_raw = k * k * k * n * std::exp(-params.alpha * n) +
                           k * n * std::pow(1.0 - (1.0 - params.lambda) * d / n, m);
    out.mm_failure_raw =
        k * k * std::exp(-params.alpha * n) + k * std::pow(params.lambda, m);
    out.ssii_failure = clamp01(out.ssii_failure_raw);
    out.mm_failure = clamp01(out.mm_failure_raw);
    // The exponent multiplier log2(sqrt(alpha/2) + 1/2) is negative on the
    // whole alpha range, so this k grows with d.
    out.k_of_lambda =
        params.lambda * std::exp2(-d * std::log2(std::sqrt(params.alpha / 2.0) + 0.5));
    return out;
}

double bp_measurement_formula(double N, double k) {
    require(N >= 2.0 && std::isfinite(N), ErrorCode::InvalidArgument,
            "bounds: N must be >= 2");
    require(k >= 1.0 && std::isfinite(k), ErrorCode::InvalidArgument,
            "bounds: k must be >= 1");
    const int log_n = static_cast<int>(std::nearbyint(std::log2(N)));
    const int log_k = static_cast<int>(std::nearbyint(std::log2(k)));
    require(log_k <= log_n, ErrorCode::InvalidArgument,
            "bounds: log2(k) exceeds log2(N)");
    return 2.0 * k * static_cast<double>(binomial_u64(log_n, log_k));
}

BoundReport evaluate_bounds(const BoundParams& params) {
    params.validate();

    BoundReport rep;
    EpsP ep = uniqueness_eps_p(params.n, params.d, params.k, params.alpha, params.binomial);
    rep.epsilon = ep.epsilon;
    rep.p = ep.p;

    rep.ssii_failure_raw = ssii_failure_raw(params);
    rep.ssii_failure = clamp01(rep.ssii_failure_raw);
    rep.mm_success_raw = mm_success_raw(params);
    rep.mm_success = clamp01(rep.mm_success_raw);

    ExplicitRates ex = explicit_rates(params);
    rep.ssii_failure_explicit = ex.ssii_failure;
    rep.ssii_failure_explicit_raw = ex.ssii_failure_raw;
    rep.mm_failure_explicit = ex.mm_failure;
    rep.mm_failure_explicit_raw = ex.mm_failure_raw;
    rep.k_of_lambda = ex.k_of_lambda;

    rep.bp_measurements =
        bp_measurement_formula(std::exp2(static_cast<double>(params.n)),
                               static_cast<double>(params.k));
    const double n = static_cast<double>(params.n);
    const double k = static_cast<double>(params.k);
    rep.ssii_measurement_scale = k * n * std::log2(std::max(2.0, n));
    rep.mm_measurement_scale = 2.0 * n + k * std::log2(std::max(1.0, k));
    return rep;
}

std::string BoundReport::to_json(const BoundParams& params) const {
    nlohmann::json j;
    j["n"] = params.n;
    j["d"] = params.d;
    j["m"] = params.m;
    j["k"] = params.k;
    j["alpha"] = params.alpha;
    j["lambda"] = params.lambda;
    j["binomial"] = params.binomial == BinomialMode::Floor ? "floor" : "gamma";
    j["epsilon"] = epsilon;
    j["p"] = p;
    j["ssii_failure"] = ssii_failure;
    j["ssii_failure_raw"] = ssii_failure_raw;
    j["mm_success"] = mm_success;
    j["mm_success_raw"] = mm_success_raw;
    j["ssii_failure_explicit"] = ssii_failure_explicit;
    j["ssii_failure_explicit_raw"] = ssii_failure_explicit_raw;
    j["mm_failure_explicit"] = mm_failure_explicit;
    j["mm_failure_explicit_raw"] = mm_failure_explicit_raw;
    j["bp_measurements"] = bp_measurements;
    j["ssii_measurement_scale"] = ssii_measurement_scale;
    j["mm_measurement_scale"] = mm_measurement_scale;
    j["k_of_lambda"] = k_of_lambda;
    return j.dump();
}

}  // namespace sumcs
