#include "sumcs/sumcs.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "basis_pursuit.hpp"
#include "bounds.hpp"
#include "experiment.hpp"
#include "mixmatch.hpp"
#include "ssii.hpp"

struct sumcs_codebook {
    std::shared_ptr<const sumcs::Codebook> cb;
};

struct sumcs_signal {
    sumcs::SparseSignal sig;
};

struct sumcs_measurements {
    std::optional<sumcs::MeasurementVector> flat;
    std::optional<sumcs::StackedMeasurements> stacked;
};

struct sumcs_decode_result {
    sumcs::DecodeResult res;
};

namespace {

thread_local std::string g_last_error;

sumcs_status status_of(sumcs::ErrorCode code) {
    using sumcs::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return SUMCS_ERR_INVALID_ARGUMENT;
        case ErrorCode::Capacity: return SUMCS_ERR_CAPACITY;
        case ErrorCode::Io: return SUMCS_ERR_IO;
        case ErrorCode::Infeasible: return SUMCS_ERR_INFEASIBLE;
        case ErrorCode::IterationLimit: return SUMCS_ERR_ITERATION_LIMIT;
        case ErrorCode::Unsupported: return SUMCS_ERR_UNSUPPORTED;
        case ErrorCode::Internal: return SUMCS_ERR_INTERNAL;
    }
    return SUMCS_ERR_INTERNAL;
}

template <typename Fn>
sumcs_status guarded(Fn&& fn) {
    try {
        fn();
        return SUMCS_OK;
    } catch (const sumcs::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SUMCS_ERR_CAPACITY;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SUMCS_ERR_INTERNAL;
    }
}

sumcs_status fail_arg(const char* msg) {
    g_last_error = msg;
    return SUMCS_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* sumcs_last_error(void) { return g_last_error.c_str(); }

const char* sumcs_status_name(sumcs_status status) {
    switch (status) {
        case SUMCS_OK: return "ok";
        case SUMCS_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case SUMCS_ERR_CAPACITY: return "capacity";
        case SUMCS_ERR_IO: return "io";
        case SUMCS_ERR_INFEASIBLE: return "infeasible";
        case SUMCS_ERR_ITERATION_LIMIT: return "iteration-limit";
        case SUMCS_ERR_UNSUPPORTED: return "unsupported";
        case SUMCS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

sumcs_status sumcs_codebook_complete(int n, int d, sumcs_codebook** out) {
    if (!out) return fail_arg("null out pointer");
    return guarded([&] {
        *out = new sumcs_codebook{
            std::make_shared<const sumcs::Codebook>(sumcs::Codebook::complete(n, d))};
    });
}

sumcs_status sumcs_codebook_random(int n, int d, int64_t m, uint64_t seed, int exact_m,
                                   sumcs_codebook** out) {
    if (!out) return fail_arg("null out pointer");
    return guarded([&] {
        const auto mode = exact_m ? sumcs::RandomSubsetMode::ExactDistinct
                                  : sumcs::RandomSubsetMode::DedupReplacement;
        *out = new sumcs_codebook{
            std::make_shared<const sumcs::Codebook>(sumcs::Codebook::random(n, d, m, seed, mode))};
    });
}

sumcs_status sumcs_codebook_load(const char* path, sumcs_codebook** out) {
    if (!out || !path) return fail_arg("null argument");
    return guarded([&] {
        *out = new sumcs_codebook{
            std::make_shared<const sumcs::Codebook>(sumcs::Codebook::load_json(path))};
    });
}

sumcs_status sumcs_codebook_save(const sumcs_codebook* cb, const char* path) {
    if (!cb || !path) return fail_arg("null argument");
    return guarded([&] { cb->cb->save_json(path); });
}

int sumcs_codebook_n(const sumcs_codebook* cb) { return cb ? cb->cb->n() : 0; }
int sumcs_codebook_d(const sumcs_codebook* cb) { return cb ? cb->cb->d() : 0; }
int64_t sumcs_codebook_subsets(const sumcs_codebook* cb) { return cb ? cb->cb->subset_count() : 0; }
int64_t sumcs_codebook_rows(const sumcs_codebook* cb) { return cb ? cb->cb->rows() : 0; }
void sumcs_codebook_free(sumcs_codebook* cb) { delete cb; }

sumcs_status sumcs_signal_generate(int n, int64_t k, int real_mode, double tau, uint64_t seed,
                                   sumcs_signal** out) {
    if (!out) return fail_arg("null out pointer");
    return guarded([&] {
        const auto mode = real_mode
                              ? sumcs::ValueMode::real(tau > 0 ? tau : sumcs::kDefaultTau)
                              : sumcs::ValueMode::exact();
        *out = new sumcs_signal{sumcs::generate_signal(n, k, mode, seed)};
    });
}

sumcs_status sumcs_signal_load(const char* path, sumcs_signal** out) {
    if (!out || !path) return fail_arg("null argument");
    return guarded([&] { *out = new sumcs_signal{sumcs::SparseSignal::load_json(path)}; });
}

sumcs_status sumcs_signal_save(const sumcs_signal* sig, const char* path) {
    if (!sig || !path) return fail_arg("null argument");
    return guarded([&] { sig->sig.save_json(path); });
}

int sumcs_signal_n(const sumcs_signal* sig) { return sig ? sig->sig.n() : 0; }
int64_t sumcs_signal_k(const sumcs_signal* sig) { return sig ? sig->sig.k() : 0; }

sumcs_status sumcs_signal_is_distinguishable(const sumcs_signal* sig, int* out) {
    if (!sig || !out) return fail_arg("null argument");
    return guarded([&] { *out = sumcs::is_distinguishable(sig->sig) ? 1 : 0; });
}

void sumcs_signal_free(sumcs_signal* sig) { delete sig; }

sumcs_status sumcs_encode(const sumcs_signal* sig, const sumcs_codebook* cb,
                          sumcs_measurements** out) {
    if (!sig || !cb || !out) return fail_arg("null argument");
    return guarded([&] {
        auto* h = new sumcs_measurements{};
        h->flat = sumcs::encode(sig->sig, cb->cb);
        *out = h;
    });
}

sumcs_status sumcs_encode_stacked(const sumcs_signal* sig, const sumcs_codebook* cb,
                                  sumcs_measurements** out) {
    if (!sig || !cb || !out) return fail_arg("null argument");
    return guarded([&] {
        auto stacked = sumcs::StackedCodebook::make(cb->cb);
        auto* h = new sumcs_measurements{};
        h->stacked = sumcs::encode_stacked(sig->sig, stacked);
        *out = h;
    });
}

sumcs_status sumcs_measurements_save(const sumcs_measurements* y, const char* path) {
    if (!y || !path) return fail_arg("null argument");
    return guarded([&] {
        std::ofstream outfile(path);
        sumcs::require(outfile.good(), sumcs::ErrorCode::Io,
                       std::string("cannot open ") + path + " for writing");
        if (y->stacked)
            sumcs::write_stacked_csv(outfile, *y->stacked);
        else if (y->flat)
            sumcs::write_measurements_csv(outfile, *y->flat, std::nullopt, true);
        else
            sumcs::fail(sumcs::ErrorCode::InvalidArgument, "empty measurements handle");
        sumcs::require(outfile.good(), sumcs::ErrorCode::Io,
                       std::string("write to ") + path + " failed");
    });
}

sumcs_status sumcs_measurements_load(const char* path, int allow_partial, int n_hint,
                                     sumcs_measurements** out) {
    if (!path || !out) return fail_arg("null argument");
    return guarded([&] {
        sumcs::IngestOptions opt;
        opt.allow_partial = allow_partial != 0;
        opt.n_override = n_hint;
        sumcs::IngestResult in = sumcs::ingest_measurements_file(path, opt);
        auto* h = new sumcs_measurements{};
        if (in.stacked)
            h->stacked = std::move(in.stacked_measurements);
        else
            h->flat = std::move(in.flat);
        *out = h;
    });
}

int64_t sumcs_measurements_rows(const sumcs_measurements* y) {
    if (!y) return 0;
    if (y->stacked) return y->stacked->rows();
    if (y->flat) return y->flat->rows();
    return 0;
}

int sumcs_measurements_stacked(const sumcs_measurements* y) {
    return y && y->stacked ? 1 : 0;
}

sumcs_status sumcs_measurements_codebook(const sumcs_measurements* y, int part,
                                         sumcs_codebook** out) {
    if (!y || !out) return fail_arg("null argument");
    return guarded([&] {
        std::shared_ptr<const sumcs::Codebook> cb;
        if (y->stacked)
            cb = part == 2 ? y->stacked->part2.codebook_ptr() : y->stacked->part1.codebook_ptr();
        else if (y->flat && part == 1)
            cb = y->flat->codebook_ptr();
        sumcs::require(cb != nullptr, sumcs::ErrorCode::InvalidArgument,
                       "no such measurement part");
        *out = new sumcs_codebook{std::move(cb)};
    });
}

void sumcs_measurements_free(sumcs_measurements* y) { delete y; }

sumcs_status sumcs_decode(const sumcs_measurements* y, const char* alg, int64_t max_iterations,
                          double tol, sumcs_decode_result** out) {
    if (!y || !alg || !out) return fail_arg("null argument");
    return guarded([&] {
        const sumcs::Alg which = sumcs::alg_from_name(alg);
        sumcs::DecodeLimits limits;
        limits.max_iterations = max_iterations;
        sumcs::DecodeResult res;
        if (which == sumcs::Alg::Mm) {
            sumcs::require(y->stacked.has_value(), sumcs::ErrorCode::InvalidArgument,
                           "mm needs stacked measurements (a CSV with a part column)");
            res = sumcs::decode_mm(*y->stacked, limits);
        } else {
            sumcs::require(y->flat.has_value(), sumcs::ErrorCode::InvalidArgument,
                           "ssii/bp need flat measurements (no part column)");
            if (which == sumcs::Alg::Ssii) {
                res = sumcs::decode_ssii(*y->flat, limits);
            } else {
                res.recovered = sumcs::solve_bp(*y->flat, tol > 0 ? tol : 1e-8);
                res.status = sumcs::DecodeStatus::Success;
            }
        }
        *out = new sumcs_decode_result{std::move(res)};
    });
}

sumcs_decode_status sumcs_result_status(const sumcs_decode_result* res) {
    if (!res) return SUMCS_DECODE_CONTRADICTION;
    switch (res->res.status) {
        case sumcs::DecodeStatus::Success: return SUMCS_DECODE_SUCCESS;
        case sumcs::DecodeStatus::Partial: return SUMCS_DECODE_PARTIAL;
        case sumcs::DecodeStatus::Contradiction: return SUMCS_DECODE_CONTRADICTION;
    }
    return SUMCS_DECODE_CONTRADICTION;
}

int64_t sumcs_result_iterations(const sumcs_decode_result* res) {
    return res ? res->res.iterations : 0;
}

const char* sumcs_result_note(const sumcs_decode_result* res) {
    return res ? res->res.note.c_str() : "";
}

sumcs_status sumcs_result_signal(const sumcs_decode_result* res, sumcs_signal** out) {
    if (!res || !out) return fail_arg("null argument");
    return guarded([&] { *out = new sumcs_signal{res->res.recovered}; });
}

void sumcs_result_free(sumcs_decode_result* res) { delete res; }

sumcs_status sumcs_bounds_eval(int n, int d, int64_t m, int64_t k, double alpha, double lambda,
                               int gamma_binomial, sumcs_bound_report* out) {
    if (!out) return fail_arg("null out pointer");
    return guarded([&] {
        sumcs::BoundParams params;
        params.n = n;
        params.d = d;
        params.m = m;
        params.k = k;
        params.alpha = alpha;
        params.lambda = lambda;
        params.binomial =
            gamma_binomial ? sumcs::BinomialMode::Gamma : sumcs::BinomialMode::Floor;
        const sumcs::BoundReport rep = sumcs::evaluate_bounds(params);
        out->epsilon = rep.epsilon;
        out->p = rep.p;
        out->ssii_failure = rep.ssii_failure;
        out->ssii_failure_raw = rep.ssii_failure_raw;
        out->mm_success = rep.mm_success;
        out->mm_success_raw = rep.mm_success_raw;
        out->ssii_failure_explicit = rep.ssii_failure_explicit;
        out->ssii_failure_explicit_raw = rep.ssii_failure_explicit_raw;
        out->mm_failure_explicit = rep.mm_failure_explicit;
        out->mm_failure_explicit_raw = rep.mm_failure_explicit_raw;
        out->bp_measurements = rep.bp_measurements;
        out->ssii_measurement_scale = rep.ssii_measurement_scale;
        out->mm_measurement_scale = rep.mm_measurement_scale;
        out->k_of_lambda = rep.k_of_lambda;
    });
}

sumcs_status sumcs_bounds_eval_json(int n, int d, int64_t m, int64_t k, double alpha,
                                    double lambda, int gamma_binomial, char** json_out) {
    if (!json_out) return fail_arg("null out pointer");
    return guarded([&] {
        sumcs::BoundParams params;
        params.n = n;
        params.d = d;
        params.m = m;
        params.k = k;
        params.alpha = alpha;
        params.lambda = lambda;
        params.binomial =
            gamma_binomial ? sumcs::BinomialMode::Gamma : sumcs::BinomialMode::Floor;
        *json_out = copy_string(sumcs::evaluate_bounds(params).to_json(params));
    });
}

sumcs_status sumcs_experiment_run(const char* config_json, char** csv_out) {
    if (!config_json || !csv_out) return fail_arg("null argument");
    return guarded([&] {
        const auto config = sumcs::ExperimentConfig::from_json(config_json);
        *csv_out = copy_string(sumcs::run_experiment(config).csv);
    });
}

void sumcs_string_free(char* s) { delete[] s; }

}  // extern "C"
