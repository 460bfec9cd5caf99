#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "measurement.hpp"
#include "mixmatch.hpp"
#include "ssii.hpp"

namespace sumcs {

// Deterministic Monte-Carlo experiment engine. Every trial draws its own
// seed from (master seed, grid point, trial index), so results are identical
// for any worker count and any evaluation order.

enum class Alg { Ssii, Mm, Bp };

Alg alg_from_name(const std::string& name);
const char* alg_name(Alg alg);

enum class CodebookKind { Complete, RandomDistinct, RandomDedup };

struct TrialSpec {
    int n = 0;
    std::int64_t k = 0;
    int d = 0;
    std::int64_t m = 0;  // ignored for Complete
    CodebookKind codebook = CodebookKind::RandomDistinct;
    Alg alg = Alg::Ssii;
    ValueMode mode = ValueMode::exact();
    std::uint64_t seed = 0;
};

struct TrialOutcome {
    bool success = false;
    bool capacity_error = false;
    DecodeStatus status = DecodeStatus::Partial;
};

TrialOutcome run_trial(const TrialSpec& spec);

std::uint64_t trial_seed(std::uint64_t master, int n, std::int64_t k, int d, std::int64_t m,
                         std::int64_t trial_index);

struct PointStats {
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    std::int64_t capacity_failures = 0;
    double rate = 0.0;
};

PointStats run_point(const TrialSpec& base, std::uint64_t master, std::int64_t trials,
                     int threads);

// Success decodes are re-verified against the raw measurements; any mismatch
// is counted here and must stay at zero.
std::int64_t reencode_mismatch_count();

struct ExperimentConfig {
    std::string kind;  // "oversampling" | "success-prob"
    std::uint64_t master_seed = 0;
    bool seed_set = false;
    std::int64_t trials = 50;
    double threshold = 0.9;
    Alg alg = Alg::Ssii;
    ValueMode mode = ValueMode::exact();
    CodebookKind codebook = CodebookKind::RandomDistinct;
    std::vector<int> n_list;
    std::vector<std::int64_t> k_list;
    int d_min = 2;
    int d_max = 0;  // 0 = auto: min(n-1, ceil(log2 k) + 3)
    std::int64_t max_oversampling = 64;
    std::vector<std::int64_t> m_targets;  // success-prob: target row counts M
    int threads = 0;                      // 0 = hardware concurrency
    bool timing = true;

    static ExperimentConfig from_json(const std::string& text);
    void validate() const;
};

struct ExperimentRow {
    int n = 0;
    double N = 0.0;
    std::int64_t k = 0;
    int d = 0;
    std::int64_t m = 0;
    std::int64_t M = 0;
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    double rate = 0.0;
    double oversampling = 0.0;
    double seconds = 0.0;
    bool attained = true;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::string csv;  // fixed header n,N,k,d,m,M,successes,trials,rate,oversampling,seconds
};

// Minimal M = m 2^d reaching the success threshold, minimized over the d
// sweep; one row per (n, k).
ExperimentResult run_oversampling(const ExperimentConfig& config);

// Success rate per sparsity at fixed row budgets; one row per (M target, d, k)
// with the actually constructed M reported.
ExperimentResult run_success_prob(const ExperimentConfig& config);

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string experiment_csv(const std::vector<ExperimentRow>& rows);

// Measurements-CSV ingestion: rebuilds the codebook(s) from the subsets that
// appear and assembles the value vector(s). Stacked files carry a part
// column; an optional weight column scales each value (for observations given
// as averages).
struct IngestResult {
    bool stacked = false;
    std::optional<MeasurementVector> flat;
    std::optional<StackedMeasurements> stacked_measurements;
};

struct IngestOptions {
    bool allow_partial = false;
    int n_override = 0;  // 0 = infer from the largest position seen
};

IngestResult ingest_measurements_csv(std::istream& in, const IngestOptions& options = {});
IngestResult ingest_measurements_file(const std::string& path, const IngestOptions& options = {});

void write_stacked_csv(std::ostream& out, const StackedMeasurements& y);

}  // namespace sumcs
