#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "basis_pursuit.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace sumcs {

Alg alg_from_name(const std::string& name) {
    if (name == "ssii") return Alg::Ssii;
    if (name == "mm") return Alg::Mm;
    if (name == "bp") return Alg::Bp;
    fail(ErrorCode::InvalidArgument, "unknown algorithm \"" + name + "\" (want ssii, mm or bp)");
}

const char* alg_name(Alg alg) {
    switch (alg) {
        case Alg::Ssii: return "ssii";
        case Alg::Mm: return "mm";
        case Alg::Bp: return "bp";
    }
    return "?";
}

std::uint64_t trial_seed(std::uint64_t master, int n, std::int64_t k, int d, std::int64_t m,
                         std::int64_t trial_index) {
    return seed_mix({master, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k),
                     static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(m),
                     static_cast<std::uint64_t>(trial_index)});
}

namespace {

std::atomic<std::int64_t> g_reencode_mismatches{0};

void verify_success_reencode(const SparseSignal& recovered, const MeasurementVector& y) {
    MeasurementVector check = encode(recovered, y.codebook_ptr());
    const ValueMode mode = y.mode();
    for (std::int64_t r = 0; r < y.rows(); ++r) {
        if (!y.present(r)) continue;
        const bool same = mode.is_exact()
                              ? check.value(r) == y.value(r)
                              : std::abs(check.value(r) - y.value(r)) <=
                                    std::max(y.zero_eps(), mode.tau * std::abs(y.value(r)));
        if (!same) {
            g_reencode_mismatches.fetch_add(1, std::memory_order_relaxed);
            return;
        }
    }
}

struct TrialSeeds {
    std::uint64_t signal;
    std::uint64_t codebook;
};

TrialSeeds split_seed(std::uint64_t seed) {
    return {seed_mix({seed, 0x5167a1u}), seed_mix({seed, 0xc0deb00cu})};
}

}  // namespace

std::int64_t reencode_mismatch_count() { return g_reencode_mismatches.load(); }

TrialOutcome run_trial(const TrialSpec& spec) {
    TrialOutcome out;
    const TrialSeeds seeds = split_seed(spec.seed);
    try {
        std::shared_ptr<const Codebook> cb;
        switch (spec.codebook) {
            case CodebookKind::Complete:
                cb = std::make_shared<const Codebook>(Codebook::complete(spec.n, spec.d));
                break;
            case CodebookKind::RandomDistinct:
                cb = std::make_shared<const Codebook>(Codebook::random(
                    spec.n, spec.d, spec.m, seeds.codebook, RandomSubsetMode::ExactDistinct));
                break;
            case CodebookKind::RandomDedup:
                cb = std::make_shared<const Codebook>(Codebook::random(
                    spec.n, spec.d, spec.m, seeds.codebook, RandomSubsetMode::DedupReplacement));
                break;
        }
        const SparseSignal planted = generate_signal(spec.n, spec.k, spec.mode, seeds.signal);

        if (spec.alg == Alg::Mm) {
            StackedCodebook stacked = StackedCodebook::make(cb);
            StackedMeasurements y = encode_stacked(planted, stacked);
            DecodeResult res = decode_mm(y);
            out.status = res.status;
            if (res.status == DecodeStatus::Success) {
                verify_success_reencode(res.recovered, y.part1);
                verify_success_reencode(res.recovered, y.part2);
                out.success = res.recovered.equals(planted);
            }
        } else {
            MeasurementVector y = encode(planted, cb);
            if (spec.alg == Alg::Ssii) {
                DecodeResult res = decode_ssii(y);
                out.status = res.status;
                if (res.status == DecodeStatus::Success) {
                    verify_success_reencode(res.recovered, y);
                    out.success = res.recovered.equals(planted);
                }
            } else {
                SparseSignal rec = solve_bp(y);
                out.status = DecodeStatus::Success;
                out.success = rec.equals(planted);
            }
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Capacity) {
            out.capacity_error = true;
            return out;
        }
        if (e.code() == ErrorCode::Infeasible || e.code() == ErrorCode::IterationLimit) {
            out.status = DecodeStatus::Contradiction;
            return out;
        }
        throw;
    }
    return out;
}

PointStats run_point(const TrialSpec& base, std::uint64_t master, std::int64_t trials,
                     int threads) {
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
    parallel_for(trials, threads, [&](std::int64_t i) {
        TrialSpec spec = base;
        spec.seed = trial_seed(master, base.n, base.k, base.d, base.m, i);
        outcomes[static_cast<std::size_t>(i)] = run_trial(spec);
    });
    PointStats stats;
    stats.trials = trials;
    for (const auto& o : outcomes) {
        stats.successes += o.success ? 1 : 0;
        stats.capacity_failures += o.capacity_error ? 1 : 0;
    }
    stats.rate = trials > 0 ? static_cast<double>(stats.successes) / static_cast<double>(trials)
                            : 0.0;
    return stats;
}

void ExperimentConfig::validate() const {
    require(kind == "oversampling" || kind == "success-prob", ErrorCode::InvalidArgument,
            "experiment: kind must be oversampling or success-prob");
    require(seed_set, ErrorCode::InvalidArgument, "experiment: a master seed is required");
    require(trials >= 1, ErrorCode::InvalidArgument, "experiment: trials must be >= 1");
    require(threshold > 0.0 && threshold <= 1.0, ErrorCode::InvalidArgument,
            "experiment: threshold must be in (0, 1]");
    require(!n_list.empty(), ErrorCode::InvalidArgument, "experiment: empty n list");
    require(!k_list.empty(), ErrorCode::InvalidArgument, "experiment: empty k list");
    for (int n : n_list)
        require(n >= 2 && n <= kMaxBits, ErrorCode::InvalidArgument,
                "experiment: n must be in [2, 63]");
    for (std::int64_t k : k_list)
        require(k >= 0, ErrorCode::InvalidArgument, "experiment: k must be >= 0");
    require(d_min >= 1, ErrorCode::InvalidArgument, "experiment: d_min must be >= 1");
    require(max_oversampling >= 1, ErrorCode::InvalidArgument,
            "experiment: max_oversampling must be >= 1");
    if (kind == "success-prob")
        require(!m_targets.empty(), ErrorCode::InvalidArgument,
                "experiment: success-prob needs at least one M target");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Io, std::string("experiment config: bad JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.kind = j.value("kind", std::string());
    if (j.contains("seed")) {
        cfg.master_seed = j["seed"].get<std::uint64_t>();
        cfg.seed_set = true;
    }
    cfg.trials = j.value("trials", cfg.trials);
    cfg.threshold = j.value("threshold", cfg.threshold);
    if (j.contains("alg")) cfg.alg = alg_from_name(j["alg"].get<std::string>());
    if (j.contains("mode")) {
        const std::string mode = j["mode"].get<std::string>();
        require(mode == "int" || mode == "real", ErrorCode::InvalidArgument,
                "experiment: mode must be int or real");
        cfg.mode = mode == "int" ? ValueMode::exact() : ValueMode::real(j.value("tau", kDefaultTau));
    }
    if (j.contains("codebook")) {
        const std::string kind = j["codebook"].get<std::string>();
        if (kind == "complete") cfg.codebook = CodebookKind::Complete;
        else if (kind == "random-distinct") cfg.codebook = CodebookKind::RandomDistinct;
        else if (kind == "random-dedup") cfg.codebook = CodebookKind::RandomDedup;
        else fail(ErrorCode::InvalidArgument, "experiment: unknown codebook kind " + kind);
    }
    if (j.contains("n_list")) cfg.n_list = j["n_list"].get<std::vector<int>>();
    if (j.contains("k_list")) cfg.k_list = j["k_list"].get<std::vector<std::int64_t>>();
    cfg.d_min = j.value("d_min", cfg.d_min);
    cfg.d_max = j.value("d_max", cfg.d_max);
    cfg.max_oversampling = j.value("max_oversampling", cfg.max_oversampling);
    if (j.contains("M_list")) cfg.m_targets = j["M_list"].get<std::vector<std::int64_t>>();
    cfg.threads = j.value("threads", cfg.threads);
    cfg.timing = j.value("timing", cfg.timing);
    return cfg;
}

namespace {

int auto_d_max(int n, std::int64_t k) {
    const int by_k = static_cast<int>(std::ceil(std::log2(std::max<std::int64_t>(2, k)))) + 3;
    return std::min(n - 1, by_k);
}

std::string format_rate(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// Success-rate evaluation with memoization per (d, m).
class RateCache {
public:
    RateCache(const ExperimentConfig& cfg, int n, std::int64_t k) : cfg_(cfg), n_(n), k_(k) {}

    const PointStats& eval(int d, std::int64_t m) {
        auto key = std::make_pair(d, m);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        TrialSpec spec;
        spec.n = n_;
        spec.k = k_;
        spec.d = d;
        spec.m = m;
        spec.codebook = cfg_.codebook;
        spec.alg = cfg_.alg;
        spec.mode = cfg_.mode;
        PointStats stats = run_point(spec, cfg_.master_seed, cfg_.trials, cfg_.threads);
        return cache_.emplace(key, stats).first->second;
    }

private:
    const ExperimentConfig& cfg_;
    int n_;
    std::int64_t k_;
    std::map<std::pair<int, std::int64_t>, PointStats> cache_;
};

}  // namespace

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream out;
    out << "n,N,k,d,m,M,successes,trials,rate,oversampling,seconds\n";
    for (const auto& r : rows) {
        char nbuf[32];
        std::snprintf(nbuf, sizeof nbuf, "%.0f", r.N);
        out << r.n << ',' << nbuf << ',' << r.k << ',' << r.d << ',' << r.m << ',' << r.M << ','
            << r.successes << ',' << r.trials << ',' << format_rate(r.rate) << ','
            << (r.attained ? format_rate(r.oversampling) : std::string("nan")) << ','
            << format_rate(r.seconds) << '\n';
    }
    return out.str();
}

ExperimentResult run_oversampling(const ExperimentConfig& config) {
    config.validate();
    require(config.alg == Alg::Ssii || config.alg == Alg::Bp, ErrorCode::InvalidArgument,
            "oversampling: supported algorithms are ssii and bp");
    require(config.codebook != CodebookKind::Complete, ErrorCode::InvalidArgument,
            "oversampling: the m search needs a random codebook kind");

    ExperimentResult result;
    for (int n : config.n_list) {
        for (std::int64_t k : config.k_list) {
            const double t0 = now_seconds();
            RateCache rates(config, n, k);

            ExperimentRow row;
            row.n = n;
            row.N = std::exp2(n);
            row.k = k;
            row.trials = config.trials;
            row.attained = false;

            const int d_hi = config.d_max > 0 ? std::min(config.d_max, n - 1) : auto_d_max(n, k);
            for (int d = config.d_min; d <= d_hi; ++d) {
                std::int64_t m_cap = (config.max_oversampling * std::max<std::int64_t>(k, 1)) >> d;
                std::uint64_t total = 0;
                try {
                    total = binomial_u64(n, d);
                } catch (const Error&) {
                    total = UINT64_MAX;
                }
                m_cap = std::min<std::int64_t>(
                    m_cap, static_cast<std::int64_t>(
                               std::min<std::uint64_t>(total, std::uint64_t(1) << 24)));
                if (m_cap < 1) continue;
                if (row.attained && (std::int64_t(1) << d) >= row.M) continue;

                // Exponential expansion to the first m meeting the threshold,
                // then bisection, then a walk-down to the true boundary.
                std::int64_t hi = -1;
                for (std::int64_t m = 1; m <= m_cap; m = std::min(m * 2, m_cap)) {
                    if (rates.eval(d, m).rate >= config.threshold) {
                        hi = m;
                        break;
                    }
                    if (m == m_cap) break;
                }
                if (hi < 0) continue;
                std::int64_t lo = hi / 2;  // rate(lo) known below threshold (or lo == 0)
                while (hi - lo > 1) {
                    const std::int64_t mid = lo + (hi - lo) / 2;
                    if (rates.eval(d, mid).rate >= config.threshold)
                        hi = mid;
                    else
                        lo = mid;
                }
                while (hi > 1 && rates.eval(d, hi - 1).rate >= config.threshold) --hi;

                const std::int64_t M = hi << d;
                if (!row.attained || M < row.M) {
                    const PointStats& stats = rates.eval(d, hi);
                    row.attained = true;
                    row.d = d;
                    row.m = hi;
                    row.M = M;
                    row.successes = stats.successes;
                    row.rate = stats.rate;
                    row.oversampling = k > 0 ? static_cast<double>(M) / static_cast<double>(k)
                                             : static_cast<double>(M);
                }
            }
            row.seconds = config.timing ? now_seconds() - t0 : 0.0;
            result.rows.push_back(row);
        }
    }
    result.csv = experiment_csv(result.rows);
    return result;
}

ExperimentResult run_success_prob(const ExperimentConfig& config) {
    config.validate();
    require(config.codebook != CodebookKind::Complete, ErrorCode::InvalidArgument,
            "success-prob: the M budgets need a random codebook kind");

    ExperimentResult result;
    for (int n : config.n_list) {
        for (std::int64_t m_target : config.m_targets) {
            require(m_target >= 4, ErrorCode::InvalidArgument,
                    "success-prob: M targets must be >= 4");
            for (int d = config.d_min; (std::int64_t(1) << d) <= m_target && d <= n - 1; ++d) {
                if (config.d_max > 0 && d > config.d_max) break;
                std::int64_t m = std::min<std::int64_t>(
                    m_target >> d, static_cast<std::int64_t>(std::min<std::uint64_t>(
                                       binomial_u64(n, d), std::uint64_t(1) << 24)));
                if (m < 1) continue;
                for (std::int64_t k : config.k_list) {
                    const double t0 = now_seconds();
                    TrialSpec spec;
                    spec.n = n;
                    spec.k = k;
                    spec.d = d;
                    spec.m = m;
                    spec.codebook = config.codebook;
                    spec.alg = config.alg;
                    spec.mode = config.mode;
                    PointStats stats = run_point(spec, config.master_seed, config.trials,
                                                 config.threads);
                    ExperimentRow row;
                    row.n = n;
                    row.N = std::exp2(n);
                    row.k = k;
                    row.d = d;
                    row.m = m;
                    row.M = m << d;
                    row.successes = stats.successes;
                    row.trials = stats.trials;
                    row.rate = stats.rate;
                    row.oversampling = k > 0 ? static_cast<double>(row.M) / static_cast<double>(k)
                                             : static_cast<double>(row.M);
                    row.seconds = config.timing ? now_seconds() - t0 : 0.0;
                    result.rows.push_back(row);
                }
            }
        }
    }
    result.csv = experiment_csv(result.rows);
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    return config.kind == "oversampling" ? run_oversampling(config) : run_success_prob(config);
}

// ---------------------------------------------------------------------------
// Measurements-CSV ingestion.

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

struct RawRow {
    std::vector<int> positions;
    Bits pattern = 0;
    int width = 0;
    double value = 0.0;
    int part = 1;
};

MeasurementVector assemble_part(const std::vector<RawRow>& rows, int n, bool allow_partial,
                                bool all_integral) {
    require(!rows.empty(), ErrorCode::InvalidArgument, "ingest: a part has no rows");
    const int d = rows.front().width;

    std::vector<BitSubset> subsets;
    std::map<std::vector<int>, std::int64_t> subset_index;
    for (const auto& r : rows) {
        require(r.width == d, ErrorCode::InvalidArgument,
                "ingest: subsets of mixed sizes (codebooks are single-width)");
        if (subset_index.emplace(r.positions, static_cast<std::int64_t>(subsets.size())).second)
            subsets.emplace_back(n, r.positions);
    }

    auto cb = std::make_shared<const Codebook>(
        Codebook::from_subsets(n, d, std::move(subsets)));

    std::vector<double> values(static_cast<std::size_t>(cb->rows()), 0.0);
    std::vector<std::uint8_t> present(static_cast<std::size_t>(cb->rows()), 0);
    for (const auto& r : rows) {
        const std::int64_t row = cb->row_index(subset_index[r.positions], r.pattern);
        require(!present[static_cast<std::size_t>(row)], ErrorCode::InvalidArgument,
                "ingest: duplicate (subset, pattern) row");
        present[static_cast<std::size_t>(row)] = 1;
        values[static_cast<std::size_t>(row)] = r.value;
    }

    bool complete = true;
    for (std::uint8_t p : present)
        if (!p) complete = false;
    if (!complete)
        require(allow_partial, ErrorCode::InvalidArgument,
                "ingest: missing (subset, pattern) rows; pass allow-partial to accept");

    const ValueMode mode = all_integral ? ValueMode::exact() : ValueMode::real();
    if (complete) present.clear();
    return MeasurementVector(std::move(cb), mode, std::move(values), std::move(present));
}

}  // namespace

IngestResult ingest_measurements_csv(std::istream& in, const IngestOptions& options) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::Io, "ingest: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split(line, ',');
    int col_subset = -1, col_pattern = -1, col_value = -1, col_weight = -1, col_part = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "subset") col_subset = static_cast<int>(i);
        else if (header[i] == "pattern") col_pattern = static_cast<int>(i);
        else if (header[i] == "value") col_value = static_cast<int>(i);
        else if (header[i] == "weight") col_weight = static_cast<int>(i);
        else if (header[i] == "part") col_part = static_cast<int>(i);
        else fail(ErrorCode::Io, "ingest: unknown column \"" + header[i] + "\"");
    }
    require(col_subset >= 0 && col_pattern >= 0 && col_value >= 0, ErrorCode::Io,
            "ingest: header must contain subset, pattern, value");

    std::vector<RawRow> rows;
    bool all_integral = true;
    int max_pos = 0;
    bool has_part2 = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        require(fields.size() == header.size(), ErrorCode::Io,
                "ingest: line " + std::to_string(line_no) + " has wrong field count");
        RawRow row;
        try {
            for (const std::string& tok : split(fields[static_cast<std::size_t>(col_subset)], ';'))
                row.positions.push_back(std::stoi(tok));
            const std::string& pat = fields[static_cast<std::size_t>(col_pattern)];
            row.width = static_cast<int>(pat.size());
            for (char c : pat) {
                require(c == '0' || c == '1', ErrorCode::Io, "ingest: pattern must be binary");
                row.pattern = (row.pattern << 1) | static_cast<Bits>(c == '1');
            }
            row.value = std::stod(fields[static_cast<std::size_t>(col_value)]);
            if (col_weight >= 0)
                row.value *= std::stod(fields[static_cast<std::size_t>(col_weight)]);
            if (col_part >= 0) row.part = std::stoi(fields[static_cast<std::size_t>(col_part)]);
        } catch (const std::exception&) {
            fail(ErrorCode::Io, "ingest: cannot parse line " + std::to_string(line_no));
        }
        require(row.part == 1 || row.part == 2, ErrorCode::Io,
                "ingest: part must be 1 or 2 (line " + std::to_string(line_no) + ")");
        require(static_cast<int>(row.positions.size()) == row.width, ErrorCode::Io,
                "ingest: subset size and pattern width differ (line " + std::to_string(line_no) +
                    ")");
        if (row.value != std::nearbyint(row.value)) all_integral = false;
        for (int p : row.positions) max_pos = std::max(max_pos, p);
        if (row.part == 2) has_part2 = true;
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), ErrorCode::Io, "ingest: no data rows");

    const int n = options.n_override > 0 ? options.n_override : max_pos;
    require(n >= 1 && n <= kMaxBits, ErrorCode::InvalidArgument,
            "ingest: inferred n out of range");

    IngestResult out;
    if (!has_part2) {
        out.flat = assemble_part(rows, n, options.allow_partial, all_integral);
        return out;
    }

    std::vector<RawRow> part1, part2;
    for (auto& r : rows) (r.part == 1 ? part1 : part2).push_back(std::move(r));
    MeasurementVector y1 = assemble_part(part1, n, options.allow_partial, all_integral);
    MeasurementVector y2_raw = assemble_part(part2, n, options.allow_partial, all_integral);

    // Normalize part 2 to the canonical complete (n,1) layout.
    require(y2_raw.codebook().d() == 1 && y2_raw.codebook().subset_count() == n,
            ErrorCode::InvalidArgument,
            "ingest: part 2 must hold the complete single-bit codebook");
    auto canonical = std::make_shared<const Codebook>(Codebook::complete(n, 1));
    std::vector<double> values(static_cast<std::size_t>(2 * n), 0.0);
    std::vector<std::uint8_t> present(static_cast<std::size_t>(2 * n), 0);
    for (std::int64_t r = 0; r < y2_raw.rows(); ++r) {
        const int pos = y2_raw.codebook().subset(y2_raw.codebook().subset_index_of_row(r))
                            .positions()[0];
        const std::int64_t target = canonical->row_index(pos - 1, y2_raw.codebook().pattern_of_row(r));
        values[static_cast<std::size_t>(target)] = y2_raw.value(r);
        present[static_cast<std::size_t>(target)] = y2_raw.present(r) ? 1 : 0;
    }
    bool complete = true;
    for (std::uint8_t p : present)
        if (!p) complete = false;
    if (complete) present.clear();

    out.stacked = true;
    out.stacked_measurements = StackedMeasurements{
        std::move(y1),
        MeasurementVector(std::move(canonical), y2_raw.mode(), std::move(values),
                          std::move(present))};
    return out;
}

IngestResult ingest_measurements_file(const std::string& path, const IngestOptions& options) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::Io, "ingest: cannot open " + path);
    return ingest_measurements_csv(in, options);
}

void write_stacked_csv(std::ostream& out, const StackedMeasurements& y) {
    out << "subset,pattern,value,part\n";
    write_measurements_csv(out, y.part1, 1, false);
    write_measurements_csv(out, y.part2, 2, false);
}

}  // namespace sumcs
