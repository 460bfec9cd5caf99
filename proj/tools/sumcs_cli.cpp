// sumcs command-line tool. Talks to the library exclusively through the C
// API in sumcs/sumcs.h; all heavy lifting lives behind that boundary.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sumcs/sumcs.h"

namespace {

int die(sumcs_status status) {
    std::cerr << "error (" << sumcs_status_name(status) << "): " << sumcs_last_error() << "\n";
    return 1;
}

// Shared flags for the two experiment subcommands; serialized into the JSON
// config the C API consumes.
struct ExperimentFlags {
    std::uint64_t seed = 0;
    std::int64_t trials = 50;
    double threshold = 0.9;
    std::string alg = "ssii";
    std::string mode = "int";
    double tau = 0.0;
    std::string codebook = "random-distinct";
    std::vector<int> n_list;
    std::vector<std::int64_t> k_list;
    int d_min = 2;
    int d_max = 0;
    std::int64_t max_oversampling = 64;
    std::vector<std::int64_t> m_targets;
    int threads = 0;
    bool no_timing = false;
    std::string config_path;
    std::string out_path;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& flags, bool oversampling) {
    cmd->add_option("--seed", flags.seed, "master seed (required)")->required();
    cmd->add_option("--trials", flags.trials, "trials per grid point");
    cmd->add_option("--alg", flags.alg, "decoder: ssii, mm or bp");
    cmd->add_option("--mode", flags.mode, "value mode: int or real");
    cmd->add_option("--tau", flags.tau, "relative tolerance in real mode");
    cmd->add_option("--codebook", flags.codebook,
                    "codebook kind: complete, random-distinct or random-dedup");
    cmd->add_option("--n", flags.n_list, "label widths n (repeatable)");
    cmd->add_option("--k", flags.k_list, "sparsity levels (repeatable)");
    cmd->add_option("--d-min", flags.d_min, "smallest summary width to sweep");
    cmd->add_option("--d-max", flags.d_max, "largest summary width (0 = auto)");
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    cmd->add_flag("--no-timing", flags.no_timing, "emit 0 in the seconds column");
    cmd->add_option("--config", flags.config_path, "JSON config file (flags override)");
    cmd->add_option("-o,--out", flags.out_path, "output CSV path (default stdout)");
    if (oversampling) {
        cmd->add_option("--threshold", flags.threshold, "required success probability");
        cmd->add_option("--max-oversampling", flags.max_oversampling,
                        "cap on M/k during the search");
    } else {
        cmd->add_option("--M", flags.m_targets, "measurement budgets (repeatable)")->required();
    }
}

int write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(path);
    out << text;
    if (!out.good()) {
        std::cerr << "error: cannot write " << path << "\n";
        return 1;
    }
    return 0;
}

int run_experiment_cmd(const ExperimentFlags& flags, const std::string& kind) {
    nlohmann::json cfg;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in.good()) {
            std::cerr << "error: cannot open config " << flags.config_path << "\n";
            return 1;
        }
        try {
            in >> cfg;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "error: bad config JSON: " << e.what() << "\n";
            return 1;
        }
    }
    cfg["kind"] = kind;
    cfg["seed"] = flags.seed;
    cfg["trials"] = flags.trials;
    cfg["threshold"] = flags.threshold;
    cfg["alg"] = flags.alg;
    cfg["mode"] = flags.mode;
    if (flags.tau > 0) cfg["tau"] = flags.tau;
    cfg["codebook"] = flags.codebook;
    if (!flags.n_list.empty()) cfg["n_list"] = flags.n_list;
    if (!flags.k_list.empty()) cfg["k_list"] = flags.k_list;
    cfg["d_min"] = flags.d_min;
    cfg["d_max"] = flags.d_max;
    cfg["max_oversampling"] = flags.max_oversampling;
    if (!flags.m_targets.empty()) cfg["M_list"] = flags.m_targets;
    cfg["threads"] = flags.threads;
    cfg["timing"] = !flags.no_timing;

    char* csv = nullptr;
    const sumcs_status status = sumcs_experiment_run(cfg.dump().c_str(), &csv);
    if (status != SUMCS_OK) return die(status);
    const int rc = write_text(flags.out_path, csv);
    sumcs_string_free(csv);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"summary-codebook compressed sensing toolkit"};
    app.require_subcommand(1);

    // --- gen-codebook -------------------------------------------------------
    auto* gen_cb = app.add_subcommand("gen-codebook", "construct a summary codebook");
    int gc_n = 0, gc_d = 0;
    std::int64_t gc_m = 0;
    std::uint64_t gc_seed = 0;
    bool gc_complete = false, gc_dedup = false;
    std::string gc_out;
    gen_cb->add_option("--n", gc_n, "label width")->required();
    gen_cb->add_option("--d", gc_d, "summary width")->required();
    gen_cb->add_flag("--complete", gc_complete, "use all C(n,d) subsets");
    gen_cb->add_option("--m", gc_m, "random subset count");
    gen_cb->add_option("--seed", gc_seed, "random codebook seed");
    gen_cb->add_flag("--dedup", gc_dedup,
                     "sample with replacement and drop repeats (may yield fewer than m)");
    gen_cb->add_option("-o,--out", gc_out, "output JSON path")->required();

    // --- gen-signal ---------------------------------------------------------
    auto* gen_sig = app.add_subcommand("gen-signal", "generate a sparse test signal");
    int gs_n = 0;
    std::int64_t gs_k = 0;
    std::uint64_t gs_seed = 0;
    std::string gs_mode = "int", gs_out;
    double gs_tau = 0.0;
    bool gs_check = false;
    gen_sig->add_option("--n", gs_n, "label width")->required();
    gen_sig->add_option("--k", gs_k, "number of nonzeros")->required();
    gen_sig->add_option("--seed", gs_seed, "generator seed")->required();
    gen_sig->add_option("--mode", gs_mode, "int or real");
    gen_sig->add_option("--tau", gs_tau, "relative tolerance in real mode");
    gen_sig->add_flag("--check-distinguishable", gs_check,
                      "verify no two disjoint subsets of values share a sum (k <= 20)");
    gen_sig->add_option("-o,--out", gs_out, "output JSON path")->required();

    // --- encode -------------------------------------------------------------
    auto* enc = app.add_subcommand("encode", "apply the measurement operator to a signal");
    std::string enc_cb, enc_sig, enc_out;
    bool enc_stacked = false;
    enc->add_option("--codebook", enc_cb, "codebook JSON")->required();
    enc->add_option("--signal", enc_sig, "signal JSON")->required();
    enc->add_flag("--stacked", enc_stacked, "append the complete (n,1) part used by mm");
    enc->add_option("-o,--out", enc_out, "output measurements CSV")->required();

    // --- decode -------------------------------------------------------------
    auto* dec = app.add_subcommand("decode", "recover a sparse signal from measurements");
    std::string dec_alg, dec_in, dec_out;
    std::int64_t dec_iters = 0;
    double dec_tol = 0.0;
    bool dec_partial = false;
    int dec_n = 0;
    dec->add_option("--alg", dec_alg, "ssii, mm or bp")->required();
    dec->add_option("--measurements", dec_in, "measurements CSV")->required();
    dec->add_option("--max-iterations", dec_iters, "iteration cap (0 = auto)");
    dec->add_option("--tol", dec_tol, "bp pivot tolerance");
    dec->add_flag("--allow-partial", dec_partial, "accept files with missing rows");
    dec->add_option("--n", dec_n, "label width override for ingestion");
    dec->add_option("-o,--out", dec_out, "recovered signal JSON path");

    // --- experiments --------------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "Monte-Carlo recovery experiments");
    exp->require_subcommand(1);
    ExperimentFlags over_flags, prob_flags;
    auto* over = exp->add_subcommand(
        "oversampling", "minimal M reaching a success threshold, swept over d");
    add_experiment_flags(over, over_flags, true);
    auto* prob = exp->add_subcommand(
        "success-prob", "success probability versus sparsity at fixed M budgets");
    add_experiment_flags(prob, prob_flags, false);

    // --- bounds -------------------------------------------------------------
    auto* bounds = app.add_subcommand("bounds", "evaluate the recovery-bound formulas");
    int b_n = 0, b_d = 0;
    std::int64_t b_m = 1, b_k = 1;
    double b_alpha = 0.1, b_lambda = 0.9;
    bool b_gamma = false;
    std::string b_out;
    bounds->add_option("--n", b_n, "label width");
    bounds->add_option("--d", b_d, "summary width");
    bounds->add_option("--m", b_m, "subset count");
    bounds->add_option("--k", b_k, "sparsity");
    bounds->add_option("--alpha", b_alpha, "concentration parameter in (0, 1/2)");
    bounds->add_option("--lambda", b_lambda, "rate parameter in (0, 1)");
    bounds->add_flag("--gamma-binomial", b_gamma,
                     "evaluate the fractional binomial via lgamma instead of flooring");
    bounds->add_option("-o,--out", b_out, "output path (default stdout)");

    auto* grid = bounds->add_subcommand("grid", "evaluate over a parameter grid as CSV");
    std::vector<int> g_n{16}, g_d{4};
    std::vector<std::int64_t> g_m{8}, g_k{4};
    std::vector<double> g_alpha{0.1}, g_lambda{0.9};
    bool g_gamma = false;
    std::string g_out;
    grid->add_option("--n", g_n, "label widths (repeatable)");
    grid->add_option("--d", g_d, "summary widths (repeatable)");
    grid->add_option("--m", g_m, "subset counts (repeatable)");
    grid->add_option("--k", g_k, "sparsities (repeatable)");
    grid->add_option("--alpha", g_alpha, "alpha values (repeatable)");
    grid->add_option("--lambda", g_lambda, "lambda values (repeatable)");
    grid->add_flag("--gamma-binomial", g_gamma, "use the lgamma binomial");
    grid->add_option("-o,--out", g_out, "output path (default stdout)");

    // --- ingest -------------------------------------------------------------
    auto* ing = app.add_subcommand("ingest", "validate and normalize a measurements CSV");
    std::string ing_file, ing_out, ing_cb_out;
    bool ing_partial = false;
    int ing_n = 0;
    ing->add_option("--file", ing_file, "measurements CSV")->required();
    ing->add_flag("--allow-partial", ing_partial, "accept files with missing rows");
    ing->add_option("--n", ing_n, "label width override");
    ing->add_option("-o,--out", ing_out, "write the normalized CSV here");
    ing->add_option("--codebook-out", ing_cb_out, "write the reconstructed codebook here");

    CLI11_PARSE(app, argc, argv);

    if (gen_cb->parsed()) {
        sumcs_codebook* cb = nullptr;
        sumcs_status status;
        if (gc_complete)
            status = sumcs_codebook_complete(gc_n, gc_d, &cb);
        else if (gc_m > 0)
            status = sumcs_codebook_random(gc_n, gc_d, gc_m, gc_seed, gc_dedup ? 0 : 1, &cb);
        else {
            std::cerr << "error: pass --complete or --m\n";
            return 1;
        }
        if (status != SUMCS_OK) return die(status);
        status = sumcs_codebook_save(cb, gc_out.c_str());
        if (status != SUMCS_OK) {
            sumcs_codebook_free(cb);
            return die(status);
        }
        std::cout << "n=" << sumcs_codebook_n(cb) << " d=" << sumcs_codebook_d(cb)
                  << " m=" << sumcs_codebook_subsets(cb) << " M=" << sumcs_codebook_rows(cb)
                  << "\n";
        sumcs_codebook_free(cb);
        return 0;
    }

    if (gen_sig->parsed()) {
        if (gs_mode != "int" && gs_mode != "real") {
            std::cerr << "error: --mode must be int or real\n";
            return 1;
        }
        sumcs_signal* sig = nullptr;
        sumcs_status status =
            sumcs_signal_generate(gs_n, gs_k, gs_mode == "real" ? 1 : 0, gs_tau, gs_seed, &sig);
        if (status != SUMCS_OK) return die(status);
        if (gs_check) {
            int ok = 0;
            status = sumcs_signal_is_distinguishable(sig, &ok);
            if (status != SUMCS_OK) {
                sumcs_signal_free(sig);
                return die(status);
            }
            std::cout << "distinguishable=" << (ok ? "yes" : "no") << "\n";
        }
        status = sumcs_signal_save(sig, gs_out.c_str());
        sumcs_signal_free(sig);
        return status == SUMCS_OK ? 0 : die(status);
    }

    if (enc->parsed()) {
        sumcs_codebook* cb = nullptr;
        sumcs_signal* sig = nullptr;
        sumcs_measurements* y = nullptr;
        sumcs_status status = sumcs_codebook_load(enc_cb.c_str(), &cb);
        if (status != SUMCS_OK) return die(status);
        status = sumcs_signal_load(enc_sig.c_str(), &sig);
        if (status != SUMCS_OK) {
            sumcs_codebook_free(cb);
            return die(status);
        }
        status = enc_stacked ? sumcs_encode_stacked(sig, cb, &y) : sumcs_encode(sig, cb, &y);
        if (status == SUMCS_OK) status = sumcs_measurements_save(y, enc_out.c_str());
        sumcs_measurements_free(y);
        sumcs_signal_free(sig);
        sumcs_codebook_free(cb);
        return status == SUMCS_OK ? 0 : die(status);
    }

    if (dec->parsed()) {
        sumcs_measurements* y = nullptr;
        sumcs_status status =
            sumcs_measurements_load(dec_in.c_str(), dec_partial ? 1 : 0, dec_n, &y);
        if (status != SUMCS_OK) return die(status);
        sumcs_decode_result* res = nullptr;
        status = sumcs_decode(y, dec_alg.c_str(), dec_iters, dec_tol, &res);
        if (status != SUMCS_OK) {
            sumcs_measurements_free(y);
            return die(status);
        }
        const sumcs_decode_status dstatus = sumcs_result_status(res);
        const char* names[] = {"success", "partial", "contradiction"};
        std::cout << "status=" << names[dstatus]
                  << " iterations=" << sumcs_result_iterations(res);
        if (dstatus != SUMCS_DECODE_SUCCESS && sumcs_result_note(res)[0])
            std::cout << " note=\"" << sumcs_result_note(res) << "\"";
        std::cout << "\n";
        if (!dec_out.empty()) {
            sumcs_signal* rec = nullptr;
            status = sumcs_result_signal(res, &rec);
            if (status == SUMCS_OK) status = sumcs_signal_save(rec, dec_out.c_str());
            sumcs_signal_free(rec);
        }
        sumcs_result_free(res);
        sumcs_measurements_free(y);
        if (status != SUMCS_OK) return die(status);
        return dstatus == SUMCS_DECODE_SUCCESS ? 0 : 2;
    }

    if (over->parsed()) return run_experiment_cmd(over_flags, "oversampling");
    if (prob->parsed()) return run_experiment_cmd(prob_flags, "success-prob");

    if (grid->parsed()) {
        std::ostringstream csv;
        csv << "n,d,m,k,alpha,lambda,epsilon,p,ssii_failure,ssii_failure_raw,mm_success,"
               "mm_success_raw,ssii_failure_explicit,mm_failure_explicit,bp_measurements,"
               "k_of_lambda\n";
        for (int n : g_n)
            for (int d : g_d)
                for (std::int64_t m : g_m)
                    for (std::int64_t k : g_k)
                        for (double alpha : g_alpha)
                            for (double lambda : g_lambda) {
                                sumcs_bound_report rep;
                                const sumcs_status status = sumcs_bounds_eval(
                                    n, d, m, k, alpha, lambda, g_gamma ? 1 : 0, &rep);
                                if (status != SUMCS_OK) return die(status);
                                char line[512];
                                std::snprintf(
                                    line, sizeof line,
                                    "%d,%d,%lld,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                                    "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                                    n, d, static_cast<long long>(m), static_cast<long long>(k),
                                    alpha, lambda, rep.epsilon, rep.p, rep.ssii_failure,
                                    rep.ssii_failure_raw, rep.mm_success, rep.mm_success_raw,
                                    rep.ssii_failure_explicit, rep.mm_failure_explicit,
                                    rep.bp_measurements, rep.k_of_lambda);
                                csv << line;
                            }
        return write_text(g_out, csv.str());
    }

    if (bounds->parsed()) {
        if (b_n <= 0 || b_d <= 0) {
            std::cerr << "error: --n and --d are required\n";
            return 1;
        }
        char* json = nullptr;
        const sumcs_status status =
            sumcs_bounds_eval_json(b_n, b_d, b_m, b_k, b_alpha, b_lambda, b_gamma ? 1 : 0, &json);
        if (status != SUMCS_OK) return die(status);
        const int rc = write_text(b_out, std::string(json) + "\n");
        sumcs_string_free(json);
        return rc;
    }

    if (ing->parsed()) {
        sumcs_measurements* y = nullptr;
        sumcs_status status =
            sumcs_measurements_load(ing_file.c_str(), ing_partial ? 1 : 0, ing_n, &y);
        if (status != SUMCS_OK) return die(status);
        std::cout << "rows=" << sumcs_measurements_rows(y)
                  << " stacked=" << (sumcs_measurements_stacked(y) ? "yes" : "no") << "\n";
        if (!ing_out.empty()) status = sumcs_measurements_save(y, ing_out.c_str());
        if (status == SUMCS_OK && !ing_cb_out.empty()) {
            sumcs_codebook* cb = nullptr;
            status = sumcs_measurements_codebook(y, 1, &cb);
            if (status == SUMCS_OK) status = sumcs_codebook_save(cb, ing_cb_out.c_str());
            sumcs_codebook_free(cb);
        }
        sumcs_measurements_free(y);
        return status == SUMCS_OK ? 0 : die(status);
    }

    return 0;
}
