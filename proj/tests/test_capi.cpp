#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <string>

#include "sumcs/sumcs.h"

namespace {

struct TempDir {
    TempDir() {
        path = std::filesystem::temp_directory_path() / "sumcs_capi_tests";
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
    std::filesystem::path path;
};

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("status names and argument validation") {
    CHECK(std::string(sumcs_status_name(SUMCS_OK)) == "ok");
    CHECK(std::string(sumcs_status_name(SUMCS_ERR_CAPACITY)) == "capacity");

    CHECK(sumcs_codebook_complete(4, 2, nullptr) == SUMCS_ERR_INVALID_ARGUMENT);
    sumcs_codebook* cb = nullptr;
    CHECK(sumcs_codebook_complete(4, 9, &cb) == SUMCS_ERR_INVALID_ARGUMENT);
    CHECK(cb == nullptr);
    CHECK(std::strlen(sumcs_last_error()) > 0);
    CHECK(sumcs_codebook_complete(26, 13, &cb) == SUMCS_ERR_CAPACITY);
}

TEST_CASE("codebook handles round-trip through JSON files") {
    TempDir tmp;
    sumcs_codebook* cb = nullptr;
    REQUIRE(sumcs_codebook_random(10, 3, 12, 77, 1, &cb) == SUMCS_OK);
    CHECK(sumcs_codebook_n(cb) == 10);
    CHECK(sumcs_codebook_d(cb) == 3);
    CHECK(sumcs_codebook_subsets(cb) == 12);
    CHECK(sumcs_codebook_rows(cb) == 96);

    const std::string path = tmp.file("cb.json");
    REQUIRE(sumcs_codebook_save(cb, path.c_str()) == SUMCS_OK);
    sumcs_codebook* back = nullptr;
    REQUIRE(sumcs_codebook_load(path.c_str(), &back) == SUMCS_OK);
    CHECK(sumcs_codebook_rows(back) == 96);
    sumcs_codebook_free(back);
    sumcs_codebook_free(cb);

    CHECK(sumcs_codebook_load(tmp.file("absent.json").c_str(), &back) == SUMCS_ERR_IO);
}

TEST_CASE("encode, save, load, decode round-trip") {
    TempDir tmp;
    sumcs_codebook* cb = nullptr;
    REQUIRE(sumcs_codebook_complete(6, 3, &cb) == SUMCS_OK);
    sumcs_signal* sig = nullptr;
    REQUIRE(sumcs_signal_generate(6, 3, 0, 0, 2024, &sig) == SUMCS_OK);
    CHECK(sumcs_signal_n(sig) == 6);
    CHECK(sumcs_signal_k(sig) == 3);

    int distinguishable = 0;
    REQUIRE(sumcs_signal_is_distinguishable(sig, &distinguishable) == SUMCS_OK);
    CHECK(distinguishable == 1);

    sumcs_measurements* y = nullptr;
    REQUIRE(sumcs_encode(sig, cb, &y) == SUMCS_OK);
    CHECK(sumcs_measurements_rows(y) == sumcs_codebook_rows(cb));
    CHECK(sumcs_measurements_stacked(y) == 0);

    const std::string ypath = tmp.file("y.csv");
    REQUIRE(sumcs_measurements_save(y, ypath.c_str()) == SUMCS_OK);
    sumcs_measurements* loaded = nullptr;
    REQUIRE(sumcs_measurements_load(ypath.c_str(), 0, 0, &loaded) == SUMCS_OK);
    CHECK(sumcs_measurements_rows(loaded) == sumcs_measurements_rows(y));

    sumcs_decode_result* res = nullptr;
    REQUIRE(sumcs_decode(loaded, "ssii", 0, 0, &res) == SUMCS_OK);
    CHECK(sumcs_result_status(res) == SUMCS_DECODE_SUCCESS);
    CHECK(sumcs_result_iterations(res) > 0);

    sumcs_signal* rec = nullptr;
    REQUIRE(sumcs_result_signal(res, &rec) == SUMCS_OK);
    const std::string a = tmp.file("sig.json");
    const std::string b = tmp.file("rec.json");
    REQUIRE(sumcs_signal_save(sig, a.c_str()) == SUMCS_OK);
    REQUIRE(sumcs_signal_save(rec, b.c_str()) == SUMCS_OK);
    sumcs_signal* sig_back = nullptr;
    REQUIRE(sumcs_signal_load(a.c_str(), &sig_back) == SUMCS_OK);
    CHECK(sumcs_signal_k(sig_back) == 3);

    // Decoding the same measurements with bp agrees at this scale.
    sumcs_decode_result* res_bp = nullptr;
    REQUIRE(sumcs_decode(loaded, "bp", 0, 0, &res_bp) == SUMCS_OK);
    CHECK(sumcs_result_status(res_bp) == SUMCS_DECODE_SUCCESS);

    CHECK(sumcs_decode(loaded, "mm", 0, 0, &res) == SUMCS_ERR_INVALID_ARGUMENT);
    CHECK(sumcs_decode(loaded, "what", 0, 0, &res) == SUMCS_ERR_INVALID_ARGUMENT);

    sumcs_signal_free(sig_back);
    sumcs_signal_free(rec);
    sumcs_result_free(res_bp);
    sumcs_result_free(res);
    sumcs_measurements_free(loaded);
    sumcs_measurements_free(y);
    sumcs_signal_free(sig);
    sumcs_codebook_free(cb);
}

TEST_CASE("stacked measurements drive the mm decoder") {
    TempDir tmp;
    sumcs_codebook* cb = nullptr;
    REQUIRE(sumcs_codebook_random(12, 3, 10, 5, 1, &cb) == SUMCS_OK);
    sumcs_signal* sig = nullptr;
    REQUIRE(sumcs_signal_generate(12, 4, 0, 0, 31, &sig) == SUMCS_OK);

    sumcs_measurements* y = nullptr;
    REQUIRE(sumcs_encode_stacked(sig, cb, &y) == SUMCS_OK);
    CHECK(sumcs_measurements_stacked(y) == 1);
    CHECK(sumcs_measurements_rows(y) == 10 * 8 + 24);

    const std::string path = tmp.file("stacked.csv");
    REQUIRE(sumcs_measurements_save(y, path.c_str()) == SUMCS_OK);
    sumcs_measurements* loaded = nullptr;
    REQUIRE(sumcs_measurements_load(path.c_str(), 0, 0, &loaded) == SUMCS_OK);
    CHECK(sumcs_measurements_stacked(loaded) == 1);

    sumcs_decode_result* res = nullptr;
    REQUIRE(sumcs_decode(loaded, "mm", 0, 0, &res) == SUMCS_OK);
    CHECK(sumcs_result_status(res) == SUMCS_DECODE_SUCCESS);

    sumcs_result_free(res);
    sumcs_measurements_free(loaded);
    sumcs_measurements_free(y);
    sumcs_signal_free(sig);
    sumcs_codebook_free(cb);
}

TEST_CASE("bp refuses oversized problems through the C surface") {
    sumcs_codebook* cb = nullptr;
    REQUIRE(sumcs_codebook_complete(13, 1, &cb) == SUMCS_OK);
    sumcs_signal* sig = nullptr;
    REQUIRE(sumcs_signal_generate(13, 2, 0, 0, 8, &sig) == SUMCS_OK);
    sumcs_measurements* y = nullptr;
    REQUIRE(sumcs_encode(sig, cb, &y) == SUMCS_OK);
    sumcs_decode_result* res = nullptr;
    CHECK(sumcs_decode(y, "bp", 0, 0, &res) == SUMCS_ERR_CAPACITY);
    CHECK(std::string(sumcs_last_error()).find("12") != std::string::npos);
    sumcs_measurements_free(y);
    sumcs_signal_free(sig);
    sumcs_codebook_free(cb);
}

TEST_CASE("bound reports fill the struct and the JSON") {
    sumcs_bound_report rep;
    REQUIRE(sumcs_bounds_eval(16, 4, 8, 5, 0.1, 0.9, 0, &rep) == SUMCS_OK);
    CHECK(rep.mm_success == 0.0);
    CHECK(rep.bp_measurements > 0.0);

    char* json = nullptr;
    REQUIRE(sumcs_bounds_eval_json(16, 4, 8, 5, 0.1, 0.9, 0, &json) == SUMCS_OK);
    CHECK(std::string(json).find("\"epsilon\"") != std::string::npos);
    sumcs_string_free(json);

    CHECK(sumcs_bounds_eval(16, 4, 8, 5, 0.7, 0.9, 0, &rep) == SUMCS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("experiments run from a JSON config") {
    const char* config = R"({
        "kind": "success-prob", "seed": 99, "trials": 8, "n_list": [8],
        "k_list": [1, 2], "M_list": [32], "threads": 1, "timing": false
    })";
    char* csv = nullptr;
    REQUIRE(sumcs_experiment_run(config, &csv) == SUMCS_OK);
    std::string text(csv);
    sumcs_string_free(csv);
    CHECK(text.rfind("n,N,k,d,m,M,successes,trials,rate,oversampling,seconds\n", 0) == 0);

    char* csv2 = nullptr;
    REQUIRE(sumcs_experiment_run(config, &csv2) == SUMCS_OK);
    CHECK(text == std::string(csv2));
    sumcs_string_free(csv2);

    CHECK(sumcs_experiment_run("{\"kind\":\"success-prob\"}", &csv) ==
          SUMCS_ERR_INVALID_ARGUMENT);
    CHECK(sumcs_experiment_run("not json", &csv) == SUMCS_ERR_IO);
}

}  // TEST_SUITE
