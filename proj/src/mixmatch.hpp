#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "measurement.hpp"
#include "ssii.hpp"

namespace sumcs {

// Mix-and-Match decoding: a greedy subset-sum pass over a random (m,n,d)
// codebook's measurements identifies the nonzero values, then a complete
// (n,1) codebook's measurements place each value's label bit by bit.
//
// Exact integer mode only; subset-sum membership with floating tolerance is
// too brittle to be meaningful.

struct StackedCodebook {
    std::shared_ptr<const Codebook> part1;  // random (m,n,d)
    std::shared_ptr<const Codebook> part2;  // complete (n,1)

    static StackedCodebook make(std::shared_ptr<const Codebook> part1);

    int n() const { return part1->n(); }
    std::int64_t rows() const { return part1->rows() + part2->rows(); }
};

struct StackedMeasurements {
    MeasurementVector part1;
    MeasurementVector part2;

    std::int64_t rows() const { return part1.rows() + part2.rows(); }
};

StackedMeasurements encode_stacked(const SparseSignal& signal, const StackedCodebook& codebook);

// Guard on the value-identification phase: the subset-sum set S(X) has 2^|X|
// elements.
inline constexpr std::int64_t kMixMatchMaxK = 24;

struct ValueIdResult {
    bool ok = false;
    std::vector<double> values;  // ascending, distinct
    std::string reason;
};

// Greedy recovery of the nonzero value set from the part-1 measurements: keep
// adding the smallest observed value that is not yet a subset sum of the
// found set.
ValueIdResult identify_values(const std::vector<double>& y1,
                              std::int64_t max_k = kMixMatchMaxK);

struct SupportIdResult {
    bool ok = false;
    SparseSignal recovered;
    std::string reason;
};

// Place each identified value's label from the complete (n,1) measurements
// y2 (2n entries ordered ({1},0),({1},1),...,({n},0),({n},1)). Every nonzero
// entry must decompose into a unique subset of X.
SupportIdResult identify_support(const std::vector<double>& values,
                                 const std::vector<double>& y2, int n);

DecodeResult decode_mm(const StackedMeasurements& y, const DecodeLimits& limits = {});

// Number of subsets of `values` summing to `target`, counted up to `cap`
// (meet-in-the-middle; exact arithmetic). If exactly one, *mask receives it.
int count_subsets_with_sum(const std::vector<double>& values, double target, int cap,
                           std::uint32_t* mask);

}  // namespace sumcs
