#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "codebook.hpp"
#include "signal.hpp"

namespace sumcs {

// The implicit measurement operator y = Ax of a summary codebook. y is stored
// densely (length M = m * 2^d); the matrix itself is only materialized at toy
// scale for cross-checks.

class MeasurementVector {
public:
    MeasurementVector(std::shared_ptr<const Codebook> codebook, ValueMode mode,
                      std::vector<double> values, std::vector<std::uint8_t> present = {});

    const Codebook& codebook() const { return *codebook_; }
    std::shared_ptr<const Codebook> codebook_ptr() const { return codebook_; }
    ValueMode mode() const { return mode_; }
    std::int64_t rows() const { return static_cast<std::int64_t>(values_.size()); }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::int64_t row) const { return values_[static_cast<std::size_t>(row)]; }

    // Ingested files may omit rows; decoders treat those as unknown rather
    // than zero. An empty mask means every row is present.
    bool all_present() const { return present_.empty(); }
    bool present(std::int64_t row) const {
        return present_.empty() || present_[static_cast<std::size_t>(row)] != 0;
    }
    const std::vector<std::uint8_t>& present_mask() const { return present_; }

    bool all_nonnegative() const;

    // Magnitudes at or below this count as zero. Fixed at construction
    // (tau * the initial max magnitude in real mode, 0 in exact mode) so the
    // threshold does not drift while a decoder subtracts entries.
    double zero_eps() const { return zero_eps_; }

private:
    std::shared_ptr<const Codebook> codebook_;
    ValueMode mode_;
    std::vector<double> values_;
    std::vector<std::uint8_t> present_;
    double zero_eps_ = 0.0;
};

MeasurementVector encode(const SparseSignal& signal, std::shared_ptr<const Codebook> codebook);

enum class SubtractOutcome { Ok, WentNegative };

struct SubtractResult {
    SubtractOutcome outcome = SubtractOutcome::Ok;
    std::int64_t offending_row = -1;
};

// Removes one entry's contribution from y (the inverse of encoding a single
// entry). With forbid_negative set, a row dropping below zero aborts the
// update and rolls it back.
SubtractResult subtract(MeasurementVector& y, const Label& label, double value,
                        bool forbid_negative);

struct DenseMatrix {
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::vector<std::uint8_t> a;  // row-major 0/1

    std::uint8_t at(std::int64_t r, std::int64_t c) const {
        return a[static_cast<std::size_t>(r * cols + c)];
    }
};

// Full M x N matrix; memory guard at n <= 14.
DenseMatrix materialize_dense(const Codebook& codebook);

struct ValueGroup {
    double value = 0.0;
    std::vector<std::int64_t> rows;
};

struct GroupPartition {
    std::vector<ValueGroup> groups;     // sorted by ascending value
    std::vector<std::int64_t> zero_rows;
};

// Partition the present rows of y into equal-value groups plus the zero set.
// Exact equality in exact mode; single-link tolerance clustering on sorted
// values in real mode (the group value is then the cluster mean).
GroupPartition group_equal(const MeasurementVector& y);

// Measurements CSV (header subset,pattern,value with an optional trailing
// part column). Subsets print as semicolon-joined 1-based positions, patterns
// as d-character bitstrings.
void write_measurements_csv(std::ostream& out, const MeasurementVector& y,
                            std::optional<int> part, bool header);
void save_measurements_csv(const MeasurementVector& y, const std::string& path);

}  // namespace sumcs
