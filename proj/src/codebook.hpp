#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sumcs {

// Binary labels, bit subsets, summaries, and summary codebooks.
//
// Conventions (fixed project-wide):
//   * Bit positions are 1-based and position 1 is the most significant bit of
//     an n-bit label. The label "1011" with n=4 has bit 1 = 1, bit 4 = 1.
//   * A label's numeric value doubles as the zero-based column index of the
//     implicit measurement matrix; 1-based indices appear only in display.
//   * A codebook pairs m distinct d-subsets of {1..n} with all 2^d patterns.
//     Row (subset i, pattern j) lives at index i * 2^d + j.

using Bits = std::uint64_t;

inline constexpr int kMaxBits = 63;

// Hard cap on rows of any single codebook; the measurement vector is stored
// densely, so this bounds allocation to a few hundred MB.
inline constexpr std::int64_t kMaxRows = std::int64_t(1) << 26;

// Exact binomial coefficient; fails with Capacity if it would overflow.
std::uint64_t binomial_u64(int n, int k);

struct Label {
    Label() = default;
    Label(int n_, Bits bits_);

    int n = 0;
    Bits bits = 0;

    // 1-based position, MSB-first.
    int bit(int pos) const { return static_cast<int>((bits >> (n - pos)) & 1u); }

    std::string to_string() const;
    static Label parse(const std::string& s);

    friend bool operator==(const Label&, const Label&) = default;
};

class BitSubset {
public:
    BitSubset(int n, std::vector<int> positions);

    int n() const { return n_; }
    int size() const { return static_cast<int>(positions_.size()); }
    const std::vector<int>& positions() const { return positions_; }

    // Mask over label bits (bit n-p set for each position p).
    Bits mask() const { return mask_; }

    friend bool operator==(const BitSubset&, const BitSubset&) = default;

private:
    int n_ = 0;
    std::vector<int> positions_;
    Bits mask_ = 0;
};

struct Summary {
    BitSubset subset;
    Bits pattern = 0;
};

// The d bits of `label` at the subset's positions, in subset order
// (positions[0] becomes the most significant pattern bit).
Bits extract(const Label& label, const BitSubset& subset);

bool conforms(const Label& label, const Summary& summary);

enum class RandomSubsetMode {
    // Sample m subsets with replacement, then drop repeats; the resulting
    // codebook may have fewer than m subsets.
    DedupReplacement,
    // Exactly m distinct subsets (uniform without replacement).
    ExactDistinct,
};

class Codebook {
public:
    static Codebook complete(int n, int d);
    static Codebook random(int n, int d, std::int64_t m, std::uint64_t seed,
                           RandomSubsetMode mode = RandomSubsetMode::DedupReplacement);
    static Codebook from_subsets(int n, int d, std::vector<BitSubset> subsets);

    int n() const { return n_; }
    int d() const { return d_; }
    std::int64_t subset_count() const { return static_cast<std::int64_t>(subsets_.size()); }
    // The m originally asked for (>= subset_count() in dedup mode).
    std::int64_t requested_subsets() const { return requested_; }
    std::int64_t rows() const { return subset_count() << d_; }

    const BitSubset& subset(std::int64_t i) const { return subsets_[static_cast<std::size_t>(i)]; }
    const std::vector<BitSubset>& subsets() const { return subsets_; }

    std::int64_t row_index(std::int64_t subset_index, Bits pattern) const;
    Summary summary_of_row(std::int64_t row) const;

    std::int64_t subset_index_of_row(std::int64_t row) const {
        check_row(row);
        return row >> d_;
    }
    Bits pattern_of_row(std::int64_t row) const {
        check_row(row);
        return static_cast<Bits>(row) & ((Bits(1) << d_) - 1);
    }

    // Row hit by `label` under subset i; every label hits exactly one row per
    // subset. Hot path, no validation beyond the label width.
    std::int64_t row_of_label(std::int64_t subset_index, const Label& label) const {
        return (subset_index << d_) +
               static_cast<std::int64_t>(extract(label, subsets_[static_cast<std::size_t>(subset_index)]));
    }

    bool covers_all_bits() const;

    std::string to_json() const;
    static Codebook from_json(const std::string& text);
    void save_json(const std::string& path) const;
    static Codebook load_json(const std::string& path);

    friend bool operator==(const Codebook&, const Codebook&) = default;

private:
    Codebook(int n, int d, std::vector<BitSubset> subsets, std::int64_t requested);
    void check_row(std::int64_t row) const;

    int n_ = 0;
    int d_ = 0;
    std::vector<BitSubset> subsets_;
    std::int64_t requested_ = 0;
};

}  // namespace sumcs
