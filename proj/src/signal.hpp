#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "codebook.hpp"

namespace sumcs {

// Sparse test signals over n-bit labels.
//
// Exact mode stores integers (as integral doubles; everything stays well
// below 2^53 so arithmetic and equality are exact). Real mode stores reals
// and compares with a relative tolerance tau.

inline constexpr double kDefaultTau = 1e-9;

// Exact-mode values are drawn from [1, 2^40]; wide enough that random
// signals are distinguishable except with negligible probability.
inline constexpr std::int64_t kValueRange = std::int64_t(1) << 40;

enum class ValueKind { ExactInt, Real };

struct ValueMode {
    ValueKind kind = ValueKind::ExactInt;
    double tau = 0.0;

    static ValueMode exact() { return {ValueKind::ExactInt, 0.0}; }
    static ValueMode real(double tau = kDefaultTau);

    bool is_exact() const { return kind == ValueKind::ExactInt; }

    // Equality of two values under this mode.
    bool value_eq(double a, double b) const;
};

struct SignalEntry {
    Label label;
    double value = 0.0;
};

class SparseSignal {
public:
    // Placeholder (n = 0, no entries); real signals come from the validating
    // constructor below.
    SparseSignal() = default;

    // Entries are validated (distinct labels, nonzero values, integral values
    // in exact mode) and kept sorted by label.
    SparseSignal(int n, ValueMode mode, std::vector<SignalEntry> entries);

    int n() const { return n_; }
    ValueMode mode() const { return mode_; }
    std::int64_t k() const { return static_cast<std::int64_t>(entries_.size()); }
    std::span<const SignalEntry> entries() const { return entries_; }

    double total_mass() const;
    bool all_positive() const;

    // Exact label/value equality in exact mode, per-entry relative tau in
    // real mode.
    bool equals(const SparseSignal& other) const;

    std::string to_json() const;
    static SparseSignal from_json(const std::string& text);
    void save_json(const std::string& path) const;
    static SparseSignal load_json(const std::string& path);

private:
    int n_ = 0;
    ValueMode mode_;
    std::vector<SignalEntry> entries_;
};

// k distinct uniform labels with positive values: uniform integers from
// [1, 2^40] in exact mode, uniform (0,1) reals otherwise.
SparseSignal generate_signal(int n, std::int64_t k, ValueMode mode, std::uint64_t seed);

// True iff no two nonempty disjoint subsets of the values have equal sums.
// Guarded at k <= 20; callers with larger k rely on the wide value range as a
// probabilistic certificate instead.
bool is_distinguishable(const SparseSignal& signal);
bool distinguishable_values(std::span<const double> values);

inline constexpr std::int64_t kDistinguishableMaxK = 20;

}  // namespace sumcs
