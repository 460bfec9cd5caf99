#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "measurement.hpp"

namespace sumcs {

// Summarized support index inference: iteratively hypothesize that all rows
// sharing a value come from a single signal entry, reconstruct that entry's
// label from the rows' summaries (completing missing bits from zero rows),
// subtract, and repeat.

struct PartialLabel {
    explicit PartialLabel(int n_in) : n(n_in) {}

    int n;
    Bits known_mask = 0;  // same bit layout as Label::bits
    Bits bits = 0;

    enum class Assign { Ok, Redundant, Conflict };

    // 1-based position; assigning a known position to a different bit is a
    // conflict, not a mutation.
    Assign assign(int pos, int bit) {
        const Bits m = Bits(1) << (n - pos);
        if (known_mask & m)
            return ((bits & m) != 0) == (bit != 0) ? Assign::Redundant : Assign::Conflict;
        known_mask |= m;
        if (bit) bits |= m;
        return Assign::Ok;
    }

    bool known(int pos) const { return (known_mask >> (n - pos)) & 1u; }
    bool complete() const { return known_mask == full_mask(); }
    int unknown_count() const { return n - std::popcount(known_mask); }

    Bits full_mask() const { return (Bits(1) << n) - 1; }

    Label to_label() const {
        require(known_mask == full_mask(), ErrorCode::Internal,
                "partial label: not fully determined");
        return Label(n, bits);
    }
};

struct InferOutcome {
    bool conflict = false;
    std::optional<PartialLabel> label;  // absent iff conflict
};

// Union the summaries of the group rows into one partial label; conflicting
// bits discard the group. Unknown bits are completed from zero rows.
InferOutcome infer_label(const std::vector<std::int64_t>& group_rows,
                         const MeasurementVector& y);

// Repeatedly scan the codebook's subsets: whenever exactly one pattern
// consistent with the known bits has a nonzero measurement, adopt it. Stops
// when a sweep assigns nothing or the label is complete.
PartialLabel zero_row_completion(PartialLabel label, const MeasurementVector& y);

enum class DecodeStatus { Success, Partial, Contradiction };

struct DecodeResult {
    DecodeStatus status = DecodeStatus::Partial;
    SparseSignal recovered;           // full on success, best-effort otherwise
    std::vector<double> residual;     // remaining y (empty on success)
    std::int64_t iterations = 0;
    std::string note;
};

struct DecodeLimits {
    // 0 = derive from the initial number of distinct values.
    std::int64_t max_iterations = 0;
};

DecodeResult decode_ssii(const MeasurementVector& y, const DecodeLimits& limits = {});

const char* decode_status_name(DecodeStatus status);

}  // namespace sumcs
