#include "ssii.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sumcs {

const char* decode_status_name(DecodeStatus status) {
    switch (status) {
        case DecodeStatus::Success: return "success";
        case DecodeStatus::Partial: return "partial";
        case DecodeStatus::Contradiction: return "contradiction";
    }
    return "unknown";
}

namespace {

bool row_nonzero(const MeasurementVector& y, std::int64_t row, double eps) {
    return std::abs(y.value(row)) > eps;
}

}  // namespace

PartialLabel zero_row_completion(PartialLabel label, const MeasurementVector& y) {
    const Codebook& cb = y.codebook();
    require(label.n == cb.n(), ErrorCode::InvalidArgument,
            "completion: label and codebook bit counts differ");
    const double eps = y.zero_eps();
    const int d = cb.d();
    const std::int64_t m = cb.subset_count();

    bool assigned = true;
    while (assigned && !label.complete()) {
        assigned = false;
        for (std::int64_t i = 0; i < m && !label.complete(); ++i) {
            const BitSubset& s = cb.subset(i);

            // Split the subset's pattern into bits fixed by the label and
            // free bits to enumerate.
            Bits fixed = 0;
            std::vector<int> free_slots;  // slot = pattern bit offset from MSB
            for (int t = 0; t < d; ++t) {
                const int pos = s.positions()[static_cast<std::size_t>(t)];
                if (label.known(pos)) {
                    if ((label.bits >> (label.n - pos)) & 1u)
                        fixed |= Bits(1) << (d - 1 - t);
                } else {
                    free_slots.push_back(t);
                }
            }
            if (free_slots.empty()) continue;

            const std::size_t free_count = free_slots.size();
            std::int64_t nonzero_count = 0;
            bool unknown_row = false;
            Bits nonzero_pattern = 0;
            for (Bits v = 0; v < (Bits(1) << free_count); ++v) {
                Bits pattern = fixed;
                for (std::size_t t = 0; t < free_count; ++t)
                    if ((v >> t) & 1u)
                        pattern |= Bits(1) << (d - 1 - free_slots[t]);
                const std::int64_t row = cb.row_index(i, pattern);
                if (!y.present(row)) {
                    unknown_row = true;
                    break;
                }
                if (row_nonzero(y, row, eps)) {
                    if (++nonzero_count > 1) break;
                    nonzero_pattern = pattern;
                }
            }
            if (unknown_row || nonzero_count != 1) continue;

            for (int t = 0; t < d; ++t) {
                const int pos = s.positions()[static_cast<std::size_t>(t)];
                const int bit = static_cast<int>((nonzero_pattern >> (d - 1 - t)) & 1u);
                label.assign(pos, bit);  // known bits are redundant by construction
            }
            assigned = true;
        }
    }
    return label;
}

InferOutcome infer_label(const std::vector<std::int64_t>& group_rows,
                         const MeasurementVector& y) {
    const Codebook& cb = y.codebook();
    require(!group_rows.empty(), ErrorCode::InvalidArgument, "infer: empty group");

    PartialLabel label(cb.n());
    const int d = cb.d();
    for (std::int64_t row : group_rows) {
        const std::int64_t i = cb.subset_index_of_row(row);
        const Bits pattern = cb.pattern_of_row(row);
        const BitSubset& s = cb.subset(i);
        for (int t = 0; t < d; ++t) {
            const int pos = s.positions()[static_cast<std::size_t>(t)];
            const int bit = static_cast<int>((pattern >> (d - 1 - t)) & 1u);
            if (label.assign(pos, bit) == PartialLabel::Assign::Conflict)
                return {true, std::nullopt};
        }
    }
    if (!label.complete()) label = zero_row_completion(std::move(label), y);
    return {false, std::move(label)};
}

namespace {

// A hypothesized label is only accepted while every measurement it touches is
// still nonzero; a label actually present in the residual signal always
// passes this in nonnegative mode.
bool all_conforming_rows_nonzero(const Label& label, const MeasurementVector& y, double eps) {
    const Codebook& cb = y.codebook();
    for (std::int64_t i = 0; i < cb.subset_count(); ++i) {
        const std::int64_t row = cb.row_of_label(i, label);
        if (!y.present(row)) continue;
        if (!row_nonzero(y, row, eps)) return false;
    }
    return true;
}

SparseSignal build_signal(int n, ValueMode mode, const std::map<Bits, double>& found) {
    std::vector<SignalEntry> entries;
    entries.reserve(found.size());
    for (const auto& [bits, value] : found)
        if (value != 0.0) entries.push_back({Label(n, bits), value});
    return SparseSignal(n, mode, std::move(entries));
}

bool reencode_matches(const SparseSignal& recovered, const MeasurementVector& original) {
    MeasurementVector check = encode(recovered, original.codebook_ptr());
    const double eps = original.zero_eps();
    for (std::int64_t r = 0; r < original.rows(); ++r) {
        if (!original.present(r)) continue;
        if (original.mode().is_exact()) {
            if (check.value(r) != original.value(r)) return false;
        } else if (std::abs(check.value(r) - original.value(r)) >
                   std::max(eps, original.mode().tau * std::abs(original.value(r)))) {
            return false;
        }
    }
    return true;
}

}  // namespace

DecodeResult decode_ssii(const MeasurementVector& y0, const DecodeLimits& limits) {
    const Codebook& cb = y0.codebook();
    MeasurementVector y = y0;
    const bool nonneg = y0.mode().is_exact() && y0.all_nonnegative();

    std::map<Bits, double> found;
    auto result = [&](DecodeStatus status, std::int64_t iters, std::string note) {
        DecodeResult out;
        out.status = status;
        out.recovered = build_signal(cb.n(), y0.mode(), found);
        if (status != DecodeStatus::Success) out.residual = y.values();
        out.iterations = iters;
        out.note = std::move(note);
        if (status == DecodeStatus::Success && !reencode_matches(out.recovered, y0)) {
            out.status = DecodeStatus::Contradiction;
            out.note = "re-encode mismatch";
            out.residual = y.values();
        }
        return out;
    };

    GroupPartition part = group_equal(y);
    std::int64_t max_iterations = limits.max_iterations > 0
                                      ? limits.max_iterations
                                      : 4 * static_cast<std::int64_t>(part.groups.size()) + 16;

    for (std::int64_t iter = 0; iter < max_iterations; ++iter) {
        if (iter > 0) part = group_equal(y);
        if (part.groups.empty()) return result(DecodeStatus::Success, iter, "");

        // More occurrences pin more bits, so try large groups first; larger
        // values break ties.
        std::vector<const ValueGroup*> order;
        order.reserve(part.groups.size());
        for (const auto& g : part.groups) order.push_back(&g);
        std::stable_sort(order.begin(), order.end(),
                         [](const ValueGroup* a, const ValueGroup* b) {
                             if (a->rows.size() != b->rows.size())
                                 return a->rows.size() > b->rows.size();
                             return a->value > b->value;
                         });

        const double eps = y.zero_eps();
        bool progressed = false;
        for (const ValueGroup* g : order) {
            InferOutcome inferred = infer_label(g->rows, y);
            if (inferred.conflict || !inferred.label->complete()) continue;
            const Label label = inferred.label->to_label();
            if (!all_conforming_rows_nonzero(label, y, eps)) continue;

            SubtractResult sub = subtract(y, label, g->value, nonneg);
            if (sub.outcome == SubtractOutcome::WentNegative)
                return result(DecodeStatus::Contradiction, iter + 1,
                              "subtraction drove row " + std::to_string(sub.offending_row) +
                                  " negative");
            found[label.bits] += g->value;
            if (found[label.bits] == 0.0) found.erase(label.bits);
            progressed = true;
            break;
        }
        if (!progressed) return result(DecodeStatus::Partial, iter + 1, "no further inference");
    }
    return result(DecodeStatus::Partial, max_iterations, "iteration limit reached");
}

}  // namespace sumcs
