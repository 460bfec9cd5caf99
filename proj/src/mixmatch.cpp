#include "mixmatch.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sumcs {

StackedCodebook StackedCodebook::make(std::shared_ptr<const Codebook> part1) {
    require(part1 != nullptr, ErrorCode::InvalidArgument, "stacked codebook: null part1");
    auto part2 = std::make_shared<const Codebook>(Codebook::complete(part1->n(), 1));
    return {std::move(part1), std::move(part2)};
}

StackedMeasurements encode_stacked(const SparseSignal& signal, const StackedCodebook& codebook) {
    return {encode(signal, codebook.part1), encode(signal, codebook.part2)};
}

int count_subsets_with_sum(const std::vector<double>& values, double target, int cap,
                           std::uint32_t* mask) {
    const std::size_t k = values.size();
    require(k <= static_cast<std::size_t>(kMixMatchMaxK), ErrorCode::Capacity,
            "subset sum: too many values");

    const std::size_t half = k / 2;
    // Sorted sums of the first half with one representative mask each.
    std::vector<std::pair<double, std::uint32_t>> low;
    low.reserve(std::size_t(1) << half);
    for (std::uint32_t s = 0; s < (std::uint32_t(1) << half); ++s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < half; ++i)
            if ((s >> i) & 1u) sum += values[i];
        low.emplace_back(sum, s);
    }
    std::sort(low.begin(), low.end());

    int count = 0;
    const std::size_t rest = k - half;
    for (std::uint32_t s = 0; s < (std::uint32_t(1) << rest); ++s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rest; ++i)
            if ((s >> i) & 1u) sum += values[half + i];
        const double want = target - sum;
        auto lo = std::lower_bound(low.begin(), low.end(), std::make_pair(want, std::uint32_t(0)));
        for (auto it = lo; it != low.end() && it->first == want; ++it) {
            if (++count == 1 && mask) *mask = it->second | (s << half);
            if (count >= cap) return count;
        }
    }
    return count;
}

ValueIdResult identify_values(const std::vector<double>& y1, std::int64_t max_k) {
    std::set<double> observed;
    for (double v : y1)
        if (v != 0.0) observed.insert(v);

    std::vector<double> found;
    const std::size_t distinct = observed.size();
    for (std::size_t additions = 0; additions <= distinct; ++additions) {
        // Smallest observed value that is not a subset sum of the found set.
        bool have_missing = false;
        double missing = 0.0;
        for (double v : observed) {
            if (count_subsets_with_sum(found, v, 1, nullptr) == 0) {
                have_missing = true;
                missing = v;
                break;
            }
        }
        if (!have_missing) {
            ValueIdResult out;
            out.ok = true;
            out.values = std::move(found);
            return out;
        }
        require(static_cast<std::int64_t>(found.size()) < max_k, ErrorCode::Capacity,
                "value identification: more than " + std::to_string(max_k) +
                    " values; subset-sum search is infeasible");
        found.push_back(missing);
        std::sort(found.begin(), found.end());
    }
    return {false, {}, "value identification did not converge"};
}

SupportIdResult identify_support(const std::vector<double>& values,
                                 const std::vector<double>& y2, int n) {
    require(n >= 1 && n <= kMaxBits, ErrorCode::InvalidArgument,
            "support identification: n must be in [1, 63]");
    require(static_cast<int>(y2.size()) == 2 * n, ErrorCode::InvalidArgument,
            "support identification: y2 must have 2n entries");
    for (std::size_t i = 1; i < values.size(); ++i)
        require(values[i - 1] < values[i], ErrorCode::InvalidArgument,
                "support identification: values must be distinct and ascending");

    const std::size_t k = values.size();
    std::vector<Bits> bits(k, 0);
    std::vector<Bits> assigned(k, 0);  // which label positions were placed

    for (int pos = 1; pos <= n; ++pos) {
        for (int c = 0; c <= 1; ++c) {
            const double entry = y2[static_cast<std::size_t>(2 * (pos - 1) + c)];
            if (entry == 0.0) continue;
            std::uint32_t mask = 0;
            const int matches = count_subsets_with_sum(values, entry, 2, &mask);
            if (matches == 0)
                return {false, {}, "no subset of the identified values matches a measurement"};
            if (matches > 1)
                return {false, {}, "ambiguous subset-sum decomposition (values not distinguishable?)"};
            for (std::size_t j = 0; j < k; ++j) {
                if (!((mask >> j) & 1u)) continue;
                const Bits posbit = Bits(1) << (n - pos);
                if (assigned[j] & posbit)
                    return {false, {}, "a value was claimed by both patterns of one bit"};
                assigned[j] |= posbit;
                if (c) bits[j] |= posbit;
            }
        }
    }

    const Bits full = (Bits(1) << n) - 1;
    for (std::size_t j = 0; j < k; ++j)
        if (assigned[j] != full)
            return {false, {}, "some label bits were never determined"};

    std::vector<SignalEntry> entries;
    entries.reserve(k);
    for (std::size_t j = 0; j < k; ++j) entries.push_back({Label(n, bits[j]), values[j]});
    std::vector<Bits> sorted_bits = bits;
    std::sort(sorted_bits.begin(), sorted_bits.end());
    if (std::adjacent_find(sorted_bits.begin(), sorted_bits.end()) != sorted_bits.end())
        return {false, {}, "two values were assigned the same label"};

    SupportIdResult out;
    out.ok = true;
    out.recovered = SparseSignal(n, ValueMode::exact(), std::move(entries));
    return out;
}

DecodeResult decode_mm(const StackedMeasurements& y, const DecodeLimits&) {
    require(y.part1.mode().is_exact() && y.part2.mode().is_exact(), ErrorCode::Unsupported,
            "mix-and-match requires exact integer measurements");
    const Codebook& cb2 = y.part2.codebook();
    const int n = y.part1.codebook().n();
    require(cb2.n() == n && cb2.d() == 1 && cb2.subset_count() == n, ErrorCode::InvalidArgument,
            "mix-and-match: part2 must be the complete (n,1) codebook");
    for (int i = 0; i < n; ++i)
        require(cb2.subset(i).positions()[0] == i + 1, ErrorCode::InvalidArgument,
                "mix-and-match: part2 subsets must be {1},...,{n} in order");

    auto fail_result = [&](const std::string& note) {
        DecodeResult out;
        out.status = DecodeStatus::Contradiction;
        out.recovered = SparseSignal(n, ValueMode::exact(), {});
        out.residual = y.part1.values();
        out.note = note;
        return out;
    };

    ValueIdResult vals = identify_values(y.part1.values());
    if (!vals.ok) return fail_result(vals.reason);

    SupportIdResult sup = identify_support(vals.values, y.part2.values(), n);
    if (!sup.ok) return fail_result(sup.reason);

    // Success requires the reconstruction to reproduce both measurement parts.
    MeasurementVector check1 = encode(sup.recovered, y.part1.codebook_ptr());
    MeasurementVector check2 = encode(sup.recovered, y.part2.codebook_ptr());
    if (check1.values() != y.part1.values() || check2.values() != y.part2.values())
        return fail_result("re-encode mismatch");

    DecodeResult out;
    out.status = DecodeStatus::Success;
    out.recovered = std::move(sup.recovered);
    out.iterations = static_cast<std::int64_t>(vals.values.size());
    return out;
}

}  // namespace sumcs
