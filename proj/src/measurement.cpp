#include "measurement.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace sumcs {

MeasurementVector::MeasurementVector(std::shared_ptr<const Codebook> codebook, ValueMode mode,
                                     std::vector<double> values,
                                     std::vector<std::uint8_t> present)
    : codebook_(std::move(codebook)), mode_(mode), values_(std::move(values)),
      present_(std::move(present)) {
    require(codebook_ != nullptr, ErrorCode::InvalidArgument, "measurements: null codebook");
    require(static_cast<std::int64_t>(values_.size()) == codebook_->rows(),
            ErrorCode::InvalidArgument, "measurements: value count differs from codebook rows");
    require(present_.empty() || present_.size() == values_.size(), ErrorCode::InvalidArgument,
            "measurements: present mask size mismatch");
    if (!mode_.is_exact()) {
        double mx = 0.0;
        for (std::size_t r = 0; r < values_.size(); ++r)
            if (this->present(static_cast<std::int64_t>(r)))
                mx = std::max(mx, std::abs(values_[r]));
        zero_eps_ = mode_.tau * mx;
    }
}

bool MeasurementVector::all_nonnegative() const {
    for (std::size_t r = 0; r < values_.size(); ++r)
        if (present(static_cast<std::int64_t>(r)) && values_[r] < 0.0) return false;
    return true;
}

MeasurementVector encode(const SparseSignal& signal, std::shared_ptr<const Codebook> codebook) {
    require(codebook != nullptr, ErrorCode::InvalidArgument, "encode: null codebook");
    require(signal.n() == codebook->n(), ErrorCode::InvalidArgument,
            "encode: signal and codebook bit counts differ");

    std::vector<double> y(static_cast<std::size_t>(codebook->rows()), 0.0);
    const std::int64_t m = codebook->subset_count();
    for (const auto& e : signal.entries())
        for (std::int64_t i = 0; i < m; ++i)
            y[static_cast<std::size_t>(codebook->row_of_label(i, e.label))] += e.value;

    if (signal.mode().is_exact()) {
        double mass = 0.0;
        for (const auto& e : signal.entries()) mass += std::abs(e.value);
        require(mass < 0x1.0p52, ErrorCode::Capacity,
                "encode: total mass too large for exact integer arithmetic");
    }
    return MeasurementVector(std::move(codebook), signal.mode(), std::move(y));
}

SubtractResult subtract(MeasurementVector& y, const Label& label, double value,
                        bool forbid_negative) {
    const Codebook& cb = y.codebook();
    require(label.n == cb.n(), ErrorCode::InvalidArgument,
            "subtract: label and codebook bit counts differ");

    const std::int64_t m = cb.subset_count();
    auto& vals = y.values();
    for (std::int64_t i = 0; i < m; ++i) {
        const std::int64_t r = cb.row_of_label(i, label);
        if (!y.present(r)) continue;
        const double next = vals[static_cast<std::size_t>(r)] - value;
        if (forbid_negative && next < 0.0) {
            // Roll back the rows already updated.
            for (std::int64_t j = 0; j < i; ++j) {
                const std::int64_t rj = cb.row_of_label(j, label);
                if (y.present(rj)) vals[static_cast<std::size_t>(rj)] += value;
            }
            return {SubtractOutcome::WentNegative, r};
        }
        vals[static_cast<std::size_t>(r)] = next;
    }
    return {};
}

DenseMatrix materialize_dense(const Codebook& codebook) {
    require(codebook.n() <= 14, ErrorCode::Capacity,
            "materialize: dense matrices are limited to n <= 14");
    DenseMatrix out;
    out.rows = codebook.rows();
    out.cols = std::int64_t(1) << codebook.n();
    out.a.assign(static_cast<std::size_t>(out.rows * out.cols), 0);
    const std::int64_t m = codebook.subset_count();
    for (std::int64_t j = 0; j < out.cols; ++j) {
        const Label label(codebook.n(), static_cast<Bits>(j));
        for (std::int64_t i = 0; i < m; ++i)
            out.a[static_cast<std::size_t>(codebook.row_of_label(i, label) * out.cols + j)] = 1;
    }
    return out;
}

GroupPartition group_equal(const MeasurementVector& y) {
    GroupPartition out;
    const double eps = y.zero_eps();

    std::vector<std::pair<double, std::int64_t>> nonzero;
    for (std::int64_t r = 0; r < y.rows(); ++r) {
        if (!y.present(r)) continue;
        const double v = y.value(r);
        if (std::abs(v) <= eps)
            out.zero_rows.push_back(r);
        else
            nonzero.emplace_back(v, r);
    }
    std::sort(nonzero.begin(), nonzero.end());

    const ValueMode mode = y.mode();
    for (std::size_t i = 0; i < nonzero.size();) {
        std::size_t j = i + 1;
        // Single-link: extend while adjacent sorted values are equal under
        // the mode's tolerance.
        while (j < nonzero.size() && mode.value_eq(nonzero[j - 1].first, nonzero[j].first)) ++j;
        ValueGroup g;
        double sum = 0.0;
        for (std::size_t t = i; t < j; ++t) {
            sum += nonzero[t].first;
            g.rows.push_back(nonzero[t].second);
        }
        g.value = mode.is_exact() ? nonzero[i].first : sum / static_cast<double>(j - i);
        std::sort(g.rows.begin(), g.rows.end());
        out.groups.push_back(std::move(g));
        i = j;
    }
    return out;
}

namespace {

std::string format_value(double v, ValueMode mode) {
    char buf[40];
    if (mode.is_exact())
        std::snprintf(buf, sizeof buf, "%" PRId64, static_cast<std::int64_t>(v));
    else
        std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string subset_field(const BitSubset& s) {
    std::string out;
    for (std::size_t i = 0; i < s.positions().size(); ++i) {
        if (i) out += ';';
        out += std::to_string(s.positions()[i]);
    }
    return out;
}

std::string pattern_field(Bits pattern, int d) {
    std::string out(static_cast<std::size_t>(d), '0');
    for (int t = 0; t < d; ++t)
        if ((pattern >> (d - 1 - t)) & 1u) out[static_cast<std::size_t>(t)] = '1';
    return out;
}

}  // namespace

void write_measurements_csv(std::ostream& out, const MeasurementVector& y,
                            std::optional<int> part, bool header) {
    const Codebook& cb = y.codebook();
    if (header) {
        out << "subset,pattern,value";
        if (part) out << ",part";
        out << '\n';
    }
    for (std::int64_t r = 0; r < y.rows(); ++r) {
        if (!y.present(r)) continue;
        out << subset_field(cb.subset(cb.subset_index_of_row(r))) << ','
            << pattern_field(cb.pattern_of_row(r), cb.d()) << ','
            << format_value(y.value(r), y.mode());
        if (part) out << ',' << *part;
        out << '\n';
    }
}

void save_measurements_csv(const MeasurementVector& y, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::Io, "measurements: cannot open " + path + " for writing");
    write_measurements_csv(out, y, std::nullopt, true);
    require(out.good(), ErrorCode::Io, "measurements: write to " + path + " failed");
}

}  // namespace sumcs
