#include "signal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "rng.hpp"

namespace sumcs {

ValueMode ValueMode::real(double tau) {
    require(tau > 0.0 && std::isfinite(tau), ErrorCode::InvalidArgument,
            "value mode: tau must be positive and finite");
    return {ValueKind::Real, tau};
}

bool ValueMode::value_eq(double a, double b) const {
    if (is_exact()) return a == b;
    return std::abs(a - b) <= tau * std::max(std::abs(a), std::abs(b));
}

SparseSignal::SparseSignal(int n, ValueMode mode, std::vector<SignalEntry> entries)
    : n_(n), mode_(mode), entries_(std::move(entries)) {
    require(n_ >= 1 && n_ <= kMaxBits, ErrorCode::InvalidArgument,
            "signal: n must be in [1, 63]");
    std::sort(entries_.begin(), entries_.end(),
              [](const SignalEntry& a, const SignalEntry& b) { return a.label.bits < b.label.bits; });
    Bits prev = 0;
    bool first = true;
    for (const auto& e : entries_) {
        require(e.label.n == n_, ErrorCode::InvalidArgument,
                "signal: entry label has wrong bit count");
        require(first || e.label.bits != prev, ErrorCode::InvalidArgument,
                "signal: duplicate label");
        require(e.value != 0.0 && std::isfinite(e.value), ErrorCode::InvalidArgument,
                "signal: entry values must be nonzero and finite");
        if (mode_.is_exact())
            require(std::nearbyint(e.value) == e.value && std::abs(e.value) < 0x1.0p52,
                    ErrorCode::InvalidArgument, "signal: exact mode requires integer values");
        prev = e.label.bits;
        first = false;
    }
}

double SparseSignal::total_mass() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value;
    return s;
}

bool SparseSignal::all_positive() const {
    for (const auto& e : entries_)
        if (e.value <= 0.0) return false;
    return true;
}

bool SparseSignal::equals(const SparseSignal& other) const {
    if (n_ != other.n_ || entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].label.bits != other.entries_[i].label.bits) return false;
        if (!mode_.value_eq(entries_[i].value, other.entries_[i].value)) return false;
    }
    return true;
}

SparseSignal generate_signal(int n, std::int64_t k, ValueMode mode, std::uint64_t seed) {
    require(n >= 1 && n <= kMaxBits, ErrorCode::InvalidArgument, "generate: n must be in [1, 63]");
    require(k >= 0, ErrorCode::InvalidArgument, "generate: k must be >= 0");
    if (n < 63)
        require(k <= (std::int64_t(1) << n), ErrorCode::InvalidArgument,
                "generate: k exceeds the number of labels");
    require(k <= (std::int64_t(1) << 24), ErrorCode::Capacity, "generate: k too large");

    Rng rng(seed);
    std::vector<Bits> labels;
    labels.reserve(static_cast<std::size_t>(k));
    if (n <= 24 && k * 2 >= (std::int64_t(1) << n)) {
        // Dense support: partial Fisher-Yates over the whole label set.
        const std::int64_t total = std::int64_t(1) << n;
        std::vector<Bits> all(static_cast<std::size_t>(total));
        for (std::int64_t i = 0; i < total; ++i) all[static_cast<std::size_t>(i)] = static_cast<Bits>(i);
        for (std::int64_t i = 0; i < k; ++i) {
            std::int64_t j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total - i)));
            std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
            labels.push_back(all[static_cast<std::size_t>(i)]);
        }
    } else {
        std::unordered_set<Bits> seen;
        const Bits bound = Bits(1) << n;
        while (static_cast<std::int64_t>(labels.size()) < k) {
            Bits b = rng.below(bound);
            if (seen.insert(b).second) labels.push_back(b);
        }
    }

    std::vector<SignalEntry> entries;
    entries.reserve(labels.size());
    for (Bits b : labels) {
        double v;
        if (mode.is_exact())
            v = static_cast<double>(rng.below(static_cast<std::uint64_t>(kValueRange)) + 1);
        else
            v = rng.unit();
        entries.push_back({Label(n, b), v});
    }
    return SparseSignal(n, mode, std::move(entries));
}

namespace {

// Assignment buckets by whether the plus/minus sides are populated.
enum : std::uint8_t {
    kBucketNone = 1,       // neither side used (only the empty assignment)
    kBucketPlusOnly = 2,
    kBucketMinusOnly = 4,
    kBucketBoth = 8,
};

std::uint64_t key_of(double sum) {
    if (sum == 0.0) sum = 0.0;  // fold -0.0
    return std::bit_cast<std::uint64_t>(sum);
}

// Enumerate all {+1,-1,0} assignments over `vals`, recording for each reached
// sum which bucket kinds occur.
void enumerate_half(std::span<const double> vals,
                    std::unordered_map<std::uint64_t, std::uint8_t>& out) {
    const std::size_t count = vals.size();
    std::vector<int> assign(count, 0);
    for (;;) {
        double sum = 0.0;
        bool plus = false, minus = false;
        for (std::size_t i = 0; i < count; ++i) {
            if (assign[i] == 1) {
                sum += vals[i];
                plus = true;
            } else if (assign[i] == 2) {
                sum -= vals[i];
                minus = true;
            }
        }
        std::uint8_t bucket = plus ? (minus ? kBucketBoth : kBucketPlusOnly)
                                   : (minus ? kBucketMinusOnly : kBucketNone);
        out[key_of(sum)] |= bucket;

        std::size_t i = 0;
        while (i < count && assign[i] == 2) assign[i++] = 0;
        if (i == count) break;
        ++assign[i];
    }
}

bool compatible(std::uint8_t a_bucket, bool plus_b, bool minus_b) {
    const bool plus_a = a_bucket == kBucketPlusOnly || a_bucket == kBucketBoth;
    const bool minus_a = a_bucket == kBucketMinusOnly || a_bucket == kBucketBoth;
    return (plus_a || plus_b) && (minus_a || minus_b);
}

}  // namespace

bool distinguishable_values(std::span<const double> values) {
    const std::int64_t k = static_cast<std::int64_t>(values.size());
    require(k <= kDistinguishableMaxK, ErrorCode::Capacity,
            "distinguishable: brute force limited to k <= 20");
    if (k < 2) return true;

    // A violating pair of disjoint subsets is a nonzero {+1,-1,0} assignment
    // with zero total and both signs present; meet in the middle over halves.
    const std::size_t half = static_cast<std::size_t>(k) / 2;
    std::unordered_map<std::uint64_t, std::uint8_t> a_sums;
    enumerate_half(values.subspan(0, half), a_sums);

    std::span<const double> b_vals = values.subspan(half);
    std::vector<int> assign(b_vals.size(), 0);
    for (;;) {
        double sum = 0.0;
        bool plus = false, minus = false;
        for (std::size_t i = 0; i < b_vals.size(); ++i) {
            if (assign[i] == 1) {
                sum += b_vals[i];
                plus = true;
            } else if (assign[i] == 2) {
                sum -= b_vals[i];
                minus = true;
            }
        }
        auto it = a_sums.find(key_of(-sum));
        if (it != a_sums.end()) {
            for (std::uint8_t bucket : {kBucketNone, kBucketPlusOnly, kBucketMinusOnly, kBucketBoth}) {
                if ((it->second & bucket) && compatible(bucket, plus, minus)) return false;
            }
        }

        std::size_t i = 0;
        while (i < b_vals.size() && assign[i] == 2) assign[i++] = 0;
        if (i == b_vals.size()) break;
        ++assign[i];
    }
    return true;
}

bool is_distinguishable(const SparseSignal& signal) {
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(signal.k()));
    for (const auto& e : signal.entries()) vals.push_back(e.value);
    return distinguishable_values(vals);
}

std::string SparseSignal::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["mode"] = mode_.is_exact() ? "int" : "real";
    auto& arr = j["entries"] = nlohmann::json::array();
    for (const auto& e : entries_) {
        nlohmann::json je;
        je["label"] = e.label.to_string();
        if (mode_.is_exact())
            je["value"] = static_cast<std::int64_t>(e.value);
        else
            je["value"] = e.value;
        arr.push_back(std::move(je));
    }
    return j.dump();
}

SparseSignal SparseSignal::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Io, std::string("signal: bad JSON: ") + e.what());
    }
    require(j.is_object() && j.contains("n") && j.contains("mode") && j.contains("entries"),
            ErrorCode::Io, "signal: JSON must have n, mode, entries");
    const int n = j["n"].get<int>();
    const std::string mode_name = j["mode"].get<std::string>();
    require(mode_name == "int" || mode_name == "real", ErrorCode::Io,
            "signal: mode must be \"int\" or \"real\"");
    ValueMode mode = mode_name == "int" ? ValueMode::exact() : ValueMode::real();
    std::vector<SignalEntry> entries;
    for (const auto& je : j["entries"]) {
        require(je.contains("label") && je.contains("value"), ErrorCode::Io,
                "signal: entry must have label and value");
        Label label = Label::parse(je["label"].get<std::string>());
        require(label.n == n, ErrorCode::Io, "signal: label length differs from n");
        entries.push_back({label, je["value"].get<double>()});
    }
    return SparseSignal(n, mode, std::move(entries));
}

void SparseSignal::save_json(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), ErrorCode::Io, "signal: cannot open " + path + " for writing");
    out << to_json() << '\n';
    require(out.good(), ErrorCode::Io, "signal: write to " + path + " failed");
}

SparseSignal SparseSignal::load_json(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::Io, "signal: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

}  // namespace sumcs
