#include "codebook.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "rng.hpp"

namespace sumcs {

std::uint64_t binomial_u64(int n, int k) {
    require(n >= 0 && k >= 0, ErrorCode::InvalidArgument, "binomial: negative argument");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        require(acc <= static_cast<unsigned __int128>(UINT64_MAX), ErrorCode::Capacity,
                "binomial: result overflows 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

Label::Label(int n_in, Bits bits_in) : n(n_in), bits(bits_in) {
    require(n >= 1 && n <= kMaxBits, ErrorCode::InvalidArgument,
            "label: bit count must be in [1, 63]");
    require(bits < (Bits(1) << n), ErrorCode::InvalidArgument,
            "label: value does not fit in n bits");
}

std::string Label::to_string() const {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int p = 1; p <= n; ++p)
        if (bit(p)) s[static_cast<std::size_t>(p - 1)] = '1';
    return s;
}

Label Label::parse(const std::string& s) {
    require(!s.empty() && s.size() <= kMaxBits, ErrorCode::InvalidArgument,
            "label: bitstring length must be in [1, 63]");
    Bits bits = 0;
    for (char c : s) {
        require(c == '0' || c == '1', ErrorCode::InvalidArgument,
                "label: bitstring may contain only 0 and 1");
        bits = (bits << 1) | static_cast<Bits>(c == '1');
    }
    return Label(static_cast<int>(s.size()), bits);
}

BitSubset::BitSubset(int n, std::vector<int> positions)
    : n_(n), positions_(std::move(positions)) {
    require(n_ >= 1 && n_ <= kMaxBits, ErrorCode::InvalidArgument,
            "subset: ambient bit count must be in [1, 63]");
    require(!positions_.empty(), ErrorCode::InvalidArgument, "subset: empty position list");
    int prev = 0;
    for (int p : positions_) {
        require(p >= 1 && p <= n_, ErrorCode::InvalidArgument,
                "subset: position out of range [1, n]");
        require(p > prev, ErrorCode::InvalidArgument,
                "subset: positions must be strictly increasing");
        prev = p;
        mask_ |= Bits(1) << (n_ - p);
    }
}

Bits extract(const Label& label, const BitSubset& subset) {
    require(subset.n() == label.n, ErrorCode::InvalidArgument,
            "extract: label and subset bit counts differ");
    Bits pattern = 0;
    for (int p : subset.positions())
        pattern = (pattern << 1) | ((label.bits >> (label.n - p)) & 1u);
    return pattern;
}

bool conforms(const Label& label, const Summary& summary) {
    return extract(label, summary.subset) == summary.pattern;
}

Codebook::Codebook(int n, int d, std::vector<BitSubset> subsets, std::int64_t requested)
    : n_(n), d_(d), subsets_(std::move(subsets)), requested_(requested) {}

Codebook Codebook::from_subsets(int n, int d, std::vector<BitSubset> subsets) {
    require(n >= 1 && n <= kMaxBits, ErrorCode::InvalidArgument, "codebook: n must be in [1, 63]");
    require(d >= 1 && d <= n, ErrorCode::InvalidArgument, "codebook: d must be in [1, n]");
    require(!subsets.empty(), ErrorCode::InvalidArgument, "codebook: needs at least one subset");
    std::unordered_set<Bits> seen;
    for (const auto& s : subsets) {
        require(s.n() == n, ErrorCode::InvalidArgument, "codebook: subset has wrong ambient n");
        require(s.size() == d, ErrorCode::InvalidArgument, "codebook: subset has wrong size");
        require(seen.insert(s.mask()).second, ErrorCode::InvalidArgument,
                "codebook: duplicate subset");
    }
    const std::int64_t m = static_cast<std::int64_t>(subsets.size());
    require(m <= (kMaxRows >> d), ErrorCode::Capacity, "codebook: row count exceeds capacity");
    return Codebook(n, d, std::move(subsets), m);
}

Codebook Codebook::complete(int n, int d) {
    require(n >= 1 && n <= kMaxBits, ErrorCode::InvalidArgument, "codebook: n must be in [1, 63]");
    require(d >= 1 && d <= n, ErrorCode::InvalidArgument, "codebook: d must be in [1, n]");
    const std::uint64_t m = binomial_u64(n, d);
    require(m <= static_cast<std::uint64_t>(kMaxRows >> d), ErrorCode::Capacity,
            "complete codebook: row count exceeds capacity");

    std::vector<BitSubset> subsets;
    subsets.reserve(static_cast<std::size_t>(m));
    std::vector<int> comb(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) comb[static_cast<std::size_t>(i)] = i + 1;
    for (;;) {
        subsets.emplace_back(n, comb);
        int i = d - 1;
        while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - (d - 1 - i)) --i;
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < d; ++j)
            comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
    return Codebook(n, d, std::move(subsets), static_cast<std::int64_t>(m));
}

namespace {

// Uniform d-subset of {1..n} as a position mask (Floyd's sampling).
std::uint64_t random_subset_mask(Rng& rng, int n, int d) {
    std::uint64_t chosen = 0;
    for (int j = n - d + 1; j <= n; ++j) {
        int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j))) + 1;
        int pick = ((chosen >> (t - 1)) & 1u) ? j : t;
        chosen |= std::uint64_t(1) << (pick - 1);
    }
    return chosen;
}

std::vector<int> positions_from_mask(std::uint64_t mask) {
    std::vector<int> out;
    for (int p = 1; mask; ++p, mask >>= 1)
        if (mask & 1u) out.push_back(p);
    return out;
}

}  // namespace

Codebook Codebook::random(int n, int d, std::int64_t m, std::uint64_t seed,
                          RandomSubsetMode mode) {
    require(n >= 1 && n <= kMaxBits, ErrorCode::InvalidArgument, "codebook: n must be in [1, 63]");
    require(d >= 1 && d <= n, ErrorCode::InvalidArgument, "codebook: d must be in [1, n]");
    require(m >= 1, ErrorCode::InvalidArgument, "codebook: m must be >= 1");
    require(m <= (std::int64_t(1) << 24), ErrorCode::Capacity, "codebook: m too large");

    Rng rng(seed);
    std::vector<BitSubset> subsets;

    if (mode == RandomSubsetMode::DedupReplacement) {
        std::unordered_set<std::uint64_t> seen;
        for (std::int64_t i = 0; i < m; ++i) {
            std::uint64_t mask = random_subset_mask(rng, n, d);
            if (seen.insert(mask).second)
                subsets.emplace_back(n, positions_from_mask(mask));
        }
    } else {
        const std::uint64_t total = binomial_u64(n, d);
        require(static_cast<std::uint64_t>(m) <= total, ErrorCode::InvalidArgument,
                "codebook: more distinct subsets requested than exist");
        if (static_cast<std::uint64_t>(m) > total / 4) {
            // Dense sample: enumerate the family and take a partial
            // Fisher-Yates prefix (rejection would thrash near saturation).
            require(total <= (std::uint64_t(1) << 21), ErrorCode::Capacity,
                    "codebook: dense distinct sample over a huge subset family");
            Codebook all = Codebook::complete(n, d);
            std::vector<std::int64_t> idx(all.subsets_.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::int64_t>(i);
            for (std::int64_t i = 0; i < m; ++i) {
                std::int64_t j = i + static_cast<std::int64_t>(
                                         rng.below(static_cast<std::uint64_t>(total) - i));
                std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
                subsets.push_back(all.subsets_[static_cast<std::size_t>(
                    idx[static_cast<std::size_t>(i)])]);
            }
        } else {
            std::unordered_set<std::uint64_t> seen;
            while (static_cast<std::int64_t>(subsets.size()) < m) {
                std::uint64_t mask = random_subset_mask(rng, n, d);
                if (seen.insert(mask).second)
                    subsets.emplace_back(n, positions_from_mask(mask));
            }
        }
    }

    const std::int64_t m_eff = static_cast<std::int64_t>(subsets.size());
    require(m_eff <= (kMaxRows >> d), ErrorCode::Capacity,
            "codebook: row count exceeds capacity");
    Codebook cb(n, d, std::move(subsets), m);
    return cb;
}

void Codebook::check_row(std::int64_t row) const {
    require(row >= 0 && row < rows(), ErrorCode::InvalidArgument,
            "codebook: row index out of range");
}

std::int64_t Codebook::row_index(std::int64_t subset_index, Bits pattern) const {
    require(subset_index >= 0 && subset_index < subset_count(), ErrorCode::InvalidArgument,
            "codebook: subset index out of range");
    require(pattern < (Bits(1) << d_), ErrorCode::InvalidArgument,
            "codebook: pattern does not fit in d bits");
    return (subset_index << d_) + static_cast<std::int64_t>(pattern);
}

Summary Codebook::summary_of_row(std::int64_t row) const {
    check_row(row);
    return Summary{subsets_[static_cast<std::size_t>(row >> d_)],
                   static_cast<Bits>(row) & ((Bits(1) << d_) - 1)};
}

bool Codebook::covers_all_bits() const {
    Bits all = (n_ == kMaxBits) ? ~Bits(0) : ((Bits(1) << n_) - 1);
    Bits seen = 0;
    for (const auto& s : subsets_) seen |= s.mask();
    return seen == all;
}

std::string Codebook::to_json() const {
    nlohmann::json j;
    j["n"] = n_;
    j["d"] = d_;
    auto& arr = j["subsets"] = nlohmann::json::array();
    for (const auto& s : subsets_) arr.push_back(s.positions());
    return j.dump();
}

Codebook Codebook::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::Io, std::string("codebook: bad JSON: ") + e.what());
    }
    require(j.is_object() && j.contains("n") && j.contains("d") && j.contains("subsets"),
            ErrorCode::Io, "codebook: JSON must have n, d, subsets");
    int n = j["n"].get<int>();
    int d = j["d"].get<int>();
    std::vector<BitSubset> subsets;
    for (const auto& arr : j["subsets"]) {
        require(arr.is_array(), ErrorCode::Io, "codebook: subsets entries must be arrays");
        subsets.emplace_back(n, arr.get<std::vector<int>>());
    }
    return from_subsets(n, d, std::move(subsets));
}

void Codebook::save_json(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), ErrorCode::Io, "codebook: cannot open " + path + " for writing");
    out << to_json() << '\n';
    require(out.good(), ErrorCode::Io, "codebook: write to " + path + " failed");
}

Codebook Codebook::load_json(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorCode::Io, "codebook: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

}  // namespace sumcs
