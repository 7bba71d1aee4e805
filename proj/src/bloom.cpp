#include "tabhash/bloom.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "tabhash/counter_rng.hpp"
#include "tabhash/tail_bounds.hpp"

namespace tabhash {
namespace {

constexpr std::array<char, 4> kMagic{'T', 'B', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr unsigned kMaxK = 64;

template <typename T>
void put(std::ostream& out, T v) {
    for (unsigned i = 0; i < sizeof(T); ++i) out.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <typename T>
T get(std::istream& in) {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < sizeof(T); ++i) {
        const int ch = in.get();
        if (ch == std::char_traits<char>::eof()) throw std::runtime_error("bloom: truncated input");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(ch)) << (8 * i);
    }
    return static_cast<T>(v);
}

}  // namespace

unsigned min_bits_for_square(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("min_bits_for_square: n must be >= 1");
    const unsigned __int128 sq = static_cast<unsigned __int128>(n) * n;
    unsigned r = 0;
    while ((static_cast<unsigned __int128>(1) << r) < sq) ++r;
    return r == 0 ? 1 : r;
}

void BloomParams::validate() const {
    if (k == 0 || k > kMaxK) throw std::invalid_argument("bloom: k must be in [1, 64]");
    if (n == 0) throw std::invalid_argument("bloom: n must be >= 1");
    if (r == 0 || r > 64) throw std::invalid_argument("bloom: r must be in [1, 64]");
    if (r < 64 && n > (std::uint64_t{1} << r)) throw std::invalid_argument("bloom: n exceeds 2^r");
    if (!multi_instance && static_cast<std::uint64_t>(k) * r > 64)
        throw std::invalid_argument("bloom: k * r = " + std::to_string(k * r) +
                                    " exceeds 64 bits; request the multi-instance fallback");
}

BloomParams plan_bloom(const BloomPlanRequest& req) {
    if (req.m == 0) throw std::invalid_argument("bloom plan: m must be >= 1");
    BloomParams p;
    p.m = req.m;
    p.k = req.k;
    p.n = req.n ? *req.n : static_cast<std::uint64_t>(std::llround(static_cast<double>(req.m) / std::log(2.0)));
    if (p.n == 0) throw std::invalid_argument("bloom plan: n must be >= 1");
    p.r = req.r ? *req.r : min_bits_for_square(p.n);
    p.multi_instance = static_cast<std::uint64_t>(p.k) * p.r > 64;
    if (p.multi_instance && !req.allow_multi_instance)
        throw std::invalid_argument("bloom plan: k * r = " + std::to_string(p.k * p.r) +
                                    " exceeds 64 bits and the multi-instance fallback was not requested");
    p.validate();
    return p;
}

double theoretical_fpr(unsigned k, std::uint64_t n, std::uint64_t m) {
    return std::pow(static_cast<double>(p0(n, m)), static_cast<double>(k));
}

double projected_fpr_upper_bound(const BloomParams& params, unsigned c) {
    params.validate();
    const long double two_r = std::ldexp(1.0L, static_cast<int>(params.r));
    // Both terms grow with rho, so the largest bin (ceil(2^r / n) preimages) is the worst.
    const long double largest = std::ceil(two_r / static_cast<long double>(params.n));
    const long double rho = largest / two_r;
    const long double p0_rho = -std::expm1(static_cast<long double>(params.m) * std::log1p(-rho));
    const long double worst =
        p0_rho + 2.0L * std::pow(static_cast<long double>(params.m), 2.0L - 1.0L / c) * rho * rho;
    return static_cast<double>(std::pow(std::min(worst, 1.0L), static_cast<long double>(params.k)));
}

BloomFilter::BloomFilter(KeySchema schema, BloomParams params, std::uint64_t seed)
    : schema_(schema), params_(params), seed_(seed), projector_(params.r, params.n) {
    params_.validate();
    if (params_.multi_instance) {
        for (unsigned j = 0; j < params_.k; ++j) tabulations_.emplace_back(schema, params_.r, derive(seed, j));
    } else {
        tabulations_.emplace_back(schema, params_.k * params_.r, seed);
    }
    arrays_.assign(params_.k, std::vector<std::uint64_t>((params_.n + 63) / 64, 0));
}

void BloomFilter::positions(std::uint64_t key, std::span<std::uint64_t> out) const {
    schema_.require_key(key);
    if (out.size() < params_.k) throw std::invalid_argument("bloom: output span too small");
    if (params_.multi_instance) {
        for (unsigned j = 0; j < params_.k; ++j) out[j] = projector_(tabulations_[j].hash_unchecked(key));
    } else {
        const std::uint64_t v = tabulations_.front().hash_unchecked(key);
        for (unsigned j = 0; j < params_.k; ++j) out[j] = projector_(SplitHash::slice(v, j, params_.r));
    }
}

void BloomFilter::insert(std::uint64_t key) {
    std::array<std::uint64_t, kMaxK> pos;
    positions(key, pos);
    for (unsigned j = 0; j < params_.k; ++j) arrays_[j][pos[j] >> 6] |= std::uint64_t{1} << (pos[j] & 63);
    ++inserts_;
}

bool BloomFilter::query(std::uint64_t key) const {
    std::array<std::uint64_t, kMaxK> pos;
    positions(key, pos);
    for (unsigned j = 0; j < params_.k; ++j)
        if (((arrays_[j][pos[j] >> 6] >> (pos[j] & 63)) & 1) == 0) return false;
    return true;
}

bool BloomFilter::bit(unsigned array, std::uint64_t index) const {
    if (array >= params_.k || index >= params_.n) throw std::out_of_range("bloom: bit index out of range");
    return (arrays_[array][index >> 6] >> (index & 63)) & 1;
}

std::uint64_t BloomFilter::popcount(unsigned array) const {
    std::uint64_t total = 0;
    for (auto w : arrays_.at(array)) total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
}

void BloomFilter::serialize(std::ostream& out) const {
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, schema_.c());
    put<std::uint32_t>(out, schema_.char_bits());
    put<std::uint64_t>(out, params_.m);
    put<std::uint32_t>(out, params_.k);
    put<std::uint64_t>(out, params_.n);
    put<std::uint32_t>(out, params_.r);
    put<std::uint8_t>(out, params_.multi_instance ? 1 : 0);
    put<std::uint64_t>(out, seed_);
    put<std::uint64_t>(out, inserts_);
    for (const auto& arr : arrays_) {
        put<std::uint64_t>(out, arr.size());
        for (auto w : arr) put<std::uint64_t>(out, w);
    }
}

BloomFilter BloomFilter::deserialize(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error("bloom: bad magic");
    if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("bloom: unsupported version");
    const auto c = get<std::uint32_t>(in);
    const auto char_bits = get<std::uint32_t>(in);
    BloomParams p;
    p.m = get<std::uint64_t>(in);
    p.k = get<std::uint32_t>(in);
    p.n = get<std::uint64_t>(in);
    p.r = get<std::uint32_t>(in);
    p.multi_instance = get<std::uint8_t>(in) != 0;
    const auto seed = get<std::uint64_t>(in);
    const auto inserts = get<std::uint64_t>(in);
    BloomFilter f(KeySchema(c, char_bits), p, seed);
    f.inserts_ = inserts;
    for (auto& arr : f.arrays_) {
        if (get<std::uint64_t>(in) != arr.size()) throw std::runtime_error("bloom: array length mismatch");
        for (auto& w : arr) w = get<std::uint64_t>(in);
    }
    return f;
}

FprMeasurement measure_fpr(const BloomFilter& filter, std::span<const std::uint64_t> members,
                           std::uint64_t queries, std::uint64_t seed) {
    const KeySchema& schema = filter.schema();
    const std::unordered_set<std::uint64_t> member_set(members.begin(), members.end());
    if (member_set.size() >= schema.universe_size())
        throw std::invalid_argument("measure_fpr: no key outside the member set");
    CounterStream rng(seed);
    const bool full = schema.key_bits() >= 64;
    FprMeasurement out;
    while (out.queries < queries) {
        const std::uint64_t q = full ? rng.next() : rng.below(schema.universe_size());
        if (member_set.contains(q)) continue;
        ++out.queries;
        if (filter.query(q)) ++out.false_positives;
    }
    const auto& p = filter.params();
    const std::uint64_t m = member_set.size();
    const double q = static_cast<double>(out.queries);
    out.fpr = q > 0 ? static_cast<double>(out.false_positives) / q : 0.0;
    out.se = q > 0 ? std::sqrt(out.fpr * (1 - out.fpr) / q) : 0.0;
    out.theoretical = theoretical_fpr(p.k, p.n, m);
    const double gap = 2.0 * hit_probability_gap(p.n, m, schema.c());
    out.tabulation_bound = std::pow(std::min(1.0, static_cast<double>(p0(p.n, m)) + gap), static_cast<double>(p.k));
    BloomParams actual = p;
    actual.m = m;
    out.projected_bound = projected_fpr_upper_bound(actual, schema.c());
    return out;
}

}  // namespace tabhash
