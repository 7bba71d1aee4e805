#include "tabhash/keyset.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <unordered_set>

#include "tabhash/counter_rng.hpp"

namespace tabhash {
namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("keyset: bad " + std::string(what) + " '" + std::string(s) + "'");
    return v;
}

std::pair<std::string_view, std::string_view> split_once(std::string_view s, char sep) {
    const auto pos = s.find(sep);
    if (pos == std::string_view::npos) return {s, {}};
    return {s.substr(0, pos), s.substr(pos + 1)};
}

void require_char(const KeySchema& schema, std::uint64_t extent, unsigned position, const char* what) {
    if (position >= schema.c())
        throw std::invalid_argument(std::string("keyset ") + what + ": needs at least " +
                                    std::to_string(position + 1) + " characters");
    if (extent > schema.alphabet_size())
        throw std::invalid_argument(std::string("keyset ") + what + ": coordinate range " + std::to_string(extent) +
                                    " exceeds alphabet size " + std::to_string(schema.alphabet_size()));
}

}  // namespace

std::uint64_t KeySetSpec::cardinality(const KeySchema& schema) const {
    switch (kind) {
        case KeySetKind::Grid: return a * b;
        case KeySetKind::HypercubeProduct:
        case KeySetKind::PairProduct: return b;
        case KeySetKind::Interval:
        case KeySetKind::UniformRandom: return a;
        case KeySetKind::All: return schema.universe_size();
    }
    return 0;
}

KeySetSpec KeySetSpec::parse(std::string_view text, std::uint64_t default_seed) {
    auto [kind, args] = split_once(text, ':');
    if (kind == "all") {
        if (!args.empty()) throw std::invalid_argument("keyset: 'all' takes no arguments");
        return all();
    }
    if (kind == "grid") {
        auto [x, y] = split_once(args, 'x');
        return grid(parse_u64(x, "grid width"), parse_u64(y, "grid height"));
    }
    auto [first, rest] = split_once(args, ',');
    if (kind == "hcube") return hypercube(parse_u64(first, "hypercube l"), parse_u64(rest, "m"));
    if (kind == "pairs") return pairs(parse_u64(first, "pairs t"), parse_u64(rest, "m"));
    if (kind == "interval") return interval(parse_u64(args, "m"));
    if (kind == "rand")
        return random(parse_u64(first, "m"), rest.empty() ? default_seed : parse_u64(rest, "seed"));
    throw std::invalid_argument("keyset: unknown kind '" + std::string(kind) +
                                "' (expected grid, hcube, pairs, interval, rand, all)");
}

std::string KeySetSpec::to_string() const {
    switch (kind) {
        case KeySetKind::Grid: return "grid:" + std::to_string(a) + "x" + std::to_string(b);
        case KeySetKind::HypercubeProduct: return "hcube:" + std::to_string(a) + "," + std::to_string(b);
        case KeySetKind::PairProduct: return "pairs:" + std::to_string(a) + "," + std::to_string(b);
        case KeySetKind::Interval: return "interval:" + std::to_string(a);
        case KeySetKind::UniformRandom: return "rand:" + std::to_string(a) + "," + std::to_string(seed);
        case KeySetKind::All: return "all";
    }
    return {};
}

std::vector<std::uint64_t> generate_keyset(const KeySetSpec& spec, const KeySchema& schema) {
    std::vector<std::uint64_t> keys;
    const std::uint64_t cb = schema.char_bits();
    switch (spec.kind) {
        case KeySetKind::Grid: {
            require_char(schema, spec.a, 0, "grid");
            require_char(schema, spec.b, 1, "grid");
            keys.reserve(spec.a * spec.b);
            for (std::uint64_t x0 = 0; x0 < spec.a; ++x0)
                for (std::uint64_t x1 = 0; x1 < spec.b; ++x1) keys.push_back(x0 | (x1 << cb));
            break;
        }
        case KeySetKind::HypercubeProduct: {
            const std::uint64_t l = spec.a, m = spec.b;
            if (l >= 63 || m % (std::uint64_t{1} << l) != 0)
                throw std::invalid_argument("keyset hcube: m must be a multiple of 2^l");
            const std::uint64_t tail = m >> l;
            for (unsigned i = 0; i < l; ++i) require_char(schema, 2, i, "hcube");
            require_char(schema, tail, static_cast<unsigned>(l), "hcube");
            keys.reserve(m);
            for (std::uint64_t z = 0; z < tail; ++z)
                for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << l); ++bits) {
                    std::uint64_t key = z << (l * cb);
                    for (unsigned i = 0; i < l; ++i) key |= ((bits >> i) & 1) << (i * cb);
                    keys.push_back(key);
                }
            break;
        }
        case KeySetKind::PairProduct: {
            const std::uint64_t t = spec.a, m = spec.b;
            if (t == 0 || m % t != 0) throw std::invalid_argument("keyset pairs: m must be a positive multiple of t");
            require_char(schema, m / t, 0, "pairs");
            require_char(schema, t, 1, "pairs");
            keys.reserve(m);
            for (std::uint64_t x0 = 0; x0 < m / t; ++x0)
                for (std::uint64_t x1 = 0; x1 < t; ++x1) keys.push_back(x0 | (x1 << cb));
            break;
        }
        case KeySetKind::Interval: {
            if (spec.a > schema.universe_size())
                throw std::invalid_argument("keyset interval: m exceeds universe");
            keys.resize(spec.a);
            for (std::uint64_t i = 0; i < spec.a; ++i) keys[i] = i;
            break;
        }
        case KeySetKind::UniformRandom: {
            const std::uint64_t m = spec.a;
            if (m > schema.universe_size()) throw std::invalid_argument("keyset rand: m exceeds universe");
            CounterStream rng(spec.seed);
            std::unordered_set<std::uint64_t> seen;
            seen.reserve(m);
            keys.reserve(m);
            const bool full = schema.key_bits() >= 64;
            while (keys.size() < m) {
                const std::uint64_t k = full ? rng.next() : rng.below(schema.universe_size());
                if (seen.insert(k).second) keys.push_back(k);
            }
            break;
        }
        case KeySetKind::All: {
            if (schema.key_bits() > 26) throw std::invalid_argument("keyset all: universe too large to list");
            keys.resize(schema.universe_size());
            for (std::uint64_t i = 0; i < keys.size(); ++i) keys[i] = i;
            break;
        }
    }
    return keys;
}

std::uint64_t smallest_absent_key(std::vector<std::uint64_t> keys, const KeySchema& schema) {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::uint64_t candidate = 0;
    for (auto k : keys) {
        if (k != candidate) break;
        ++candidate;
    }
    if (keys.size() >= schema.universe_size() && candidate >= schema.universe_size())
        throw std::invalid_argument("no key outside the set: it covers the whole universe");
    return candidate;
}

}  // namespace tabhash
