#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <vector>

#include "tabhash/counter_rng.hpp"
#include "tabhash/hash_family.hpp"
#include "tabhash/key_schema.hpp"
#include "tabhash/range_projector.hpp"
#include "tabhash/simple_tabulation.hpp"

using namespace tabhash;

namespace {

// All 4^4 fillings of a c=2, |Sigma|=2, r=2 instance, as explicit tables.
std::vector<SimpleTabulation> all_tiny_fillings(unsigned out_bits = 2) {
    const KeySchema schema(2, 1);
    const std::uint64_t values = std::uint64_t{1} << out_bits;
    std::vector<SimpleTabulation> out;
    for (std::uint64_t code = 0; code < values * values * values * values; ++code) {
        std::vector<std::uint64_t> entries(4);
        std::uint64_t rest = code;
        for (auto& e : entries) {
            e = rest % values;
            rest /= values;
        }
        out.push_back(SimpleTabulation::from_tables(schema, out_bits, entries));
    }
    return out;
}

}  // namespace

TEST_CASE("key schema validates its shape") {
    CHECK_THROWS_AS(KeySchema(0, 8), std::invalid_argument);
    CHECK_THROWS_AS(KeySchema(2, 0), std::invalid_argument);
    CHECK_THROWS_AS(KeySchema(3, 25), std::invalid_argument);
    CHECK_THROWS_AS(KeySchema(9, 8), std::invalid_argument);
    CHECK_NOTHROW(KeySchema(8, 8));

    const KeySchema s(4, 8);
    CHECK(s.key_bits() == 32);
    CHECK(s.alphabet_size() == 256);
    CHECK(s.universe_size() == (std::uint64_t{1} << 32));
    CHECK(KeySchema(8, 8).universe_size() == ~std::uint64_t{0});
    CHECK(s.character(0x11223344, 0) == 0x44);
    CHECK(s.character(0x11223344, 3) == 0x11);
    CHECK(s.with_character(0x11223344, 1, 0xff) == 0x1122ff44);
    CHECK(s.contains(0xffffffff));
    CHECK_FALSE(s.contains(std::uint64_t{1} << 32));
    CHECK_THROWS_AS(s.require_key(std::uint64_t{1} << 32), std::out_of_range);
}

TEST_CASE("seeded tables are deterministic and shaped by the schema") {
    const SimpleTabulation a(KeySchema(1, 8), 8, 1234);
    const SimpleTabulation b(KeySchema(1, 8), 8, 1234);
    CHECK(std::ranges::equal(a.table(0), b.table(0)));
    CHECK(a.seed() == 1234u);

    const SimpleTabulation tiny(KeySchema(2, 1), 2, 99);
    CHECK(tiny.table(0).size() == 2);
    CHECK(tiny.table(1).size() == 2);
    for (unsigned i = 0; i < 2; ++i)
        for (std::uint64_t ch = 0; ch < 2; ++ch) CHECK(tiny.entry(i, ch) < 4);
    CHECK_THROWS_AS(tiny.table(2), std::out_of_range);

    const SimpleTabulation other(KeySchema(1, 8), 8, 1235);
    CHECK_FALSE(std::ranges::equal(a.table(0), other.table(0)));
}

TEST_CASE("construction rejects bad output widths and tables") {
    CHECK_THROWS_AS(SimpleTabulation(KeySchema(2, 8), 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(SimpleTabulation(KeySchema(2, 8), 65, 1), std::invalid_argument);
    CHECK_THROWS_AS(SimpleTabulation::from_tables(KeySchema(2, 1), 2, {0, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(SimpleTabulation::from_tables(KeySchema(2, 1), 2, {0, 1, 2, 4}), std::invalid_argument);
}

TEST_CASE("each entry bit is unbiased across 10^4 seeds") {
    constexpr std::uint64_t kSeeds = 10000;
    const KeySchema schema(2, 4);
    constexpr unsigned kBits = 32;
    // 4 sigma of Binomial(10^4, 1/2) is 200.
    std::vector<std::uint64_t> ones(2 * 16 * kBits, 0);
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        const SimpleTabulation h(schema, kBits, seed);
        for (unsigned pos = 0; pos < 2; ++pos)
            for (std::uint64_t ch = 0; ch < 16; ++ch) {
                const std::uint64_t e = h.entry(pos, ch);
                for (unsigned b = 0; b < kBits; ++b) ones[(pos * 16 + ch) * kBits + b] += (e >> b) & 1;
            }
    }
    std::uint64_t worst = 0;
    for (auto count : ones) worst = std::max<std::uint64_t>(worst, count > 5000 ? count - 5000 : 5000 - count);
    CHECK(worst <= 200);
}

TEST_CASE("hash is the XOR of the character entries") {
    const auto single = SimpleTabulation::from_tables(KeySchema(1, 3), 4, {0, 1, 2, 3, 4, 9, 6, 7});
    CHECK(single.hash(5) == 9);

    std::vector<std::uint64_t> entries(2 * 8, 0);
    entries[3] = 0b1010;      // T_0[3]
    entries[8 + 7] = 0b0110;  // T_1[7]
    const auto two = SimpleTabulation::from_tables(KeySchema(2, 3), 4, entries);
    CHECK(two.hash(3 | (7 << 3)) == 0b1100);

    CHECK_THROWS_AS(two.hash(1 << 6), std::out_of_range);
}

TEST_CASE("position-character sets") {
    const SimpleTabulation h(KeySchema(3, 4), 16, 7);
    CHECK(h.hash_position_set({}) == 0);

    const std::uint64_t key = 0x5a3;
    std::vector<PositionCharacter> chars;
    for (unsigned i = 0; i < 3; ++i) chars.push_back({i, KeySchema(3, 4).character(key, i)});
    CHECK(h.hash_position_set(chars) == h.hash(key));

    const std::vector<PositionCharacter> mixed{{0, 2}, {1, 5}, {1, 9}};
    CHECK(h.hash_position_set(mixed) == (h.entry(0, 2) ^ h.entry(1, 5) ^ h.entry(1, 9)));

    const std::vector<PositionCharacter> dup{{0, 2}, {0, 2}};
    CHECK_THROWS_AS(h.hash_position_set(dup), std::invalid_argument);
    const std::vector<PositionCharacter> bad_pos{{3, 0}};
    CHECK_THROWS_AS(h.hash_position_set(bad_pos), std::out_of_range);
    const std::vector<PositionCharacter> bad_char{{0, 16}};
    CHECK_THROWS_AS(h.hash_position_set(bad_char), std::out_of_range);
}

TEST_CASE("exhaustive tiny instance: uniform, 3-independent, 4-dependent") {
    const auto fillings = all_tiny_fillings();
    REQUIRE(fillings.size() == 256);

    for (std::uint64_t x = 0; x < 4; ++x) {
        std::array<int, 4> counts{};
        for (const auto& h : fillings) ++counts[h.hash(x)];
        for (int c : counts) CHECK(c == 64);
    }

    const std::array<std::array<std::uint64_t, 3>, 4> triples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
    for (const auto& t : triples) {
        std::map<std::array<std::uint64_t, 3>, int> joint;
        for (const auto& h : fillings) ++joint[{h.hash(t[0]), h.hash(t[1]), h.hash(t[2])}];
        CHECK(joint.size() == 64);
        for (const auto& [values, count] : joint) CHECK(count == 4);
    }

    std::map<std::array<std::uint64_t, 4>, int> four;
    for (const auto& h : fillings) {
        CHECK((h.hash(0) ^ h.hash(1) ^ h.hash(2) ^ h.hash(3)) == 0);
        ++four[{h.hash(0), h.hash(1), h.hash(2), h.hash(3)}];
    }
    CHECK(four.size() == 64);  // not uniform on [4]^4
}

TEST_CASE("split views") {
    const SimpleTabulation h(KeySchema(2, 8), 24, 5);
    const SplitHash one(h, 1, 24);
    for (std::uint64_t x : {0ull, 77ull, 65535ull}) CHECK(one.view(0, x) == h.hash(x));

    CHECK(SplitHash::slice(0b1101, 0, 2) == 0b01);
    CHECK(SplitHash::slice(0b1101, 1, 2) == 0b11);

    const SplitHash three(h, 3, 8);
    std::array<std::uint64_t, 3> v{};
    for (std::uint64_t x = 0; x < 1000; ++x) {
        three.views(x, v);
        CHECK((v[0] | (v[1] << 8) | (v[2] << 16)) == h.hash(x));
        CHECK(three.view(1, x) == v[1]);
    }
    CHECK_THROWS_AS(SplitHash(h, 5, 5), std::invalid_argument);
    CHECK_THROWS_AS(SplitHash(h, 2, 8), std::invalid_argument);

    // k=2, r=1 over every filling of a c=2, |Sigma|=2 instance: joint law of the views is uniform.
    for (std::uint64_t x = 0; x < 4; ++x) {
        std::array<int, 4> joint{};
        for (const auto& f : all_tiny_fillings()) {
            const SplitHash s(f, 2, 1);
            ++joint[s.view(0, x) | (s.view(1, x) << 1)];
        }
        for (int c : joint) CHECK(c == 64);
    }
}

TEST_CASE("range projector") {
    const RangeProjector p(4, 3);
    CHECK(p.project(6) == 1);
    CHECK(p.preimage_size(0) == 6);
    CHECK(p.preimage_size(1) == 5);
    CHECK(p.preimage_size(2) == 5);
    CHECK_THROWS_AS(p.preimage_size(3), std::out_of_range);
    CHECK_THROWS_AS(p.project(16), std::out_of_range);

    const RangeProjector id(6, 64);
    CHECK(id.is_identity());
    for (std::uint64_t y = 0; y < 64; ++y) {
        CHECK(id(y) == y);
        CHECK(id.preimage_size(y) == 1);
    }

    CHECK_THROWS_AS(RangeProjector(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(RangeProjector(4, 0), std::invalid_argument);
    CHECK_THROWS_AS(RangeProjector(4, 17), std::invalid_argument);
    CHECK(RangeProjector(64, ~std::uint64_t{0})(~std::uint64_t{0}) == ~std::uint64_t{0} - 1);
}

TEST_CASE("projector preimage sizes match an exhaustive scan for r = 10") {
    constexpr unsigned r = 10;
    std::vector<std::uint64_t> counts;
    for (std::uint64_t n = 1; n <= (1u << r); ++n) {
        const RangeProjector p(r, n);
        counts.assign(n, 0);
        for (std::uint64_t y = 0; y < (1u << r); ++y) ++counts[p(y)];
        const auto [lo, hi] = std::ranges::minmax(counts);
        REQUIRE(hi - lo <= 1);
        for (std::uint64_t z = 0; z < n; ++z) REQUIRE(p.preimage_size(z) == counts[z]);
    }
}

TEST_CASE("hash families") {
    CHECK(parse_family_kind("simple-tabulation") == FamilyKind::SimpleTabulation);
    CHECK(parse_family_kind("random") == FamilyKind::FullyRandom);
    CHECK(parse_family_kind("poly-k") == FamilyKind::PolyK);
    CHECK_THROWS_AS(parse_family_kind("murmur"), std::invalid_argument);
    CHECK(to_string(FamilyKind::FullyRandom) == "fully-random");

    const KeySchema schema(2, 8);
    const FullyRandomHash f(schema, 16, 3);
    CHECK(f(1234) == f(1234));
    CHECK(f(1234) < (1u << 16));

    const PolyHash poly(schema, 16, {3, 5}, 65537);
    CHECK(poly.raw(2) == 11);
    CHECK(poly(2) == (11ull << 16) / 65537);
    CHECK_THROWS_AS(PolyHash(schema, 16, {3, 5}, 65521), std::invalid_argument);  // prime below 2^16
    CHECK_THROWS_AS(PolyHash(schema, 16, {3, 70000}, 65537), std::invalid_argument);

    FamilySpec spec;
    spec.schema = schema;
    spec.out_bits = 16;
    for (auto kind : {FamilyKind::SimpleTabulation, FamilyKind::FullyRandom, FamilyKind::PolyK}) {
        spec.kind = kind;
        const HashFamily a(spec, 17), b(spec, 17);
        for (std::uint64_t x = 0; x < 200; ++x) CHECK(a.eval(x) == b.eval(x));
        CHECK_THROWS_AS(a.eval(1 << 16), std::out_of_range);
        CHECK((a.tabulation() != nullptr) == (kind == FamilyKind::SimpleTabulation));
    }
}

TEST_CASE("2-independent polynomial: pairwise law over all coefficients is uniform") {
    constexpr std::uint64_t p = 13;
    const KeySchema schema(1, 3);
    for (std::uint64_t x = 0; x < 8; ++x)
        for (std::uint64_t y = x + 1; y < 8; ++y) {
            std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
            for (std::uint64_t a = 0; a < p; ++a)
                for (std::uint64_t b = 0; b < p; ++b) {
                    const PolyHash h(schema, 3, {a, b}, p);
                    seen.insert({h.raw(x), h.raw(y)});
                }
            CHECK(seen.size() == p * p);
        }
}

TEST_CASE("counter stream") {
    CounterStream a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
    CHECK(a.counter() == 10);
    CHECK(derive(1, 2) != derive(2, 1));
    CHECK_THROWS_AS(a.below(0), std::invalid_argument);

    std::array<int, 6> counts{};
    CounterStream s(11);
    for (int i = 0; i < 60000; ++i) ++counts[s.below(6)];
    for (int c : counts) CHECK(std::abs(c - 10000) < 400);
}
