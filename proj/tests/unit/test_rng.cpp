#include <doctest.h>

#include "evdemand/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

using namespace evdemand;

TEST_CASE("same seed, same stream") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t x = a.next_u64();
        all_equal = all_equal && (x == b.next_u64());
        any_diff = any_diff || (x != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("below stays in range and degenerates to zero") {
    Rng r(1);
    CHECK(r.below(0) == 0);
    CHECK(r.below(1) == 0);
    for (int i = 0; i < 1000; ++i) {
        CHECK(r.below(7) < 7);
    }
    // every residue is reachable
    std::vector<int> seen(7, 0);
    Rng s(2);
    for (int i = 0; i < 1000; ++i) seen[static_cast<std::size_t>(s.below(7))]++;
    CHECK(*std::min_element(seen.begin(), seen.end()) > 0);
}

TEST_CASE("uniform01 lands in the half-open unit interval") {
    Rng r(3);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform respects its bounds") {
    Rng r(4);
    for (int i = 0; i < 1000; ++i) {
        double u = r.uniform(-2.5, 3.5);
        CHECK(u >= -2.5);
        CHECK(u < 3.5);
    }
}

TEST_CASE("uniform_int covers inclusive bounds") {
    Rng r(5);
    std::vector<int> seen(4, 0);
    for (int i = 0; i < 1000; ++i) {
        int v = r.uniform_int(2, 5);
        REQUIRE(v >= 2);
        REQUIRE(v <= 5);
        seen[static_cast<std::size_t>(v - 2)]++;
    }
    CHECK(*std::min_element(seen.begin(), seen.end()) > 0);
}

TEST_CASE("bernoulli follows its probability roughly") {
    Rng r(6);
    CHECK_FALSE(Rng(6).bernoulli(0.0));
    CHECK(Rng(6).bernoulli(1.0));
    int hits = 0;
    for (int i = 0; i < 10000; ++i) hits += r.bernoulli(0.3) ? 1 : 0;
    CHECK(hits > 2600);
    CHECK(hits < 3400);
}

TEST_CASE("normal deviates are finite and centered") {
    Rng r(7);
    double sum = 0.0, sumsq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        double x = r.normal(10.0, 2.0);
        REQUIRE(std::isfinite(x));
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean - 10.0) < 0.1);
    CHECK(std::abs(var - 4.0) < 0.3);
}

TEST_CASE("shuffle permutes deterministically") {
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    std::vector<int> w = v;
    Rng(11).shuffle(v);
    Rng(11).shuffle(w);
    CHECK(v == w);
    CHECK(v != std::vector<int>(v.size())); // moved something
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(50);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(sorted == expect);

    std::vector<int> u(50);
    std::iota(u.begin(), u.end(), 0);
    Rng(12).shuffle(u);
    CHECK(u != v);
}

TEST_CASE("streams derived from the same seed are distinct") {
    Rng a = Rng::for_stream(42, 1);
    Rng b = Rng::for_stream(42, 2);
    Rng a2 = Rng::for_stream(42, 1);
    bool any_diff = false, all_equal = true;
    for (int i = 0; i < 64; ++i) {
        std::uint64_t x = a.next_u64();
        any_diff = any_diff || (x != b.next_u64());
        all_equal = all_equal && (x == a2.next_u64());
    }
    CHECK(any_diff);
    CHECK(all_equal);
}
