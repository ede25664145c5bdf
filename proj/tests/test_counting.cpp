#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "visilat/counting.hpp"
#include "visilat/density.hpp"

using namespace visilat;

namespace {

std::vector<PointTuple> origin(const Field& K, unsigned m) { return {PointTuple{std::vector<AlgInt>(m, K.zero())}}; }

} // namespace

TEST_CASE("region enumeration") {
    CHECK(enumerate_region_points(Region::ball(1), 2).size() == 5);
    CHECK(enumerate_region_points(Region::ball(2), 2).size() == 13);
    CHECK(enumerate_region_points(Region::cube(3), 2).size() == 49);
    CHECK(enumerate_region_points(Region::cube(2), 3).size() == 125);
    const auto pts = enumerate_region_points(Region::cube(1), 2);
    CHECK(pts.point(0)[0] == -1);
    CHECK(pts.point(0)[1] == -1);
    CHECK(pts.point(8)[0] == 1);
}

TEST_CASE("region labels round-trip") {
    CHECK(Region::parse("cube:L=20").label() == "cube:L=20");
    CHECK(Region::parse("ball:R=30").label() == "ball:R=30");
    CHECK(Region::parse("ball:R=2.5").R == 2.5);
    CHECK_THROWS_AS(Region::parse("cube:L=-1"), std::invalid_argument);
    CHECK_THROWS_AS(Region::parse("sphere:R=3"), std::invalid_argument);
    CHECK_THROWS_AS(Region::parse("cube:L=3x"), std::invalid_argument);
}

TEST_CASE("transformed region is a relabelling of the same points") {
    const Region plain = Region::cube(4);
    const Region sheared = plain.with_transform({{1, 1}, {0, 1}});
    const auto a = enumerate_region_points(plain, 2), b = enumerate_region_points(sheared, 2);
    CHECK(a.size() == b.size());
    // every b point a satisfies |a0 + a1| <= 4 and |a1| <= 4
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(std::abs(b.point(i)[0] + b.point(i)[1]) <= 4);
        CHECK(std::abs(b.point(i)[1]) <= 4);
    }
    CHECK_THROWS_AS(enumerate_region_points(plain.with_transform({{2, 0}, {0, 1}}), 2), std::invalid_argument);
}

TEST_CASE("caps") {
    Caps small;
    small.region_points = 100;
    CHECK_THROWS_AS(enumerate_region_points(Region::cube(10), 2, small), CapExceeded);
    auto Q = make_field(FieldDescriptor::rational());
    Caps tuples;
    tuples.tuples = 1000;
    CHECK_THROWS_AS(count_visible_sieve(Q, origin(*Q, 2), 2, Region::cube(100), tuples), CapExceeded);
}

TEST_CASE("direct count on the 3x3 square") {
    auto Q = make_field(FieldDescriptor::rational());
    const auto r = count_visible_direct(Q, origin(*Q, 2), 2, Region::cube(1));
    CHECK(r.visible_count == 8);
    CHECK(r.total_tuples == 9);
    CHECK(r.density_estimate == Rational(8, 9));
}

TEST_CASE("direct count over Z matches plain gcd counting") {
    auto Q = make_field(FieldDescriptor::rational());
    auto pt = [&](long a, long b) { return PointTuple{{Q->from_integer(a), Q->from_integer(b)}}; };
    const std::vector<PointTuple> S{pt(0, 0), pt(1, 1)};
    const long L = 12;
    std::uint64_t expected = 0;
    for (long a = -L; a <= L; ++a)
        for (long b = -L; b <= L; ++b)
            if (oracle::visible_z({a, b}, {0, 0}) && oracle::visible_z({a, b}, {1, 1})) ++expected;
    CHECK(count_visible_direct(Q, S, 2, Region::cube(L)).visible_count == expected);
    CHECK(count_visible_sieve(Q, S, 2, Region::cube(L)).visible_count == expected);
}

TEST_CASE("sieve equals direct on small quadratic configurations") {
    std::mt19937_64 rng(5);
    for (long d : {-1L, -3L, 2L, 5L}) {
        auto K = make_field(FieldDescriptor::quadratic(d));
        for (int t = 0; t < 3; ++t) {
            std::vector<PointTuple> S;
            const int size = 1 + static_cast<int>(rng() % 3);
            for (int k = 0; k < size; ++k) {
                PointTuple s;
                for (int i = 0; i < 2; ++i)
                    s.coords.push_back(K->element({static_cast<long>(rng() % 7) - 3, static_cast<long>(rng() % 7) - 3}));
                S.push_back(s);
            }
            const Region region = t == 2 ? Region::ball(4.5) : Region::cube(3);
            const auto direct = count_visible_direct(K, S, 2, region);
            const auto sieve = count_visible_sieve(K, S, 2, region);
            CHECK(direct.visible_count == sieve.visible_count);
        }
    }
}

TEST_CASE("negation symmetry") {
    auto K = make_field(FieldDescriptor::quadratic(-1));
    const std::vector<PointTuple> S{PointTuple{{K->element({1, 0}), K->element({0, 2})}}};
    const std::vector<PointTuple> negS{PointTuple{{K->element({-1, 0}), K->element({0, -2})}}};
    CHECK(count_visible_sieve(K, S, 2, Region::cube(6)).visible_count ==
          count_visible_sieve(K, negS, 2, Region::cube(6)).visible_count);
}

TEST_CASE("Monte Carlo is reproducible and close to the sieve") {
    auto K = make_field(FieldDescriptor::quadratic(-1));
    const auto a = mc_estimate(K, origin(*K, 2), 2, Region::cube(20), 20000, 42);
    const auto b = mc_estimate(K, origin(*K, 2), 2, Region::cube(20), 20000, 42);
    CHECK(a.visible_count == b.visible_count);
    REQUIRE(a.mc_stderr);
    const auto exact = count_visible_sieve(K, origin(*K, 2), 2, Region::cube(20));
    CHECK(std::fabs(a.density() - exact.density()) < 5 * *a.mc_stderr);
    CHECK_THROWS_AS(mc_estimate(K, origin(*K, 2), 2, Region::cube(20), 10, 1), std::invalid_argument);
}

TEST_CASE("ideal counts") {
    auto Q = make_field(FieldDescriptor::rational());
    const auto rec = ideal_count_check(Q, principal_ideal(Q, Q->from_integer(2)), Region::cube(10));
    CHECK(rec.count == 11);
    CHECK(rec.main_term == doctest::Approx(10));
    CHECK(rec.error == doctest::Approx(1));

    auto K = make_field(FieldDescriptor::quadratic(-1));
    const IdealHNF I = principal_ideal(K, K->element({1, 1}));
    std::uint64_t brute = 0;
    for (long a = -5; a <= 5; ++a)
        for (long b = -5; b <= 5; ++b)
            if (a * a + b * b <= 25 && (a + b) % 2 == 0) ++brute;
    CHECK(ideal_count_check(K, I, Region::ball(5)).count == brute);
}

TEST_CASE("lemma sweep covers every prime and region") {
    auto K = make_field(FieldDescriptor::quadratic(-1));
    const std::vector<Region> regions{Region::ball(10), Region::cube(10)};
    const auto rows = lemma_sweep(K, 20, regions);
    CHECK(rows.size() == 2 * primes_up_to_norm(K, 20).size());
}

TEST_CASE("cube densities approach the prediction") {
    auto K = make_field(FieldDescriptor::quadratic(-1));
    const auto pi = predicted_density(K, origin(*K, 2), 2, 10000);
    const double mid = pi.midpoint().get_d();
    std::vector<double> gaps;
    for (std::int64_t L : {10, 20, 40, 80})
        gaps.push_back(std::fabs(count_visible_sieve(K, origin(*K, 2), 2, Region::cube(L)).density() - mid));
    CHECK(gaps.back() < gaps.front());
    CHECK(gaps.back() < 0.015);
}
