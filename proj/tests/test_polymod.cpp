#include <random>

#include "doctest.h"
#include "visilat/polymod.hpp"

using namespace visilat;
using namespace visilat::fp;

namespace {

Poly product_of(const std::vector<Factor>& fs, std::uint64_t p) {
    Poly r{1};
    for (const auto& f : fs)
        for (unsigned k = 0; k < f.multiplicity; ++k) r = mul(r, f.poly, p);
    return r;
}

bool irreducible_by_search(const Poly& f, std::uint64_t p) {
    // tiny p and degree only: try every monic divisor of degree 1..deg/2
    const int n = degree(f);
    for (int d = 1; d <= n / 2; ++d) {
        std::uint64_t count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Poly g(d + 1, 0);
            g[d] = 1;
            std::uint64_t c = code;
            for (int i = 0; i < d; ++i) {
                g[i] = c % p;
                c /= p;
            }
            if (rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("modular integer helpers") {
    CHECK(is_prime(2));
    CHECK(is_prime(1000000007));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(561));
    CHECK_FALSE(is_prime(3215031751ull));
    CHECK(powmod(3, 4, 7) == 4);
    CHECK(mulmod(invmod(5, 13), 5, 13) == 1);
}

TEST_CASE("factor x^2 + 1 over small primes") {
    const Poly f{1, 0, 1};
    SUBCASE("p = 5 splits") {
        auto fs = factor(f, 5);
        REQUIRE(fs.size() == 2);
        CHECK(fs[0].poly == Poly{2, 1});
        CHECK(fs[1].poly == Poly{3, 1});
    }
    SUBCASE("p = 3 is inert") {
        auto fs = factor(f, 3);
        REQUIRE(fs.size() == 1);
        CHECK(fs[0].poly == f);
        CHECK(fs[0].multiplicity == 1);
    }
    SUBCASE("p = 2 ramifies") {
        auto fs = factor(f, 2);
        REQUIRE(fs.size() == 1);
        CHECK(fs[0].poly == Poly{1, 1});
        CHECK(fs[0].multiplicity == 2);
    }
}

TEST_CASE("factorizations multiply back and have irreducible parts") {
    std::mt19937_64 rng(7);
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
        for (int trial = 0; trial < 25; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 6);
            Poly f(n + 1);
            for (int i = 0; i < n; ++i) f[i] = rng() % p;
            f[n] = 1;
            const auto fs = factor(f, p, trial);
            CHECK(product_of(fs, p) == f);
            for (const auto& g : fs) {
                CHECK(g.poly.back() == 1);
                CHECK(irreducible_by_search(g.poly, p));
            }
            for (std::size_t i = 1; i < fs.size(); ++i) CHECK(poly_less(fs[i - 1].poly, fs[i].poly));
        }
    }
}

TEST_CASE("factorization does not depend on the seed") {
    const Poly f{6, 0, 0, 1, 0, 1, 1};  // arbitrary monic degree 6
    for (std::uint64_t p : {11ull, 101ull, 65537ull}) CHECK(factor(f, p, 1) == factor(f, p, 99));
}

TEST_CASE("polynomial division identity") {
    const std::uint64_t p = 13;
    const Poly a{1, 2, 3, 4, 5}, b{7, 0, 1};
    auto [q, r] = divmod(a, b, p);
    CHECK(add(mul(q, b, p), r, p) == a);
    CHECK(degree(r) < degree(b));
}
