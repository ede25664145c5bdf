#include "doctest.h"
#include "visilat/primes.hpp"

using namespace visilat;

TEST_CASE("splitting in Q(i)") {
    auto K = make_field(FieldDescriptor::quadratic(-1));
    SUBCASE("2 ramifies") {
        auto ps = split_prime(K, 2);
        REQUIRE(ps.size() == 1);
        CHECK(ps[0].e == 2);
        CHECK(ps[0].f == 1);
        CHECK(ps[0].norm == 2);
        CHECK(reduce(K->element({3, 2}), ps[0]).rep == std::vector<std::uint64_t>{1});
    }
    SUBCASE("3 is inert") {
        auto ps = split_prime(K, 3);
        REQUIRE(ps.size() == 1);
        CHECK(ps[0].f == 2);
        CHECK(ps[0].norm == 9);
    }
    SUBCASE("5 splits") {
        auto ps = split_prime(K, 5);
        REQUIRE(ps.size() == 2);
        CHECK(ps[1].gpoly == fp::Poly{3, 1});
        CHECK(reduce(K->basis_element(1), ps[1]).rep == std::vector<std::uint64_t>{2});
        const bool generated = ps[0].hnf == principal_ideal(K, K->element({-2, 1})) ||
                               ps[0].hnf == principal_ideal(K, K->element({2, 1}));
        CHECK(generated);
    }
}

TEST_CASE("sum of e*f is the degree") {
    for (auto desc : {FieldDescriptor::quadratic(-3), FieldDescriptor::quadratic(2), FieldDescriptor::quadratic(5),
                      FieldDescriptor::monogenic({-1, -1, 0, 1})}) {
        auto K = make_field(desc);
        for (std::uint64_t p : rational_primes_up_to(60)) {
            unsigned total = 0;
            Integer norm_product = 1;
            for (const auto& P : split_prime(K, p)) {
                total += P.e * P.f;
                for (unsigned k = 0; k < P.e; ++k) norm_product *= P.norm;
            }
            CHECK(total == K->degree());
            Integer pn = 1;
            for (std::size_t k = 0; k < K->degree(); ++k) pn *= p;
            CHECK(norm_product == pn);
        }
    }
}

TEST_CASE("prime ordering and counts") {
    auto K = make_field(FieldDescriptor::quadratic(-1));
    const auto ps = primes_up_to_norm(K, 30);
    // norms 2, 5, 5, 9, 13, 13, 17, 17, 29, 29
    REQUIRE(ps.size() == 10);
    for (std::size_t i = 1; i < ps.size(); ++i) CHECK(prime_less(ps[i - 1], ps[i]));
    CHECK(ps[3].norm == 9);
    CHECK(first_rational_primes(5) == std::vector<std::uint64_t>{2, 3, 5, 7, 11});
    CHECK(prime_window(K, 3).primes.size() == 4);
}

TEST_CASE("residue maps are ring homomorphisms") {
    auto K = make_field(FieldDescriptor::quadratic(-7));
    const AlgInt a = K->element({4, -3}), b = K->element({-5, 7});
    for (const auto& P : primes_up_to_norm(K, 60)) {
        CHECK(reduce(K->mul(a, b), P) == residue_mul(reduce(a, P), reduce(b, P), P));
        CHECK(reduce(K->add(a, b), P) == residue_add(reduce(a, P), reduce(b, P), P));
        CHECK(reduce(P.hnf.field()->zero(), P).is_zero());
    }
}

TEST_CASE("s(P) counts residue tuples") {
    auto Q = make_field(FieldDescriptor::rational());
    auto pt = [&](long a, long b) { return PointTuple{{Q->from_integer(a), Q->from_integer(b)}}; };
    const std::vector<PointTuple> S{pt(0, 0), pt(2, 2)};
    for (const auto& P : primes_up_to_norm(Q, 30)) CHECK(s_of_prime(S, P) == (P.under_p == 2 ? 1u : 2u));
    const std::vector<PointTuple> T{pt(0, 0), pt(1, 1)};
    for (const auto& P : primes_up_to_norm(Q, 30)) CHECK(s_of_prime(T, P) == 2u);
}
