#include <random>

#include "doctest.h"
#include "visilat/numfield.hpp"

using namespace visilat;

namespace {

AlgInt random_element(const Field& K, std::mt19937_64& rng, int bound = 20) {
    std::vector<Integer> c(K.degree());
    for (auto& x : c) x = static_cast<long>(rng() % (2 * bound + 1)) - bound;
    return K.element(std::move(c));
}

} // namespace

TEST_CASE("discriminants") {
    CHECK(make_field(FieldDescriptor::rational())->discriminant() == 1);
    CHECK(make_field(FieldDescriptor::quadratic(-1))->discriminant() == -4);
    CHECK(make_field(FieldDescriptor::quadratic(5))->discriminant() == 5);
    CHECK(make_field(FieldDescriptor::quadratic(2))->discriminant() == 8);
    CHECK(make_field(FieldDescriptor::quadratic(-3))->discriminant() == -3);
    // x^3 - x - 1 has discriminant -23
    CHECK(make_field(FieldDescriptor::monogenic({-1, -1, 0, 1}))->discriminant() == -23);
}

TEST_CASE("Gaussian integer arithmetic") {
    auto K = make_field(FieldDescriptor::quadratic(-1));
    const AlgInt a = K->element({2, 1}), b = K->element({2, -1});
    CHECK(K->mul(a, b) == K->from_integer(5));
    CHECK(K->norm(a) == 5);
    CHECK(K->norm(K->element({3, 4})) == 25);
    CHECK(K->trace(a) == 4);
    const AlgInt i = K->basis_element(1);
    CHECK(K->mul(i, i) == K->from_integer(-1));
}

TEST_CASE("golden ratio basis") {
    auto K = make_field(FieldDescriptor::quadratic(5));
    const AlgInt phi = K->basis_element(1);
    CHECK(K->mul(phi, phi) == K->add(phi, K->one()));
    CHECK(K->norm(phi) == -1);
}

TEST_CASE("ring laws and norm multiplicativity") {
    std::mt19937_64 rng(11);
    for (auto desc : {FieldDescriptor::quadratic(-1), FieldDescriptor::quadratic(-3), FieldDescriptor::quadratic(2),
                      FieldDescriptor::monogenic({-1, -1, 0, 1})}) {
        auto K = make_field(desc);
        for (int t = 0; t < 50; ++t) {
            const AlgInt a = random_element(*K, rng), b = random_element(*K, rng), c = random_element(*K, rng);
            CHECK(K->mul(a, b) == K->mul(b, a));
            CHECK(K->mul(K->mul(a, b), c) == K->mul(a, K->mul(b, c)));
            CHECK(K->mul(a, K->add(b, c)) == K->add(K->mul(a, b), K->mul(a, c)));
            CHECK(K->norm(K->mul(a, b)) == K->norm(a) * K->norm(b));
            CHECK(K->add(a, K->neg(a)).is_zero());
        }
    }
}

TEST_CASE("field validation") {
    CHECK_THROWS_AS(make_field(FieldDescriptor::quadratic(0)), FieldError);
    CHECK_THROWS_AS(make_field(FieldDescriptor::quadratic(1)), FieldError);
    CHECK_THROWS_AS(make_field(FieldDescriptor::quadratic(12)), FieldError);
    CHECK_THROWS_AS(make_field(FieldDescriptor::monogenic({-4, 0, 1})), FieldError);  // (x-2)(x+2)
    CHECK_THROWS_AS(make_field(FieldDescriptor::monogenic({1, 0, 2})), FieldError);   // not monic
    CHECK(make_field(FieldDescriptor::quadratic(-1))->warnings().empty());
    CHECK_FALSE(make_field(FieldDescriptor::quadratic(-5))->warnings().empty());
    CHECK_FALSE(make_field(FieldDescriptor::monogenic({-1, -1, 0, 1}))->warnings().empty());
}

TEST_CASE("elements from another field are rejected") {
    auto Q = make_field(FieldDescriptor::rational());
    auto K = make_field(FieldDescriptor::quadratic(-1));
    CHECK_THROWS_AS(K->add(Q->one(), K->one()), std::invalid_argument);
}
