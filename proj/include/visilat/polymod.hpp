#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "visilat/integer.hpp"

// Polynomials over F_p for word-sized primes p, constant term first.
// The zero polynomial is the empty vector; nonzero polynomials carry no
// trailing zero coefficients.
namespace visilat::fp {

using Poly = std::vector<std::uint64_t>;

struct Factor {
    Poly poly;  // monic irreducible
    unsigned multiplicity = 1;

    friend bool operator==(const Factor&, const Factor&) = default;
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }
void normalize(Poly& f);
Poly from_integers(std::span<const Integer> coeffs, std::uint64_t p);

Poly add(const Poly& a, const Poly& b, std::uint64_t p);
Poly sub(const Poly& a, const Poly& b, std::uint64_t p);
Poly mul(const Poly& a, const Poly& b, std::uint64_t p);
Poly scale(const Poly& a, std::uint64_t c, std::uint64_t p);
/// Quotient and remainder; b must be nonzero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::uint64_t p);
Poly rem(const Poly& a, const Poly& b, std::uint64_t p);
Poly make_monic(const Poly& a, std::uint64_t p);
Poly gcd(Poly a, Poly b, std::uint64_t p);
Poly derivative(const Poly& a, std::uint64_t p);
Poly mulmod(const Poly& a, const Poly& b, const Poly& modulus, std::uint64_t p);
Poly powmod(const Poly& base, const Integer& e, const Poly& modulus, std::uint64_t p);

/// Complete factorization of a nonzero polynomial into monic irreducibles:
/// squarefree decomposition, distinct-degree, then equal-degree splitting.
/// The leading coefficient is dropped. Output is sorted by (degree,
/// coefficients), so it does not depend on `seed`; the seed only drives the
/// random splitting. Throws std::invalid_argument when p is not prime.
std::vector<Factor> factor(const Poly& f, std::uint64_t p, std::uint64_t seed = 0);

/// Orders polynomials by degree, then coefficients from the constant term up.
bool poly_less(const Poly& a, const Poly& b);

} // namespace visilat::fp
