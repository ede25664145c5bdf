#pragma once

#include <optional>
#include <span>
#include <vector>

#include "visilat/parallel.hpp"
#include "visilat/primes.hpp"

namespace visilat {

/// Rigorous bracket [lo, hi] for the Euler product prod_P (1 - s(P)/N(P)^m).
///
/// hi is the exact partial product over N(P) <= cutoff_X. lo multiplies it by
/// a lower bound for exp(-2 n |S| T) with T = 1/((m-1) X^(m-1)) >= sum_{k>X} k^-m.
struct PredictionInterval {
    Rational lo;
    Rational hi;
    std::uint64_t cutoff_X = 0;       // after any internal raise
    std::uint64_t requested_X = 0;
    Rational partial_product;
    Rational tail_exponent;           // 2 n |S| T(X)
    std::size_t prime_count = 0;      // primes in the partial product
    std::optional<PrimeIdeal> zero_certificate;

    Rational midpoint() const { return (lo + hi) / 2; }
    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

/// Integral upper bound 1/((m-1) X^(m-1)) for sum_{k>X} k^-m.
Rational power_tail_bound(unsigned m, std::uint64_t X);

/// Throws std::invalid_argument for m < 2, X < 2, empty S or tuples whose
/// length is not m. X is raised until |S| <= X^m / 2.
PredictionInterval predicted_density(const FieldPtr& field, std::span<const PointTuple> S, unsigned m,
                                     std::uint64_t X, std::uint64_t seed = 0);

/// sum over squarefree ideals I with N(I) <= X of mu(I) / N(I)^s.
Rational zeta_recip_truncated(const FieldPtr& field, unsigned s, std::uint64_t X, std::uint64_t seed = 0);

/// Bound on |1/zeta_K(s) - zeta_recip_truncated(K, s, X)|. Only K = Q is
/// covered (sum_{k>X} k^-s); other fields return nullopt.
std::optional<Rational> zeta_recip_tail_bound(const FieldPtr& field, unsigned s, std::uint64_t X);

struct WindowFactor {
    PrimeIdeal prime;
    std::uint64_t s = 0;
    Rational factor;  // 1 - s/N(P)^m
};

/// Density of the points that avoid pi_P(S) for every P in the window.
struct ExactDensity {
    Rational value;           // product of the per-prime factors
    Rational crt_value;       // residue-class enumeration modulo prod P
    Integer crt_states;       // N(prod P)^m
    PrimeWindow window;
    std::vector<WindowFactor> per_prime_factors;

    bool methods_agree() const { return value == crt_value; }
};

/// Computes the window density twice: as the product of factors and by
/// enumerating every residue tuple of (O / prod P)^m. Throws CapExceeded when
/// the enumeration would visit more than `state_cap` tuples.
ExactDensity exact_window_density(const FieldPtr& field, std::span<const PointTuple> S, unsigned m,
                                  const PrimeWindow& window, double state_cap = 1e8);

/// Number of tuples the CRT enumeration would visit.
Integer crt_state_count(const PrimeWindow& window, unsigned m);

} // namespace visilat
