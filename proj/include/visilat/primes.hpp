#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "visilat/ideals.hpp"
#include "visilat/polymod.hpp"

namespace visilat {

/// A prime ideal P = (p, g(t)) of O, where g is a monic irreducible factor of
/// the generator's minimal polynomial modulo p (Dedekind-Kummer).
struct PrimeIdeal {
    std::uint64_t under_p = 0;
    unsigned f = 1;         // residue degree
    unsigned e = 1;         // ramification index
    fp::Poly gpoly;         // monic, degree f, constant first
    IdealHNF hnf;
    Integer norm;           // p^f
    /// image of basis element e_k in F_p[x]/(g), each of length f
    std::vector<std::vector<std::uint64_t>> basis_images;

    /// p^f as a machine word; throws if it does not fit.
    std::uint64_t norm_u64() const;
};

/// Image of an element in O/P = F_p[x]/(g): f coefficients in [0, p), constant first.
struct ResidueElem {
    std::vector<std::uint64_t> rep;

    bool is_zero() const;
    friend bool operator==(const ResidueElem&, const ResidueElem&) = default;
    friend auto operator<=>(const ResidueElem&, const ResidueElem&) = default;
};

/// All prime ideals above the first t rational primes.
struct PrimeWindow {
    std::size_t t = 0;
    std::vector<PrimeIdeal> primes;
};

/// Orders by (norm, under_p, gpoly).
bool prime_less(const PrimeIdeal& a, const PrimeIdeal& b);

/// Prime ideals above p, sorted by gpoly. Sum of e*f over the result is n.
std::vector<PrimeIdeal> split_prime(const FieldPtr& field, std::uint64_t p, std::uint64_t seed = 0);

/// Every prime ideal of norm <= X, sorted by prime_less.
std::vector<PrimeIdeal> primes_up_to_norm(const FieldPtr& field, std::uint64_t X, std::uint64_t seed = 0);

PrimeWindow prime_window(const FieldPtr& field, std::size_t t, std::uint64_t seed = 0);

/// Rational primes <= X.
std::vector<std::uint64_t> rational_primes_up_to(std::uint64_t X);
std::vector<std::uint64_t> first_rational_primes(std::size_t t);

ResidueElem reduce(const AlgInt& a, const PrimeIdeal& P);
ResidueElem residue_add(const ResidueElem& a, const ResidueElem& b, const PrimeIdeal& P);
ResidueElem residue_mul(const ResidueElem& a, const ResidueElem& b, const PrimeIdeal& P);

/// Residue of an element given by machine-word coordinates, encoded as
/// sum rep[i] * p^i in [0, N(P)). Requires N(P) to fit in 64 bits.
std::uint64_t residue_index(std::span<const std::int64_t> coords, const PrimeIdeal& P);

/// The same encoding for an already reduced element.
std::uint64_t residue_index(const ResidueElem& r, const PrimeIdeal& P);

/// Number of distinct residue tuples of S modulo P.
std::uint64_t s_of_prime(std::span<const PointTuple> S, const PrimeIdeal& P);

/// Adapter for mobius(): the HNFs of the primes above p.
PrimesAbove primes_above_service(const FieldPtr& field, std::uint64_t seed = 0);

} // namespace visilat
