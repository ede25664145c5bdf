#pragma once

#include <functional>
#include <span>
#include <vector>

#include "visilat/numfield.hpp"

namespace visilat {

/// Row-style Hermite normal form of the Z-span of the given rows: upper
/// triangular, positive pivots, entries above each pivot reduced into
/// [0, pivot). Zero rows are dropped, so the result has rank-many rows.
IntMatrix hermite_normal_form(const IntMatrix& rows);

/// An ideal of O stored as the canonical HNF of its Z-basis over E.
///
/// Nonzero ideals have full rank, so the matrix is n x n with the norm
/// |O/I| equal to the product of its diagonal. The zero ideal has an empty
/// matrix and norm 0. Two ideals are equal iff their matrices are.
class IdealHNF {
public:
    IdealHNF(FieldPtr field, IntMatrix hnf);

    const FieldPtr& field() const { return field_; }
    const IntMatrix& hnf() const { return hnf_; }
    bool is_zero() const { return hnf_.rows == 0; }
    bool is_unit() const { return norm_ == 1; }
    const Integer& norm() const { return norm_; }

    friend bool operator==(const IdealHNF& a, const IdealHNF& b) {
        return *a.field_ == *b.field_ && a.hnf_ == b.hnf_;
    }

private:
    FieldPtr field_;
    IntMatrix hnf_;
    Integer norm_;
};

IdealHNF unit_ideal(const FieldPtr& field);
IdealHNF zero_ideal(const FieldPtr& field);

/// Ideal generated by `gens`: HNF of the Z-span of {g * e_i}.
IdealHNF ideal_from_generators(const FieldPtr& field, std::span<const AlgInt> gens);
IdealHNF principal_ideal(const FieldPtr& field, const AlgInt& g);

/// I + J, the gcd of the two ideals.
IdealHNF ideal_sum(const IdealHNF& a, const IdealHNF& b);
IdealHNF ideal_mul(const IdealHNF& a, const IdealHNF& b);
IdealHNF ideal_pow(const IdealHNF& a, unsigned k);

bool contains(const IdealHNF& ideal, const AlgInt& a);
/// True when `inner` is a subset of `outer`.
bool contains(const IdealHNF& outer, const IdealHNF& inner);

/// An m-tuple of algebraic integers.
struct PointTuple {
    std::vector<AlgInt> coords;

    std::size_t size() const { return coords.size(); }
    friend bool operator==(const PointTuple&, const PointTuple&) = default;
    friend auto operator<=>(const PointTuple&, const PointTuple&) = default;
};

/// gcd of the coordinate differences, as an ideal.
IdealHNF difference_ideal(const Field& field, const PointTuple& z, const PointTuple& x);

/// z and x are mutually visible iff the differences generate O. z == x gives
/// the zero ideal and is never visible.
bool is_visible(const Field& field, const PointTuple& z, const PointTuple& x);

/// Membership of z in V(S). Throws std::invalid_argument for empty S or
/// tuples of mismatched length.
bool is_visible_from_all(const Field& field, const PointTuple& z, std::span<const PointTuple> S);

/// Sorted, duplicate-free copy of S; `removed` receives the number dropped.
std::vector<PointTuple> dedup_points(std::span<const PointTuple> S, std::size_t* removed = nullptr);

/// Prime ideals above a rational prime, used to factor ideals.
using PrimesAbove = std::function<std::vector<IdealHNF>(const Integer& p)>;

/// Moebius function on ideals: 1 for O, (-1)^r for a product of r distinct
/// primes, 0 otherwise. Throws for the zero ideal.
int mobius(const IdealHNF& ideal, const PrimesAbove& primes_above);

/// Factorization of a positive integer by trial division, as (prime, exponent).
std::vector<std::pair<Integer, unsigned>> factor_integer(Integer n);

} // namespace visilat
