#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace visilat {

using Integer = mpz_class;
using Rational = mpq_class;

/// Dense row-major integer matrix. Small (n <= a handful) in every use here.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Integer> data;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Integer& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
Integer determinant(IntMatrix m);

inline bool fits_int64(const Integer& x) { return mpz_fits_slong_p(x.get_mpz_t()) != 0; }

inline std::int64_t to_int64(const Integer& x) {
    if (!fits_int64(x)) throw std::overflow_error("integer does not fit in 64 bits: " + x.get_str());
    return x.get_si();
}

inline Integer from_int64(std::int64_t v) {
    Integer r;
    mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
    return r;
}

inline Integer from_uint64(std::uint64_t v) {
    Integer r;
    mpz_set_ui(r.get_mpz_t(), static_cast<unsigned long>(v));
    return r;
}

/// Nonnegative residue of x modulo a positive 64-bit modulus.
inline std::uint64_t mod_u64(const Integer& x, std::uint64_t p) {
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(p));
    return r.get_ui();
}

/// Decimal rendering of q with `digits` significant digits, rounded toward
/// -inf (round_up = false) or +inf (round_up = true).
std::string to_decimal(const Rational& q, int digits, bool round_up);

} // namespace visilat
