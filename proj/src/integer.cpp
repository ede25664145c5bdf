#include "visilat/integer.hpp"

#include <utility>

namespace visilat {

Integer determinant(IntMatrix m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    const std::size_t n = m.rows;
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t swap = k + 1;
            while (swap < n && m(swap, k) == 0) ++swap;
            if (swap == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(swap, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m(k, k);
    }
    Integer d = m(n - 1, n - 1);
    return sign > 0 ? d : Integer(-d);
}

std::string to_decimal(const Rational& q, int digits, bool round_up) {
    if (q == 0) return "0";
    const bool negative = q < 0;
    Rational a = abs(q);

    // smallest e with a < 10^e, so a * 10^(digits - e) lies in [10^(digits-1), 10^digits)
    long e = 0;
    {
        Integer ip = a.get_num() / a.get_den();
        long int_digits = ip == 0 ? 0 : static_cast<long>(ip.get_str().size());
        e = int_digits;
        if (e == 0) {
            Rational t = a;
            while (t < Rational(1, 10)) {
                t *= 10;
                --e;
            }
        }
    }
    const long shift = digits - e;
    Integer ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift >= 0 ? shift : -shift));
    Rational scaled = shift >= 0 ? Rational(a * ten_pow) : Rational(a / ten_pow);
    scaled.canonicalize();

    // toward -inf on q means floor on |q| for positive q and ceil for negative q
    const bool ceil_abs = round_up != negative;
    Integer m;
    if (ceil_abs)
        mpz_cdiv_q(m.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    else
        mpz_fdiv_q(m.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());

    std::string s = m.get_str();
    long point = static_cast<long>(s.size()) - shift;  // digits before the decimal point
    std::string out;
    if (point <= 0) {
        out = "0." + std::string(static_cast<std::size_t>(-point), '0') + s;
    } else if (point >= static_cast<long>(s.size())) {
        out = s + std::string(static_cast<std::size_t>(point - static_cast<long>(s.size())), '0');
    } else {
        out = s.substr(0, static_cast<std::size_t>(point)) + "." + s.substr(static_cast<std::size_t>(point));
    }
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return negative ? "-" + out : out;
}

} // namespace visilat
