#include "visilat/polymod.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace visilat::fp {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    // p is prime everywhere this is used
    a %= p;
    if (a == 0) throw std::domain_error("inverse of zero mod " + std::to_string(p));
    return powmod(a, p - 2, p);
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

void normalize(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly from_integers(std::span<const Integer> coeffs, std::uint64_t p) {
    Poly f(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) f[i] = mod_u64(coeffs[i], p);
    normalize(f);
    return f;
}

Poly add(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = i < a.size() ? a[i] : 0;
        std::uint64_t y = i < b.size() ? b[i] : 0;
        r[i] = x >= p - y ? x - (p - y) : x + y;
    }
    normalize(r);
    return r;
}

Poly sub(const Poly& a, const Poly& b, std::uint64_t p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) {
        std::uint64_t x = i < a.size() ? a[i] : 0;
        std::uint64_t y = i < b.size() ? b[i] : 0;
        r[i] = x >= y ? x - y : x + (p - y);
    }
    normalize(r);
    return r;
}

Poly scale(const Poly& a, std::uint64_t c, std::uint64_t p) {
    Poly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mulmod(a[i], c, p);
    normalize(r);
    return r;
}

Poly mul(const Poly& a, const Poly& b, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t t = mulmod(a[i], b[j], p);
            r[i + j] = r[i + j] >= p - t ? r[i + j] - (p - t) : r[i + j] + t;
        }
    }
    normalize(r);
    return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, std::uint64_t p) {
    if (b.empty()) throw std::domain_error("polynomial division by zero");
    Poly r = a;
    if (r.size() < b.size()) return {Poly{}, r};
    const std::uint64_t lead_inv = invmod(b.back(), p);
    Poly q(r.size() - b.size() + 1, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
        std::uint64_t c = mulmod(r[k + b.size() - 1], lead_inv, p);
        q[k] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t t = mulmod(c, b[j], p);
            std::uint64_t& x = r[k + j];
            x = x >= t ? x - t : x + (p - t);
        }
    }
    normalize(q);
    normalize(r);
    return {q, r};
}

Poly rem(const Poly& a, const Poly& b, std::uint64_t p) { return divmod(a, b, p).second; }

Poly make_monic(const Poly& a, std::uint64_t p) {
    if (a.empty()) return a;
    return scale(a, invmod(a.back(), p), p);
}

Poly gcd(Poly a, Poly b, std::uint64_t p) {
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

Poly derivative(const Poly& a, std::uint64_t p) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = mulmod(a[i], i % p, p);
    normalize(r);
    return r;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& modulus, std::uint64_t p) {
    return rem(mul(a, b, p), modulus, p);
}

Poly powmod(const Poly& base, const Integer& e, const Poly& modulus, std::uint64_t p) {
    Poly result = rem(Poly{1}, modulus, p);
    Poly b = rem(base, modulus, p);
    const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        result = mulmod(result, result, modulus, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) result = mulmod(result, b, modulus, p);
    }
    return result;
}

bool poly_less(const Poly& a, const Poly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

bool is_one(const Poly& f) { return f.size() == 1 && f[0] == 1; }

// f(x) = g(x^p) in characteristic p; returns g^(1/p) coefficientwise, which
// over F_p is just g since the Frobenius fixes the coefficients.
Poly pth_root(const Poly& f, std::uint64_t p) {
    Poly r;
    for (std::size_t i = 0; i < f.size(); i += p) r.push_back(f[i]);
    normalize(r);
    return r;
}

void squarefree_parts(const Poly& f, std::uint64_t p, unsigned mult, std::vector<Factor>& out) {
    if (f.size() <= 1) return;
    Poly fd = derivative(f, p);
    if (fd.empty()) {
        squarefree_parts(pth_root(f, p), p, mult * static_cast<unsigned>(p), out);
        return;
    }
    Poly c = gcd(f, fd, p);
    Poly w = divmod(f, c, p).first;
    unsigned i = 1;
    while (!is_one(w)) {
        Poly y = gcd(w, c, p);
        Poly fac = divmod(w, y, p).first;
        if (fac.size() > 1) out.push_back({make_monic(fac, p), i * mult});
        ++i;
        w = std::move(y);
        c = divmod(c, w, p).first;
    }
    if (!is_one(c)) squarefree_parts(pth_root(c, p), p, mult * static_cast<unsigned>(p), out);
}

// (degree d, product of all irreducible factors of degree d)
std::vector<std::pair<unsigned, Poly>> distinct_degree(Poly f, std::uint64_t p) {
    std::vector<std::pair<unsigned, Poly>> out;
    const Poly x{0, 1};
    Poly h = x;
    const Integer pz = from_uint64(p);
    for (unsigned d = 1; 2 * d <= static_cast<unsigned>(degree(f)); ++d) {
        h = powmod(h, pz, f, p);
        Poly g = gcd(f, sub(h, x, p), p);
        if (!is_one(g)) {
            out.emplace_back(d, g);
            f = divmod(f, g, p).first;
            h = rem(h, f, p);
        }
    }
    if (degree(f) > 0) out.emplace_back(static_cast<unsigned>(degree(f)), make_monic(f, p));
    return out;
}

void equal_degree(const Poly& f, unsigned d, std::uint64_t p, std::mt19937_64& rng, std::vector<Poly>& out) {
    const int n = degree(f);
    if (n == static_cast<int>(d)) {
        out.push_back(make_monic(f, p));
        return;
    }
    std::uniform_int_distribution<std::uint64_t> coeff(0, p - 1);
    Integer exponent;
    if (p != 2) {
        mpz_ui_pow_ui(exponent.get_mpz_t(), static_cast<unsigned long>(p), d);
        exponent = (exponent - 1) / 2;
    }
    for (;;) {
        Poly a(static_cast<std::size_t>(n));
        for (auto& c : a) c = coeff(rng);
        normalize(a);
        if (a.size() <= 1) continue;
        Poly b;
        if (p == 2) {
            // trace map a + a^2 + ... + a^(2^(d-1))
            Poly t = rem(a, f, p);
            b = t;
            for (unsigned i = 1; i < d; ++i) {
                t = mulmod(t, t, f, p);
                b = add(b, t, p);
            }
        } else {
            b = sub(powmod(a, exponent, f, p), Poly{1}, p);
        }
        Poly g = gcd(f, b, p);
        if (g.size() > 1 && g.size() < f.size()) {
            equal_degree(g, d, p, rng, out);
            equal_degree(divmod(f, g, p).first, d, p, rng, out);
            return;
        }
    }
}

} // namespace

std::vector<Factor> factor(const Poly& f_in, std::uint64_t p, std::uint64_t seed) {
    if (!is_prime(p)) throw std::invalid_argument("factor: modulus " + std::to_string(p) + " is not prime");
    Poly f = f_in;
    for (auto& c : f) c %= p;
    normalize(f);
    if (f.empty()) throw std::invalid_argument("factor: zero polynomial");
    f = make_monic(f, p);

    std::vector<Factor> sqf;
    squarefree_parts(f, p, 1, sqf);

    std::mt19937_64 rng(seed);
    std::vector<Factor> out;
    for (const auto& part : sqf) {
        for (auto& [d, prod] : distinct_degree(part.poly, p)) {
            std::vector<Poly> pieces;
            equal_degree(prod, d, p, rng, pieces);
            for (auto& g : pieces) out.push_back({std::move(g), part.multiplicity});
        }
    }
    std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
        if (a.poly != b.poly) return poly_less(a.poly, b.poly);
        return a.multiplicity < b.multiplicity;
    });
    return out;
}

} // namespace visilat::fp
