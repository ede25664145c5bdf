#include "visilat/primes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace visilat {

std::uint64_t PrimeIdeal::norm_u64() const {
    if (!mpz_fits_ulong_p(norm.get_mpz_t())) throw std::overflow_error("prime norm exceeds 64 bits");
    return norm.get_ui();
}

bool ResidueElem::is_zero() const {
    return std::all_of(rep.begin(), rep.end(), [](std::uint64_t c) { return c == 0; });
}

bool prime_less(const PrimeIdeal& a, const PrimeIdeal& b) {
    if (int c = cmp(a.norm, b.norm); c != 0) return c < 0;
    if (a.under_p != b.under_p) return a.under_p < b.under_p;
    return fp::poly_less(a.gpoly, b.gpoly);
}

std::vector<std::uint64_t> rational_primes_up_to(std::uint64_t X) {
    std::vector<std::uint64_t> out;
    if (X < 2) return out;
    std::vector<bool> composite(X + 1, false);
    for (std::uint64_t i = 2; i <= X; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= X; j += i) composite[j] = true;
    }
    return out;
}

std::vector<std::uint64_t> first_rational_primes(std::size_t t) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; out.size() < t; ++q)
        if (fp::is_prime(q)) out.push_back(q);
    return out;
}

std::vector<PrimeIdeal> split_prime(const FieldPtr& field, std::uint64_t p, std::uint64_t seed) {
    if (!fp::is_prime(p)) throw std::invalid_argument("split_prime: " + std::to_string(p) + " is not prime");
    const Field& K = *field;
    const std::size_t n = K.degree();
    const fp::Poly minpoly = fp::from_integers(K.generator_minpoly(), p);

    std::vector<PrimeIdeal> out;
    for (const auto& fac : fp::factor(minpoly, p, seed)) {
        const auto f = static_cast<unsigned>(fp::degree(fac.poly));
        Integer norm;
        mpz_ui_pow_ui(norm.get_mpz_t(), static_cast<unsigned long>(p), f);

        std::vector<Integer> g_int(fac.poly.size());
        for (std::size_t i = 0; i < fac.poly.size(); ++i) g_int[i] = from_uint64(fac.poly[i]);
        const AlgInt gens[] = {K.from_integer(from_uint64(p)), K.eval_at_generator(g_int)};
        IdealHNF hnf = ideal_from_generators(field, gens);
        if (hnf.norm() != norm)
            throw std::logic_error("split_prime: ideal (p, g(t)) has norm " + hnf.norm().get_str() + ", expected " +
                                   norm.get_str() + "; is Z[t] the full ring of integers?");

        // e_k = t^k maps to x^k mod g
        std::vector<std::vector<std::uint64_t>> images;
        fp::Poly xk{1};
        for (std::size_t k = 0; k < n; ++k) {
            fp::Poly r = fp::rem(xk, fac.poly, p);
            r.resize(f, 0);
            images.push_back(std::move(r));
            xk = fp::mul(xk, fp::Poly{0, 1}, p);
        }
        out.push_back(PrimeIdeal{p, f, fac.multiplicity, fac.poly, std::move(hnf), std::move(norm), std::move(images)});
    }
    return out;
}

std::vector<PrimeIdeal> primes_up_to_norm(const FieldPtr& field, std::uint64_t X, std::uint64_t seed) {
    std::vector<PrimeIdeal> out;
    for (std::uint64_t p : rational_primes_up_to(X)) {
        for (auto& P : split_prime(field, p, seed))
            if (P.norm <= from_uint64(X)) out.push_back(std::move(P));
    }
    std::sort(out.begin(), out.end(), prime_less);
    return out;
}

PrimeWindow prime_window(const FieldPtr& field, std::size_t t, std::uint64_t seed) {
    PrimeWindow w;
    w.t = t;
    for (std::uint64_t p : first_rational_primes(t))
        for (auto& P : split_prime(field, p, seed)) w.primes.push_back(std::move(P));
    std::sort(w.primes.begin(), w.primes.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
        if (a.under_p != b.under_p) return a.under_p < b.under_p;
        return fp::poly_less(a.gpoly, b.gpoly);
    });
    return w;
}

ResidueElem reduce(const AlgInt& a, const PrimeIdeal& P) {
    if (a.size() != P.basis_images.size()) throw std::invalid_argument("reduce: element from a different field");
    const std::uint64_t p = P.under_p;
    ResidueElem r{std::vector<std::uint64_t>(P.f, 0)};
    for (std::size_t k = 0; k < a.size(); ++k) {
        const std::uint64_t c = mod_u64(a.coords[k], p);
        if (c == 0) continue;
        for (unsigned i = 0; i < P.f; ++i) r.rep[i] = (r.rep[i] + fp::mulmod(c, P.basis_images[k][i], p)) % p;
    }
    return r;
}

ResidueElem residue_add(const ResidueElem& a, const ResidueElem& b, const PrimeIdeal& P) {
    ResidueElem r{std::vector<std::uint64_t>(P.f)};
    for (unsigned i = 0; i < P.f; ++i) r.rep[i] = (a.rep[i] + b.rep[i]) % P.under_p;
    return r;
}

ResidueElem residue_mul(const ResidueElem& a, const ResidueElem& b, const PrimeIdeal& P) {
    fp::Poly x = a.rep, y = b.rep;
    fp::normalize(x);
    fp::normalize(y);
    fp::Poly r = fp::rem(fp::mul(x, y, P.under_p), P.gpoly, P.under_p);
    r.resize(P.f, 0);
    return ResidueElem{std::move(r)};
}

std::uint64_t residue_index(std::span<const std::int64_t> coords, const PrimeIdeal& P) {
    const std::uint64_t p = P.under_p;
    const auto sp = static_cast<__int128>(p);
    std::uint64_t index = 0;
    std::uint64_t place = 1;
    for (unsigned i = 0; i < P.f; ++i) {
        __int128 acc = 0;
        for (std::size_t k = 0; k < coords.size(); ++k) {
            acc += static_cast<__int128>(coords[k] % static_cast<std::int64_t>(p)) *
                   static_cast<__int128>(P.basis_images[k][i]);
            acc %= sp;
        }
        if (acc < 0) acc += sp;
        index += static_cast<std::uint64_t>(acc) * place;
        place *= p;
    }
    return index;
}

std::uint64_t residue_index(const ResidueElem& r, const PrimeIdeal& P) {
    std::uint64_t index = 0;
    for (unsigned i = P.f; i-- > 0;) index = index * P.under_p + r.rep[i];
    return index;
}

std::uint64_t s_of_prime(std::span<const PointTuple> S, const PrimeIdeal& P) {
    if (S.empty()) throw std::invalid_argument("s_of_prime: empty S");
    std::set<std::vector<ResidueElem>> images;
    for (const PointTuple& s : S) {
        std::vector<ResidueElem> t;
        t.reserve(s.size());
        for (const AlgInt& c : s.coords) t.push_back(reduce(c, P));
        images.insert(std::move(t));
    }
    return images.size();
}

PrimesAbove primes_above_service(const FieldPtr& field, std::uint64_t seed) {
    return [field, seed](const Integer& p) {
        if (!mpz_fits_ulong_p(p.get_mpz_t())) throw std::overflow_error("prime above 64 bits");
        std::vector<IdealHNF> out;
        for (auto& P : split_prime(field, p.get_ui(), seed)) out.push_back(P.hnf);
        return out;
    };
}

} // namespace visilat
