#include "visilat/density.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "visilat/parallel.hpp"

namespace visilat {

namespace {

void validate_points(std::span<const PointTuple> S, unsigned m, std::size_t n) {
    if (S.empty()) throw std::invalid_argument("S must be nonempty");
    for (const PointTuple& s : S) {
        if (s.size() != m)
            throw std::invalid_argument("point of S has " + std::to_string(s.size()) + " coordinates, expected m = " +
                                        std::to_string(m));
        for (const AlgInt& c : s.coords)
            if (c.size() != n) throw std::invalid_argument("point of S does not belong to the field");
    }
}

Integer pow_u(const Integer& b, unsigned e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

} // namespace

Rational power_tail_bound(unsigned m, std::uint64_t X) {
    if (m < 2) throw std::invalid_argument("power_tail_bound needs m >= 2");
    Rational t(1, (m - 1) * pow_u(from_uint64(X), m - 1));
    t.canonicalize();
    return t;
}

PredictionInterval predicted_density(const FieldPtr& field, std::span<const PointTuple> S_in, unsigned m,
                                     std::uint64_t X, std::uint64_t seed) {
    if (m < 2) throw std::invalid_argument("predicted_density needs m >= 2; the product diverges to 0 for m = 1");
    if (X < 2) throw std::invalid_argument("predicted_density needs X >= 2");
    validate_points(S_in, m, field->degree());
    const std::vector<PointTuple> S = dedup_points(S_in);

    PredictionInterval out;
    out.requested_X = X;
    // keep every tail factor u = s/N^m <= 1/2 so that -log(1-u) <= 2u
    while (2 * from_uint64(S.size()) > pow_u(from_uint64(X), m)) ++X;
    out.cutoff_X = X;

    const std::vector<PrimeIdeal> primes = primes_up_to_norm(field, X, seed);
    out.prime_count = primes.size();
    Integer num = 1, den = 1;
    for (const PrimeIdeal& P : primes) {
        const Integer Nm = pow_u(P.norm, m);
        const Integer s = from_uint64(s_of_prime(S, P));
        if (s == Nm && !out.zero_certificate) out.zero_certificate = P;
        num *= Nm - s;
        den *= Nm;
    }
    out.partial_product = Rational(num, den);
    out.partial_product.canonicalize();
    out.hi = out.partial_product;

    const Integer n = from_uint64(field->degree());
    out.tail_exponent = Rational(2 * n * from_uint64(S.size())) * power_tail_bound(m, X);
    out.tail_exponent.canonicalize();
    if (out.zero_certificate) {
        out.lo = 0;
        out.hi = 0;
        return out;
    }
    // 1 - c + c^2/2 - c^3/6 <= exp(-c) for c >= 0
    const Rational& c = out.tail_exponent;
    Rational exp_lower = 1 - c + c * c / 2 - c * c * c / 6;
    exp_lower.canonicalize();
    out.lo = out.partial_product * exp_lower;
    out.lo.canonicalize();
    if (out.lo < 0) out.lo = 0;
    return out;
}

Rational zeta_recip_truncated(const FieldPtr& field, unsigned s, std::uint64_t X, std::uint64_t seed) {
    if (X < 1) throw std::invalid_argument("zeta_recip_truncated needs X >= 1");
    const std::vector<PrimeIdeal> primes = X >= 2 ? primes_up_to_norm(field, X, seed) : std::vector<PrimeIdeal>{};
    std::vector<std::uint64_t> norms;
    norms.reserve(primes.size());
    for (const auto& P : primes) norms.push_back(P.norm_u64());

    // group terms by norm: coefficient[N] = sum of mu(I) over squarefree I of norm N
    std::map<std::uint64_t, long> coefficient;
    auto walk = [&](auto&& self, std::size_t start, std::uint64_t norm, int sign) -> void {
        coefficient[norm] += sign;
        for (std::size_t i = start; i < norms.size(); ++i) {
            if (norms[i] > X / norm) break;
            self(self, i + 1, norm * norms[i], -sign);
        }
    };
    walk(walk, 0, 1, 1);

    Rational sum = 0;
    for (const auto& [N, c] : coefficient) {
        if (c == 0) continue;
        Rational term(Integer(c), pow_u(from_uint64(N), s));
        term.canonicalize();
        sum += term;
    }
    return sum;
}

std::optional<Rational> zeta_recip_tail_bound(const FieldPtr& field, unsigned s, std::uint64_t X) {
    if (field->degree() != 1) return std::nullopt;
    return power_tail_bound(s, X);
}

Integer crt_state_count(const PrimeWindow& window, unsigned m) {
    Integer N = 1;
    for (const auto& P : window.primes) N *= P.norm;
    return pow_u(N, m);
}

ExactDensity exact_window_density(const FieldPtr& field, std::span<const PointTuple> S_in, unsigned m,
                                  const PrimeWindow& window, double state_cap) {
    if (window.primes.empty()) throw std::invalid_argument("exact_window_density needs a nonempty window");
    if (m < 1) throw std::invalid_argument("exact_window_density needs m >= 1");
    validate_points(S_in, m, field->degree());
    const std::vector<PointTuple> S = dedup_points(S_in);
    const std::size_t n = field->degree();

    ExactDensity out;
    out.window = window;
    out.value = 1;
    for (const PrimeIdeal& P : window.primes) {
        const Integer Nm = pow_u(P.norm, m);
        const std::uint64_t s = s_of_prime(S, P);
        Rational factor(Nm - from_uint64(s), Nm);
        factor.canonicalize();
        out.value *= factor;
        out.per_prime_factors.push_back({P, s, factor});
    }

    out.crt_states = crt_state_count(window, m);
    if (out.crt_states.get_d() > state_cap)
        throw CapExceeded("CRT enumeration over the prime window", out.crt_states.get_d(), state_cap);
    if (window.primes.size() > 64) throw std::invalid_argument("CRT enumeration supports at most 64 primes");

    // J = prod P; the box prod [0, d_i) over the HNF diagonal of J is a
    // complete residue system for O/J.
    IdealHNF J = unit_ideal(field);
    for (const PrimeIdeal& P : window.primes) J = ideal_mul(J, P.hnf);
    std::vector<std::uint64_t> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = J.hnf()(i, i).get_ui();
    const std::uint64_t residues = J.norm().get_ui();

    // distinct coordinate values appearing in S, and S rewritten as indices
    std::vector<AlgInt> values;
    for (const auto& s : S)
        for (const auto& c : s.coords)
            if (std::find(values.begin(), values.end(), c) == values.end()) values.push_back(c);
    std::vector<std::vector<std::size_t>> s_index;
    for (const auto& s : S) {
        std::vector<std::size_t> idx;
        for (const auto& c : s.coords)
            idx.push_back(static_cast<std::size_t>(std::find(values.begin(), values.end(), c) - values.begin()));
        s_index.push_back(std::move(idx));
    }

    // in_prime[r * |values| + v] has bit j set iff (rep_r - value_v) lies in window prime j
    std::vector<std::uint64_t> in_prime(residues * values.size(), 0);
    parallel_chunks(residues, [&](unsigned, std::size_t begin, std::size_t end) {
        std::vector<Integer> coords(n);
        for (std::size_t r = begin; r < end; ++r) {
            std::uint64_t rest = r;
            for (std::size_t i = 0; i < n; ++i) {
                coords[i] = from_uint64(rest % diag[i]);
                rest /= diag[i];
            }
            const AlgInt rep(coords);
            for (std::size_t v = 0; v < values.size(); ++v) {
                const AlgInt diff = field->sub(rep, values[v]);
                std::uint64_t mask = 0;
                for (std::size_t j = 0; j < window.primes.size(); ++j)
                    if (contains(window.primes[j].hnf, diff)) mask |= std::uint64_t{1} << j;
                in_prime[r * values.size() + v] = mask;
            }
        }
    });

    std::uint64_t total = 1;
    for (unsigned i = 0; i < m; ++i) total *= residues;
    std::vector<std::uint64_t> avoiding(worker_count(), 0);
    parallel_chunks(total, [&](unsigned w, std::size_t begin, std::size_t end) {
        std::vector<std::uint64_t> digits(m);
        std::uint64_t count = 0;
        for (std::size_t t = begin; t < end; ++t) {
            std::uint64_t rest = t;
            for (unsigned i = 0; i < m; ++i) {
                digits[i] = rest % residues;
                rest /= residues;
            }
            bool hit = false;
            for (const auto& idx : s_index) {
                std::uint64_t common = ~std::uint64_t{0};
                for (unsigned i = 0; i < m && common; ++i) common &= in_prime[digits[i] * values.size() + idx[i]];
                if (common) {
                    hit = true;
                    break;
                }
            }
            if (!hit) ++count;
        }
        avoiding[w] += count;
    });
    std::uint64_t good = 0;
    for (auto c : avoiding) good += c;
    out.crt_value = Rational(from_uint64(good), from_uint64(total));
    out.crt_value.canonicalize();
    return out;
}

} // namespace visilat
