#include "visilat/ideals.hpp"

#include <algorithm>
#include <stdexcept>

namespace visilat {

IntMatrix hermite_normal_form(const IntMatrix& input) {
    const std::size_t n = input.cols;
    std::vector<std::vector<Integer>> rows;
    for (std::size_t i = 0; i < input.rows; ++i) {
        std::vector<Integer> r(input.data.begin() + static_cast<long>(i * n),
                               input.data.begin() + static_cast<long>((i + 1) * n));
        if (std::any_of(r.begin(), r.end(), [](const Integer& x) { return x != 0; })) rows.push_back(std::move(r));
    }

    std::vector<std::vector<Integer>> echelon;
    std::vector<std::size_t> pivot_cols;
    Integer q;
    for (std::size_t col = 0; col < n && !rows.empty(); ++col) {
        // Euclid on column `col` until a single row carries a nonzero entry there
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i][col] == 0) continue;
                if (best == rows.size() || mpz_cmpabs(rows[i][col].get_mpz_t(), rows[best][col].get_mpz_t()) < 0) best = i;
            }
            if (best == rows.size()) break;
            bool done = true;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == best || rows[i][col] == 0) continue;
                mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[best][col].get_mpz_t());
                for (std::size_t j = col; j < n; ++j) rows[i][j] -= q * rows[best][j];
                if (rows[i][col] != 0) done = false;
            }
            if (done) {
                std::vector<Integer> pivot = std::move(rows[best]);
                rows.erase(rows.begin() + static_cast<long>(best));
                if (pivot[col] < 0)
                    for (auto& x : pivot) x = -x;
                echelon.push_back(std::move(pivot));
                pivot_cols.push_back(col);
                break;
            }
        }
        std::erase_if(rows, [](const std::vector<Integer>& r) {
            return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
        });
    }

    for (std::size_t i = 0; i < echelon.size(); ++i) {
        const std::size_t c = pivot_cols[i];
        for (std::size_t k = 0; k < i; ++k) {
            mpz_fdiv_q(q.get_mpz_t(), echelon[k][c].get_mpz_t(), echelon[i][c].get_mpz_t());
            if (q == 0) continue;
            for (std::size_t j = c; j < n; ++j) echelon[k][j] -= q * echelon[i][j];
        }
    }

    IntMatrix out(echelon.size(), n);
    for (std::size_t i = 0; i < echelon.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = echelon[i][j];
    return out;
}

IdealHNF::IdealHNF(FieldPtr field, IntMatrix hnf) : field_(std::move(field)), hnf_(std::move(hnf)) {
    const std::size_t n = field_->degree();
    if (hnf_.rows == 0) {
        hnf_.cols = n;
        norm_ = 0;
        return;
    }
    if (hnf_.rows != n || hnf_.cols != n)
        throw std::invalid_argument("ideal basis must be n x n; a nonzero ideal of O has full rank");
    norm_ = 1;
    for (std::size_t i = 0; i < n; ++i) norm_ *= hnf_(i, i);
}

IdealHNF unit_ideal(const FieldPtr& field) {
    const std::size_t n = field->degree();
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return IdealHNF(field, std::move(m));
}

IdealHNF zero_ideal(const FieldPtr& field) { return IdealHNF(field, IntMatrix(0, field->degree())); }

namespace {

IdealHNF from_rows(const FieldPtr& field, std::vector<AlgInt> const& elems) {
    const std::size_t n = field->degree();
    IntMatrix m(elems.size(), n);
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = elems[i].coords[j];
    return IdealHNF(field, hermite_normal_form(m));
}

AlgInt row(const IdealHNF& I, std::size_t i) {
    const std::size_t n = I.field()->degree();
    std::vector<Integer> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = I.hnf()(i, j);
    return AlgInt(std::move(c));
}

void check_same_field(const IdealHNF& a, const IdealHNF& b) {
    if (!(*a.field() == *b.field())) throw std::invalid_argument("ideals from different fields");
}

} // namespace

IdealHNF ideal_from_generators(const FieldPtr& field, std::span<const AlgInt> gens) {
    if (gens.empty()) throw std::invalid_argument("ideal_from_generators: empty generator list");
    const std::size_t n = field->degree();
    std::vector<AlgInt> span;
    span.reserve(gens.size() * n);
    for (const AlgInt& g : gens) {
        if (g.size() != n) throw std::invalid_argument("ideal_from_generators: generator from a different field");
        if (g.is_zero()) continue;
        for (std::size_t i = 0; i < n; ++i) span.push_back(field->mul(g, field->basis_element(i)));
    }
    if (span.empty()) return zero_ideal(field);
    return from_rows(field, span);
}

IdealHNF principal_ideal(const FieldPtr& field, const AlgInt& g) {
    return ideal_from_generators(field, std::span<const AlgInt>(&g, 1));
}

IdealHNF ideal_sum(const IdealHNF& a, const IdealHNF& b) {
    check_same_field(a, b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const std::size_t n = a.field()->degree();
    IntMatrix m(2 * n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = a.hnf()(i, j);
            m(n + i, j) = b.hnf()(i, j);
        }
    return IdealHNF(a.field(), hermite_normal_form(m));
}

IdealHNF ideal_mul(const IdealHNF& a, const IdealHNF& b) {
    check_same_field(a, b);
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    const Field& K = *a.field();
    const std::size_t n = K.degree();
    std::vector<AlgInt> products;
    products.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        AlgInt x = row(a, i);
        for (std::size_t j = 0; j < n; ++j) products.push_back(K.mul(x, row(b, j)));
    }
    return from_rows(a.field(), products);
}

IdealHNF ideal_pow(const IdealHNF& a, unsigned k) {
    IdealHNF r = unit_ideal(a.field());
    for (unsigned i = 0; i < k; ++i) r = ideal_mul(r, a);
    return r;
}

bool contains(const IdealHNF& ideal, const AlgInt& a) {
    const std::size_t n = ideal.field()->degree();
    if (a.size() != n) throw std::invalid_argument("contains: element from a different field");
    if (ideal.is_zero()) return a.is_zero();
    std::vector<Integer> r = a.coords;
    const IntMatrix& H = ideal.hnf();
    Integer q;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mpz_divisible_p(r[i].get_mpz_t(), H(i, i).get_mpz_t())) return false;
        mpz_divexact(q.get_mpz_t(), r[i].get_mpz_t(), H(i, i).get_mpz_t());
        if (q == 0) continue;
        for (std::size_t j = i; j < n; ++j) r[j] -= q * H(i, j);
    }
    return true;
}

bool contains(const IdealHNF& outer, const IdealHNF& inner) {
    check_same_field(outer, inner);
    for (std::size_t i = 0; i < inner.hnf().rows; ++i)
        if (!contains(outer, row(inner, i))) return false;
    return true;
}

IdealHNF difference_ideal(const Field& field, const PointTuple& z, const PointTuple& x) {
    if (z.size() != x.size()) throw std::invalid_argument("tuples of different length");
    const std::size_t n = field.degree();
    std::vector<AlgInt> diffs;
    diffs.reserve(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        AlgInt d = field.sub(z.coords[i], x.coords[i]);
        if (!d.is_zero()) diffs.push_back(std::move(d));
    }
    IntMatrix m(diffs.size() * n, n);
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        IntMatrix mm = field.multiplication_matrix(diffs[i]);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) m(i * n + r, c) = mm(r, c);
    }
    return IdealHNF(field.shared_from_this(), hermite_normal_form(m));
}

bool is_visible(const Field& field, const PointTuple& z, const PointTuple& x) {
    if (z.size() != x.size()) throw std::invalid_argument("tuples of different length");
    const std::size_t n = field.degree();
    if (n == 1) {
        // Z: the ideal sum of (d_i) is (gcd d_i)
        Integer g = 0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            Integer d = z.coords[i].coords[0] - x.coords[i].coords[0];
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
            if (g == 1) return true;
        }
        return g == 1;
    }
    return difference_ideal(field, z, x).is_unit();
}

bool is_visible_from_all(const Field& field, const PointTuple& z, std::span<const PointTuple> S) {
    if (S.empty()) throw std::invalid_argument("visibility from an empty set is not defined here");
    for (const PointTuple& x : S) {
        if (x.size() != z.size()) throw std::invalid_argument("S contains tuples of a different length");
        if (!is_visible(field, z, x)) return false;
    }
    return true;
}

std::vector<PointTuple> dedup_points(std::span<const PointTuple> S, std::size_t* removed) {
    std::vector<PointTuple> out(S.begin(), S.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (removed) *removed = S.size() - out.size();
    return out;
}

std::vector<std::pair<Integer, unsigned>> factor_integer(Integer n) {
    if (n <= 0) throw std::invalid_argument("factor_integer: need a positive integer");
    std::vector<std::pair<Integer, unsigned>> out;
    for (Integer q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), q.get_mpz_t())) {
            n /= q;
            ++e;
        }
        if (e) out.emplace_back(q, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

int mobius(const IdealHNF& ideal, const PrimesAbove& primes_above) {
    if (ideal.is_zero()) throw std::invalid_argument("mobius of the zero ideal");
    if (ideal.is_unit()) return 1;
    int sign = 1;
    for (const auto& [p, exponent] : factor_integer(ideal.norm())) {
        for (const IdealHNF& P : primes_above(p)) {
            if (!contains(P, ideal)) continue;
            if (contains(ideal_mul(P, P), ideal)) return 0;
            sign = -sign;
        }
    }
    return sign;
}

} // namespace visilat
