#include "visilat/counting.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "visilat/parallel.hpp"

namespace visilat {

std::string to_string(CountMethod m) {
    switch (m) {
    case CountMethod::direct: return "direct";
    case CountMethod::sieve: return "sieve";
    case CountMethod::mc: return "mc";
    }
    return "?";
}

std::string Region::label() const {
    if (shape == RegionShape::cube) return "cube:L=" + std::to_string(L);
    std::ostringstream os;
    os << "ball:R=" << R;
    return os.str();
}

Region Region::parse(const std::string& text) {
    auto fail = [&] {
        return std::invalid_argument("region '" + text + "' is not of the form cube:L=<int> or ball:R=<real>");
    };
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw fail();
    const std::string kind = text.substr(0, colon);
    std::string value = text.substr(colon + 1);
    if (kind == "cube") {
        if (value.rfind("L=", 0) == 0) value = value.substr(2);
        std::size_t used = 0;
        long long L = 0;
        try {
            L = std::stoll(value, &used);
        } catch (const std::exception&) {
            throw fail();
        }
        if (used != value.size() || L < 0) throw fail();
        return cube(L);
    }
    if (kind == "ball") {
        if (value.rfind("R=", 0) == 0) value = value.substr(2);
        std::size_t used = 0;
        double R = 0;
        try {
            R = std::stod(value, &used);
        } catch (const std::exception&) {
            throw fail();
        }
        if (used != value.size() || !(R > 0)) throw fail();
        return ball(R);
    }
    throw fail();
}

double Region::volume(std::size_t n) const {
    const double dn = static_cast<double>(n);
    if (shape == RegionShape::cube) return std::pow(2.0 * static_cast<double>(L), dn);
    return std::pow(std::numbers::pi, dn / 2) / std::tgamma(dn / 2 + 1) * std::pow(R, dn);
}

double Region::size_estimate(std::size_t n) const {
    const double dn = static_cast<double>(n);
    if (shape == RegionShape::cube) return std::pow(2.0 * static_cast<double>(L) + 1, dn);
    const double padded = R + std::sqrt(dn) / 2;
    return std::pow(std::numbers::pi, dn / 2) / std::tgamma(dn / 2 + 1) * std::pow(padded, dn);
}

namespace {

using Matrix64 = std::vector<std::vector<std::int64_t>>;

// largest T with T <= R^2, so the ball test is sum b_i^2 <= T in integers
std::int64_t ball_threshold(double R) {
    const long double r2 = static_cast<long double>(R) * static_cast<long double>(R);
    return static_cast<std::int64_t>(std::floor(r2));
}

std::optional<Matrix64> inverse_transform(const Region& region, std::size_t n) {
    if (!region.basis_transform) return std::nullopt;
    const Matrix64& M = *region.basis_transform;
    if (M.size() != n) throw std::invalid_argument("basis_transform must be n x n");
    IntMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (M[i].size() != n) throw std::invalid_argument("basis_transform must be n x n");
        for (std::size_t j = 0; j < n; ++j) A(i, j) = from_int64(M[i][j]);
    }
    const Integer det = determinant(A);
    if (abs(det) != 1) throw std::invalid_argument("basis_transform must be unimodular, det = " + det.get_str());
    Matrix64 inv(n, std::vector<std::int64_t>(n, 0));
    if (n == 1) {
        inv[0][0] = to_int64(det);
        return inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // inv(i, j) = det * (-1)^(i+j) * minor(j, i)
            IntMatrix minor(n - 1, n - 1);
            for (std::size_t r = 0, mr = 0; r < n; ++r) {
                if (r == j) continue;
                for (std::size_t c = 0, mc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor(mr, mc++) = A(r, c);
                }
                ++mr;
            }
            Integer v = determinant(minor) * det;
            if ((i + j) % 2) v = -v;
            inv[i][j] = to_int64(v);
        }
    }
    return inv;
}

template <class Emit>
void for_each_transformed(const Region& region, std::size_t n, Emit&& emit) {
    std::vector<std::int64_t> b(n);
    if (region.shape == RegionShape::cube) {
        const std::int64_t L = region.L;
        if (L < 0) throw std::invalid_argument("cube needs L >= 0");
        std::fill(b.begin(), b.end(), -L);
        for (;;) {
            emit(b);
            std::size_t i = n;
            while (i-- > 0) {
                if (b[i] < L) {
                    ++b[i];
                    break;
                }
                b[i] = -L;
            }
            if (i == static_cast<std::size_t>(-1)) return;
        }
    }
    if (!(region.R > 0)) throw std::invalid_argument("ball needs R > 0");
    const std::int64_t T = ball_threshold(region.R);
    auto rec = [&](auto&& self, std::size_t i, std::int64_t remaining) -> void {
        if (i == n) {
            emit(b);
            return;
        }
        auto bound = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(remaining)));
        while (bound * bound > remaining) --bound;
        while ((bound + 1) * (bound + 1) <= remaining) ++bound;
        for (std::int64_t v = -bound; v <= bound; ++v) {
            b[i] = v;
            self(self, i + 1, remaining - v * v);
        }
    };
    rec(rec, 0, T);
}

std::uint64_t ball_point_count(std::size_t dims, std::int64_t remaining) {
    auto isqrt = [](std::int64_t x) {
        auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(x)));
        while (r * r > x) --r;
        while ((r + 1) * (r + 1) <= x) ++r;
        return r;
    };
    if (dims == 1) return static_cast<std::uint64_t>(2 * isqrt(remaining) + 1);
    std::uint64_t total = 0;
    const std::int64_t bound = isqrt(remaining);
    for (std::int64_t v = -bound; v <= bound; ++v) total += ball_point_count(dims - 1, remaining - v * v);
    return total;
}

std::uint64_t region_point_count(const Region& region, std::size_t n) {
    if (region.shape == RegionShape::cube) {
        std::uint64_t c = 1;
        for (std::size_t i = 0; i < n; ++i) c *= static_cast<std::uint64_t>(2 * region.L + 1);
        return c;
    }
    return ball_point_count(n, ball_threshold(region.R));
}

void check_tuples(std::span<const PointTuple> S, unsigned m, std::size_t n) {
    if (m < 2) throw std::invalid_argument("visibility counting needs m >= 2");
    if (S.empty()) throw std::invalid_argument("S must be nonempty");
    for (const auto& s : S) {
        if (s.size() != m) throw std::invalid_argument("point of S does not have m coordinates");
        for (const auto& c : s.coords)
            if (c.size() != n) throw std::invalid_argument("point of S does not belong to the field");
    }
}

std::uint64_t tuple_total(std::uint64_t r, unsigned m, const Caps& caps) {
    const double estimate = std::pow(static_cast<double>(r), m);
    if (estimate > caps.tuples) throw CapExceeded("region^m tuple space", estimate, caps.tuples);
    std::uint64_t total = 1;
    for (unsigned i = 0; i < m; ++i) total *= r;
    return total;
}

AlgInt to_alg(std::span<const std::int64_t> c) {
    std::vector<Integer> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = from_int64(c[i]);
    return AlgInt(std::move(v));
}

CountResult make_result(CountMethod method, const Region& region, std::size_t n, unsigned m, std::uint64_t visible,
                        std::uint64_t total, std::uint64_t region_size) {
    CountResult out;
    out.method = method;
    out.region = region;
    out.m = m;
    out.visible_count = visible;
    out.total_tuples = total;
    out.density_estimate = Rational(from_uint64(visible), from_uint64(total));
    out.density_estimate.canonicalize();
    const double ratio = static_cast<double>(region_size) / region.volume(n);
    out.volume_density = out.density_estimate.get_d() * std::pow(ratio, m);
    return out;
}

// counter-based splitmix64 stream
struct CounterRng {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    CounterRng(std::uint64_t seed, std::uint64_t index) : state(mix(seed + 0x9E3779B97F4A7C15ull) ^ mix(index)) {}
    std::uint64_t next() { return mix(state += 0x9E3779B97F4A7C15ull); }
    // uniform in [0, k) by rejection
    std::uint64_t below(std::uint64_t k) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % k);
        for (;;) {
            std::uint64_t x = next();
            if (x < limit) return x % k;
        }
    }
};

} // namespace

RegionPoints enumerate_region_points(const Region& region, std::size_t n, const Caps& caps) {
    const double estimate = region.size_estimate(n);
    if (estimate > caps.region_points) throw CapExceeded("region " + region.label(), estimate, caps.region_points);
    const auto inv = inverse_transform(region, n);

    RegionPoints out;
    out.n = n;
    out.coords.reserve(static_cast<std::size_t>(estimate) * n);
    std::vector<std::int64_t> a(n);
    for_each_transformed(region, n, [&](const std::vector<std::int64_t>& b) {
        if (!inv) {
            out.coords.insert(out.coords.end(), b.begin(), b.end());
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            __int128 acc = 0;
            for (std::size_t j = 0; j < n; ++j) acc += static_cast<__int128>((*inv)[i][j]) * b[j];
            a[i] = static_cast<std::int64_t>(acc);
        }
        out.coords.insert(out.coords.end(), a.begin(), a.end());
    });
    if (inv) {
        const std::size_t r = out.size();
        std::vector<std::size_t> order(r);
        for (std::size_t i = 0; i < r; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            auto px = out.point(x), py = out.point(y);
            return std::lexicographical_compare(px.begin(), px.end(), py.begin(), py.end());
        });
        std::vector<std::int64_t> sorted;
        sorted.reserve(out.coords.size());
        for (std::size_t i : order) {
            auto p = out.point(i);
            sorted.insert(sorted.end(), p.begin(), p.end());
        }
        out.coords = std::move(sorted);
    }
    return out;
}

std::vector<AlgInt> enumerate_region(const Region& region, std::size_t n, const Caps& caps) {
    RegionPoints pts = enumerate_region_points(region, n, caps);
    std::vector<AlgInt> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out.push_back(to_alg(pts.point(i)));
    return out;
}

CountResult count_visible_direct(const FieldPtr& field, std::span<const PointTuple> S_in, unsigned m,
                                 const Region& region, const Caps& caps) {
    const std::size_t n = field->degree();
    check_tuples(S_in, m, n);
    const std::vector<PointTuple> S = dedup_points(S_in);
    const RegionPoints pts = enumerate_region_points(region, n, caps);
    const std::uint64_t r = pts.size();
    const std::uint64_t total = tuple_total(r, m, caps);

    std::vector<AlgInt> elems;
    elems.reserve(r);
    for (std::size_t i = 0; i < r; ++i) elems.push_back(to_alg(pts.point(i)));

    std::vector<std::uint64_t> visible(worker_count(), 0);
    parallel_chunks(total, [&](unsigned w, std::size_t begin, std::size_t end) {
        PointTuple z{std::vector<AlgInt>(m)};
        std::uint64_t count = 0;
        for (std::size_t t = begin; t < end; ++t) {
            std::uint64_t rest = t;
            for (unsigned i = 0; i < m; ++i) {
                z.coords[i] = elems[rest % r];
                rest /= r;
            }
            if (is_visible_from_all(*field, z, S)) ++count;
        }
        visible[w] += count;
    });
    std::uint64_t sum = 0;
    for (auto v : visible) sum += v;
    return make_result(CountMethod::direct, region, n, m, sum, total, r);
}

CountResult count_visible_sieve(const FieldPtr& field, std::span<const PointTuple> S_in, unsigned m,
                                const Region& region, const Caps& caps, std::uint64_t seed) {
    const Field& K = *field;
    const std::size_t n = K.degree();
    check_tuples(S_in, m, n);
    const std::vector<PointTuple> S = dedup_points(S_in);
    const RegionPoints pts = enumerate_region_points(region, n, caps);
    const std::uint64_t r = pts.size();
    const std::uint64_t total = tuple_total(r, m, caps);

    // distinct coordinate values of S and S as value indices
    std::vector<AlgInt> values;
    std::vector<std::vector<std::size_t>> s_index;
    for (const auto& s : S) {
        std::vector<std::size_t> idx;
        for (const auto& c : s.coords) {
            auto it = std::find(values.begin(), values.end(), c);
            if (it == values.end()) {
                values.push_back(c);
                it = values.end() - 1;
            }
            idx.push_back(static_cast<std::size_t>(it - values.begin()));
        }
        s_index.push_back(std::move(idx));
    }

    std::vector<std::uint64_t> bits((total + 63) / 64, 0);
    const bool concurrent = worker_count() > 1;
    auto mark = [&](std::uint64_t t) {
        const std::uint64_t bit = std::uint64_t{1} << (t % 64);
        if (concurrent)
            std::atomic_ref<std::uint64_t>(bits[t / 64]).fetch_or(bit, std::memory_order_relaxed);
        else
            bits[t / 64] |= bit;
    };

    // z == s gives the zero ideal
    auto find_point = [&](const AlgInt& a) -> std::optional<std::size_t> {
        std::vector<std::int64_t> c(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!fits_int64(a.coords[i])) return std::nullopt;
            c[i] = a.coords[i].get_si();
        }
        std::size_t lo = 0, hi = r;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            auto p = pts.point(mid);
            if (std::lexicographical_compare(p.begin(), p.end(), c.begin(), c.end()))
                lo = mid + 1;
            else
                hi = mid;
        }
        if (lo < r && std::equal(c.begin(), c.end(), pts.point(lo).begin())) return lo;
        return std::nullopt;
    };
    std::vector<std::optional<std::size_t>> value_point;
    for (const auto& v : values) value_point.push_back(find_point(v));
    for (const auto& idx : s_index) {
        std::uint64_t t = 0, place = 1;
        bool inside = true;
        for (unsigned i = 0; i < m && inside; ++i) {
            if (!value_point[idx[i]]) inside = false;
            else t += *value_point[idx[i]] * place;
            place *= r;
        }
        if (inside) mark(t);
    }

    // Any prime containing every z_i - s_i, not all zero, divides some nonzero
    // N(z_i - s_i); so primes of norm above the largest such |N| are irrelevant.
    Integer bound = 0;
    for (std::size_t i = 0; i < r; ++i) {
        const AlgInt a = to_alg(pts.point(i));
        for (const auto& v : values) {
            const AlgInt d = K.sub(a, v);
            if (d.is_zero()) continue;
            Integer N = abs(K.norm(d));
            if (N > bound) bound = N;
        }
    }
    if (!mpz_fits_ulong_p(bound.get_mpz_t())) throw CapExceeded("sieve prime bound", bound.get_d(), 1.8e19);
    const std::uint64_t B = bound.get_ui();
    const std::vector<PrimeIdeal> primes = B >= 2 ? primes_up_to_norm(field, B, seed) : std::vector<PrimeIdeal>{};

    parallel_chunks(primes.size(), [&](unsigned, std::size_t begin, std::size_t end) {
        std::vector<std::uint64_t> value_res(values.size());
        std::vector<std::vector<std::uint64_t>> members(values.size());
        std::vector<std::size_t> pos(m);
        for (std::size_t k = begin; k < end; ++k) {
            const PrimeIdeal& P = primes[k];
            for (std::size_t v = 0; v < values.size(); ++v) {
                value_res[v] = residue_index(reduce(values[v], P), P);
                members[v].clear();
            }
            for (std::size_t i = 0; i < r; ++i) {
                const std::uint64_t res = residue_index(pts.point(i), P);
                for (std::size_t v = 0; v < values.size(); ++v)
                    if (res == value_res[v]) members[v].push_back(i);
            }
            for (const auto& idx : s_index) {
                bool empty = false;
                for (unsigned i = 0; i < m; ++i) empty = empty || members[idx[i]].empty();
                if (empty) continue;
                // every tuple in members[idx[0]] x ... x members[idx[m-1]]
                std::fill(pos.begin(), pos.end(), 0);
                for (;;) {
                    std::uint64_t t = 0, place = 1;
                    for (unsigned i = 0; i < m; ++i) {
                        t += members[idx[i]][pos[i]] * place;
                        place *= r;
                    }
                    mark(t);
                    unsigned i = 0;
                    for (; i < m; ++i) {
                        if (++pos[i] < members[idx[i]].size()) break;
                        pos[i] = 0;
                    }
                    if (i == m) break;
                }
            }
        }
    });

    std::uint64_t marked = 0;
    for (std::uint64_t word : bits) marked += static_cast<std::uint64_t>(std::popcount(word));
    CountResult out = make_result(CountMethod::sieve, region, n, m, total - marked, total, r);
    out.prime_norm_bound = bound;
    out.sieve_primes = primes.size();
    return out;
}

CountResult mc_estimate(const FieldPtr& field, std::span<const PointTuple> S_in, unsigned m, const Region& region,
                        std::uint64_t samples, std::uint64_t seed) {
    const std::size_t n = field->degree();
    check_tuples(S_in, m, n);
    if (samples < 100) throw std::invalid_argument("mc_estimate needs at least 100 samples");
    const std::vector<PointTuple> S = dedup_points(S_in);
    const auto inv = inverse_transform(region, n);
    const std::int64_t T = region.shape == RegionShape::ball ? ball_threshold(region.R) : 0;
    const std::int64_t side = region.shape == RegionShape::cube
                                  ? region.L
                                  : static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<long double>(T))));
    if (region.shape == RegionShape::cube && region.L < 0) throw std::invalid_argument("cube needs L >= 0");
    if (region.shape == RegionShape::ball && !(region.R > 0)) throw std::invalid_argument("ball needs R > 0");
    const auto width = static_cast<std::uint64_t>(2 * side + 1);

    std::vector<std::uint64_t> hits(worker_count(), 0);
    parallel_chunks(samples, [&](unsigned w, std::size_t begin, std::size_t end) {
        PointTuple z{std::vector<AlgInt>(m, AlgInt(std::vector<Integer>(n)))};
        std::vector<std::int64_t> b(n);
        std::uint64_t count = 0;
        for (std::size_t s = begin; s < end; ++s) {
            CounterRng rng(seed, s);
            for (unsigned i = 0; i < m; ++i) {
                for (;;) {
                    std::int64_t norm2 = 0;
                    for (std::size_t j = 0; j < n; ++j) {
                        b[j] = static_cast<std::int64_t>(rng.below(width)) - side;
                        norm2 += b[j] * b[j];
                    }
                    if (region.shape == RegionShape::cube || norm2 <= T) break;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    std::int64_t a = b[j];
                    if (inv) {
                        __int128 acc = 0;
                        for (std::size_t k = 0; k < n; ++k) acc += static_cast<__int128>((*inv)[j][k]) * b[k];
                        a = static_cast<std::int64_t>(acc);
                    }
                    z.coords[i].coords[j] = from_int64(a);
                }
            }
            if (is_visible_from_all(*field, z, S)) ++count;
        }
        hits[w] += count;
    });
    std::uint64_t h = 0;
    for (auto v : hits) h += v;
    CountResult out = make_result(CountMethod::mc, region, n, m, h, samples, region_point_count(region, n));
    const double p = static_cast<double>(h) / static_cast<double>(samples);
    out.mc_stderr = std::sqrt(p * (1 - p) / static_cast<double>(samples));
    return out;
}

namespace {

struct FastIdeal {
    std::size_t n;
    std::vector<std::int64_t> H;  // row-major HNF
    bool usable = true;

    FastIdeal(const IdealHNF& I) : n(I.field()->degree()), H(n * n) {
        for (std::size_t i = 0; i < n * n; ++i) {
            if (!fits_int64(I.hnf().data[i])) usable = false;
            else H[i] = I.hnf().data[i].get_si();
        }
    }
    bool contains(std::span<const std::int64_t> a) const {
        std::vector<__int128> r(a.begin(), a.end());
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t d = H[i * n + i];
            if (r[i] % d != 0) return false;
            const __int128 q = r[i] / d;
            for (std::size_t j = i; j < n; ++j) r[j] -= q * H[i * n + j];
        }
        return true;
    }
};

IdealCountRecord count_in_points(const IdealHNF& ideal, const RegionPoints& pts, const Region& region) {
    const std::size_t n = pts.n;
    FastIdeal fast(ideal);
    IdealCountRecord rec;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool in = fast.usable ? fast.contains(pts.point(i)) : contains(ideal, to_alg(pts.point(i)));
        if (in) ++rec.count;
    }
    const double N = ideal.norm().get_d();
    const double root = std::pow(N, 1.0 / static_cast<double>(n));
    rec.main_term = region.volume(n) / N;
    rec.error = std::fabs(static_cast<double>(rec.count) - rec.main_term);
    rec.scale = region.shape == RegionShape::ball ? region.R / root : 2.0 * static_cast<double>(region.L) / root + 1;
    rec.normalized_error = rec.error / std::pow(rec.scale, static_cast<double>(n) - 1);
    return rec;
}

} // namespace

IdealCountRecord ideal_count_check(const FieldPtr& field, const IdealHNF& ideal, const Region& region,
                                   const Caps& caps) {
    if (ideal.is_zero()) throw std::invalid_argument("ideal_count_check needs a nonzero ideal");
    return count_in_points(ideal, enumerate_region_points(region, field->degree(), caps), region);
}

std::vector<LemmaSweepRow> lemma_sweep(const FieldPtr& field, std::uint64_t max_norm, std::span<const Region> regions,
                                       std::uint64_t seed, const Caps& caps) {
    const std::vector<PrimeIdeal> primes = primes_up_to_norm(field, max_norm, seed);
    std::vector<LemmaSweepRow> rows;
    for (const Region& region : regions) {
        const RegionPoints pts = enumerate_region_points(region, field->degree(), caps);
        std::vector<LemmaSweepRow> block(primes.size());
        parallel_chunks(primes.size(), [&](unsigned, std::size_t begin, std::size_t end) {
            for (std::size_t k = begin; k < end; ++k) {
                const PrimeIdeal& P = primes[k];
                block[k] = LemmaSweepRow{region, P.under_p, P.gpoly, P.norm, count_in_points(P.hnf, pts, region)};
            }
        });
        rows.insert(rows.end(), block.begin(), block.end());
    }
    return rows;
}

} // namespace visilat
