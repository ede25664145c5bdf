#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "visilat/parallel.hpp"
#include "visilat/primes.hpp"

namespace visilat {

enum class RegionShape { cube, ball };

/// Averaging region in O: coordinate vectors a whose transformed coordinates
/// M a lie in [-L, L]^n (cube) or in the Euclidean ball of radius R (ball).
/// M is an optional unimodular integer matrix, identity when absent.
struct Region {
    RegionShape shape = RegionShape::cube;
    std::int64_t L = 0;
    double R = 0;
    std::optional<std::vector<std::vector<std::int64_t>>> basis_transform;

    static Region cube(std::int64_t L) { return Region{RegionShape::cube, L, 0.0, std::nullopt}; }
    static Region ball(double R) { return Region{RegionShape::ball, 0, R, std::nullopt}; }
    Region with_transform(std::vector<std::vector<std::int64_t>> m) const {
        Region r = *this;
        r.basis_transform = std::move(m);
        return r;
    }

    /// "cube:L=20" or "ball:R=30"; the CLI accepts the same syntax.
    std::string label() const;
    static Region parse(const std::string& text);

    /// Euclidean volume in R^n: (2L)^n or V_n R^n.
    double volume(std::size_t n) const;
    /// Number of lattice points, exact for cubes and a close estimate for balls.
    double size_estimate(std::size_t n) const;
};

/// Region points as machine-word coordinates, lexicographically sorted.
struct RegionPoints {
    std::size_t n = 0;
    std::vector<std::int64_t> coords;  // size() * n entries

    std::size_t size() const { return n ? coords.size() / n : 0; }
    std::span<const std::int64_t> point(std::size_t i) const { return {coords.data() + i * n, n}; }
};

struct Caps {
    double region_points = 1 << 26;
    double tuples = 2147483648.0;  // 2^31
};

RegionPoints enumerate_region_points(const Region& region, std::size_t n, const Caps& caps = {});
std::vector<AlgInt> enumerate_region(const Region& region, std::size_t n, const Caps& caps = {});

enum class CountMethod { direct, sieve, mc };
std::string to_string(CountMethod m);

struct CountResult {
    std::uint64_t visible_count = 0;
    std::uint64_t total_tuples = 0;
    /// visible / total_tuples: the density against the counting measure on region^m.
    Rational density_estimate;
    /// visible / vol(region)^m with the Euclidean volume of the region.
    double volume_density = 0;
    CountMethod method = CountMethod::direct;
    std::optional<double> mc_stderr;
    Region region;
    std::optional<Integer> prime_norm_bound;  // sieve only
    std::size_t sieve_primes = 0;
    unsigned m = 0;

    double density() const { return density_estimate.get_d(); }
};

/// Exact count of region^m intersect V(S) by testing every tuple.
CountResult count_visible_direct(const FieldPtr& field, std::span<const PointTuple> S, unsigned m,
                                 const Region& region, const Caps& caps = {});

/// Exact count by sieving residue classes modulo every prime ideal whose norm
/// is at most the largest |N(z_i - s_i)| that can occur. Agrees with
/// count_visible_direct on every input.
CountResult count_visible_sieve(const FieldPtr& field, std::span<const PointTuple> S, unsigned m,
                                const Region& region, const Caps& caps = {}, std::uint64_t seed = 0);

/// Monte Carlo estimate from `samples` uniform tuples. Sample i is drawn from
/// a counter-based stream keyed by (seed, i), so results do not depend on the
/// number of workers.
CountResult mc_estimate(const FieldPtr& field, std::span<const PointTuple> S, unsigned m, const Region& region,
                        std::uint64_t samples, std::uint64_t seed);

struct IdealCountRecord {
    std::uint64_t count = 0;
    double main_term = 0;
    double error = 0;
    double normalized_error = 0;
    double scale = 0;  // R / N(I)^(1/n) for balls, 2L / N(I)^(1/n) + 1 for cubes
};

/// |I intersect region| against vol(region) / N(I). The error is normalized
/// by scale^(n-1), which the lattice-point lemmas bound by a constant.
IdealCountRecord ideal_count_check(const FieldPtr& field, const IdealHNF& ideal, const Region& region,
                                   const Caps& caps = {});

struct LemmaSweepRow {
    Region region;
    std::uint64_t prime_p = 0;
    fp::Poly gpoly;
    Integer prime_norm;
    IdealCountRecord record;
};

/// ideal_count_check for every prime ideal of norm <= max_norm and every region.
std::vector<LemmaSweepRow> lemma_sweep(const FieldPtr& field, std::uint64_t max_norm, std::span<const Region> regions,
                                       std::uint64_t seed = 0, const Caps& caps = {});

} // namespace visilat
