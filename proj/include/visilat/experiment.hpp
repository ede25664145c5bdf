#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "visilat/counting.hpp"
#include "visilat/density.hpp"

namespace visilat {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent configuration (exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---- JSON codecs shared by the CLI, the experiment runner and the bindings

FieldDescriptor field_from_json(const Json& j);
Json field_to_json(const FieldDescriptor& d);

/// Points as [[coords of z_1], ..., [coords of z_m]]; a bare integer stands
/// for a coordinate vector of length 1.
std::vector<PointTuple> points_from_json(const Json& j, std::size_t n);
Json points_to_json(std::span<const PointTuple> S);

/// Either "cube:L=20" / "ball:R=30" or {"shape":..., "L"|"R":..., "basis_transform":[[...]]}.
Region region_from_json(const Json& j);
Json region_to_json(const Region& r);

std::vector<std::vector<std::int64_t>> matrix_from_json(const Json& j);

Json rational_to_json(const Rational& q);
/// lo rounded down and hi rounded up to `digits` significant digits.
Json interval_to_json(const PredictionInterval& pi, int digits = 30);
Json count_to_json(const CountResult& c);
Json prime_to_json(const PrimeIdeal& P);
Json field_info_json(const Field& K);

// ---- experiment pipeline

inline const std::vector<std::string>& known_modes() {
    static const std::vector<std::string> modes{"predict", "direct", "sieve", "mc", "oracle", "lemma-check"};
    return modes;
}

struct ExperimentConfig {
    FieldDescriptor field;
    unsigned m = 2;
    Json points = Json::array();           // raw S, converted once the field degree is known
    std::optional<std::string> points_file;
    std::vector<Region> schedule;
    std::uint64_t X = 10000;
    std::vector<std::string> modes{"predict", "sieve"};
    std::uint64_t seed = 0;
    std::uint64_t samples = 100000;
    std::size_t window = 3;
    std::uint64_t lemma_max_norm = 100;
    /// Allowed |density - midpoint| on the last region of the schedule. MC rows
    /// get an extra 4 standard errors.
    double tolerance = 0.015;
    Caps caps;
    double crt_state_cap = 1e8;
    std::optional<std::string> output;
    std::optional<std::string> csv;
};

/// Parses and validates; throws ConfigError.
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& c);
/// Checks the invariants that do not need the field; throws ConfigError.
void validate(const ExperimentConfig& c);

struct CountRow {
    CountResult result;
    std::optional<double> discrepancy;
    std::optional<bool> passed;  // only on the last region
    double wall_seconds = 0;
};

struct LemmaSummary {
    Region region;
    std::size_t primes = 0;
    double max_normalized_error = 0;
    double max_error = 0;
};

struct DensityReport {
    Json config;
    Json field;
    std::vector<std::string> warnings;
    std::optional<PredictionInterval> interval;
    std::vector<CountRow> counts;
    std::optional<ExactDensity> oracle;
    std::vector<LemmaSummary> lemma;
    std::optional<std::string> failure;
    int exit_code = 0;
    double predict_seconds = 0;
    double total_seconds = 0;

    /// Timing values live under a single "timing" key, left out when include_timing is false.
    Json to_json(bool include_timing = true) const;
};

/// Validates (ConfigError), builds the field (FieldError), then runs predict
/// and every count mode per region. Errors after validation are recorded in
/// the report's failure marker instead of thrown.
DensityReport run_experiment(const ExperimentConfig& config);

/// Flat export: one row per (region, count mode).
void emit_csv(const DensityReport& report, const std::string& path);
std::string csv_text(const DensityReport& report);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

} // namespace visilat
