// visilat command-line interface.
//
// Exit codes: 0 success, 1 tolerance failure or internal error,
// 2 invalid configuration or size cap exceeded, 3 unsupported field.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "visilat/experiment.hpp"
#include "visilat/parallel.hpp"

using namespace visilat;

namespace {

// --field accepts JSON, "Q", or a bare integer d for Q(sqrt(d))
FieldDescriptor parse_field(const std::string& text) {
    if (text == "Q" || text == "rational") return FieldDescriptor::rational();
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception&) {
        throw ConfigError("--field is neither JSON nor a known shorthand: " + text);
    }
    if (j.is_number_integer()) return FieldDescriptor::quadratic(j.get<long>());
    return field_from_json(j);
}

Json parse_json_arg(const std::string& text, const char* what) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw ConfigError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

std::vector<PointTuple> load_points(const std::string& inline_json, const std::string& file, const Field& K,
                                    unsigned m) {
    if (m < 2) throw ConfigError("m must be at least 2");
    if (!inline_json.empty() && !file.empty()) throw ConfigError("give either --s or --s-file");
    if (inline_json.empty() && file.empty()) return {PointTuple{std::vector<AlgInt>(m, K.zero())}};  // S = {0}
    const Json raw = file.empty() ? parse_json_arg(inline_json, "--s") : parse_json_arg(read_text(file), "--s-file");
    std::vector<PointTuple> S = points_from_json(raw, K.degree());
    if (S.empty()) throw ConfigError("S is empty");
    for (const auto& s : S)
        if (s.size() != m) throw ConfigError("every point of S needs m = " + std::to_string(m) + " coordinates");
    std::size_t removed = 0;
    S = dedup_points(S, &removed);
    if (removed) std::cerr << "warning: removed " << removed << " duplicate point(s) from S\n";
    return S;
}

void emit(const Json& j, const std::string& out) {
    const std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text(out, text);
}

void print_warnings(const Field& K) {
    for (const auto& w : K.warnings()) std::cerr << "warning: " << w << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Densities of lattice points simultaneously visible from a finite set"};
    app.require_subcommand(1);

    std::string field_text = "Q";
    unsigned m = 2;
    std::string s_inline, s_file, out;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool with_points) {
        sub->add_option("--field", field_text, "JSON field descriptor, \"Q\", or an integer d for Q(sqrt(d))");
        sub->add_option("--seed", seed, "RNG seed");
        if (with_points) {
            sub->add_option("--m", m, "number of coordinates per point (m >= 2)");
            sub->add_option("--s", s_inline, "S as inline JSON");
            sub->add_option("--s-file", s_file, "S as a JSON file");
        }
    };

    auto* field_cmd = app.add_subcommand("field", "describe a field");
    add_common(field_cmd, false);

    std::uint64_t max_norm = 100;
    auto* primes_cmd = app.add_subcommand("primes", "prime ideals up to a norm bound, one JSON object per line");
    add_common(primes_cmd, false);
    primes_cmd->add_option("--max-norm", max_norm, "norm bound")->required();

    std::uint64_t X = 10000;
    int digits = 30;
    auto* predict_cmd = app.add_subcommand("predict", "rigorous interval for the predicted density");
    add_common(predict_cmd, true);
    predict_cmd->add_option("--X", X, "prime norm cutoff");
    predict_cmd->add_option("--digits", digits, "significant digits")->check(CLI::Range(1, 200));

    std::string region_text = "cube:L=20", mode = "sieve", transform_text;
    std::uint64_t samples = 100000;
    auto* count_cmd = app.add_subcommand("count", "count visible tuples in a region");
    add_common(count_cmd, true);
    count_cmd->add_option("--region", region_text, "cube:L=<int> or ball:R=<real>");
    count_cmd->add_option("--mode", mode, "direct, sieve or mc")->check(CLI::IsMember({"direct", "sieve", "mc"}));
    count_cmd->add_option("--samples", samples, "Monte Carlo samples");
    count_cmd->add_option("--basis-transform", transform_text, "unimodular matrix as JSON");
    count_cmd->add_option("--out", out, "write the report here instead of stdout");

    std::size_t window = 3;
    auto* oracle_cmd = app.add_subcommand("oracle", "exact density over the primes above the first t rational primes");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--window", window, "number of rational primes t")->check(CLI::PositiveNumber);

    std::vector<std::string> lemma_regions;
    auto* lemma_cmd = app.add_subcommand("lemma-check", "ideal lattice point counts against vol/N(P)");
    add_common(lemma_cmd, false);
    lemma_cmd->add_option("--max-norm", max_norm, "prime norm bound");
    lemma_cmd->add_option("--region", lemma_regions, "regions (repeatable)")->required();

    std::string config_path, csv_path;
    bool no_timing = false;
    auto* run_cmd = app.add_subcommand("run", "full pipeline from a JSON config");
    run_cmd->add_option("--config", config_path, "experiment config")->required();
    run_cmd->add_option("--out", out, "report path (overrides the config)");
    run_cmd->add_option("--csv", csv_path, "CSV export path (overrides the config)");
    run_cmd->add_flag("--no-timing", no_timing, "leave timing fields out of the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            Json j;
            try {
                j = Json::parse(read_text(config_path));
            } catch (const Json::exception& e) {
                throw ConfigError("config is not valid JSON: " + std::string(e.what()));
            }
            ExperimentConfig config = config_from_json(j);
            if (!out.empty()) config.output = out;
            if (!csv_path.empty()) config.csv = csv_path;
            const DensityReport report = run_experiment(config);
            for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
            emit(report.to_json(!no_timing), config.output.value_or(""));
            if (config.csv) emit_csv(report, *config.csv);
            if (report.failure) std::cerr << "failed: " << *report.failure << '\n';
            return report.exit_code;
        }

        const FieldPtr K = make_field(parse_field(field_text));
        print_warnings(*K);

        if (*field_cmd) {
            emit(field_info_json(*K), "");
        } else if (*primes_cmd) {
            for (const auto& P : primes_up_to_norm(K, max_norm, seed)) std::cout << prime_to_json(P).dump() << '\n';
        } else if (*predict_cmd) {
            const auto S = load_points(s_inline, s_file, *K, m);
            const auto pi = predicted_density(K, S, m, X, seed);
            emit(interval_to_json(pi, digits), "");
        } else if (*count_cmd) {
            const auto S = load_points(s_inline, s_file, *K, m);
            Region region = region_from_json(Json(region_text));
            if (!transform_text.empty())
                region.basis_transform = matrix_from_json(parse_json_arg(transform_text, "--basis-transform"));
            const auto t0 = std::chrono::steady_clock::now();
            CountResult r;
            if (mode == "direct")
                r = count_visible_direct(K, S, m, region);
            else if (mode == "sieve")
                r = count_visible_sieve(K, S, m, region, {}, seed);
            else
                r = mc_estimate(K, S, m, region, samples, seed);
            Json j = count_to_json(r);
            j["field"] = field_to_json(K->descriptor());
            j["seed"] = seed;
            j["workers"] = worker_count();
            j["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            emit(j, out);
        } else if (*oracle_cmd) {
            const auto S = load_points(s_inline, s_file, *K, m);
            const auto exact = exact_window_density(K, S, m, prime_window(K, window, seed));
            Json j = rational_to_json(exact.value);
            j["crt"] = rational_to_json(exact.crt_value);
            j["agree"] = exact.methods_agree();
            j["window"] = window;
            emit(j, "");
            if (!exact.methods_agree()) return 1;
        } else if (*lemma_cmd) {
            std::vector<Region> regions;
            for (const auto& r : lemma_regions) regions.push_back(region_from_json(Json(r)));
            for (const auto& row : lemma_sweep(K, max_norm, regions, seed)) {
                Json g = Json::array();
                for (auto c : row.gpoly) g.push_back(c);
                std::cout << Json{{"region", row.region.label()},
                                  {"p", row.prime_p},
                                  {"g", g},
                                  {"norm", row.prime_norm.get_str()},
                                  {"count", row.record.count},
                                  {"main_term", row.record.main_term},
                                  {"error", row.record.error},
                                  {"normalized_error", row.record.normalized_error}}
                                 .dump()
                          << '\n';
            }
        }
        return 0;
    } catch (const FieldError& e) {
        std::cerr << "unsupported field: " << e.what() << '\n';
        return 3;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
