#include <cstdio>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "visilat/experiment.hpp"

using namespace visilat;

namespace {

Json base_config() {
    return Json::parse(R"({
        "field": {"kind": "rational"},
        "m": 2,
        "S": [[[0], [0]]],
        "regions": ["cube:L=100", "cube:L=1000"],
        "X": 10000,
        "modes": ["predict", "sieve"],
        "tolerance": 0.005
    })");
}

Json strip_timing(Json j) {
    j.erase("timing");
    return j;
}

} // namespace

TEST_CASE("Dirichlet pipeline") {
    const auto report = run_experiment(config_from_json(base_config()));
    CHECK(report.exit_code == 0);
    REQUIRE(report.counts.size() == 2);
    REQUIRE(report.counts[1].discrepancy);
    CHECK(*report.counts[1].discrepancy < 0.005);
    CHECK(report.counts[1].passed.value());
    CHECK_FALSE(report.counts[0].passed);
}

TEST_CASE("config validation") {
    auto bad = [](auto edit) {
        Json j = base_config();
        edit(j);
        return j;
    };
    CHECK_THROWS_AS(config_from_json(bad([](Json& j) { j["regions"] = Json::array(); })), ConfigError);
    CHECK_THROWS_AS(config_from_json(bad([](Json& j) { j["m"] = 1; })), ConfigError);
    CHECK_THROWS_AS(config_from_json(bad([](Json& j) { j["S"] = Json::array(); })), ConfigError);
    CHECK_THROWS_AS(config_from_json(bad([](Json& j) { j["modes"] = {"predict", "guess"}; })), ConfigError);
    CHECK_THROWS_AS(config_from_json(bad([](Json& j) { j["colour"] = "blue"; })), ConfigError);
    CHECK_THROWS_AS(config_from_json(bad([](Json& j) { j["regions"] = {"cube:L=x"}; })), ConfigError);
    const auto cfg = config_from_json(bad([](Json& j) { j["field"] = Json{{"kind", "quadratic"}, {"d", 4}}; }));
    CHECK_THROWS_AS(run_experiment(cfg), FieldError);
}

TEST_CASE("duplicate S entries are removed with a warning") {
    Json j = base_config();
    j["S"] = Json::parse("[[[0],[0]], [[0],[0]]]");
    j["regions"] = {"cube:L=10"};
    const auto report = run_experiment(config_from_json(j));
    CHECK(report.warnings.size() == 1);
    CHECK(report.config["S"].size() == 1);
}

TEST_CASE("oracle mode over Q(i)") {
    Json j = base_config();
    j["field"] = Json{{"kind", "quadratic"}, {"d", -1}};
    j["S"] = Json::parse("[[[0,0],[0,0]]]");
    j["regions"] = {"cube:L=5"};
    j["modes"] = {"oracle"};
    j["window"] = 3;
    const auto report = run_experiment(config_from_json(j));
    REQUIRE(report.oracle);
    // (1 - 1/4)(1 - 1/81)(1 - 1/25)^2
    const Rational expected = Rational(3, 4) * Rational(80, 81) * Rational(576, 625);
    CHECK(report.oracle->value == expected);
    CHECK(report.oracle->methods_agree());
}

TEST_CASE("reports are deterministic apart from timing") {
    Json j = base_config();
    j["regions"] = {"cube:L=30", "ball:R=30"};
    j["modes"] = {"predict", "sieve", "mc", "direct"};
    j["samples"] = 2000;
    j["seed"] = 9;
    const auto a = run_experiment(config_from_json(j)).to_json();
    const auto b = run_experiment(config_from_json(j)).to_json();
    CHECK(strip_timing(a).dump() == strip_timing(b).dump());
    CHECK(a.contains("timing"));
}

TEST_CASE("partial results carry a failure marker") {
    Json j = base_config();
    j["regions"] = {"cube:L=10", "cube:L=100000"};
    const auto report = run_experiment(config_from_json(j));
    CHECK(report.failure);
    CHECK(report.exit_code == 2);
    CHECK(report.counts.size() == 1);
    CHECK(report.to_json()["failed"].is_string());
}

TEST_CASE("CSV export") {
    Json j = base_config();
    j["regions"] = {"cube:L=20"};
    j["modes"] = {"predict", "sieve", "mc"};
    j["samples"] = 1000;
    const auto report = run_experiment(config_from_json(j));
    const std::string csv = csv_text(report);
    std::istringstream in(csv);
    std::string header, sieve_row, mc_row;
    std::getline(in, header);
    std::getline(in, sieve_row);
    std::getline(in, mc_row);
    CHECK(header == "region,mode,total,visible,density,lo,hi,discrepancy,stderr");
    CHECK(sieve_row.back() == ',');  // stderr empty for sieve
    CHECK(mc_row.back() != ',');

    // densities round-trip to 12 digits
    const Json js = report.to_json();
    const std::string density_field = [&] {
        std::vector<std::string> cols;
        std::stringstream ss(sieve_row);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
        return cols.at(4);
    }();
    CHECK(std::stod(density_field) == doctest::Approx(js["counts"][0]["density_estimate"].get<double>()).epsilon(1e-12));

    Json k = base_config();
    k["regions"] = {"cube:L=20"};
    const std::string plain = csv_text(run_experiment(config_from_json(k)));
    CHECK(plain.substr(0, plain.find('\n')) == "region,mode,total,visible,density,lo,hi,discrepancy");

    const auto path = (std::filesystem::temp_directory_path() / "visilat_test.csv").string();
    emit_csv(report, path);
    CHECK(read_text(path) == csv);
    std::remove(path.c_str());
    CHECK_THROWS(emit_csv(report, "/nonexistent-dir/x.csv"));
}

TEST_CASE("JSON codecs") {
    CHECK(field_from_json(Json::parse(R"({"kind":"monogenic","minpoly":[-1,-1,0,1]})")).minpoly.size() == 4);
    CHECK_THROWS_AS(field_from_json(Json::parse(R"({"kind":"cubic"})")), ConfigError);
    const auto S = points_from_json(Json::parse("[[[1,2],[3,4]]]"), 2);
    CHECK(points_to_json(S).dump() == "[[[1,2],[3,4]]]");
    CHECK_THROWS_AS(points_from_json(Json::parse("[[[1,2,3]]]"), 2), ConfigError);
    const Region r = region_from_json(Json::parse(R"({"shape":"cube","L":5,"basis_transform":[[1,1],[0,1]]})"));
    CHECK(r.basis_transform.has_value());
    CHECK(rational_to_json(Rational(2, 3)).dump() == R"({"num":"2","den":"3"})");
}
