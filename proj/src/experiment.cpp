#include "visilat/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "visilat/parallel.hpp"

namespace visilat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Integer integer_from_json(const Json& j) {
    if (j.is_number_integer()) return from_int64(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return from_uint64(j.get<std::uint64_t>());
    if (j.is_string()) {
        Integer v;
        if (v.set_str(j.get<std::string>(), 10) != 0) throw ConfigError("not an integer: " + j.dump());
        return v;
    }
    throw ConfigError("expected an integer, got " + j.dump());
}

Json integer_to_json(const Integer& v) {
    if (fits_int64(v)) return v.get_si();
    return v.get_str();
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

FieldDescriptor field_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "Q" || s == "rational") return FieldDescriptor::rational();
        throw ConfigError("unknown field shorthand '" + s + "'");
    }
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("field descriptor needs a \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rational") return FieldDescriptor::rational();
    if (kind == "quadratic") {
        if (!j.contains("d") || !j.at("d").is_number_integer()) throw ConfigError("quadratic field needs integer \"d\"");
        return FieldDescriptor::quadratic(j.at("d").get<long>());
    }
    if (kind == "monogenic") {
        if (!j.contains("minpoly") || !j.at("minpoly").is_array()) throw ConfigError("monogenic field needs \"minpoly\"");
        std::vector<Integer> poly;
        for (const auto& c : j.at("minpoly")) poly.push_back(integer_from_json(c));
        return FieldDescriptor::monogenic(std::move(poly));
    }
    throw ConfigError("unknown field kind '" + kind + "'");
}

Json field_to_json(const FieldDescriptor& d) {
    Json j;
    switch (d.kind) {
    case FieldKind::rational: j["kind"] = "rational"; break;
    case FieldKind::quadratic:
        j["kind"] = "quadratic";
        j["d"] = d.d;
        break;
    case FieldKind::monogenic: {
        j["kind"] = "monogenic";
        Json poly = Json::array();
        for (const auto& c : d.minpoly) poly.push_back(integer_to_json(c));
        j["minpoly"] = poly;
        break;
    }
    }
    return j;
}

std::vector<PointTuple> points_from_json(const Json& j, std::size_t n) {
    if (!j.is_array()) throw ConfigError("S must be a JSON array of points");
    std::vector<PointTuple> out;
    for (const auto& pt : j) {
        if (!pt.is_array()) throw ConfigError("each point of S must be an array of coordinates");
        PointTuple tuple;
        for (const auto& c : pt) {
            std::vector<Integer> coords;
            if (c.is_array())
                for (const auto& x : c) coords.push_back(integer_from_json(x));
            else
                coords.push_back(integer_from_json(c));
            if (coords.size() != n)
                throw ConfigError("coordinate vector " + c.dump() + " has length " + std::to_string(coords.size()) +
                                  ", field degree is " + std::to_string(n));
            tuple.coords.emplace_back(std::move(coords));
        }
        out.push_back(std::move(tuple));
    }
    return out;
}

Json points_to_json(std::span<const PointTuple> S) {
    Json j = Json::array();
    for (const auto& s : S) {
        Json pt = Json::array();
        for (const auto& c : s.coords) {
            Json v = Json::array();
            for (const auto& x : c.coords) v.push_back(integer_to_json(x));
            pt.push_back(v);
        }
        j.push_back(pt);
    }
    return j;
}

std::vector<std::vector<std::int64_t>> matrix_from_json(const Json& j) {
    if (!j.is_array()) throw ConfigError("basis_transform must be a JSON matrix");
    std::vector<std::vector<std::int64_t>> M;
    for (const auto& row : j) {
        if (!row.is_array()) throw ConfigError("basis_transform rows must be arrays");
        std::vector<std::int64_t> r;
        for (const auto& x : row) {
            if (!x.is_number_integer()) throw ConfigError("basis_transform entries must be integers");
            r.push_back(x.get<std::int64_t>());
        }
        M.push_back(std::move(r));
    }
    return M;
}

Region region_from_json(const Json& j) {
    try {
        if (j.is_string()) return Region::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!j.is_object() || !j.contains("shape")) throw ConfigError("region must be a string or an object with \"shape\"");
    const auto shape = j.at("shape").get<std::string>();
    Region r;
    if (shape == "cube") {
        if (!j.contains("L") || !j.at("L").is_number_integer() || j.at("L").get<std::int64_t>() < 0)
            throw ConfigError("cube region needs integer L >= 0");
        r = Region::cube(j.at("L").get<std::int64_t>());
    } else if (shape == "ball") {
        if (!j.contains("R") || !j.at("R").is_number() || !(j.at("R").get<double>() > 0))
            throw ConfigError("ball region needs R > 0");
        r = Region::ball(j.at("R").get<double>());
    } else {
        throw ConfigError("unknown region shape '" + shape + "'");
    }
    if (j.contains("basis_transform")) r.basis_transform = matrix_from_json(j.at("basis_transform"));
    return r;
}

Json region_to_json(const Region& r) {
    Json j;
    j["label"] = r.label();
    j["shape"] = r.shape == RegionShape::cube ? "cube" : "ball";
    if (r.shape == RegionShape::cube)
        j["L"] = r.L;
    else
        j["R"] = r.R;
    j["basis_transform"] = r.basis_transform ? Json(*r.basis_transform) : Json(nullptr);
    return j;
}

Json rational_to_json(const Rational& q) {
    return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

Json prime_to_json(const PrimeIdeal& P) {
    Json g = Json::array();
    for (auto c : P.gpoly) g.push_back(c);
    return Json{{"norm", integer_to_json(P.norm)}, {"p", P.under_p}, {"f", P.f}, {"e", P.e}, {"g", g}};
}

Json interval_to_json(const PredictionInterval& pi, int digits) {
    Json j;
    j["lo"] = to_decimal(pi.lo, digits, false);
    j["hi"] = to_decimal(pi.hi, digits, true);
    j["X"] = pi.cutoff_X;
    j["zero"] = pi.zero_certificate ? prime_to_json(*pi.zero_certificate) : Json(nullptr);
    return j;
}

Json count_to_json(const CountResult& c) {
    Json j;
    j["region"] = region_to_json(c.region);
    j["method"] = to_string(c.method);
    j["m"] = c.m;
    j["total_tuples"] = c.total_tuples;
    j["visible_count"] = c.visible_count;
    j["density_estimate"] = c.density();
    j["density_exact"] = rational_to_json(c.density_estimate);
    j["volume_density"] = c.volume_density;
    j["mc_stderr"] = c.mc_stderr ? Json(*c.mc_stderr) : Json(nullptr);
    j["prime_norm_bound"] = c.prime_norm_bound ? integer_to_json(*c.prime_norm_bound) : Json(nullptr);
    j["sieve_primes"] = c.sieve_primes;
    return j;
}

Json field_info_json(const Field& K) {
    Json j;
    j["name"] = K.name();
    j["descriptor"] = field_to_json(K.descriptor());
    j["degree"] = K.degree();
    j["discriminant"] = integer_to_json(K.discriminant());
    j["basis"] = K.basis_labels();
    Json poly = Json::array();
    for (const auto& c : K.generator_minpoly()) poly.push_back(integer_to_json(c));
    j["generator_minpoly"] = poly;
    j["warnings"] = K.warnings();
    return j;
}

void validate(const ExperimentConfig& c) {
    if (c.m < 2) throw ConfigError("m must be at least 2");
    if (c.schedule.empty()) throw ConfigError("region schedule is empty");
    if (c.modes.empty()) throw ConfigError("no modes requested");
    for (const auto& mode : c.modes)
        if (std::find(known_modes().begin(), known_modes().end(), mode) == known_modes().end())
            throw ConfigError("unknown mode '" + mode + "'");
    if (!c.points_file && (!c.points.is_array() || c.points.empty())) throw ConfigError("S is empty");
    if (c.X < 2) throw ConfigError("X must be at least 2");
    if (c.samples < 100) throw ConfigError("samples must be at least 100");
    if (c.window < 1) throw ConfigError("window must be at least 1");
    if (!(c.tolerance >= 0)) throw ConfigError("tolerance must be nonnegative");
}

ExperimentConfig config_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> keys{"field", "m", "S", "S_file", "regions", "X", "modes", "seed", "samples",
                                            "window", "lemma_max_norm", "tolerance", "caps", "output", "csv"};
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw ConfigError("unknown config key '" + k + "'");

    ExperimentConfig c;
    try {
        if (!j.contains("field")) throw ConfigError("config needs \"field\"");
        c.field = field_from_json(j.at("field"));
        if (j.contains("m")) {
            if (!j.at("m").is_number_integer() || j.at("m").get<long>() < 0) throw ConfigError("m must be an integer");
            c.m = j.at("m").get<unsigned>();
        }
        if (j.contains("S")) c.points = j.at("S");
        if (j.contains("S_file")) c.points_file = j.at("S_file").get<std::string>();
        if (j.contains("S") && j.contains("S_file")) throw ConfigError("give either S or S_file, not both");
        if (!j.contains("S") && !j.contains("S_file")) throw ConfigError("config needs S or S_file");
        if (j.contains("regions")) {
            if (!j.at("regions").is_array()) throw ConfigError("regions must be an array");
            for (const auto& r : j.at("regions")) c.schedule.push_back(region_from_json(r));
        }
        if (j.contains("X")) c.X = j.at("X").get<std::uint64_t>();
        if (j.contains("modes")) c.modes = j.at("modes").get<std::vector<std::string>>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("samples")) c.samples = j.at("samples").get<std::uint64_t>();
        if (j.contains("window")) c.window = j.at("window").get<std::size_t>();
        if (j.contains("lemma_max_norm")) c.lemma_max_norm = j.at("lemma_max_norm").get<std::uint64_t>();
        if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
        if (j.contains("caps")) {
            const auto& caps = j.at("caps");
            if (caps.contains("region_points")) c.caps.region_points = caps.at("region_points").get<double>();
            if (caps.contains("tuples")) c.caps.tuples = caps.at("tuples").get<double>();
            if (caps.contains("crt_states")) c.crt_state_cap = caps.at("crt_states").get<double>();
        }
        if (j.contains("output")) c.output = j.at("output").get<std::string>();
        if (j.contains("csv")) c.csv = j.at("csv").get<std::string>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
    }
    validate(c);
    return c;
}

Json config_to_json(const ExperimentConfig& c) {
    Json j;
    j["field"] = field_to_json(c.field);
    j["m"] = c.m;
    if (c.points_file)
        j["S_file"] = *c.points_file;
    else
        j["S"] = c.points;
    Json regions = Json::array();
    for (const auto& r : c.schedule) regions.push_back(region_to_json(r));
    j["regions"] = regions;
    j["X"] = c.X;
    j["modes"] = c.modes;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["window"] = c.window;
    j["lemma_max_norm"] = c.lemma_max_norm;
    j["tolerance"] = c.tolerance;
    j["caps"] = Json{{"region_points", c.caps.region_points}, {"tuples", c.caps.tuples}, {"crt_states", c.crt_state_cap}};
    return j;
}

Json DensityReport::to_json(bool include_timing) const {
    Json j;
    j["tool"] = "visilat";
    j["version"] = "1.0.0";
    j["config"] = config;
    j["field"] = field;
    j["warnings"] = warnings;
    if (interval) {
        Json p = interval_to_json(*interval);
        p["requested_X"] = interval->requested_X;
        p["prime_count"] = interval->prime_count;
        p["midpoint"] = interval->midpoint().get_d();
        p["width"] = interval->width().get_d();
        j["prediction"] = p;
    } else {
        j["prediction"] = nullptr;
    }
    Json counts_json = Json::array();
    for (const auto& row : this->counts) {
        Json c = count_to_json(row.result);
        c["discrepancy"] = row.discrepancy ? Json(*row.discrepancy) : Json(nullptr);
        c["passed"] = row.passed ? Json(*row.passed) : Json(nullptr);
        counts_json.push_back(c);
    }
    j["counts"] = counts_json;
    if (oracle) {
        Json o;
        o["window"] = oracle->window.t;
        Json primes = Json::array();
        for (const auto& f : oracle->per_prime_factors) {
            Json pj = prime_to_json(f.prime);
            pj["s"] = f.s;
            pj["factor"] = rational_to_json(f.factor);
            primes.push_back(pj);
        }
        o["primes"] = primes;
        o["product"] = rational_to_json(oracle->value);
        o["crt"] = rational_to_json(oracle->crt_value);
        o["crt_states"] = integer_to_json(oracle->crt_states);
        o["agree"] = oracle->methods_agree();
        j["oracle"] = o;
    } else {
        j["oracle"] = nullptr;
    }
    Json lemma_json = Json::array();
    for (const auto& l : lemma)
        lemma_json.push_back(Json{{"region", region_to_json(l.region)},
                                  {"primes", l.primes},
                                  {"max_error", l.max_error},
                                  {"max_normalized_error", l.max_normalized_error}});
    j["lemma"] = lemma_json;
    j["failed"] = failure ? Json(*failure) : Json(nullptr);
    j["exit_code"] = exit_code;
    if (include_timing) {
        Json t;
        t["predict_seconds"] = predict_seconds;
        Json per = Json::array();
        for (const auto& row : this->counts) per.push_back(row.wall_seconds);
        t["count_seconds"] = per;
        t["total_seconds"] = total_seconds;
        j["timing"] = t;
    }
    return j;
}

DensityReport run_experiment(const ExperimentConfig& config) {
    const auto t0 = Clock::now();
    validate(config);
    const auto has = [&](const char* mode) {
        return std::find(config.modes.begin(), config.modes.end(), mode) != config.modes.end();
    };

    DensityReport report;
    report.config = config_to_json(config);
    const FieldPtr K = make_field(config.field);  // FieldError propagates
    report.field = field_info_json(*K);
    report.warnings = K->warnings();

    Json raw = config.points;
    if (config.points_file) {
        try {
            raw = Json::parse(read_text(*config.points_file));
        } catch (const Json::exception& e) {
            throw ConfigError("S file " + *config.points_file + " is not valid JSON: " + e.what());
        }
    }
    std::vector<PointTuple> S = points_from_json(raw, K->degree());
    if (S.empty()) throw ConfigError("S is empty");
    for (const auto& s : S)
        if (s.size() != config.m)
            throw ConfigError("point of S has " + std::to_string(s.size()) + " coordinates, expected m = " +
                              std::to_string(config.m));
    std::size_t removed = 0;
    S = dedup_points(S, &removed);
    if (removed) report.warnings.push_back("removed " + std::to_string(removed) + " duplicate point(s) from S");
    report.config["S"] = points_to_json(S);
    report.config.erase("S_file");

    try {
        if (has("predict")) {
            const auto tp = Clock::now();
            report.interval = predicted_density(K, S, config.m, config.X, config.seed);
            report.predict_seconds = seconds_since(tp);
        }
        for (std::size_t i = 0; i < config.schedule.size(); ++i) {
            const Region& region = config.schedule[i];
            const bool last = i + 1 == config.schedule.size();
            for (const char* mode : {"direct", "sieve", "mc"}) {
                if (!has(mode)) continue;
                const auto tc = Clock::now();
                CountRow row;
                if (std::string(mode) == "direct")
                    row.result = count_visible_direct(K, S, config.m, region, config.caps);
                else if (std::string(mode) == "sieve")
                    row.result = count_visible_sieve(K, S, config.m, region, config.caps, config.seed);
                else
                    row.result = mc_estimate(K, S, config.m, region, config.samples, config.seed);
                row.wall_seconds = seconds_since(tc);
                if (report.interval) {
                    row.discrepancy = std::fabs(row.result.density() - report.interval->midpoint().get_d());
                    if (last) {
                        double allowed = config.tolerance;
                        if (row.result.mc_stderr) allowed += 4 * *row.result.mc_stderr;
                        row.passed = *row.discrepancy <= allowed;
                    }
                }
                report.counts.push_back(std::move(row));
            }
        }
        if (has("oracle")) {
            const PrimeWindow window = prime_window(K, config.window, config.seed);
            report.oracle = exact_window_density(K, S, config.m, window, config.crt_state_cap);
        }
        if (has("lemma-check")) {
            const auto rows = lemma_sweep(K, config.lemma_max_norm, config.schedule, config.seed, config.caps);
            for (const auto& region : config.schedule) {
                LemmaSummary s{region, 0, 0, 0};
                for (const auto& r : rows) {
                    if (r.region.label() != region.label() || r.region.basis_transform != region.basis_transform)
                        continue;
                    ++s.primes;
                    s.max_error = std::max(s.max_error, r.record.error);
                    s.max_normalized_error = std::max(s.max_normalized_error, r.record.normalized_error);
                }
                report.lemma.push_back(s);
            }
        }
    } catch (const FieldError&) {
        throw;
    } catch (const CapExceeded& e) {
        report.failure = e.what();
        report.exit_code = 2;
    } catch (const std::invalid_argument& e) {
        report.failure = e.what();
        report.exit_code = 2;
    } catch (const std::exception& e) {
        report.failure = e.what();
        report.exit_code = 1;
    }

    if (!report.failure) {
        bool ok = true;
        for (const auto& row : report.counts)
            if (row.passed && !*row.passed) ok = false;
        if (report.oracle && !report.oracle->methods_agree()) ok = false;
        if (!ok) {
            report.failure = "tolerance check failed";
            report.exit_code = 1;
        }
    }
    report.total_seconds = seconds_since(t0);
    return report;
}

std::string csv_text(const DensityReport& report) {
    bool any_mc = false;
    for (const auto& row : report.counts) any_mc = any_mc || row.result.method == CountMethod::mc;
    std::ostringstream os;
    os << "region,mode,total,visible,density,lo,hi,discrepancy";
    if (any_mc) os << ",stderr";
    os << '\n';
    const std::string lo = report.interval ? to_decimal(report.interval->lo, 17, false) : "";
    const std::string hi = report.interval ? to_decimal(report.interval->hi, 17, true) : "";
    for (const auto& row : report.counts) {
        const CountResult& c = row.result;
        os << c.region.label() << (c.region.basis_transform ? "+transform" : "") << ',' << to_string(c.method) << ','
           << c.total_tuples << ',' << c.visible_count << ',' << fmt_double(c.density()) << ',' << lo << ',' << hi
           << ',' << (row.discrepancy ? fmt_double(*row.discrepancy) : "");
        if (any_mc) os << ',' << (c.mc_stderr ? fmt_double(*c.mc_stderr) : "");
        os << '\n';
    }
    return os.str();
}

void emit_csv(const DensityReport& report, const std::string& path) { write_text(path, csv_text(report)); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace visilat
