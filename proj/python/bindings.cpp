#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "visilat/experiment.hpp"
#include "visilat/parallel.hpp"

namespace py = pybind11;
using namespace visilat;

namespace {

FieldPtr field_of(const std::string& descriptor) { return make_field(field_from_json(Json::parse(descriptor))); }

std::vector<PointTuple> points_of(const Field& K, const std::string& S, unsigned m) {
    auto pts = points_from_json(Json::parse(S), K.degree());
    for (const auto& s : pts)
        if (s.size() != m) throw ConfigError("every point of S needs m coordinates");
    return pts;
}

Region region_of(const std::string& region, const std::string& transform) {
    Region r = region_from_json(Json::parse(region));
    if (!transform.empty()) r.basis_transform = matrix_from_json(Json::parse(transform));
    return r;
}

}  // namespace

PYBIND11_MODULE(_visilat, mod) {
    mod.doc() = "JSON-in, JSON-out bindings for the visilat core";

    py::register_exception<FieldError>(mod, "FieldError", PyExc_ValueError);
    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<CapExceeded>(mod, "CapExceeded", PyExc_RuntimeError);

    mod.def("field_info", [](const std::string& field) { return field_info_json(*field_of(field)).dump(); },
            py::arg("field"));

    mod.def(
        "primes",
        [](const std::string& field, std::uint64_t max_norm, std::uint64_t seed) {
            std::vector<std::string> out;
            for (const auto& P : primes_up_to_norm(field_of(field), max_norm, seed))
                out.push_back(prime_to_json(P).dump());
            return out;
        },
        py::arg("field"), py::arg("max_norm"), py::arg("seed") = 0);

    mod.def(
        "is_visible",
        [](const std::string& field, const std::string& z, const std::string& x) {
            const FieldPtr K = field_of(field);
            const auto zs = points_from_json(Json::array({Json::parse(z)}), K->degree());
            const auto xs = points_from_json(Json::array({Json::parse(x)}), K->degree());
            if (zs[0].size() != xs[0].size()) throw ConfigError("points have different lengths");
            return is_visible(*K, zs[0], xs[0]);
        },
        py::arg("field"), py::arg("z"), py::arg("x"));

    mod.def(
        "predict",
        [](const std::string& field, unsigned m, const std::string& S, std::uint64_t X, std::uint64_t seed) {
            const FieldPtr K = field_of(field);
            const auto pi = predicted_density(K, points_of(*K, S, m), m, X, seed);
            Json j = interval_to_json(pi);
            j["lo_exact"] = rational_to_json(pi.lo);
            j["hi_exact"] = rational_to_json(pi.hi);
            return j.dump();
        },
        py::arg("field"), py::arg("m"), py::arg("S"), py::arg("X") = 10000, py::arg("seed") = 0);

    mod.def(
        "count",
        [](const std::string& field, unsigned m, const std::string& S, const std::string& region,
           const std::string& mode, std::uint64_t samples, std::uint64_t seed, const std::string& transform) {
            const FieldPtr K = field_of(field);
            const auto pts = points_of(*K, S, m);
            const Region r = region_of(region, transform);
            CountResult c;
            {
                py::gil_scoped_release release;
                if (mode == "direct")
                    c = count_visible_direct(K, pts, m, r);
                else if (mode == "sieve")
                    c = count_visible_sieve(K, pts, m, r, {}, seed);
                else if (mode == "mc")
                    c = mc_estimate(K, pts, m, r, samples, seed);
                else
                    throw ConfigError("mode must be direct, sieve or mc");
            }
            return count_to_json(c).dump();
        },
        py::arg("field"), py::arg("m"), py::arg("S"), py::arg("region"), py::arg("mode") = "sieve",
        py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("transform") = "");

    mod.def(
        "oracle",
        [](const std::string& field, unsigned m, const std::string& S, std::size_t window, std::uint64_t seed) {
            const FieldPtr K = field_of(field);
            const auto exact = exact_window_density(K, points_of(*K, S, m), m, prime_window(K, window, seed));
            Json j = rational_to_json(exact.value);
            j["crt"] = rational_to_json(exact.crt_value);
            j["agree"] = exact.methods_agree();
            return j.dump();
        },
        py::arg("field"), py::arg("m"), py::arg("S"), py::arg("window") = 3, py::arg("seed") = 0);

    mod.def(
        "run",
        [](const std::string& config, bool include_timing) {
            const ExperimentConfig c = config_from_json(Json::parse(config));
            const DensityReport report = run_experiment(c);
            return py::make_tuple(report.exit_code, report.to_json(include_timing).dump(), csv_text(report));
        },
        py::arg("config"), py::arg("include_timing") = true);
}
