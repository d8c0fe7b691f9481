#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "evotse/embedding.hpp"
#include "evotse/errors.hpp"
#include "evotse/experiment.hpp"
#include "evotse/metrics.hpp"
#include "evotse/pipeline.hpp"
#include "evotse/simulation.hpp"

namespace py = pybind11;
using namespace evotse;

namespace {

Attribute parse_attribute(const std::string& name) {
    if (name == "speaker") {
        return Attribute::speaker;
    }
    if (name == "emotion") {
        return Attribute::emotion;
    }
    throw ConfigError("unknown attribute: " + name);
}

RunConfig config_from_kwargs(const std::string& mode, double tau, int k, std::size_t capacity,
                             double alpha, int sessions, std::uint64_t seed, int segments,
                             double duration, double sir_db) {
    RunConfig cfg;
    cfg.mode = parse_mode(mode);
    cfg.hyper = Hyper{tau, k, capacity, alpha};
    cfg.sessions = sessions;
    cfg.seed = seed;
    cfg.session.n_segments = segments;
    cfg.session.duration_s = duration;
    cfg.session.sir_db = sir_db;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_evotse, m) {
    m.doc() = "Evolving target-speaker-enrollment engine (simulation core)";

    py::register_exception<Error>(m, "EvotseError");

    m.def(
        "normalize",
        [](const std::vector<double>& raw, const std::string& attr) {
            return normalize(raw, parse_attribute(attr)).values();
        },
        py::arg("raw"), py::arg("attribute") = "speaker",
        "Scale a raw vector to unit L2 norm.");

    m.def(
        "cosine_sim",
        [](const std::vector<double>& u, const std::vector<double>& v,
           const std::string& attr) {
            const Attribute a = parse_attribute(attr);
            return cosine_sim(normalize(u, a), normalize(v, a));
        },
        py::arg("u"), py::arg("v"), py::arg("attribute") = "speaker",
        "Cosine similarity of two vectors (normalized first), clamped to [-1, 1].");

    m.def(
        "relevance_distribution",
        [](const std::vector<double>& query, const std::vector<std::vector<double>>& candidates,
           const std::string& attr) {
            const Attribute a = parse_attribute(attr);
            std::vector<EmbeddingVec> cs;
            cs.reserve(candidates.size());
            for (const auto& c : candidates) {
                cs.push_back(normalize(c, a));
            }
            return relevance_distribution(normalize(query, a), cs);
        },
        py::arg("query"), py::arg("candidates"), py::arg("attribute") = "speaker",
        "Softmax over cosine similarities of the query against each candidate.");

    m.def(
        "si_sdr",
        [](const std::vector<float>& est, const std::vector<float>& ref) {
            return si_sdr(est, ref);
        },
        py::arg("est"), py::arg("ref"),
        "Scale-invariant SDR in dB, capped to [-80, 80].");

    m.def(
        "si_sdri",
        [](const std::vector<float>& est, const std::vector<float>& mix,
           const std::vector<float>& ref) { return si_sdri(est, mix, ref); },
        py::arg("est"), py::arg("mix"), py::arg("ref"));

    m.def("nsr", &nsr, py::arg("si_sdri_values"),
          "Percentage of strictly negative SI-SDRi values.");

    m.def(
        "si_sdric",
        [](const std::vector<double>& values) -> py::object {
            const auto v = si_sdric(values);
            return v ? py::cast(*v) : py::none();
        },
        py::arg("si_sdri_values"),
        "Mean SI-SDRi over the non-negative subset, or None when it is empty.");

    m.def(
        "run",
        [](const std::string& mode, double tau, int k, std::size_t capacity, double alpha,
           int sessions, std::uint64_t seed, int segments, double duration, double sir_db) {
            const RunConfig cfg = config_from_kwargs(mode, tau, k, capacity, alpha, sessions,
                                                     seed, segments, duration, sir_db);
            const RunResult result = run_experiment(cfg);
            py::dict out;
            out["sessions"] = result.summary.sessions;
            out["steps"] = result.summary.steps;
            out["mean_si_sdri"] = result.summary.mean_si_sdri;
            out["nsr_pct"] = result.summary.nsr_pct;
            out["si_sdric_db"] = result.summary.si_sdric_db
                                     ? py::cast(*result.summary.si_sdric_db)
                                     : py::object(py::none());
            out["si_sdri_values"] = result.si_sdri_values;
            return out;
        },
        py::arg("mode") = "evolve", py::arg("tau") = 0.5, py::arg("k") = 3,
        py::arg("capacity") = 64, py::arg("alpha") = 1.0, py::arg("sessions") = 1,
        py::arg("seed") = 1, py::arg("segments") = 50, py::arg("duration") = 2.0,
        py::arg("sir_db") = 0.0,
        "Run simulated sessions and return the summary metrics.");

    m.def(
        "run_csv",
        [](const std::string& mode, double tau, int k, std::size_t capacity, double alpha,
           int sessions, std::uint64_t seed, int segments, double duration, double sir_db) {
            const RunConfig cfg = config_from_kwargs(mode, tau, k, capacity, alpha, sessions,
                                                     seed, segments, duration, sir_db);
            const RunResult result = run_experiment(cfg);
            std::ostringstream csv;
            write_run_csv(csv, cfg, result);
            return csv.str();
        },
        py::arg("mode") = "evolve", py::arg("tau") = 0.5, py::arg("k") = 3,
        py::arg("capacity") = 64, py::arg("alpha") = 1.0, py::arg("sessions") = 1,
        py::arg("seed") = 1, py::arg("segments") = 50, py::arg("duration") = 2.0,
        py::arg("sir_db") = 0.0, "Run simulated sessions and return the per-step CSV text.");

#ifdef EVOTSE_VERSION
#define EVOTSE_STR2(x) #x
#define EVOTSE_STR(x) EVOTSE_STR2(x)
    m.attr("__version__") = EVOTSE_STR(EVOTSE_VERSION);
#else
    m.attr("__version__") = "dev";
#endif
}
