#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "scenkit/cli_report.hpp"
#include "scenkit/complexity_engine.hpp"
#include "scenkit/error.hpp"
#include "scenkit/pipeline.hpp"

namespace py = pybind11;
using namespace scenkit;

namespace {

using OptPath = std::optional<fs::path>;

py::dict stats_dict(const ExtractionStats& s) {
  py::dict d;
  d["total_vehicles"] = s.total_vehicles;
  d["after_free_driving_filter"] = s.scenarios_after_free_driving_filter;
  d["with_challenger"] = s.scenarios_with_challenger;
  return d;
}

// Catalog entries cross the boundary as their jsonl lines.
std::vector<std::string> lines_of(const std::vector<CatalogEntry>& entries) {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(to_jsonl(e));
  return out;
}

}  // namespace

PYBIND11_MODULE(_scenkit, m) {
  m.doc() = "Scenario extraction, complexity scoring and replay on highD-format data";

  auto base = py::register_exception<Error>(m, "ScenkitError");
  py::register_exception<IoError>(m, "IoError", base);
  py::register_exception<SchemaError>(m, "SchemaError", base);
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<SpecError>(m, "SpecError", base);
  py::register_exception<ArgumentError>(m, "ArgumentError", base);
  py::register_exception<LookupError>(m, "LookupError", base);
  py::register_exception<ClassificationError>(m, "ClassificationError", base);
  py::register_exception<TooShortError>(m, "TooShortError", base);

  m.def("default_weights", [] {
    const auto w = default_weights();
    return std::vector<double>(w.begin(), w.end());
  });
  m.def("scene_count", &scene_count, py::arg("duration_s"), py::arg("dt") = kHighdFrameDt);
  m.def("complexity_class", [](double v) { return std::string(to_string(complexity_class(v))); });
  m.def("dump_config", [](const OptPath& config) { return dump_config(resolve_config(config)); },
        py::arg("config") = py::none());

  m.def(
      "synth",
      [](const fs::path& out_dir, const std::string& corpus, std::uint64_t seed, int n) {
        std::ostringstream log;
        return cmd_synth({out_dir, corpus, seed, n}, log).size();
      },
      py::arg("out_dir"), py::arg("corpus") = "oracle", py::arg("seed") = 1, py::arg("n") = 200,
      "Writes a synthetic corpus and returns the number of recordings.");

  m.def(
      "extract",
      [](const fs::path& data_dir, const fs::path& out_dir, const std::vector<int>& recordings,
         const OptPath& config) {
        std::ostringstream log;
        const auto s = cmd_extract({data_dir, recordings, out_dir}, resolve_config(config), log);
        py::dict d = stats_dict(s.total);
        d["catalog_entries"] = s.catalog_entries;
        d["warnings"] = s.warnings;
        return d;
      },
      py::arg("data_dir"), py::arg("out_dir"), py::arg("recordings") = std::vector<int>{},
      py::arg("config") = py::none());

  m.def(
      "score",
      [](const fs::path& catalog, const fs::path& data_dir, const OptPath& weights_file,
         const OptPath& config) {
        std::ostringstream log;
        const auto h = cmd_score({catalog, data_dir, weights_file, std::nullopt},
                                 resolve_config(config), log);
        py::dict d;
        d["count"] = h.count;
        d["mean"] = h.mean;
        d["low"] = h.classes[0];
        d["medium"] = h.classes[1];
        d["high"] = h.classes[2];
        d["bins"] = std::vector<int>(h.bins.begin(), h.bins.end());
        return d;
      },
      py::arg("catalog"), py::arg("data_dir"), py::arg("weights_file") = py::none(),
      py::arg("config") = py::none());

  m.def(
      "simulate",
      [](const fs::path& catalog, const fs::path& data_dir, const std::string& tiers, int n,
         const OptPath& config) {
        std::ostringstream log;
        SimulateOptions opts{catalog, data_dir, parse_tiers(tiers), n};
        const auto s = cmd_simulate(opts, resolve_config(config), log);
        py::list out;
        for (const auto& t : s.tiers) {
          py::dict d;
          d["tier"] = std::string(to_string(t.tier));
          d["selected"] = t.selected;
          d["too_short"] = t.too_short;
          d["excluded_other_blame"] = t.excluded_other_blame;
          d["scenarios"] = t.scenarios;
          d["critical"] = t.critical;
          d["accidents"] = t.accidents;
          d["mean_min_ttc"] = t.mean_min_ttc;
          out.append(d);
        }
        return out;
      },
      py::arg("catalog"), py::arg("data_dir"), py::arg("tiers") = "lowest,average,highest",
      py::arg("n") = 650, py::arg("config") = py::none());

  m.def(
      "report",
      [](const fs::path& catalog) {
        std::ostringstream log;
        return cmd_report({catalog, std::nullopt}, log);
      },
      py::arg("catalog"));

  m.def(
      "_analyze_lines",
      [](const fs::path& data_dir, int recording_id, const OptPath& config) {
        const auto cfg = resolve_config(config);
        const auto a = analyze_recording(load_recording(data_dir, recording_id), cfg);
        return py::make_tuple(stats_dict(a.stats), lines_of(catalog_entries(a)));
      },
      py::arg("data_dir"), py::arg("recording_id"), py::arg("config") = py::none());

  m.def(
      "scenario_complexity",
      [](const fs::path& data_dir, int recording_id, int ego_id, const OptPath& config) {
        const auto cfg = resolve_config(config);
        const Scenario s = scenario_for(load_recording(data_dir, recording_id), ego_id, cfg);
        const auto c = scenario_complexity(s, cfg.complexity.weights, cfg);
        py::dict d;
        d["value"] = c.value;
        d["class"] = std::string(to_string(complexity_class(c.value)));
        d["argmax_frame"] = c.argmax_frame;
        d["series"] = c.series;
        return d;
      },
      py::arg("data_dir"), py::arg("recording_id"), py::arg("ego_id"),
      py::arg("config") = py::none());
}
