#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "pedmotion/error.hpp"
#include "pedmotion/filterpipe.hpp"
#include "pedmotion/metrics.hpp"
#include "pedmotion/motion_io.hpp"
#include "pedmotion/planner.hpp"
#include "pedmotion/retarget.hpp"
#include "pedmotion/rotmath.hpp"
#include "pedmotion/scenario.hpp"
#include "pedmotion/synth.hpp"
#include "pedmotion/trajectory.hpp"

namespace py = pybind11;
using namespace pedmotion;

namespace {

// Positions as an (N, 3) row-major array.
Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> positions(const GlobalTrajectory& traj) {
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> out(static_cast<Eigen::Index>(traj.size()), 3);
  for (std::size_t i = 0; i < traj.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = traj.positions[i].transpose();
  return out;
}

ClipLibrary clip_library(const std::vector<std::string>& clip_docs) {
  ClipLibrary clips;
  for (const std::string& text : clip_docs) {
    RetargetedClip clip = read_clip(text);
    std::string id = clip.id;
    clips.emplace(std::move(id), std::move(clip));
  }
  return clips;
}

}  // namespace

PYBIND11_MODULE(_pedmotion, m) {
  m.doc() = "Pedestrian motion retargeting, scenario simulation and metrics";

  static py::exception<Error> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<Error> processing_error(m, "ProcessingError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      (e.is_input_error() ? input_error : processing_error)(e.what());
    }
  });

  // Rotations. Matrices are 3x3 numpy arrays, vectors length-3.
  m.def("axis_angle_to_matrix", [](const Vec3& aa) { return axis_angle_to_matrix(aa); }, py::arg("axis_angle"));
  m.def("matrix_to_axis_angle", &matrix_to_axis_angle, py::arg("matrix"));
  m.def("sixd_to_matrix", [](const Vec3& a1, const Vec3& a2) { return sixd_to_matrix({a1, a2}); }, py::arg("a1"),
        py::arg("a2"));
  m.def(
      "matrix_to_euler_xyz",
      [](const Mat3& r) {
        const EulerResult e = matrix_to_euler_xyz(r);
        return py::make_tuple(Vec3(e.angles.x, e.angles.y, e.angles.z), e.gimbal_locked);
      },
      py::arg("matrix"), "Returns ((x, y, z), gimbal_locked).");
  m.def("euler_xyz_to_matrix", [](const Vec3& e) { return euler_xyz_to_matrix({e.x(), e.y(), e.z()}); },
        py::arg("angles"));

  m.def("p_mais3", &p_mais3, py::arg("impact_speed"), "Probability of MAIS3+ injury at an impact speed in m/s.");

  // Documents travel as canonical JSON text.
  m.def("document_format", [](const std::string& text) { return document_format(text); }, py::arg("text"));
  m.def("canonicalize", [](const std::string& text) { return canonicalize(text); }, py::arg("text"));

  m.def(
      "synth_corpus",
      [](int count, std::uint64_t seed) {
        std::vector<std::string> out;
        for (const MotionSequence& seq : synth_corpus(count, seed)) out.push_back(write_motion(seq));
        return out;
      },
      py::arg("count"), py::arg("seed") = 0, "Synthetic motion documents.");

  m.def(
      "reconstruct",
      [](const std::string& motion, const Vec3& origin) { return positions(reconstruct_global(read_motion(motion), origin)); },
      py::arg("motion"), py::arg("origin") = Vec3::Zero(), "Global root positions, shape (frames, 3).");
  m.def(
      "classify",
      [](const std::string& motion) { return std::string(to_string(classify(reconstruct_global(read_motion(motion))))); },
      py::arg("motion"));

  m.def(
      "retarget",
      [](const std::string& motion, const std::optional<std::string>& skeleton) {
        const SkeletonMap map = skeleton ? read_skeleton(*skeleton) : SkeletonMap::carla_like();
        return write_clip(retarget_clip(read_motion(motion), map));
      },
      py::arg("motion"), py::arg("skeleton") = py::none(), "Clip document for the target skeleton.");

  m.def("stem", [](const std::string& w) { return stem(w); }, py::arg("word"));
  m.def(
      "keyword_filter",
      [](const std::vector<std::string>& annotations, const std::optional<std::vector<std::string>>& keywords) {
        std::vector<MotionSequence> corpus(annotations.size());
        for (std::size_t i = 0; i < annotations.size(); ++i) corpus[i].annotation = annotations[i];
        const std::vector<std::string> kw = keywords ? *keywords : FilterConfig::defaults().keywords;
        std::vector<bool> keep;
        for (const FilterDecision& d : keyword_filter(corpus, kw).report) keep.push_back(d.accepted);
        return keep;
      },
      py::arg("annotations"), py::arg("keywords") = py::none(), "Accept flag per annotation.");
  m.def("tag_behavior", [](const std::string& a) { return tag_behavior(a).tags; }, py::arg("annotation"));

  m.def(
      "generate",
      [](const std::vector<std::string>& clip_docs, std::uint64_t seed, int scenarios) {
        GeneratorOptions options;
        options.scenarios = scenarios;
        std::vector<std::string> out;
        for (const ScenarioSpec& s : generate_scenarios(clip_library(clip_docs), options, seed)) {
          out.push_back(write_scenario(s));
        }
        return out;
      },
      py::arg("clips"), py::arg("seed") = 0, py::arg("scenarios") = 1);

  m.def(
      "simulate",
      [](const std::string& scenario, const std::vector<std::string>& clip_docs, const std::string& planner) {
        const ScenarioSpec spec = read_scenario(scenario);
        const ClipLibrary clips = clip_library(clip_docs);
        auto p = make_planner(planner.empty() ? spec.ego.planner : planner);
        py::gil_scoped_release release;
        return write_log(run(spec, clips, *p));
      },
      py::arg("scenario"), py::arg("clips"), py::arg("planner") = "", "Event log (NDJSON text).");

  m.def(
      "evaluate",
      [](const std::vector<std::string>& log_docs, const std::vector<std::string>& scenario_docs) {
        std::vector<ScenarioLog> logs;
        std::vector<ScenarioSpec> specs;
        for (const std::string& t : log_docs) logs.push_back(read_log(t));
        for (const std::string& t : scenario_docs) specs.push_back(read_scenario(t));
        return write_report(report(logs, specs));
      },
      py::arg("logs"), py::arg("scenarios"), "Metrics report document.");
}
