#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dseg/detector.hpp"
#include "dseg/error.hpp"
#include "dseg/evaluation.hpp"
#include "dseg/gradient.hpp"
#include "dseg/hierarchical.hpp"
#include "dseg/io.hpp"

namespace py = pybind11;
using namespace dseg;

namespace {

using Array2d = py::array_t<double, py::array::c_style | py::array::forcecast>;

GrayImage image_from_array(const Array2d& a) {
  if (a.ndim() != 2) throw Error(ErrorCode::kInvalidInput, "image must be a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return GrayImage(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Array2d to_array(std::span<const double> data, int w, int h) {
  Array2d out({h, w});
  std::copy(data.begin(), data.end(), out.mutable_data());
  return out;
}

LineSegment2d line(const std::pair<Point2d, Point2d>& s) { return {s.first, s.second}; }

std::vector<LineSegment2d> lines(const py::sequence& seq) {
  std::vector<LineSegment2d> out;
  for (const py::handle& item : seq) {
    if (py::isinstance<Segment>(item)) {
      out.push_back(endpoints(item.cast<const Segment&>()));
    } else {
      out.push_back(line(item.cast<std::pair<Point2d, Point2d>>()));
    }
  }
  return out;
}

const char* code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid_input";
    case ErrorCode::kInvalidConfiguration: return "invalid_configuration";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kOutOfBounds: return "out_of_bounds";
    case ErrorCode::kUpdateDegenerate: return "update_degenerate";
    case ErrorCode::kDegenerateSegment: return "degenerate_segment";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kSchema: return "schema";
  }
  return "unknown";
}

py::dict report_dict(const MatchReport& r) {
  py::dict d;
  d["n_ref"] = r.n_ref;
  d["n_cur"] = r.n_cur;
  d["matched"] = r.matched;
  d["unmatched"] = r.unmatched;
  d["split"] = r.split;
  d["repeatability"] = r.repeatability;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Line segment detection with a Kalman-filtered line model";

  py::exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object type = py::module_::import("dseg._core").attr("Error");
      py::object exc = type(e.what());
      exc.attr("code") = code_name(e.code());
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  py::class_<DetectorParams>(m, "DetectorParams")
      .def(py::init<>())
      .def_readwrite("sigma_a", &DetectorParams::sigma_a)
      .def_readwrite("sigma_b", &DetectorParams::sigma_b)
      .def_readwrite("sigma_x0", &DetectorParams::sigma_x0)
      .def_readwrite("sigma_y0", &DetectorParams::sigma_y0)
      .def_readwrite("delta_t", &DetectorParams::delta_t)
      .def_readwrite("tau_angle", &DetectorParams::tau_angle)
      .def_readwrite("tau_gmax", &DetectorParams::tau_gmax)
      .def_readwrite("n_o", &DetectorParams::n_o)
      .def_readwrite("sigma_r", &DetectorParams::sigma_r)
      .def_readwrite("min_support", &DetectorParams::min_support)
      .def_readwrite("max_consecutive_misses", &DetectorParams::max_consecutive_misses)
      .def_readwrite("chi2_merge", &DetectorParams::chi2_merge)
      .def("validate", &DetectorParams::validate);

  py::class_<HierarchicalParams>(m, "HierarchicalParams")
      .def(py::init<>())
      .def_readwrite("base", &HierarchicalParams::base)
      .def_readwrite("n_p", &HierarchicalParams::n_p)
      .def_readwrite("s_p", &HierarchicalParams::s_p)
      .def_readwrite("carve_tolerance", &HierarchicalParams::carve_tolerance)
      .def("validate", &HierarchicalParams::validate);

  py::class_<Segment>(m, "Segment")
      .def_readonly("p1", &Segment::p1)
      .def_readonly("p2", &Segment::p2)
      .def_readonly("n_support", &Segment::n_support)
      .def_readonly("length", &Segment::length)
      .def_readonly("level", &Segment::level)
      .def_property_readonly("params", [](const Segment& s) { return s.state.x; },
                             "(a, x0, b, y0)")
      .def_property_readonly("covariance", [](const Segment& s) { return s.state.P; })
      .def_property_readonly("support", [](const Segment& s) {
        py::array_t<double> out({static_cast<py::ssize_t>(s.support.size()), py::ssize_t{2}});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t k = 0; k < s.support.size(); ++k) {
          v(k, 0) = s.support[k].x();
          v(k, 1) = s.support[k].y();
        }
        return out;
      })
      .def("__repr__", [](const Segment& s) {
        return "Segment((" + std::to_string(s.p1.x()) + ", " + std::to_string(s.p1.y()) +
               ") -> (" + std::to_string(s.p2.x()) + ", " + std::to_string(s.p2.y()) +
               "), length=" + std::to_string(s.length) + ")";
      });

  py::class_<GradientField>(m, "GradientField")
      .def_property_readonly("width", &GradientField::width)
      .def_property_readonly("height", &GradientField::height)
      .def_property_readonly("gx", [](const GradientField& f) { return to_array(f.gx(), f.width(), f.height()); })
      .def_property_readonly("gy", [](const GradientField& f) { return to_array(f.gy(), f.width(), f.height()); })
      .def_property_readonly("magnitude", [](const GradientField& f) {
        return to_array(f.magnitude(), f.width(), f.height());
      })
      .def_property_readonly("direction", [](const GradientField& f) {
        return to_array(f.direction(), f.width(), f.height());
      })
      .def("sample", [](const GradientField& f, double x, double y) {
        const GradientSample s = sample(f, x, y);
        return std::pair(s.magnitude, s.direction);
      }, py::arg("x"), py::arg("y"));

  m.def("compute_gradient", [](const Array2d& img) { return compute_gradient(image_from_array(img)); },
        py::arg("image"));

  m.def("detect", [](const Array2d& img, const DetectorParams& p) {
    const GrayImage g = image_from_array(img);
    py::gil_scoped_release release;
    return detect(g, p);
  }, py::arg("image"), py::arg("params") = DetectorParams{});

  m.def("detect_hierarchical", [](const Array2d& img, const HierarchicalParams& p) {
    const GrayImage g = image_from_array(img);
    py::gil_scoped_release release;
    return detect_hierarchical(g, p);
  }, py::arg("image"), py::arg("params") = HierarchicalParams{});

  m.def("similarity", [](const std::pair<Point2d, Point2d>& ab, const std::pair<Point2d, Point2d>& cd) {
    return similarity(line(ab), line(cd));
  }, py::arg("ab"), py::arg("cd"));
  m.def("distance", [](const std::pair<Point2d, Point2d>& ab, const std::pair<Point2d, Point2d>& cd) {
    return distance(line(ab), line(cd));
  }, py::arg("ab"), py::arg("cd"));
  m.def("match", [](const py::sequence& ref, const py::sequence& cur, double tau_dist) {
    return report_dict(match(lines(ref), lines(cur), tau_dist));
  }, py::arg("ref"), py::arg("cur"), py::arg("tau_dist") = kDefaultTauDist,
     "Segments may be Segment objects or ((x1, y1), (x2, y2)) pairs.");

  m.def("add_noise", [](const Array2d& img, int frame_index, std::uint64_t seed) {
    const GrayImage out = add_noise(image_from_array(img), frame_index, seed);
    return to_array(out.pixels(), out.width(), out.height());
  }, py::arg("image"), py::arg("frame_index"), py::arg("seed"));

  m.def("carve_intervals", [](const std::vector<std::pair<double, double>>& set, double idx1,
                              double idx2, double min_length) {
    std::vector<Interval> in;
    for (auto [p, q] : set) in.push_back({p, q});
    std::vector<std::pair<double, double>> out;
    for (const Interval& iv : carve_intervals(IntervalSet(std::move(in)), idx1, idx2, min_length).intervals()) {
      out.emplace_back(iv.p, iv.q);
    }
    return out;
  }, py::arg("intervals"), py::arg("idx1"), py::arg("idx2"), py::arg("min_length") = 0.0);

  m.def("read_image", [](const std::filesystem::path& path) {
    const GrayImage img = read_image(path);
    return to_array(img.pixels(), img.width(), img.height());
  }, py::arg("path"));

  m.def("segments_to_json", [](const std::vector<Segment>& segs, int width, int height) {
    return segments_to_json(segs, width, height).dump();
  }, py::arg("segments"), py::arg("width"), py::arg("height"));
  m.def("segments_from_json", [](const std::string& text) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kSchema, e.what());
    }
    return segments_from_json(doc);
  }, py::arg("text"));
}
