// Python bindings for the weighted template-matching engine. Images and
// weight maps cross the boundary as 2-D float64 numpy arrays (row-major,
// [height, width]); structured results come back as small bound classes.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/errors.hpp"
#include "wtm/eval.hpp"
#include "wtm/fastmatch.hpp"
#include "wtm/io.hpp"
#include "wtm/matcher.hpp"
#include "wtm/synth.hpp"
#include "wtm/weightmap.hpp"

namespace py = pybind11;
using namespace wtm;

namespace {

GrayImage image_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) {
        throw std::invalid_argument("expected a 2-D array of shape [height, width]");
    }
    const int height = static_cast<int>(a.shape(0));
    const int width = static_cast<int>(a.shape(1));
    const double* data = a.data();
    std::vector<double> pixels(data, data + static_cast<std::size_t>(width) * height);
    return {width, height, std::move(pixels)};
}

py::array_t<double> array_from_pixels(int width, int height, const std::vector<double>& pixels) {
    py::array_t<double> out({height, width});
    std::copy(pixels.begin(), pixels.end(), out.mutable_data());
    return out;
}

Patch patch_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    Patch p;
    p.values.assign(a.data(), a.data() + a.size());
    return p;
}

WeightMap map_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) {
        throw std::invalid_argument("expected a 2-D array of shape [height, width]");
    }
    const int height = static_cast<int>(a.shape(0));
    const int width = static_cast<int>(a.shape(1));
    std::vector<double> w(a.data(), a.data() + static_cast<std::size_t>(width) * height);
    return {width, height, std::move(w), WeightKind::Custom};
}

std::optional<Rect> rect_from_tuple(const std::optional<std::tuple<int, int, int, int>>& t) {
    if (!t) return std::nullopt;
    const auto& [x, y, w, h] = *t;
    return Rect{x, y, w, h};
}

// Weight map for a template from one of the named experimental recipes.
WeightMap map_by_name(const Template& tpl, const std::string& kind) {
    const MapSpec spec = MapSpec::from_name(kind);
    return map_for_template(tpl, spec.kind, spec.params);
}

py::dict result_to_dict(const MatchResult& r) {
    py::dict d;
    d["top_left"] = py::make_tuple(r.top_left.x, r.top_left.y);
    d["center"] = py::make_tuple(r.center.x, r.center.y);
    d["score"] = r.score;
    d["template_id"] = r.template_id;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted template matching: correlation scores, weight maps, "
              "sliding-window search, synthetic scenes, and the detection-rate protocol.";

    py::register_exception<DegenerateWindowError>(m, "DegenerateWindowError");
    py::register_exception<DegenerateTemplateError>(m, "DegenerateTemplateError");
    py::register_exception<NoValidWindowError>(m, "NoValidWindowError");
    py::register_exception<PlacementError>(m, "PlacementError");
    py::register_exception<ParseError>(m, "ParseError");

    py::class_<GrayImage>(m, "GrayImage")
        .def(py::init(&image_from_array), py::arg("pixels"),
             "Build from a [height, width] float array of intensities in [0, 255].")
        .def_property_readonly("width", &GrayImage::width)
        .def_property_readonly("height", &GrayImage::height)
        .def("to_array",
             [](const GrayImage& img) {
                 return array_from_pixels(img.width(), img.height(), img.pixels());
             })
        .def("__eq__",
             [](const GrayImage& a, const GrayImage& b) { return a == b; });

    py::class_<Template>(m, "Template")
        .def(py::init([](const GrayImage& image, std::pair<double, double> anchor,
                         const std::string& label, int id) {
                 return Template(image, Point{anchor.first, anchor.second},
                                 eye_side_from_string(label), id);
             }),
             py::arg("image"), py::arg("anchor"), py::arg("label"), py::arg("id") = 0)
        .def_static("centered",
                    [](const GrayImage& image, const std::string& label, int id) {
                        return Template::centered(image, eye_side_from_string(label), id);
                    },
                    py::arg("image"), py::arg("label"), py::arg("id") = 0)
        .def_property_readonly("width", &Template::width)
        .def_property_readonly("height", &Template::height)
        .def_property_readonly("anchor",
                               [](const Template& t) {
                                   return py::make_tuple(t.anchor.x, t.anchor.y);
                               })
        .def_property_readonly("label",
                               [](const Template& t) { return std::string(to_string(t.label)); })
        .def_readonly("id", &Template::id)
        .def_property_readonly("image", [](const Template& t) { return t.image; });

    py::class_<WeightMap>(m, "WeightMap")
        .def(py::init(&map_from_array), py::arg("weights"),
             "Custom per-pixel positive weights, shape [height, width].")
        .def_property_readonly("width", &WeightMap::width)
        .def_property_readonly("height", &WeightMap::height)
        .def_property_readonly("kind",
                               [](const WeightMap& w) { return std::string(to_string(w.kind())); })
        .def("to_array", [](const WeightMap& w) {
            return array_from_pixels(w.width(), w.height(), w.weights());
        });

    m.def("uniform_map", &uniform_map, py::arg("width"), py::arg("height"));
    m.def("gaussian_map",
          [](int width, int height, double amplitude, double sigma_x, double sigma_y,
             std::optional<std::pair<double, double>> center) {
              GaussianParams p{amplitude, sigma_x, sigma_y, std::nullopt};
              if (center) p.center = Point{center->first, center->second};
              return gaussian_map(width, height, p);
          },
          py::arg("width"), py::arg("height"), py::arg("amplitude") = 5.0,
          py::arg("sigma_x") = 16.0, py::arg("sigma_y") = 8.0, py::arg("center") = std::nullopt);
    m.def("exponential_map",
          [](int width, int height, double amplitude, double b, double c,
             std::optional<std::pair<double, double>> center, bool literal_abs_sum) {
              ExponentialParams p{amplitude, b, c, std::nullopt, literal_abs_sum};
              if (center) p.center = Point{center->first, center->second};
              return exponential_map(width, height, p);
          },
          py::arg("width"), py::arg("height"), py::arg("amplitude") = 5.0, py::arg("b") = 10.0,
          py::arg("c") = 10.0, py::arg("center") = std::nullopt,
          py::arg("literal_abs_sum") = false);
    m.def("map_for_template", &map_by_name, py::arg("template"), py::arg("kind"),
          "Weight map sized and centered for a template; kind is one of "
          "uniform / gauss-ellipse / gauss-circle / exp.");

    m.def("ncc",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& y) {
              return ncc(patch_from_array(x), patch_from_array(y));
          },
          py::arg("x"), py::arg("y"),
          "Normalized correlation of two equally sized pixel sets.");
    m.def("weighted_ncc",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
             const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
             const WeightMap& weights) {
              return weighted_ncc(patch_from_array(x), patch_from_array(y), weights);
          },
          py::arg("x"), py::arg("y"), py::arg("weights"),
          "Weighted normalized correlation; reduces to ncc for all-ones weights.");

    m.def("match_template",
          [](const GrayImage& image, const Template& tpl, const WeightMap& map,
             std::optional<std::tuple<int, int, int, int>> region) {
              return result_to_dict(match_template(image, tpl, map, rect_from_tuple(region)));
          },
          py::arg("image"), py::arg("template"), py::arg("map"), py::arg("region") = std::nullopt,
          "Reference sliding-window search (evaluates every placement directly).");
    m.def("fast_match",
          [](const GrayImage& image, const Template& tpl, const WeightMap& map,
             std::optional<std::tuple<int, int, int, int>> region) {
              return result_to_dict(fast_match(image, tpl, map, rect_from_tuple(region)));
          },
          py::arg("image"), py::arg("template"), py::arg("map"), py::arg("region") = std::nullopt,
          "Production search; same argmax as match_template, scores within 1e-9.");
    m.def("match_ensemble",
          [](const GrayImage& image, const std::vector<Template>& templates,
             const std::vector<WeightMap>& maps,
             std::optional<std::tuple<int, int, int, int>> region) {
              if (templates.size() != maps.size()) {
                  throw std::invalid_argument("need one weight map per template");
              }
              std::vector<EnsembleEntry> entries;
              entries.reserve(templates.size());
              for (std::size_t i = 0; i < templates.size(); ++i) {
                  entries.push_back({&templates[i], &maps[i]});
              }
              return result_to_dict(match_ensemble(image, entries, rect_from_tuple(region)));
          },
          py::arg("image"), py::arg("templates"), py::arg("maps"),
          py::arg("region") = std::nullopt,
          "Best match across an ensemble; ties break toward the lower template id.");
    m.def("score_map",
          [](const GrayImage& image, const Template& tpl, const WeightMap& map,
             std::optional<std::tuple<int, int, int, int>> region) {
              const ScoreGrid grid = fast_score_map(image, tpl, map, rect_from_tuple(region));
              py::dict d;
              d["origin"] = py::make_tuple(grid.origin.x, grid.origin.y);
              d["scores"] = array_from_pixels(grid.width, grid.height, grid.scores);
              return d;
          },
          py::arg("image"), py::arg("template"), py::arg("map"), py::arg("region") = std::nullopt,
          "Scores of every valid placement (NaN where the window is degenerate).");

    py::class_<Annotation>(m, "Annotation")
        .def(py::init([](std::string image_id, std::pair<int, int> right_eye,
                         std::pair<int, int> left_eye) {
                 return Annotation{std::move(image_id),
                                   {right_eye.first, right_eye.second},
                                   {left_eye.first, left_eye.second}};
             }),
             py::arg("image_id"), py::arg("right_eye"), py::arg("left_eye"))
        .def_readonly("image_id", &Annotation::image_id)
        .def_property_readonly("right_eye",
                               [](const Annotation& a) {
                                   return py::make_tuple(a.right_eye.x, a.right_eye.y);
                               })
        .def_property_readonly("left_eye", [](const Annotation& a) {
            return py::make_tuple(a.left_eye.x, a.left_eye.y);
        });

    m.def("generate_scene",
          [](int width, int height, int iris_radius, int eye_rx, int eye_ry, double noise_sigma,
             int background_level, std::uint64_t seed, int placement_jitter,
             int distractor_count) {
              SceneParams p;
              p.image_w = width;
              p.image_h = height;
              p.iris_radius = iris_radius;
              p.eye_rx = eye_rx;
              p.eye_ry = eye_ry;
              p.noise_sigma = noise_sigma;
              p.background_level = background_level;
              p.seed = seed;
              p.placement_jitter = placement_jitter;
              p.distractor_count = distractor_count;
              return generate_scene(p);
          },
          py::arg("width") = 96, py::arg("height") = 72, py::arg("iris_radius") = 3,
          py::arg("eye_rx") = 8, py::arg("eye_ry") = 5, py::arg("noise_sigma") = 0.0,
          py::arg("background_level") = 110, py::arg("seed") = 0,
          py::arg("placement_jitter") = 3, py::arg("distractor_count") = 0,
          "Render one synthetic eye scene; returns (image, annotation).");
    m.def("extract_template",
          [](const GrayImage& image, std::pair<int, int> center, int width, int height,
             const std::string& label, int id) {
              return extract_template(image, {center.first, center.second}, width, height,
                                      eye_side_from_string(label), id);
          },
          py::arg("image"), py::arg("center"), py::arg("width"), py::arg("height"),
          py::arg("label"), py::arg("id") = 0,
          "Cut a template so the given pixel becomes its anchor.");

    m.def("detection_error",
          [](std::pair<double, double> predicted, std::pair<int, int> truth) {
              return detection_error({predicted.first, predicted.second},
                                     {truth.first, truth.second});
          },
          py::arg("predicted"), py::arg("truth"));
    m.def("detection_rate",
          [](const std::vector<double>& errors, double threshold) {
              return detection_rate(errors, threshold);
          },
          py::arg("errors"), py::arg("threshold"),
          "Fraction of errors strictly below the threshold.");

    m.def("run_experiment",
          [](const std::vector<GrayImage>& images, const std::vector<Annotation>& annotations,
             const std::vector<Template>& templates, const std::vector<int>& counts,
             double threshold_px, const std::vector<std::string>& kinds, int threads) {
              ExperimentConfig config;
              config.counts = counts;
              config.threshold_px = threshold_px;
              config.kinds.clear();
              for (const std::string& name : kinds) config.kinds.push_back(MapSpec::from_name(name));
              config.threads = threads;
              const EvalReport report = run_experiment(images, annotations, templates, config);

              py::dict rates, deltas;
              for (const auto& [key, rate] : report.rates) {
                  const auto& [eye, kind, count] = key;
                  rates[py::make_tuple(to_string(eye), kind, count)] = rate;
                  deltas[py::make_tuple(to_string(eye), kind, count)] = report.deltas.at(key);
              }
              py::dict out;
              out["rates"] = rates;
              out["deltas"] = deltas;
              out["text"] = format_report(report);
              out["csv"] = report_csv(report);
              out["matches_csv"] = matches_csv(report);
              return out;
          },
          py::arg("images"), py::arg("annotations"), py::arg("templates"),
          py::arg("counts") = std::vector<int>{10, 45, 80}, py::arg("threshold_px") = 8.0,
          py::arg("kinds") =
              std::vector<std::string>{"uniform", "gauss-ellipse", "gauss-circle", "exp"},
          py::arg("threads") = 0,
          "Detection-rate protocol over an image set; returns rates, deltas and "
          "formatted reports.");

    m.def("generate_corpus",
          [](int count, std::uint64_t base_seed, int template_w, int template_h,
             int template_jitter, int width, int height, double noise_sigma,
             int placement_jitter, int distractor_count) {
              CorpusParams p;
              p.count = count;
              p.base_seed = base_seed;
              p.template_w = template_w;
              p.template_h = template_h;
              p.template_jitter = template_jitter;
              p.scene.image_w = width;
              p.scene.image_h = height;
              p.scene.noise_sigma = noise_sigma;
              p.scene.placement_jitter = placement_jitter;
              p.scene.distractor_count = distractor_count;
              const Corpus corpus = generate_corpus(p);
              py::dict out;
              out["images"] = corpus.images;
              out["annotations"] = corpus.annotations;
              out["templates"] = corpus.templates;
              return out;
          },
          py::arg("count"), py::arg("base_seed") = 0, py::arg("template_w") = 32,
          py::arg("template_h") = 16, py::arg("template_jitter") = 0, py::arg("width") = 96,
          py::arg("height") = 72, py::arg("noise_sigma") = 0.0, py::arg("placement_jitter") = 3,
          py::arg("distractor_count") = 0,
          "Seeded scene corpus with ground truth and per-eye templates.");

    m.def("read_pgm",
          [](const py::bytes& data) { return read_pgm(std::string(data)); },
          py::arg("data"), "Parse a binary graymap (P5).");
    m.def("write_pgm",
          [](const GrayImage& image) { return py::bytes(write_pgm(image)); },
          py::arg("image"), "Serialize to the canonical binary graymap bytes.");
}
