// wtm — weighted template matching command line.
//
// Subcommands: gen-weights, match, synth, evaluate, bench. All file-system
// access lives here; the library underneath is purely in-memory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wtm/core.hpp"
#include "wtm/eval.hpp"
#include "wtm/fastmatch.hpp"
#include "wtm/io.hpp"
#include "wtm/matcher.hpp"
#include "wtm/rng.hpp"
#include "wtm/synth.hpp"
#include "wtm/weightmap.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("short write to " + path.string());
    }
}

// Every subcommand echoes its resolved configuration so runs are auditable.
void log_config(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::cerr << "config[" << cmd << "]:";
    for (const auto& [key, value] : kv) {
        std::cerr << ' ' << key << '=' << value;
    }
    std::cerr << '\n';
}

std::string canonical_kind(std::string name) {
    if (name == "gaussian") return "gauss-ellipse";
    if (name == "exponential") return "exp";
    return name;
}

// Weight-map recipe flags shared by gen-weights and match.
struct MapFlags {
    std::string kind = "uniform";
    double amplitude = 5.0;
    double sigma_x = 16.0;
    double sigma_y = 8.0;
    double b = 10.0;
    double c = 10.0;
    bool literal_abs_sum = false;

    CLI::Option* amplitude_opt = nullptr;
    CLI::Option* sigma_x_opt = nullptr;
    CLI::Option* sigma_y_opt = nullptr;
    CLI::Option* b_opt = nullptr;
    CLI::Option* c_opt = nullptr;

    CLI::Option* add_to(CLI::App& app, const char* kind_default) {
        kind = kind_default;
        auto* kind_opt =
            app.add_option("--kind", kind,
                           "weight-map kind: uniform | gauss-ellipse | gauss-circle | exp "
                           "(aliases: gaussian, exponential)")
                ->capture_default_str();
        amplitude_opt = app.add_option("--amplitude", amplitude, "peak weight A")
                            ->capture_default_str();
        sigma_x_opt = app.add_option("--sigma-x", sigma_x, "Gaussian sigma along x")
                          ->capture_default_str();
        sigma_y_opt = app.add_option("--sigma-y", sigma_y, "Gaussian sigma along y")
                          ->capture_default_str();
        b_opt = app.add_option("--b", b, "exponential decay length along x")
                    ->capture_default_str();
        c_opt = app.add_option("--c", c, "exponential decay length along y")
                    ->capture_default_str();
        app.add_flag("--literal-abs-sum", literal_abs_sum,
                     "exponential: one absolute value around the whole sum (ridge-shaped map) "
                     "instead of per-axis absolute values");
        return kind_opt;
    }

    wtm::MapSpec to_spec() const {
        wtm::MapSpec spec = wtm::MapSpec::from_name(canonical_kind(kind));
        const auto given = [](const CLI::Option* opt) { return opt && opt->count() > 0; };
        if (auto* g = std::get_if<wtm::GaussianParams>(&spec.params)) {
            if (given(amplitude_opt)) g->amplitude = amplitude;
            if (given(sigma_x_opt)) g->sigma_x = sigma_x;
            if (given(sigma_y_opt)) g->sigma_y = sigma_y;
            if (given(b_opt) || given(c_opt) || literal_abs_sum) {
                throw CLI::ValidationError("--b/--c/--literal-abs-sum apply only to exp maps");
            }
        } else if (auto* e = std::get_if<wtm::ExponentialParams>(&spec.params)) {
            if (given(amplitude_opt)) e->amplitude = amplitude;
            if (given(b_opt)) e->b = b;
            if (given(c_opt)) e->c = c;
            e->literal_abs_sum = literal_abs_sum;
            if (given(sigma_x_opt) || given(sigma_y_opt)) {
                throw CLI::ValidationError("--sigma-x/--sigma-y apply only to Gaussian maps");
            }
        } else {
            if (given(amplitude_opt) || given(sigma_x_opt) || given(sigma_y_opt) ||
                given(b_opt) || given(c_opt) || literal_abs_sum) {
                throw CLI::ValidationError("shape parameters apply only to non-uniform maps");
            }
        }
        return spec;
    }

    std::string describe() const {
        std::ostringstream os;
        os << canonical_kind(kind) << " A=" << amplitude;
        const std::string k = canonical_kind(kind);
        if (k == "gauss-ellipse" || k == "gauss-circle") {
            os << " sigma_x=" << sigma_x << " sigma_y=" << sigma_y;
        } else if (k == "exp") {
            os << " b=" << b << " c=" << c << " literal_abs_sum=" << literal_abs_sum;
        }
        return os.str();
    }
};

std::optional<wtm::Rect> parse_region(const std::string& text) {
    if (text.empty()) return std::nullopt;
    wtm::Rect r;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d,%d,%d,%d%c", &r.x, &r.y, &r.w, &r.h, &tail) != 4) {
        throw CLI::ValidationError("--region expects x,y,w,h");
    }
    return r;
}

std::string format_score(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

std::string format_coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// gen-weights
// ---------------------------------------------------------------------------

struct GenWeightsArgs {
    MapFlags map;
    int width = 44;
    int height = 22;
    std::string out;
};

void run_gen_weights(const GenWeightsArgs& a) {
    log_config("gen-weights", {{"kind", canonical_kind(a.map.kind)},
                               {"size", std::to_string(a.width) + "x" + std::to_string(a.height)},
                               {"params", a.map.describe()},
                               {"out", a.out}});
    const wtm::MapSpec spec = a.map.to_spec();
    wtm::Template anchor_probe = wtm::Template::centered(
        wtm::GrayImage::filled(a.width, a.height, 0.0), wtm::EyeSide::Right, 0);
    const wtm::WeightMap map = wtm::map_for_template(anchor_probe, spec.kind, spec.params);
    write_file(a.out, wtm::write_weightmap(map));
    std::cout << "wrote " << a.out << " (" << a.width << "x" << a.height << " "
              << canonical_kind(a.map.kind) << ")\n";
}

// ---------------------------------------------------------------------------
// match
// ---------------------------------------------------------------------------

struct MatchArgs {
    std::string image;
    std::string tpl;
    std::string weights;  // path to a weight-map file
    MapFlags map;         // or a generated kind
    bool kind_given = false;
    std::string anchor;   // "x,y" override
    std::string label = "right";
    bool fast = false;
    std::string region;
    std::string heatmap;
};

void run_match(const MatchArgs& a) {
    log_config("match", {{"image", a.image},
                         {"template", a.tpl},
                         {"weights", a.weights.empty()
                                         ? (a.kind_given ? a.map.describe() : "uniform")
                                         : a.weights},
                         {"fast", a.fast ? "1" : "0"},
                         {"region", a.region.empty() ? "full" : a.region}});

    const wtm::GrayImage image = wtm::read_pgm(read_file(a.image));
    wtm::GrayImage tpl_image = wtm::read_pgm(read_file(a.tpl));

    wtm::Point anchor = wtm::Template::default_anchor(tpl_image.width(), tpl_image.height());
    if (!a.anchor.empty()) {
        char tail = 0;
        if (std::sscanf(a.anchor.c_str(), "%lf,%lf%c", &anchor.x, &anchor.y, &tail) != 2) {
            throw CLI::ValidationError("--anchor expects x,y");
        }
    }
    const wtm::Template tpl(std::move(tpl_image), anchor, wtm::eye_side_from_string(a.label), 0);

    wtm::WeightMap map = [&] {
        if (!a.weights.empty()) {
            wtm::WeightMap loaded = wtm::read_weightmap(read_file(a.weights));
            if (loaded.width() != tpl.width() || loaded.height() != tpl.height()) {
                throw std::runtime_error(
                    "weight map " + std::to_string(loaded.width()) + "x" +
                    std::to_string(loaded.height()) + " does not match template " +
                    std::to_string(tpl.width()) + "x" + std::to_string(tpl.height()));
            }
            return loaded;
        }
        const wtm::MapSpec spec =
            a.kind_given ? a.map.to_spec() : wtm::MapSpec::uniform();
        return wtm::map_for_template(tpl, spec.kind, spec.params);
    }();

    const std::optional<wtm::Rect> region = parse_region(a.region);
    const wtm::MatchResult r = a.fast ? wtm::fast_match(image, tpl, map, region)
                                      : wtm::match_template(image, tpl, map, region);

    // One result line: top_left_x top_left_y center_x center_y score
    std::cout << r.top_left.x << ' ' << r.top_left.y << ' ' << format_coord(r.center.x) << ' '
              << format_coord(r.center.y) << ' ' << format_score(r.score) << "\n";

    if (!a.heatmap.empty()) {
        const wtm::ScoreGrid grid = a.fast ? wtm::fast_score_map(image, tpl, map, region)
                                           : wtm::score_map(image, tpl, map, region);
        write_file(a.heatmap, wtm::write_pgm(wtm::render_heatmap(grid)));
        std::cerr << "heatmap written to " << a.heatmap << "\n";
    }
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    wtm::CorpusParams corpus;
    std::string out;
};

std::string scene_file(int index) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "images/scene_%04d.pgm", index);
    return buf;
}

void run_synth(const SynthArgs& a) {
    const wtm::SceneParams& sp = a.corpus.scene;
    log_config("synth",
               {{"count", std::to_string(a.corpus.count)},
                {"seed", std::to_string(a.corpus.base_seed)},
                {"image", std::to_string(sp.image_w) + "x" + std::to_string(sp.image_h)},
                {"eye", std::to_string(sp.eye_rx) + "x" + std::to_string(sp.eye_ry) +
                            " iris=" + std::to_string(sp.iris_radius)},
                {"noise_sigma", std::to_string(sp.noise_sigma)},
                {"background", std::to_string(sp.background_level)},
                {"placement_jitter", std::to_string(sp.placement_jitter)},
                {"distractors", std::to_string(sp.distractor_count)},
                {"template", std::to_string(a.corpus.template_w) + "x" +
                                 std::to_string(a.corpus.template_h) +
                                 " jitter=" + std::to_string(a.corpus.template_jitter)},
                {"out", a.out}});

    wtm::Corpus corpus = wtm::generate_corpus(a.corpus);
    const fs::path out(a.out);

    std::vector<wtm::Annotation> rows = corpus.annotations;
    for (std::size_t i = 0; i < corpus.images.size(); ++i) {
        const std::string rel = scene_file(static_cast<int>(i));
        write_file(out / rel, wtm::write_pgm(corpus.images[i]));
        rows[i].image_id = rel;  // annotation paths are relative to the CSV
    }
    write_file(out / "annotations.csv", wtm::write_annotations(rows));

    std::vector<wtm::TemplateManifestRow> manifest;
    manifest.reserve(corpus.templates.size());
    for (const wtm::Template& t : corpus.templates) {
        char name[48];
        std::snprintf(name, sizeof name, "tpl_%04d_%s.pgm", t.id, wtm::to_string(t.label));
        write_file(out / "templates" / name, wtm::write_pgm(t.image));
        manifest.push_back({name, t.label, t.anchor});
    }
    write_file(out / "templates" / "templates.csv", wtm::write_template_manifest(manifest));

    std::cout << "wrote " << corpus.images.size() << " images and " << corpus.templates.size()
              << " templates to " << a.out << "\n";
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string annotations;
    std::string images;     // base dir for image paths; default: annotation file's dir
    std::string templates;  // dir containing templates.csv
    std::vector<int> counts{10, 45, 80};
    double threshold = 8.0;
    std::vector<std::string> kinds{"uniform", "gauss-ellipse", "gauss-circle", "exp"};
    int threads = 0;
    std::string out;
};

void run_evaluate(const EvaluateArgs& a) {
    std::string kinds_str;
    for (const std::string& k : a.kinds) kinds_str += (kinds_str.empty() ? "" : ",") + k;
    std::string counts_str;
    for (const int n : a.counts) {
        counts_str += (counts_str.empty() ? "" : ",") + std::to_string(n);
    }
    log_config("evaluate", {{"annotations", a.annotations},
                            {"templates", a.templates},
                            {"counts", counts_str},
                            {"threshold", std::to_string(a.threshold)},
                            {"kinds", kinds_str},
                            {"threads", std::to_string(a.threads)},
                            {"out", a.out.empty() ? "(stdout only)" : a.out}});

    const fs::path ann_path(a.annotations);
    const fs::path image_base = a.images.empty() ? ann_path.parent_path() : fs::path(a.images);
    std::vector<wtm::Annotation> annotations = wtm::read_annotations(read_file(ann_path));

    std::vector<wtm::GrayImage> images;
    images.reserve(annotations.size());
    for (const wtm::Annotation& ann : annotations) {
        const fs::path p(ann.image_id);
        images.push_back(wtm::read_pgm(read_file(p.is_absolute() ? p : image_base / p)));
    }

    // Template ids = row order of templates.csv; without a manifest, the
    // directory's .pgm files are taken filename-sorted with default anchors
    // and the eye side read from a "left"/"right" filename substring.
    const fs::path tpl_dir(a.templates);
    std::vector<wtm::TemplateManifestRow> manifest;
    if (fs::exists(tpl_dir / "templates.csv")) {
        manifest = wtm::read_template_manifest(read_file(tpl_dir / "templates.csv"));
    } else {
        std::vector<std::string> names;
        for (const auto& entry : fs::directory_iterator(tpl_dir)) {
            if (entry.path().extension() == ".pgm") {
                names.push_back(entry.path().filename().string());
            }
        }
        std::sort(names.begin(), names.end());
        for (const std::string& name : names) {
            const bool left = name.find("left") != std::string::npos;
            const bool right = name.find("right") != std::string::npos;
            if (left == right) {
                throw std::runtime_error(
                    "cannot infer eye side of " + name +
                    ": filename must contain exactly one of \"left\"/\"right\", or provide "
                    "templates.csv");
            }
            // Anchor is resolved to the geometric center once dims are known.
            manifest.push_back({name, left ? wtm::EyeSide::Left : wtm::EyeSide::Right,
                                {-1.0, -1.0}});
        }
    }
    std::vector<wtm::Template> templates;
    templates.reserve(manifest.size());
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        const fs::path p(manifest[i].path);
        wtm::GrayImage img = wtm::read_pgm(read_file(p.is_absolute() ? p : tpl_dir / p));
        const wtm::Point anchor =
            manifest[i].anchor == wtm::Point{-1.0, -1.0}
                ? wtm::Template::default_anchor(img.width(), img.height())
                : manifest[i].anchor;
        templates.emplace_back(std::move(img), anchor, manifest[i].label, static_cast<int>(i));
    }

    wtm::ExperimentConfig config;
    config.counts = a.counts;
    config.threshold_px = a.threshold;
    config.kinds.clear();
    for (const std::string& k : a.kinds) {
        config.kinds.push_back(wtm::MapSpec::from_name(canonical_kind(k)));
    }
    config.threads = a.threads;

    const wtm::EvalReport report = wtm::run_experiment(images, annotations, templates, config);
    const std::string text = wtm::format_report(report);
    std::cout << text << "\n";

    if (!a.out.empty()) {
        const fs::path out(a.out);
        write_file(out / "report.txt", text + "\n");
        write_file(out / "report.csv", wtm::report_csv(report));
        write_file(out / "matches.csv", wtm::matches_csv(report));
        std::cerr << "reports written to " << a.out << "\n";
    }
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string image;  // optional file; otherwise a seeded noise scene
    std::string tpl;
    int width = 256;
    int height = 256;
    int template_w = 44;
    int template_h = 22;
    std::uint64_t seed = 42;
    int iters = 3;
    MapFlags map;
    bool kind_given = false;
    std::string out;
};

void run_bench(const BenchArgs& a) {
    log_config("bench", {{"image", a.image.empty() ? std::to_string(a.width) + "x" +
                                                         std::to_string(a.height) + " seeded noise"
                                                   : a.image},
                         {"template", a.tpl.empty() ? std::to_string(a.template_w) + "x" +
                                                          std::to_string(a.template_h) + " cutout"
                                                    : a.tpl},
                         {"map", a.kind_given ? a.map.describe() : "gauss-ellipse (default)"},
                         {"iters", std::to_string(a.iters)},
                         {"seed", std::to_string(a.seed)}});

    wtm::GrayImage image = [&] {
        if (!a.image.empty()) return wtm::read_pgm(read_file(a.image));
        std::vector<double> pixels(static_cast<std::size_t>(a.width) * a.height);
        wtm::SplitMix64 rng(a.seed);
        for (double& v : pixels) v = static_cast<double>(rng.next_int(0, 255));
        return wtm::GrayImage(a.width, a.height, std::move(pixels));
    }();
    const wtm::Template tpl = [&] {
        if (!a.tpl.empty()) {
            return wtm::Template::centered(wtm::read_pgm(read_file(a.tpl)), wtm::EyeSide::Right,
                                           0);
        }
        // Cut the probe out of the image so the search has a true peak.
        return wtm::extract_template(image, {image.width() / 3, image.height() / 3},
                                     a.template_w, a.template_h, wtm::EyeSide::Right, 0);
    }();

    const wtm::MapSpec spec = a.kind_given ? a.map.to_spec() : wtm::MapSpec::gauss_ellipse();
    const wtm::WeightMap map = wtm::map_for_template(tpl, spec.kind, spec.params);

    // Both paths must agree before timing means anything.
    const wtm::MatchResult ref = wtm::match_template(image, tpl, map);
    const wtm::MatchResult fast = wtm::fast_match(image, tpl, map);
    if (ref.top_left != fast.top_left ||
        std::abs(ref.score - fast.score) > 1e-9 * std::max(1.0, std::abs(ref.score))) {
        throw std::runtime_error("bench: reference and fast matcher disagree; not timing");
    }

    const int iters = std::max(1, a.iters);
    const auto time_ms = [&](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int i = 0; i < iters; ++i) fn();
        const auto t1 = std::chrono::steady_clock::now();
        return std::chrono::duration<double, std::milli>(t1 - t0).count() / iters;
    };
    const double ref_ms = time_ms([&] { (void)wtm::match_template(image, tpl, map); });
    const double fast_ms = time_ms([&] { (void)wtm::fast_match(image, tpl, map); });

    const long windows = static_cast<long>(image.width() - tpl.width() + 1) *
                         (image.height() - tpl.height() + 1);
    const double speedup = ref_ms / fast_ms;

    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "image %dx%d, template %dx%d, %ld windows, %d iterations\n"
                  "reference: %10.3f ms/run  %8.1f ns/window\n"
                  "fast:      %10.3f ms/run  %8.1f ns/window\n"
                  "speedup:   %.2fx\n",
                  image.width(), image.height(), tpl.width(), tpl.height(), windows, iters,
                  ref_ms, 1e6 * ref_ms / windows, fast_ms, 1e6 * fast_ms / windows, speedup);
    std::string report(buf);
    if (speedup < 5.0) {
        report +=
            "note: speedup is below the 5x target on this host. Arbitrary weight maps "
            "admit no running-window reduction, so both paths share the same "
            "O(windows x template) inner product; the fast path's win is the constant "
            "factor (no per-window copies, hoisted template statistics, one fused pass) "
            "and is bounded by what this machine's memory lanes allow.\n";
    }
    std::cout << report;
    if (!a.out.empty()) write_file(a.out, report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted template matching toolkit"};
    app.require_subcommand(1);

    GenWeightsArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-weights", "generate a weight map file");
    gen.map.add_to(*gen_cmd, "gauss-ellipse");
    gen_cmd->add_option("--width", gen.width, "map width in pixels")->capture_default_str();
    gen_cmd->add_option("--height", gen.height, "map height in pixels")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "output weight-map path")->required();

    MatchArgs match;
    CLI::App* match_cmd = app.add_subcommand("match", "find a template in an image");
    match_cmd->add_option("--image", match.image, "search image (PGM)")->required();
    match_cmd->add_option("--template", match.tpl, "template image (PGM)")->required();
    auto* weights_opt =
        match_cmd->add_option("--weights", match.weights, "weight-map file (default: uniform)");
    auto* kind_opt = match.map.add_to(*match_cmd, "uniform");
    kind_opt->excludes(weights_opt);
    match_cmd->add_option("--anchor", match.anchor,
                          "anchor x,y in template coordinates (default: geometric center)");
    match_cmd->add_option("--label", match.label, "template eye side: right | left")
        ->capture_default_str();
    match_cmd->add_flag("--fast", match.fast, "use the hoisted sliding-window matcher");
    match_cmd->add_option("--region", match.region, "restrict top-left placements to x,y,w,h");
    match_cmd->add_option("--heatmap", match.heatmap, "also write the score map as a PGM heatmap");
    match_cmd->callback([&] { match.kind_given = kind_opt->count() > 0; });

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic eye-scene corpus");
    synth_cmd->add_option("--count", synth.corpus.count, "number of scenes")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.corpus.base_seed, "base seed; scene i uses seed+i")
        ->capture_default_str();
    synth_cmd->add_option("--image-width", synth.corpus.scene.image_w, "scene width")
        ->capture_default_str();
    synth_cmd->add_option("--image-height", synth.corpus.scene.image_h, "scene height")
        ->capture_default_str();
    synth_cmd->add_option("--iris-radius", synth.corpus.scene.iris_radius, "iris disc radius")
        ->capture_default_str();
    synth_cmd->add_option("--eye-rx", synth.corpus.scene.eye_rx, "sclera ellipse x radius")
        ->capture_default_str();
    synth_cmd->add_option("--eye-ry", synth.corpus.scene.eye_ry, "sclera ellipse y radius")
        ->capture_default_str();
    synth_cmd->add_option("--noise-sigma", synth.corpus.scene.noise_sigma,
                          "Gaussian pixel noise std-dev")
        ->capture_default_str();
    synth_cmd->add_option("--background", synth.corpus.scene.background_level,
                          "background intensity")
        ->capture_default_str();
    synth_cmd
        ->add_option("--placement-jitter", synth.corpus.scene.placement_jitter,
                     "max eye-center offset per axis")
        ->capture_default_str();
    synth_cmd->add_option("--distractors", synth.corpus.scene.distractor_count,
                          "clutter blobs per scene")
        ->capture_default_str();
    synth_cmd->add_option("--template-width", synth.corpus.template_w, "extracted template width")
        ->capture_default_str();
    synth_cmd
        ->add_option("--template-height", synth.corpus.template_h, "extracted template height")
        ->capture_default_str();
    synth_cmd
        ->add_option("--template-jitter", synth.corpus.template_jitter,
                     "max labeling error per axis when cutting templates")
        ->capture_default_str();
    synth_cmd->add_option("--out", synth.out, "output corpus directory")->required();

    EvaluateArgs eval;
    CLI::App* eval_cmd =
        app.add_subcommand("evaluate", "run the detection-rate experiment on a corpus");
    eval_cmd->add_option("--annotations", eval.annotations, "annotation CSV")->required();
    eval_cmd->add_option("--images", eval.images,
                         "base directory for image paths (default: the annotation file's)");
    eval_cmd->add_option("--templates", eval.templates, "directory holding templates.csv")
        ->required();
    eval_cmd->add_option("--counts", eval.counts, "ensemble sizes to sweep")
        ->delimiter(',')
        ->capture_default_str();
    eval_cmd->add_option("--threshold", eval.threshold, "detection threshold in pixels (strict <)")
        ->capture_default_str();
    eval_cmd->add_option("--kinds", eval.kinds, "weight-map kinds to sweep")
        ->delimiter(',')
        ->capture_default_str();
    eval_cmd->add_option("--threads", eval.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
    eval_cmd->add_option("--out", eval.out, "directory for report.txt/report.csv/matches.csv");

    BenchArgs bench;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "time the reference matcher against the fast one");
    bench_cmd->add_option("--image", bench.image, "search image (default: seeded noise)");
    bench_cmd->add_option("--template", bench.tpl, "template image (default: image cutout)");
    bench_cmd->add_option("--width", bench.width, "generated image width")->capture_default_str();
    bench_cmd->add_option("--height", bench.height, "generated image height")
        ->capture_default_str();
    bench_cmd->add_option("--template-width", bench.template_w, "generated template width")
        ->capture_default_str();
    bench_cmd->add_option("--template-height", bench.template_h, "generated template height")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed, "noise seed")->capture_default_str();
    bench_cmd->add_option("--iters", bench.iters, "timing repetitions")->capture_default_str();
    auto* bench_kind = bench.map.add_to(*bench_cmd, "gauss-ellipse");
    bench_cmd->add_option("--out", bench.out, "also write the bench report to this file");
    bench_cmd->callback([&] { bench.kind_given = bench_kind->count() > 0; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) run_gen_weights(gen);
        if (match_cmd->parsed()) run_match(match);
        if (synth_cmd->parsed()) run_synth(synth);
        if (eval_cmd->parsed()) run_evaluate(eval);
        if (bench_cmd->parsed()) run_bench(bench);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
