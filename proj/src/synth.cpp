#include "wtm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "wtm/rng.hpp"

namespace wtm {

namespace {

// Salt mixed into a scene's seed to derive the stream for template-extraction
// jitter, so scene pixels and labeling error are independent but both
// reproducible from the corpus seed.
constexpr std::uint64_t kTemplateJitterSalt = 0x74656d706c617465ULL;  // "template"

constexpr int kScleraLift = 70;  // sclera level above background
constexpr int kIrisDrop = 70;    // iris level below background
constexpr int kDuctDrop = 35;    // inner-corner duct mark below background

struct Levels {
    double background;
    double sclera;
    double iris;
    double duct;
};

void validate(const SceneParams& p) {
    if (p.image_w < 8 || p.image_h < 8) {
        throw std::invalid_argument("scene: image must be at least 8x8");
    }
    if (p.eye_rx < 1 || p.eye_ry < 1) {
        throw std::invalid_argument("scene: eye radii must be positive");
    }
    if (p.iris_radius < 1 || p.iris_radius >= std::min(p.eye_rx, p.eye_ry)) {
        throw std::invalid_argument("scene: iris_radius must be in [1, min(eye_rx, eye_ry))");
    }
    if (p.noise_sigma < 0.0) {
        throw std::invalid_argument("scene: noise_sigma must be non-negative");
    }
    if (p.background_level - kIrisDrop < 0 || p.background_level + kScleraLift > 255) {
        throw std::invalid_argument("scene: background_level must be in [" +
                                    std::to_string(kIrisDrop) + ", " +
                                    std::to_string(255 - kScleraLift) + "]");
    }
    if (p.placement_jitter < 0 || p.distractor_count < 0) {
        throw std::invalid_argument("scene: jitter and distractor_count must be non-negative");
    }
}

void fill_ellipse(std::vector<double>& img, int w, int h, PixelPoint c, double rx, double ry,
                  double level) {
    const int y0 = std::max(0, c.y - static_cast<int>(ry));
    const int y1 = std::min(h - 1, c.y + static_cast<int>(ry));
    const int x0 = std::max(0, c.x - static_cast<int>(rx));
    const int x1 = std::min(w - 1, c.x + static_cast<int>(rx));
    for (int y = y0; y <= y1; ++y) {
        const double ny = (y - c.y) / ry;
        for (int x = x0; x <= x1; ++x) {
            const double nx = (x - c.x) / rx;
            if (nx * nx + ny * ny <= 1.0) {
                img[static_cast<std::size_t>(y) * w + x] = level;
            }
        }
    }
}

void render_eye(std::vector<double>& img, const SceneParams& p, PixelPoint c, bool inner_is_right,
                const Levels& levels) {
    fill_ellipse(img, p.image_w, p.image_h, c, p.eye_rx, p.eye_ry, levels.sclera);
    // Duct mark at the inner (nose-side) corner; makes the two eyes chiral so
    // same-side templates prefer their own side.
    const int duct_r = std::max(1, (p.iris_radius + 1) / 2);
    const int duct_x = inner_is_right ? c.x + p.eye_rx - duct_r : c.x - p.eye_rx + duct_r;
    fill_ellipse(img, p.image_w, p.image_h, {duct_x, c.y}, duct_r, duct_r, levels.duct);
    fill_ellipse(img, p.image_w, p.image_h, c, p.iris_radius, p.iris_radius, levels.iris);
}

}  // namespace

std::pair<GrayImage, Annotation> generate_scene(const SceneParams& params) {
    validate(params);
    const int w = params.image_w;
    const int h = params.image_h;
    const int j = params.placement_jitter;

    const PixelPoint nominal_right{static_cast<int>(std::lround(w * 0.3)),
                                   static_cast<int>(std::lround(h * 0.45))};
    const PixelPoint nominal_left{static_cast<int>(std::lround(w * 0.7)), nominal_right.y};

    // Placement feasibility is checked against the jitter extremes, so a
    // given parameter set either works for every seed or fails for every seed.
    for (const PixelPoint& c : {nominal_right, nominal_left}) {
        if (c.x - j - params.eye_rx < 0 || c.x + j + params.eye_rx > w - 1 ||
            c.y - j - params.eye_ry < 0 || c.y + j + params.eye_ry > h - 1) {
            throw PlacementError("eye ellipse would exit the image bounds");
        }
    }
    if ((nominal_left.x - j) - (nominal_right.x + j) <= 2 * params.eye_rx) {
        throw PlacementError("eye ellipses would overlap");
    }

    SplitMix64 rng(params.seed);
    // Draw order is part of the format: right eye jitter (x, y), left eye
    // jitter (x, y), then distractors, then row-major pixel noise.
    const PixelPoint right{nominal_right.x + rng.next_int(-j, j),
                           nominal_right.y + rng.next_int(-j, j)};
    const PixelPoint left{nominal_left.x + rng.next_int(-j, j),
                          nominal_left.y + rng.next_int(-j, j)};

    const Levels levels{static_cast<double>(params.background_level),
                        static_cast<double>(params.background_level + kScleraLift),
                        static_cast<double>(params.background_level - kIrisDrop),
                        static_cast<double>(params.background_level - kDuctDrop)};

    std::vector<double> img(static_cast<std::size_t>(w) * h, levels.background);
    render_eye(img, params, right, /*inner_is_right=*/true, levels);
    render_eye(img, params, left, /*inner_is_right=*/false, levels);

    for (int k = 0; k < params.distractor_count; ++k) {
        // Per attempt: type bit, radius, center x, center y. A blob must keep
        // clear of both eye boxes; after 100 failed attempts it is dropped.
        for (int attempt = 0; attempt < 100; ++attempt) {
            const bool bright = (rng.next() & 1) != 0;
            const int r = rng.next_int(params.iris_radius, params.eye_ry);
            const int ext_x = bright ? 2 * r : r;
            const int ext_y = r;
            if (w - 1 - ext_x < ext_x || h - 1 - ext_y < ext_y) break;
            const PixelPoint c{rng.next_int(ext_x, w - 1 - ext_x),
                               rng.next_int(ext_y, h - 1 - ext_y)};
            const auto clear_of = [&](const PixelPoint& eye) {
                return std::abs(c.x - eye.x) > params.eye_rx + ext_x + 2 ||
                       std::abs(c.y - eye.y) > params.eye_ry + ext_y + 2;
            };
            if (!clear_of(right) || !clear_of(left)) continue;
            if (bright) {
                fill_ellipse(img, w, h, c, 2.0 * r, r, levels.sclera);
            } else {
                fill_ellipse(img, w, h, c, r, r, levels.iris);
            }
            break;
        }
    }

    if (params.noise_sigma > 0.0) {
        for (double& v : img) {
            const double noisy = v + params.noise_sigma * rng.next_gaussian();
            v = std::clamp(static_cast<double>(std::llround(noisy)), 0.0, 255.0);
        }
    }

    Annotation ann;
    ann.right_eye = right;
    ann.left_eye = left;
    return {GrayImage(w, h, std::move(img)), std::move(ann)};
}

Template extract_template(const GrayImage& image, PixelPoint center, int width, int height,
                          EyeSide label, int id) {
    if (width < 1 || height < 1 || width * height < 2) {
        throw std::invalid_argument("extract_template: window must have at least 2 pixels, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
    const PixelPoint top_left{center.x - width / 2, center.y - height / 2};
    Patch patch = extract_patch(image, top_left, width, height);
    const Point anchor{static_cast<double>(center.x - top_left.x),
                       static_cast<double>(center.y - top_left.y)};
    return {GrayImage(width, height, std::move(patch.values)), anchor, label, id};
}

Corpus generate_corpus(const CorpusParams& params) {
    if (params.count < 0) {
        throw std::invalid_argument("generate_corpus: count must be non-negative");
    }
    if (params.template_jitter < 0) {
        throw std::invalid_argument("generate_corpus: template_jitter must be non-negative");
    }

    Corpus corpus;
    corpus.images.reserve(params.count);
    corpus.annotations.reserve(params.count);
    corpus.templates.reserve(2 * static_cast<std::size_t>(params.count));

    for (int i = 0; i < params.count; ++i) {
        SceneParams sp = params.scene;
        sp.seed = params.base_seed + static_cast<std::uint64_t>(i);
        auto [image, ann] = generate_scene(sp);

        char id[32];
        std::snprintf(id, sizeof id, "scene_%04d", i);
        ann.image_id = id;

        // Labeling-error jitter: left eye first, then right, x before y.
        SplitMix64 jitter(sp.seed ^ kTemplateJitterSalt);
        const int jt = params.template_jitter;
        const PixelPoint left_claim{ann.left_eye.x + jitter.next_int(-jt, jt),
                                    ann.left_eye.y + jitter.next_int(-jt, jt)};
        const PixelPoint right_claim{ann.right_eye.x + jitter.next_int(-jt, jt),
                                     ann.right_eye.y + jitter.next_int(-jt, jt)};

        corpus.templates.push_back(extract_template(image, left_claim, params.template_w,
                                                    params.template_h, EyeSide::Left, 2 * i));
        corpus.templates.push_back(extract_template(image, right_claim, params.template_w,
                                                    params.template_h, EyeSide::Right, 2 * i + 1));
        corpus.images.push_back(std::move(image));
        corpus.annotations.push_back(std::move(ann));
    }
    return corpus;
}

}  // namespace wtm
