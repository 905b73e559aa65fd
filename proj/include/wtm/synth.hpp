#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wtm/core.hpp"

namespace wtm {

/// Geometry and noise of one synthetic eye scene. Both eyes use the same
/// ellipse radii; centers land near (0.3 w, 0.45 h) and (0.7 w, 0.45 h) with
/// a seeded jitter of up to placement_jitter pixels per axis.
struct SceneParams {
    int image_w = 96;
    int image_h = 72;
    int iris_radius = 3;
    int eye_rx = 8;
    int eye_ry = 5;
    double noise_sigma = 0.0;     // Gaussian pixel noise std-dev, [0,255] units
    int background_level = 110;
    std::uint64_t seed = 0;
    int placement_jitter = 3;     // max |offset| per axis of each eye center
    int distractor_count = 0;     // clutter blobs rendered away from the eyes
};

/// Ground truth for one image: the two rendered iris centers.
struct Annotation {
    std::string image_id;
    PixelPoint right_eye;
    PixelPoint left_eye;

    friend bool operator==(const Annotation&, const Annotation&) = default;
};

/// Renders a scene: flat background, per eye a bright sclera ellipse
/// (background + 70), a dark inner-corner duct mark that makes left and right
/// eyes chiral, and a dark iris disc (background - 70), then optional
/// distractor blobs and seeded Gaussian pixel noise rounded to integer
/// intensities and clamped to [0, 255]. Identical (seed, params) give
/// bit-identical pixels. The annotation's image_id is left empty; corpus
/// builders fill it in.
std::pair<GrayImage, Annotation> generate_scene(const SceneParams& params);

/// Cuts a width x height template whose window is placed so the given center
/// lands at (width/2, height/2) in template coordinates (integer division);
/// that point becomes the anchor. Windows of fewer than two pixels are
/// rejected, as they are useless for correlation.
Template extract_template(const GrayImage& image, PixelPoint center, int width, int height,
                          EyeSide label, int id = 0);

/// A generated image set with ground truth and the templates cut from it.
struct Corpus {
    std::vector<GrayImage> images;
    std::vector<Annotation> annotations;
    std::vector<Template> templates;
};

/// Parameters of a reproducible corpus. Scene i uses seed base_seed + i and
/// image_id "scene_%04d" (its index). From every scene two templates are
/// extracted, left eye first, ids running 0, 1, 2, ... in scene order; the
/// claimed center of each is the true eye center plus a seeded jitter of up
/// to template_jitter pixels per axis, which models hand-labeling error.
struct CorpusParams {
    SceneParams scene;
    int count = 1;
    std::uint64_t base_seed = 0;
    int template_w = 32;
    int template_h = 16;
    int template_jitter = 0;
};

Corpus generate_corpus(const CorpusParams& params);

}  // namespace wtm
