#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/matcher.hpp"
#include "wtm/synth.hpp"
#include "wtm/weightmap.hpp"

namespace wtm {

// Pure parse/serialize functions; the CLI layer owns all file-system access.
// Readers reject trailing bytes after the declared payload, writers are
// canonical: the same in-memory value always produces identical bytes.

/// Binary PGM (magic P5, maxval <= 255). '#' comments may appear anywhere in
/// the header. Malformed input raises ParseError with a byte offset.
GrayImage read_pgm(std::string_view bytes);

/// Canonical form "P5\n<w> <h>\n255\n" + raster, intensities rounded to the
/// nearest integer.
std::string write_pgm(const GrayImage& image);

/// Annotation CSV with the exact header
/// image_path,right_eye_x,right_eye_y,left_eye_x,left_eye_y and one row per
/// image. No quoting; paths must not contain commas. Errors carry the
/// 1-based line number.
std::vector<Annotation> read_annotations(std::string_view text);
std::string write_annotations(std::span<const Annotation> annotations);

/// Weight-map text format: line 1 "width height", then height rows of width
/// decimal values at 9 significant digits, space-separated, top to bottom.
WeightMap read_weightmap(std::string_view text);
std::string write_weightmap(const WeightMap& map);

/// Template manifest CSV, header
/// template_path,label,anchor_x,anchor_y — one row per template PGM, in id
/// order. Carries the anchors and eye labels that the PGM raster cannot.
struct TemplateManifestRow {
    std::string path;
    EyeSide label = EyeSide::Right;
    Point anchor;

    friend bool operator==(const TemplateManifestRow&, const TemplateManifestRow&) = default;
};

std::vector<TemplateManifestRow> read_template_manifest(std::string_view text);
std::string write_template_manifest(std::span<const TemplateManifestRow> rows);

/// Renders a score grid as a grayscale image: finite scores rescale affinely
/// so min -> 0 and max -> 255, skipped windows go to 0, and a constant score
/// field maps to 128 everywhere.
GrayImage render_heatmap(const ScoreGrid& grid);

}  // namespace wtm
