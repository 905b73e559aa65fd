#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/weightmap.hpp"

namespace wtm {

/// Sum of (weighted) squared deviations below this is treated as zero
/// variance: the window is degenerate and correlation is undefined on it.
inline constexpr double kVarianceFloor = 1e-12;

/// Best window found by a sliding-window search. center = top_left + anchor.
struct MatchResult {
    PixelPoint top_left;
    Point center;
    double score = 0.0;
    int template_id = 0;
};

/// Scores of every valid placement of one template. scores[y * width + x]
/// belongs to top_left (origin.x + x, origin.y + y); skipped (degenerate)
/// windows hold a quiet NaN.
struct ScoreGrid {
    int width = 0;
    int height = 0;
    PixelPoint origin;
    std::vector<double> scores;

    double at(int x, int y) const { return scores[static_cast<std::size_t>(y) * width + x]; }
};

/// Normalized correlation coefficient between two equally sized patches,
/// r in [-1, 1]. Patches need n >= 2 and non-degenerate variance.
double ncc(const Patch& x, const Patch& y);

/// Weighted normalized correlation: every deviation product is multiplied by
/// the per-pixel weight. Deviations are taken from the unweighted means.
/// Reduces to ncc() when all weights are 1.
double weighted_ncc(const Patch& x, const Patch& y, const WeightMap& weights);

/// One template + the map scoring it.
struct EnsembleEntry {
    const Template* tpl = nullptr;
    const WeightMap* map = nullptr;
};

/// Ordering shared by every search and reduction: higher score wins, then
/// lower template id, then lower y, then lower x. Gives bit-identical argmax
/// results regardless of evaluation order or partitioning.
bool better_match(const MatchResult& a, const MatchResult& b) noexcept;

/// Reference sliding-window search: evaluates weighted_ncc at every placement
/// of the template fully inside the image (or inside region, when given) and
/// returns the best window. Degenerate windows are skipped; if every window
/// is degenerate a NoValidWindowError is raised.
MatchResult match_template(const GrayImage& image, const Template& tpl, const WeightMap& map,
                           std::optional<Rect> region = std::nullopt);

/// Per-window scores of the reference search (NaN where skipped).
ScoreGrid score_map(const GrayImage& image, const Template& tpl, const WeightMap& map,
                    std::optional<Rect> region = std::nullopt);

/// Runs match_template for every entry and returns the overall best match
/// under better_match(). Entries whose search finds no valid window are
/// skipped; NoValidWindowError propagates only if all of them fail.
MatchResult match_ensemble(const GrayImage& image, std::span<const EnsembleEntry> entries,
                           std::optional<Rect> region = std::nullopt);

namespace detail {

/// Validates a region against image and template dims and returns the
/// iteration rectangle of valid top-left placements.
Rect placement_rect(const GrayImage& image, int tpl_w, int tpl_h, const std::optional<Rect>& region);

/// Weighted NCC on raw spans without argument validation; nullopt when either
/// side's weighted sum of squared deviations falls below kVarianceFloor.
std::optional<double> wncc_unchecked(std::span<const double> x, std::span<const double> y,
                                     std::span<const double> w) noexcept;

}  // namespace detail

}  // namespace wtm
