#pragma once

#include <optional>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/matcher.hpp"
#include "wtm/weightmap.hpp"

namespace wtm {

/// Window-independent sums of the weighted correlation, computed once per
/// (template, map) pair. mean_x is the unweighted template mean; template_ss
/// is the weighted sum of squared deviations from it (the X-side denominator).
struct TemplateStats {
    double sum_w = 0.0;    // sum W_i
    double sum_wx = 0.0;   // sum W_i X_i
    double sum_wxx = 0.0;  // sum W_i X_i^2
    double mean_x = 0.0;   // unweighted mean of X
    double template_ss = 0.0;  // sum W_i (X_i - mean_x)^2
};

/// Per-window tables of sum Y, sum W_i Y_i and sum W_i Y_i^2 over all valid
/// placements. sum Y comes from a summed-area table in O(1) per window; the
/// weighted sums cannot be reduced to box sums for arbitrary W and are
/// accumulated directly.
struct SlidingSums {
    int width = 0;   // image_w - tpl_w + 1
    int height = 0;  // image_h - tpl_h + 1
    std::vector<double> sum_y;
    std::vector<double> sum_wy;
    std::vector<double> sum_wyy;
};

TemplateStats precompute_template(const Template& tpl, const WeightMap& map);

SlidingSums sliding_sums(const GrayImage& image, const WeightMap& map);

/// Sliding-window weighted NCC with the X-side hoisted out of the window
/// loop. Produces the same MatchResult as match_template: scores agree within
/// 1e-9 relative and the argmax position is identical under better_match().
MatchResult fast_match(const GrayImage& image, const Template& tpl, const WeightMap& map,
                       std::optional<Rect> region = std::nullopt);

/// Per-window scores of the fast path (NaN where skipped), for verification
/// against score_map() and for heatmap export.
ScoreGrid fast_score_map(const GrayImage& image, const Template& tpl, const WeightMap& map,
                         std::optional<Rect> region = std::nullopt);

}  // namespace wtm
