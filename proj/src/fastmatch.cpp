#include "wtm/fastmatch.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wtm/errors.hpp"

namespace wtm {

namespace {

void check_template_map(const Template& tpl, const WeightMap& map) {
    if (map.width() != tpl.width() || map.height() != tpl.height()) {
        throw std::invalid_argument("weight map " + std::to_string(map.width()) + "x" +
                                    std::to_string(map.height()) + " does not match template " +
                                    std::to_string(tpl.width()) + "x" +
                                    std::to_string(tpl.height()));
    }
}

// Hoisted X-side coefficients: w_tab is the raw weight row, wx_tab holds
// W_i (X_i - mean_x), so the window loop reduces to two fused accumulations.
struct Precomputed {
    TemplateStats stats;
    std::vector<double> w_tab;
    std::vector<double> wx_tab;
};

Precomputed build_precomputed(const Template& tpl, const WeightMap& map) {
    Precomputed pre;
    pre.stats = precompute_template(tpl, map);
    const std::vector<double>& x = tpl.image.pixels();
    const std::vector<double>& w = map.weights();
    pre.w_tab = w;
    pre.wx_tab.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        pre.wx_tab[i] = w[i] * (x[i] - pre.stats.mean_x);
    }
    return pre;
}

// Summed-area table over intensities shifted by the global image mean.
// Centering bounds the cancellation error of window means: 255-scale values
// summed over large windows would otherwise lose several digits.
struct CenteredSat {
    std::vector<double> table;  // (h+1) x (w+1), zero top row and left column
    double offset = 0.0;        // the subtracted global mean
    int stride = 0;

    double window_sum(int x, int y, int w, int h) const {
        const double* t = table.data();
        return t[static_cast<std::size_t>(y + h) * stride + (x + w)] -
               t[static_cast<std::size_t>(y) * stride + (x + w)] -
               t[static_cast<std::size_t>(y + h) * stride + x] +
               t[static_cast<std::size_t>(y) * stride + x];
    }
};

CenteredSat build_sat(const GrayImage& image) {
    const int w = image.width();
    const int h = image.height();
    CenteredSat sat;
    sat.stride = w + 1;

    double total = 0.0;
    for (double v : image.pixels()) total += v;
    sat.offset = total / static_cast<double>(image.pixels().size());

    sat.table.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        const double* src = image.row(y);
        const double* above = sat.table.data() + static_cast<std::size_t>(y) * sat.stride;
        double* dst = sat.table.data() + static_cast<std::size_t>(y + 1) * sat.stride;
        double row_sum = 0.0;
        for (int x = 0; x < w; ++x) {
            row_sum += src[x] - sat.offset;
            dst[x + 1] = row_sum + above[x + 1];
        }
    }
    return sat;
}

// Evaluates every placement, invoking sink(x, y, score) with NaN for
// degenerate windows. Coordinates are absolute image top-lefts.
template <typename Sink>
void scan_windows(const GrayImage& image, const Precomputed& pre, int tpl_w, int tpl_h,
                  const Rect& placements, Sink&& sink) {
    const CenteredSat sat = build_sat(image);
    const double n = static_cast<double>(tpl_w) * tpl_h;
    const double* w_tab = pre.w_tab.data();
    const double* wx_tab = pre.wx_tab.data();
    const double template_ss = pre.stats.template_ss;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (int wy = placements.y; wy < placements.y + placements.h; ++wy) {
        for (int wx = placements.x; wx < placements.x + placements.w; ++wx) {
            // mean of the window, reconstructed from the centered table
            const double window_mean = sat.offset + sat.window_sum(wx, wy, tpl_w, tpl_h) / n;

            double num = 0.0;
            double den_y = 0.0;
            for (int ty = 0; ty < tpl_h; ++ty) {
                const double* yrow = image.row(wy + ty) + wx;
                const double* wr = w_tab + static_cast<std::size_t>(ty) * tpl_w;
                const double* wxr = wx_tab + static_cast<std::size_t>(ty) * tpl_w;
                // The reduction order is explicitly relaxed so the row
                // vectorizes; scores stay within the documented 1e-9 of the
                // reference, and windows sit far from the variance floor, so
                // the skip mask cannot flip.
#pragma omp simd reduction(+ : num, den_y)
                for (int tx = 0; tx < tpl_w; ++tx) {
                    const double t = yrow[tx] - window_mean;
                    num += wxr[tx] * t;
                    den_y += wr[tx] * t * t;
                }
            }
            if (den_y < kVarianceFloor) {
                sink(wx, wy, nan);
            } else {
                sink(wx, wy, num / std::sqrt(template_ss * den_y));
            }
        }
    }
}

}  // namespace

TemplateStats precompute_template(const Template& tpl, const WeightMap& map) {
    check_template_map(tpl, map);
    const std::vector<double>& x = tpl.image.pixels();
    const std::vector<double>& w = map.weights();

    TemplateStats stats;
    double sum_x = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        stats.sum_w += w[i];
        stats.sum_wx += w[i] * x[i];
        stats.sum_wxx += w[i] * x[i] * x[i];
        sum_x += x[i];
    }
    stats.mean_x = sum_x / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - stats.mean_x;
        stats.template_ss += w[i] * dx * dx;
    }
    if (stats.template_ss < kVarianceFloor) {
        throw DegenerateTemplateError("template has (near-)zero weighted variance");
    }
    return stats;
}

SlidingSums sliding_sums(const GrayImage& image, const WeightMap& map) {
    const int tpl_w = map.width();
    const int tpl_h = map.height();
    const Rect placements = detail::placement_rect(image, tpl_w, tpl_h, std::nullopt);
    const CenteredSat sat = build_sat(image);
    const double n = static_cast<double>(tpl_w) * tpl_h;

    SlidingSums sums;
    sums.width = placements.w;
    sums.height = placements.h;
    const std::size_t total = static_cast<std::size_t>(placements.w) * placements.h;
    sums.sum_y.resize(total);
    sums.sum_wy.resize(total);
    sums.sum_wyy.resize(total);

    const double* w_tab = map.data();
    for (int wy = 0; wy < placements.h; ++wy) {
        for (int wx = 0; wx < placements.w; ++wx) {
            double swy = 0.0;
            double swyy = 0.0;
            for (int ty = 0; ty < tpl_h; ++ty) {
                const double* yrow = image.row(wy + ty) + wx;
                const double* wr = w_tab + static_cast<std::size_t>(ty) * tpl_w;
#pragma omp simd reduction(+ : swy, swyy)
                for (int tx = 0; tx < tpl_w; ++tx) {
                    swy += wr[tx] * yrow[tx];
                    swyy += wr[tx] * yrow[tx] * yrow[tx];
                }
            }
            const std::size_t at = static_cast<std::size_t>(wy) * placements.w + wx;
            sums.sum_y[at] = sat.window_sum(wx, wy, tpl_w, tpl_h) + n * sat.offset;
            sums.sum_wy[at] = swy;
            sums.sum_wyy[at] = swyy;
        }
    }
    return sums;
}

MatchResult fast_match(const GrayImage& image, const Template& tpl, const WeightMap& map,
                       std::optional<Rect> region) {
    const Rect placements = detail::placement_rect(image, tpl.width(), tpl.height(), region);
    Precomputed pre;
    try {
        pre = build_precomputed(tpl, map);
    } catch (const DegenerateTemplateError&) {
        // The reference search reports a constant template as a search with
        // no scorable windows; mirror that so callers see one error surface.
        throw NoValidWindowError("fast_match: every window is degenerate");
    }

    MatchResult best;
    bool found = false;
    scan_windows(image, pre, tpl.width(), tpl.height(), placements,
                 [&](int x, int y, double score) {
                     if (std::isnan(score)) return;
                     MatchResult candidate{
                         {x, y}, {x + tpl.anchor.x, y + tpl.anchor.y}, score, tpl.id};
                     if (!found || better_match(candidate, best)) {
                         best = candidate;
                         found = true;
                     }
                 });
    if (!found) {
        throw NoValidWindowError("fast_match: every window is degenerate");
    }
    return best;
}

ScoreGrid fast_score_map(const GrayImage& image, const Template& tpl, const WeightMap& map,
                         std::optional<Rect> region) {
    const Rect placements = detail::placement_rect(image, tpl.width(), tpl.height(), region);

    ScoreGrid grid;
    grid.width = placements.w;
    grid.height = placements.h;
    grid.origin = {placements.x, placements.y};
    grid.scores.assign(static_cast<std::size_t>(placements.w) * placements.h,
                       std::numeric_limits<double>::quiet_NaN());

    Precomputed pre;
    try {
        pre = build_precomputed(tpl, map);
    } catch (const DegenerateTemplateError&) {
        return grid;  // all skipped, like the reference grid
    }

    scan_windows(image, pre, tpl.width(), tpl.height(), placements,
                 [&](int x, int y, double score) {
                     const std::size_t at =
                         static_cast<std::size_t>(y - placements.y) * placements.w +
                         (x - placements.x);
                     grid.scores[at] = score;
                 });
    return grid;
}

}  // namespace wtm
