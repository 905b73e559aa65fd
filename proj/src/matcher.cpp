#include "wtm/matcher.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wtm/errors.hpp"

namespace wtm {

namespace detail {

Rect placement_rect(const GrayImage& image, int tpl_w, int tpl_h,
                    const std::optional<Rect>& region) {
    Rect search{0, 0, image.width(), image.height()};
    if (region) {
        const Rect& r = *region;
        if (r.w < 1 || r.h < 1) {
            throw std::invalid_argument("search region is empty");
        }
        if (r.x < 0 || r.y < 0 || r.x + r.w > image.width() || r.y + r.h > image.height()) {
            throw std::invalid_argument("search region extends outside the image");
        }
        search = r;
    }
    if (tpl_w > search.w || tpl_h > search.h) {
        throw std::invalid_argument("template " + std::to_string(tpl_w) + "x" +
                                    std::to_string(tpl_h) + " does not fit the " +
                                    std::to_string(search.w) + "x" + std::to_string(search.h) +
                                    " search area");
    }
    return {search.x, search.y, search.w - tpl_w + 1, search.h - tpl_h + 1};
}

std::optional<double> wncc_unchecked(std::span<const double> x, std::span<const double> y,
                                     std::span<const double> w) noexcept {
    const std::size_t n = x.size();

    double sum_x = 0.0;
    double sum_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_x += x[i];
        sum_y += y[i];
    }
    const double mean_x = sum_x / static_cast<double>(n);
    const double mean_y = sum_y / static_cast<double>(n);

    double num = 0.0;
    double ss_x = 0.0;
    double ss_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        num += w[i] * dx * dy;
        ss_x += w[i] * dx * dx;
        ss_y += w[i] * dy * dy;
    }
    if (ss_x < kVarianceFloor || ss_y < kVarianceFloor) {
        return std::nullopt;
    }
    return num / (std::sqrt(ss_x) * std::sqrt(ss_y));
}

}  // namespace detail

namespace {

void check_patch_pair(const Patch& x, const Patch& y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("patch sizes differ: " + std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()));
    }
    if (x.size() < 2) {
        throw std::invalid_argument("correlation needs at least 2 pixels, got " +
                                    std::to_string(x.size()));
    }
}

}  // namespace

double ncc(const Patch& x, const Patch& y) {
    check_patch_pair(x, y);
    const std::vector<double> ones(x.size(), 1.0);
    const auto r = detail::wncc_unchecked(x.values, y.values, ones);
    if (!r) {
        throw DegenerateWindowError("ncc: a patch has (near-)zero variance");
    }
    return *r;
}

double weighted_ncc(const Patch& x, const Patch& y, const WeightMap& weights) {
    check_patch_pair(x, y);
    if (weights.size() != x.size()) {
        throw std::invalid_argument("weight map size " + std::to_string(weights.size()) +
                                    " does not match patch size " + std::to_string(x.size()));
    }
    // WeightMap construction already rejects non-positive weights.
    const auto r = detail::wncc_unchecked(x.values, y.values, weights.weights());
    if (!r) {
        throw DegenerateWindowError("weighted_ncc: a patch has (near-)zero weighted variance");
    }
    return *r;
}

bool better_match(const MatchResult& a, const MatchResult& b) noexcept {
    if (a.score != b.score) return a.score > b.score;
    if (a.template_id != b.template_id) return a.template_id < b.template_id;
    if (a.top_left.y != b.top_left.y) return a.top_left.y < b.top_left.y;
    return a.top_left.x < b.top_left.x;
}

namespace {

void check_template_map(const Template& tpl, const WeightMap& map) {
    if (map.width() != tpl.width() || map.height() != tpl.height()) {
        throw std::invalid_argument("weight map " + std::to_string(map.width()) + "x" +
                                    std::to_string(map.height()) + " does not match template " +
                                    std::to_string(tpl.width()) + "x" +
                                    std::to_string(tpl.height()));
    }
}

// Scratch-buffer window copy; keeps the reference path free of per-window
// allocations without changing what it computes.
void fill_window(const GrayImage& image, int x0, int y0, int w, int h, std::vector<double>& out) {
    out.clear();
    for (int y = y0; y < y0 + h; ++y) {
        const double* row = image.row(y);
        out.insert(out.end(), row + x0, row + x0 + w);
    }
}

}  // namespace

MatchResult match_template(const GrayImage& image, const Template& tpl, const WeightMap& map,
                           std::optional<Rect> region) {
    check_template_map(tpl, map);
    const Rect placements = detail::placement_rect(image, tpl.width(), tpl.height(), region);

    MatchResult best;
    best.score = -std::numeric_limits<double>::infinity();
    bool found = false;

    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(tpl.width()) * tpl.height());

    for (int y = placements.y; y < placements.y + placements.h; ++y) {
        for (int x = placements.x; x < placements.x + placements.w; ++x) {
            fill_window(image, x, y, tpl.width(), tpl.height(), window);
            const auto r =
                detail::wncc_unchecked(tpl.image.pixels(), window, map.weights());
            if (!r) continue;
            MatchResult candidate{{x, y}, {x + tpl.anchor.x, y + tpl.anchor.y}, *r, tpl.id};
            if (!found || better_match(candidate, best)) {
                best = candidate;
                found = true;
            }
        }
    }
    if (!found) {
        throw NoValidWindowError("match_template: every window is degenerate");
    }
    return best;
}

ScoreGrid score_map(const GrayImage& image, const Template& tpl, const WeightMap& map,
                    std::optional<Rect> region) {
    check_template_map(tpl, map);
    const Rect placements = detail::placement_rect(image, tpl.width(), tpl.height(), region);

    ScoreGrid grid;
    grid.width = placements.w;
    grid.height = placements.h;
    grid.origin = {placements.x, placements.y};
    grid.scores.assign(static_cast<std::size_t>(placements.w) * placements.h,
                       std::numeric_limits<double>::quiet_NaN());

    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(tpl.width()) * tpl.height());

    for (int y = 0; y < placements.h; ++y) {
        for (int x = 0; x < placements.w; ++x) {
            fill_window(image, placements.x + x, placements.y + y, tpl.width(), tpl.height(),
                        window);
            const auto r = detail::wncc_unchecked(tpl.image.pixels(), window, map.weights());
            if (r) grid.scores[static_cast<std::size_t>(y) * placements.w + x] = *r;
        }
    }
    return grid;
}

MatchResult match_ensemble(const GrayImage& image, std::span<const EnsembleEntry> entries,
                           std::optional<Rect> region) {
    if (entries.empty()) {
        throw std::invalid_argument("match_ensemble: empty template list");
    }
    MatchResult best;
    bool found = false;
    for (const EnsembleEntry& entry : entries) {
        try {
            const MatchResult r = match_template(image, *entry.tpl, *entry.map, region);
            if (!found || better_match(r, best)) {
                best = r;
                found = true;
            }
        } catch (const NoValidWindowError&) {
            // Propagated below only if every template fails.
        }
    }
    if (!found) {
        throw NoValidWindowError("match_ensemble: every template found only degenerate windows");
    }
    return best;
}

}  // namespace wtm
