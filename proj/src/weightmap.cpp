#include "wtm/weightmap.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace wtm {

namespace {

void check_dims(int width, int height, const char* who) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument(std::string(who) + ": dimensions must be at least 1x1, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
}

Point resolve_center(const std::optional<Point>& center, int width, int height) {
    return center.value_or(Template::default_anchor(width, height));
}

}  // namespace

const char* to_string(WeightKind kind) noexcept {
    switch (kind) {
        case WeightKind::Uniform: return "uniform";
        case WeightKind::Gaussian: return "gaussian";
        case WeightKind::Exponential: return "exponential";
        case WeightKind::Custom: return "custom";
    }
    return "?";
}

WeightMap::WeightMap(int width, int height, std::vector<double> weights, WeightKind kind,
                     MapParams params)
    : width_(width), height_(height), weights_(std::move(weights)), kind_(kind),
      params_(std::move(params)) {
    check_dims(width, height, "WeightMap");
    const std::size_t expected = static_cast<std::size_t>(width) * height;
    if (weights_.size() != expected) {
        throw std::invalid_argument("WeightMap: weight count " + std::to_string(weights_.size()) +
                                    " does not match " + std::to_string(width) + "x" +
                                    std::to_string(height));
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
            throw std::invalid_argument("WeightMap: weight at index " + std::to_string(i) +
                                        " is not a positive finite value");
        }
    }
}

WeightMap uniform_map(int width, int height) {
    check_dims(width, height, "uniform_map");
    return {width, height, std::vector<double>(static_cast<std::size_t>(width) * height, 1.0),
            WeightKind::Uniform};
}

WeightMap gaussian_map(int width, int height, const GaussianParams& params) {
    check_dims(width, height, "gaussian_map");
    if (!(params.sigma_x > 0.0) || !(params.sigma_y > 0.0)) {
        throw std::invalid_argument("gaussian_map: sigma_x and sigma_y must be positive");
    }
    if (!(params.amplitude >= 1.0)) {
        throw std::invalid_argument("gaussian_map: amplitude must be at least 1");
    }

    GaussianParams resolved = params;
    resolved.center = resolve_center(params.center, width, height);
    const double x0 = resolved.center->x;
    const double y0 = resolved.center->y;
    const double inv2sx = 1.0 / (2.0 * params.sigma_x * params.sigma_x);
    const double inv2sy = 1.0 / (2.0 * params.sigma_y * params.sigma_y);

    std::vector<double> w(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const double dy2 = (y - y0) * (y - y0) * inv2sy;
        for (int x = 0; x < width; ++x) {
            const double dx2 = (x - x0) * (x - x0) * inv2sx;
            const double raw = params.amplitude * std::exp(-(dx2 + dy2));
            w[static_cast<std::size_t>(y) * width + x] = std::max(1.0, raw);
        }
    }
    return {width, height, std::move(w), WeightKind::Gaussian, resolved};
}

WeightMap exponential_map(int width, int height, const ExponentialParams& params) {
    check_dims(width, height, "exponential_map");
    if (!(params.b > 0.0) || !(params.c > 0.0)) {
        throw std::invalid_argument("exponential_map: b and c must be positive");
    }
    if (!(params.amplitude >= 1.0)) {
        throw std::invalid_argument("exponential_map: amplitude must be at least 1");
    }

    ExponentialParams resolved = params;
    resolved.center = resolve_center(params.center, width, height);
    const double x0 = resolved.center->x;
    const double y0 = resolved.center->y;

    std::vector<double> w(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double ex = (x - x0) / params.b;
            const double ey = (y - y0) / params.c;
            const double expo =
                params.literal_abs_sum ? std::abs(ex + ey) : std::abs(ex) + std::abs(ey);
            const double raw = params.amplitude * std::exp(-expo);
            w[static_cast<std::size_t>(y) * width + x] = std::max(1.0, raw);
        }
    }
    return {width, height, std::move(w), WeightKind::Exponential, resolved};
}

WeightMap map_for_template(const Template& tpl, WeightKind kind, const MapParams& params) {
    const int w = tpl.width();
    const int h = tpl.height();
    switch (kind) {
        case WeightKind::Uniform:
            return uniform_map(w, h);
        case WeightKind::Gaussian: {
            GaussianParams p = std::holds_alternative<GaussianParams>(params)
                                   ? std::get<GaussianParams>(params)
                                   : GaussianParams{};
            p.center = tpl.anchor;
            return gaussian_map(w, h, p);
        }
        case WeightKind::Exponential: {
            ExponentialParams p = std::holds_alternative<ExponentialParams>(params)
                                      ? std::get<ExponentialParams>(params)
                                      : ExponentialParams{};
            p.center = tpl.anchor;
            return exponential_map(w, h, p);
        }
        case WeightKind::Custom:
            break;  // values-only maps have no generator
    }
    throw std::invalid_argument("map_for_template: cannot generate a map of this kind");
}

MapSpec MapSpec::uniform() { return {"uniform", WeightKind::Uniform, std::monostate{}}; }

MapSpec MapSpec::gauss_ellipse() {
    return {"gauss-ellipse", WeightKind::Gaussian, GaussianParams{5.0, 16.0, 8.0, std::nullopt}};
}

MapSpec MapSpec::gauss_circle() {
    return {"gauss-circle", WeightKind::Gaussian, GaussianParams{5.0, 8.0, 8.0, std::nullopt}};
}

MapSpec MapSpec::exponential() {
    return {"exp", WeightKind::Exponential,
            ExponentialParams{5.0, 10.0, 10.0, std::nullopt, false}};
}

MapSpec MapSpec::from_name(const std::string& name) {
    if (name == "uniform") return uniform();
    if (name == "gauss-ellipse") return gauss_ellipse();
    if (name == "gauss-circle") return gauss_circle();
    if (name == "exp") return exponential();
    throw std::invalid_argument(
        "unknown weight-map kind '" + name +
        "' (expected uniform, gauss-ellipse, gauss-circle or exp)");
}

}  // namespace wtm
