#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wtm/core.hpp"

namespace wtm {

/// Custom marks maps read back from text files: the format stores values
/// only, so the original recipe (if any) is unknown.
enum class WeightKind { Uniform, Gaussian, Exponential, Custom };

const char* to_string(WeightKind kind) noexcept;

/// Two-sigma Gaussian bump: A * exp(-((x-x0)^2 / (2 sx^2) + (y-y0)^2 / (2 sy^2))).
/// The center defaults to the map's geometric center when left unset.
struct GaussianParams {
    double amplitude = 5.0;
    double sigma_x = 16.0;
    double sigma_y = 8.0;
    std::optional<Point> center;

    friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

/// Exponential decay. The default (separable) form is
///   A * exp(-(|x-x0|/b + |y-y0|/c)),
/// peaked at the center. With literal_abs_sum the absolute value wraps the
/// whole sum, A * exp(-|(x-x0)/b + (y-y0)/c|), which peaks along the entire
/// anti-diagonal ridge (x-x0)/b = -(y-y0)/c instead of at a point.
struct ExponentialParams {
    double amplitude = 5.0;
    double b = 10.0;
    double c = 10.0;
    std::optional<Point> center;
    bool literal_abs_sum = false;

    friend bool operator==(const ExponentialParams&, const ExponentialParams&) = default;
};

using MapParams = std::variant<std::monostate, GaussianParams, ExponentialParams>;

/// Per-pixel positive weights matching a template's dimensions, row-major.
/// Generated maps are clamped below at 1, so their values lie in [1, A].
class WeightMap {
public:
    WeightMap(int width, int height, std::vector<double> weights, WeightKind kind,
              MapParams params = std::monostate{});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return weights_.size(); }

    double at(int x, int y) const { return weights_[static_cast<std::size_t>(y) * width_ + x]; }

    const std::vector<double>& weights() const noexcept { return weights_; }
    const double* data() const noexcept { return weights_.data(); }

    WeightKind kind() const noexcept { return kind_; }
    const MapParams& params() const noexcept { return params_; }

private:
    int width_;
    int height_;
    std::vector<double> weights_;
    WeightKind kind_;
    MapParams params_;
};

/// All weights exactly 1.
WeightMap uniform_map(int width, int height);

/// Gaussian bump evaluated at integer pixel coordinates, clamped below at 1.
WeightMap gaussian_map(int width, int height, const GaussianParams& params);

/// Exponential decay evaluated at integer pixel coordinates, clamped below at 1.
WeightMap exponential_map(int width, int height, const ExponentialParams& params);

/// Map with the template's dimensions, centered at the template's anchor.
/// Spread parameters are not rescaled with size.
WeightMap map_for_template(const Template& tpl, WeightKind kind, const MapParams& params);

/// A named weight-map recipe, e.g. the experimental grid entries
/// uniform / gauss-ellipse / gauss-circle / exp.
struct MapSpec {
    std::string name;
    WeightKind kind = WeightKind::Uniform;
    MapParams params;

    static MapSpec uniform();
    static MapSpec gauss_ellipse();  // A=5, sigma_x=16, sigma_y=8
    static MapSpec gauss_circle();   // A=5, sigma_x=8,  sigma_y=8
    static MapSpec exponential();    // A=5, b=10, c=10

    /// Parses one of the four names above; unknown names raise std::invalid_argument.
    static MapSpec from_name(const std::string& name);
};

}  // namespace wtm
