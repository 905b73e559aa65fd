#pragma once

#include <string>
#include <vector>

#include "wtm/errors.hpp"

namespace wtm {

/// Continuous image-plane point. Origin at the top-left corner, x grows
/// rightward, y grows downward.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Integer pixel coordinate, same orientation as Point.
struct PixelPoint {
    int x = 0;
    int y = 0;

    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

/// Axis-aligned integer rectangle: [x, x+w) x [y, y+h).
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// 2D grayscale raster. Intensities are real-valued doubles in [0, 255],
/// stored row-major with pixel (0, 0) first. Source values come from 8-bit
/// rasters and are kept on that scale; correlation is affine-invariant, so
/// no normalization is applied.
///
/// Instances are immutable once constructed and safe to share across threads.
class GrayImage {
public:
    GrayImage(int width, int height, std::vector<double> pixels);

    /// Constant image of the given level.
    static GrayImage filled(int width, int height, double value);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    double at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

    const std::vector<double>& pixels() const noexcept { return pixels_; }
    const double* data() const noexcept { return pixels_.data(); }
    const double* row(int y) const noexcept { return pixels_.data() + static_cast<std::size_t>(y) * width_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    int width_;
    int height_;
    std::vector<double> pixels_;
};

/// Which eye a template depicts. "Right" is the subject's right eye, which
/// appears on the viewer's left in an image.
enum class EyeSide { Right, Left };

const char* to_string(EyeSide side) noexcept;
EyeSide eye_side_from_string(const std::string& name);

/// A grayscale probe patch with an anchor marking the eye center in template
/// coordinates and an ordinal id used for deterministic ordering.
struct Template {
    GrayImage image;
    Point anchor;
    EyeSide label = EyeSide::Right;
    int id = 0;

    Template(GrayImage image, Point anchor, EyeSide label, int id);

    /// Geometric center ((w-1)/2, (h-1)/2); half-integer for even dimensions
    /// so generated weight maps stay symmetric.
    static Point default_anchor(int width, int height) noexcept {
        return {(width - 1) / 2.0, (height - 1) / 2.0};
    }

    /// Template with the default anchor.
    static Template centered(GrayImage image, EyeSide label, int id);

    int width() const noexcept { return image.width(); }
    int height() const noexcept { return image.height(); }
};

/// Flat list of intensities taken from a rectangular window, row-major.
struct Patch {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// Copies the n = width*height intensities of the window with the given
/// top-left corner out of the image, row-major. The window must lie fully
/// inside the image; violations raise std::out_of_range naming the offending
/// coordinate.
Patch extract_patch(const GrayImage& image, PixelPoint top_left, int width, int height);

}  // namespace wtm
