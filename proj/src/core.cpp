#include "wtm/core.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace wtm {

GrayImage::GrayImage(int width, int height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("GrayImage: dimensions must be at least 1x1, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    }
    const std::size_t expected = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (pixels_.size() != expected) {
        throw std::invalid_argument("GrayImage: pixel count " + std::to_string(pixels_.size()) +
                                    " does not match " + std::to_string(width) + "x" +
                                    std::to_string(height));
    }
    for (std::size_t i = 0; i < pixels_.size(); ++i) {
        const double v = pixels_[i];
        if (!std::isfinite(v) || v < 0.0 || v > 255.0) {
            throw std::invalid_argument("GrayImage: intensity at index " + std::to_string(i) +
                                        " is outside [0, 255]");
        }
    }
}

GrayImage GrayImage::filled(int width, int height, double value) {
    const std::size_t n =
        width >= 1 && height >= 1 ? static_cast<std::size_t>(width) * height : 0;
    return {width, height, std::vector<double>(n, value)};
}

const char* to_string(EyeSide side) noexcept {
    return side == EyeSide::Right ? "right" : "left";
}

EyeSide eye_side_from_string(const std::string& name) {
    if (name == "right") return EyeSide::Right;
    if (name == "left") return EyeSide::Left;
    throw std::invalid_argument("unknown eye side '" + name + "' (expected right or left)");
}

Template::Template(GrayImage img, Point anchor_pt, EyeSide side, int ordinal)
    : image(std::move(img)), anchor(anchor_pt), label(side), id(ordinal) {
    if (anchor.x < 0.0 || anchor.x >= image.width() || anchor.y < 0.0 ||
        anchor.y >= image.height()) {
        throw std::invalid_argument("Template: anchor (" + std::to_string(anchor.x) + ", " +
                                    std::to_string(anchor.y) + ") outside " +
                                    std::to_string(image.width()) + "x" +
                                    std::to_string(image.height()));
    }
}

Template Template::centered(GrayImage image, EyeSide label, int id) {
    const Point anchor = default_anchor(image.width(), image.height());
    return {std::move(image), anchor, label, id};
}

Patch extract_patch(const GrayImage& image, PixelPoint top_left, int width, int height) {
    if (width < 1 || height < 1) {
        throw std::out_of_range("extract_patch: empty window " + std::to_string(width) + "x" +
                                std::to_string(height));
    }
    if (top_left.x < 0 || top_left.y < 0) {
        throw std::out_of_range("extract_patch: top-left (" + std::to_string(top_left.x) + ", " +
                                std::to_string(top_left.y) + ") outside the image");
    }
    if (top_left.x + width > image.width()) {
        throw std::out_of_range("extract_patch: window right edge " +
                                std::to_string(top_left.x + width) + " exceeds image width " +
                                std::to_string(image.width()));
    }
    if (top_left.y + height > image.height()) {
        throw std::out_of_range("extract_patch: window bottom edge " +
                                std::to_string(top_left.y + height) + " exceeds image height " +
                                std::to_string(image.height()));
    }

    Patch patch;
    patch.values.reserve(static_cast<std::size_t>(width) * height);
    for (int y = top_left.y; y < top_left.y + height; ++y) {
        const double* row = image.row(y);
        patch.values.insert(patch.values.end(), row + top_left.x, row + top_left.x + width);
    }
    return patch;
}

}  // namespace wtm
