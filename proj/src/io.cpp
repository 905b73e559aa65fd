#include "wtm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace wtm {

namespace {

// ---------------------------------------------------------------------------
// PGM (binary, P5)
// ---------------------------------------------------------------------------

class PgmCursor {
  public:
    explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

    std::size_t pos() const { return pos_; }
    bool at_end() const { return pos_ >= bytes_.size(); }
    unsigned char peek() const { return static_cast<unsigned char>(bytes_[pos_]); }

    // Header whitespace; '#' starts a comment that runs to end of line.
    void skip_space_and_comments() {
        while (!at_end()) {
            const unsigned char c = peek();
            if (std::isspace(c)) {
                ++pos_;
            } else if (c == '#') {
                while (!at_end() && peek() != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    int read_header_int(const char* what) {
        skip_space_and_comments();
        if (at_end()) {
            throw ParseError::at_byte(std::string("unexpected end of header, expected ") + what,
                                      pos_);
        }
        if (!std::isdigit(peek())) {
            throw ParseError::at_byte(std::string("expected ") + what + " digits", pos_);
        }
        long value = 0;
        while (!at_end() && std::isdigit(peek())) {
            value = value * 10 + (peek() - '0');
            if (value > 1000000000L) {
                throw ParseError::at_byte(std::string(what) + " out of range", pos_);
            }
            ++pos_;
        }
        return static_cast<int>(value);
    }

    void advance(std::size_t n) { pos_ += n; }

  private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Line-oriented text formats
// ---------------------------------------------------------------------------

// Splits text into lines; a trailing newline terminates the last line rather
// than opening an empty one.
std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t at = line.find(sep, start);
        if (at == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, at - start));
        start = at + 1;
    }
    return fields;
}

int parse_non_negative_int(std::string_view field, const char* what, std::size_t line_no) {
    if (field.empty() || field.size() > 9) {
        throw ParseError::at_line(std::string(what) + " must be a non-negative integer", line_no);
    }
    long value = 0;
    for (const char c : field) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError::at_line(std::string(what) + " must be a non-negative integer",
                                      line_no);
        }
        value = value * 10 + (c - '0');
    }
    return static_cast<int>(value);
}

double parse_double(std::string_view field, const char* what, std::size_t line_no) {
    const std::string buf(field);
    char* end = nullptr;
    const double value = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty()) {
        throw ParseError::at_line(std::string(what) + " is not a valid number", line_no);
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

GrayImage read_pgm(std::string_view bytes) {
    PgmCursor cur(bytes);
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw ParseError::at_byte("expected binary graymap magic \"P5\"", 0);
    }
    cur.advance(2);
    if (cur.at_end() || (!std::isspace(cur.peek()) && cur.peek() != '#')) {
        throw ParseError::at_byte("expected whitespace after magic", cur.pos());
    }

    const int width = cur.read_header_int("width");
    const int height = cur.read_header_int("height");
    if (width < 1 || height < 1) {
        throw ParseError::at_byte("image dimensions must be positive", cur.pos());
    }
    const std::size_t maxval_at = [&] {
        cur.skip_space_and_comments();
        return cur.pos();
    }();
    const int maxval = cur.read_header_int("maxval");
    if (maxval < 1 || maxval > 255) {
        throw ParseError::at_byte("maxval must be in [1, 255] for 8-bit rasters", maxval_at);
    }

    // Exactly one whitespace byte separates the header from the raster.
    if (cur.at_end() || !std::isspace(cur.peek())) {
        throw ParseError::at_byte("expected single whitespace byte before raster", cur.pos());
    }
    cur.advance(1);

    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    const std::size_t have = bytes.size() - cur.pos();
    if (have < need) {
        throw ParseError::at_byte("raster truncated: expected " + std::to_string(need) +
                                      " bytes, got " + std::to_string(have),
                                  bytes.size());
    }
    if (have > need) {
        throw ParseError::at_byte("trailing bytes after raster", cur.pos() + need);
    }

    std::vector<double> pixels(need);
    for (std::size_t i = 0; i < need; ++i) {
        pixels[i] = static_cast<double>(static_cast<unsigned char>(bytes[cur.pos() + i]));
    }
    return GrayImage(width, height, std::move(pixels));
}

std::string write_pgm(const GrayImage& image) {
    std::string out = "P5\n" + std::to_string(image.width()) + " " +
                      std::to_string(image.height()) + "\n255\n";
    out.reserve(out.size() + image.pixels().size());
    for (const double v : image.pixels()) {
        const long q = std::llround(v);
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::clamp(q, 0L, 255L))));
    }
    return out;
}

const std::string kAnnotationHeader = "image_path,right_eye_x,right_eye_y,left_eye_x,left_eye_y";

std::vector<Annotation> read_annotations(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != kAnnotationHeader) {
        throw ParseError::at_line("expected header \"" + kAnnotationHeader + "\"", 1);
    }
    std::vector<Annotation> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty()) {
            throw ParseError::at_line("empty row", line_no);
        }
        const auto fields = split_fields(lines[i], ',');
        if (fields.size() != 5) {
            throw ParseError::at_line(
                "expected 5 fields, got " + std::to_string(fields.size()), line_no);
        }
        if (fields[0].empty()) {
            throw ParseError::at_line("image_path must be non-empty", line_no);
        }
        Annotation ann;
        ann.image_id = std::string(fields[0]);
        ann.right_eye = {parse_non_negative_int(fields[1], "right_eye_x", line_no),
                         parse_non_negative_int(fields[2], "right_eye_y", line_no)};
        ann.left_eye = {parse_non_negative_int(fields[3], "left_eye_x", line_no),
                        parse_non_negative_int(fields[4], "left_eye_y", line_no)};
        rows.push_back(std::move(ann));
    }
    return rows;
}

std::string write_annotations(std::span<const Annotation> rows) {
    std::string out = kAnnotationHeader + "\n";
    for (const Annotation& a : rows) {
        out += a.image_id;
        out += ',' + std::to_string(a.right_eye.x) + ',' + std::to_string(a.right_eye.y);
        out += ',' + std::to_string(a.left_eye.x) + ',' + std::to_string(a.left_eye.y);
        out += '\n';
    }
    return out;
}

WeightMap read_weightmap(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) {
        throw ParseError::at_line("empty weight-map file", 1);
    }
    const auto dims = split_fields(lines[0], ' ');
    if (dims.size() != 2) {
        throw ParseError::at_line("expected dimension line \"<width> <height>\"", 1);
    }
    const int width = parse_non_negative_int(dims[0], "width", 1);
    const int height = parse_non_negative_int(dims[1], "height", 1);
    if (width < 1 || height < 1) {
        throw ParseError::at_line("weight-map dimensions must be positive", 1);
    }
    if (lines.size() - 1 < static_cast<std::size_t>(height)) {
        throw ParseError::at_line("expected " + std::to_string(height) + " weight rows, got " +
                                      std::to_string(lines.size() - 1),
                                  lines.size());
    }
    if (lines.size() - 1 > static_cast<std::size_t>(height)) {
        throw ParseError::at_line("trailing content after weight rows",
                                  static_cast<std::size_t>(height) + 2);
    }

    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        const std::size_t line_no = static_cast<std::size_t>(y) + 2;
        const auto fields = split_fields(lines[static_cast<std::size_t>(y) + 1], ' ');
        if (fields.size() != static_cast<std::size_t>(width)) {
            throw ParseError::at_line("expected " + std::to_string(width) + " values, got " +
                                          std::to_string(fields.size()),
                                      line_no);
        }
        for (int x = 0; x < width; ++x) {
            const double v = parse_double(fields[static_cast<std::size_t>(x)], "weight", line_no);
            if (!std::isfinite(v) || v <= 0.0) {
                throw ParseError::at_line("weight must be positive and finite", line_no);
            }
            weights.push_back(v);
        }
    }
    // The text format stores values only, so provenance is unknown.
    return WeightMap(width, height, std::move(weights), WeightKind::Custom, std::monostate{});
}

std::string write_weightmap(const WeightMap& map) {
    std::string out = std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n";
    char buf[64];
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            // 9 significant digits, '#' keeps trailing zeros for stable width.
            std::snprintf(buf, sizeof buf, "%#.9g", map.at(x, y));
            if (x > 0) out += ' ';
            out += buf;
        }
        out += '\n';
    }
    return out;
}

const std::string kTemplateManifestHeader = "template_path,label,anchor_x,anchor_y";

std::vector<TemplateManifestRow> read_template_manifest(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != kTemplateManifestHeader) {
        throw ParseError::at_line("expected header \"" + kTemplateManifestHeader + "\"", 1);
    }
    std::vector<TemplateManifestRow> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (lines[i].empty()) {
            throw ParseError::at_line("empty row", line_no);
        }
        const auto fields = split_fields(lines[i], ',');
        if (fields.size() != 4) {
            throw ParseError::at_line(
                "expected 4 fields, got " + std::to_string(fields.size()), line_no);
        }
        if (fields[0].empty()) {
            throw ParseError::at_line("template_path must be non-empty", line_no);
        }
        TemplateManifestRow row;
        row.path = std::string(fields[0]);
        try {
            row.label = eye_side_from_string(std::string(fields[1]));
        } catch (const std::invalid_argument& e) {
            throw ParseError::at_line(e.what(), line_no);
        }
        row.anchor = {parse_double(fields[2], "anchor_x", line_no),
                      parse_double(fields[3], "anchor_y", line_no)};
        if (!std::isfinite(row.anchor.x) || !std::isfinite(row.anchor.y)) {
            throw ParseError::at_line("anchor must be finite", line_no);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string write_template_manifest(std::span<const TemplateManifestRow> rows) {
    std::string out = kTemplateManifestHeader + "\n";
    for (const TemplateManifestRow& r : rows) {
        out += r.path;
        out += ',';
        out += to_string(r.label);
        out += ',' + format_double(r.anchor.x) + ',' + format_double(r.anchor.y) + '\n';
    }
    return out;
}

GrayImage render_heatmap(const ScoreGrid& grid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const double s : grid.scores) {
        if (std::isnan(s)) continue;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    std::vector<double> pixels(grid.scores.size(), 0.0);
    if (lo <= hi) {  // at least one finite score
        const bool constant = (lo == hi);
        const double range = hi - lo;
        for (std::size_t i = 0; i < grid.scores.size(); ++i) {
            const double s = grid.scores[i];
            if (std::isnan(s)) continue;  // skipped windows stay black
            // Dividing first makes the endpoints exact: (hi-lo)/range == 1.
            pixels[i] = constant ? 128.0 : (s - lo) / range * 255.0;
        }
    }
    return GrayImage(grid.width, grid.height, std::move(pixels));
}

}  // namespace wtm
