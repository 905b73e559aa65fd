#include "wtm/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>

#include "wtm/fastmatch.hpp"
#include "wtm/matcher.hpp"

namespace wtm {

double detection_error(Point predicted, PixelPoint truth) {
    return std::hypot(predicted.x - truth.x, predicted.y - truth.y);
}

double detection_rate(std::span<const double> errors, double threshold) {
    if (errors.empty()) {
        throw std::invalid_argument("detection_rate: no errors to aggregate");
    }
    std::size_t hits = 0;
    for (const double e : errors) {
        if (e < threshold) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(errors.size());
}

namespace {

// Outcome of one (image, kind, count, eye) cell.
struct Cell {
    Point predicted{-1.0, -1.0};
    double error = std::numeric_limits<double>::infinity();
    double score = std::numeric_limits<double>::quiet_NaN();
};

struct SidePool {
    std::vector<const Template*> templates;  // ascending id
    // maps[kind_index][rank] — one weight map per template per kind.
    std::vector<std::vector<WeightMap>> maps;
};

void validate_inputs(std::span<const GrayImage> images, std::span<const Annotation> annotations,
                     std::span<const Template> templates, const ExperimentConfig& config,
                     const SidePool& right, const SidePool& left) {
    if (images.empty()) {
        throw std::invalid_argument("run_experiment: no images");
    }
    if (images.size() != annotations.size()) {
        throw std::invalid_argument("run_experiment: " + std::to_string(images.size()) +
                                    " images but " + std::to_string(annotations.size()) +
                                    " annotations");
    }
    for (std::size_t i = 1; i < templates.size(); ++i) {
        if (templates[i].id <= templates[i - 1].id) {
            throw std::invalid_argument("run_experiment: templates must be sorted by ascending id");
        }
    }
    if (config.counts.empty() || config.kinds.empty()) {
        throw std::invalid_argument("run_experiment: counts and kinds must be non-empty");
    }
    if (!(config.threshold_px > 0.0)) {
        throw std::invalid_argument("run_experiment: threshold must be positive");
    }
    std::set<std::string> names;
    for (const MapSpec& spec : config.kinds) {
        if (!names.insert(spec.name).second) {
            throw std::invalid_argument("run_experiment: duplicate kind name \"" + spec.name +
                                        "\"");
        }
    }
    const int max_count = *std::max_element(config.counts.begin(), config.counts.end());
    const int min_count = *std::min_element(config.counts.begin(), config.counts.end());
    if (min_count < 1) {
        throw std::invalid_argument("run_experiment: counts must be positive");
    }
    const auto available = std::min(right.templates.size(), left.templates.size());
    if (static_cast<std::size_t>(max_count) > available) {
        throw std::invalid_argument("run_experiment: count " + std::to_string(max_count) +
                                    " exceeds the " + std::to_string(available) +
                                    " templates available per eye");
    }
}

}  // namespace

EvalReport run_experiment(std::span<const GrayImage> images,
                          std::span<const Annotation> annotations,
                          std::span<const Template> templates, const ExperimentConfig& config) {
    SidePool right, left;
    for (const Template& t : templates) {
        (t.label == EyeSide::Right ? right : left).templates.push_back(&t);
    }
    validate_inputs(images, annotations, templates, config, right, left);

    const int max_count = *std::max_element(config.counts.begin(), config.counts.end());
    for (SidePool* pool : {&right, &left}) {
        pool->templates.resize(static_cast<std::size_t>(max_count));
        pool->maps.reserve(config.kinds.size());
        for (const MapSpec& spec : config.kinds) {
            std::vector<WeightMap> maps;
            maps.reserve(pool->templates.size());
            for (const Template* t : pool->templates) {
                maps.push_back(map_for_template(*t, spec.kind, spec.params));
            }
            pool->maps.push_back(std::move(maps));
        }
    }

    const std::size_t n_kinds = config.kinds.size();
    const std::size_t n_counts = config.counts.size();
    // cells[image][kind * n_counts * 2 + count * 2 + side], side 0 = right.
    std::vector<std::vector<Cell>> cells(images.size(),
                                         std::vector<Cell>(n_kinds * n_counts * 2));

    const auto evaluate_image = [&](std::size_t img_idx) {
        const GrayImage& image = images[img_idx];
        for (std::size_t k = 0; k < n_kinds; ++k) {
            for (int side = 0; side < 2; ++side) {
                const SidePool& pool = side == 0 ? right : left;
                const PixelPoint truth =
                    side == 0 ? annotations[img_idx].right_eye : annotations[img_idx].left_eye;

                // One search per template, reused by every count's prefix.
                std::vector<std::optional<MatchResult>> per_template(pool.templates.size());
                for (std::size_t r = 0; r < pool.templates.size(); ++r) {
                    try {
                        per_template[r] =
                            fast_match(image, *pool.templates[r], pool.maps[k][r]);
                    } catch (const NoValidWindowError&) {
                        per_template[r] = std::nullopt;  // counts as a miss
                    }
                }

                for (std::size_t c = 0; c < n_counts; ++c) {
                    const int n = config.counts[c];
                    std::optional<MatchResult> best;
                    for (int r = 0; r < n; ++r) {
                        const auto& candidate = per_template[static_cast<std::size_t>(r)];
                        if (!candidate) continue;
                        if (!best || better_match(*candidate, *best)) best = candidate;
                    }
                    Cell& cell = cells[img_idx][(k * n_counts + c) * 2 +
                                                static_cast<std::size_t>(side)];
                    if (best) {
                        cell.predicted = best->center;
                        cell.error = detection_error(best->center, truth);
                        cell.score = best->score;
                    }
                }
            }
        }
    };

    unsigned n_threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(images.size()));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < images.size(); ++i) evaluate_image(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < images.size(); i = next.fetch_add(1)) {
                    evaluate_image(i);
                }
            });
        }
        for (std::thread& worker : workers) worker.join();
    }

    // Deterministic ordered reduction, independent of worker scheduling.
    EvalReport report;
    report.counts = config.counts;
    for (const MapSpec& spec : config.kinds) report.kinds.push_back(spec.name);
    report.threshold_px = config.threshold_px;
    report.image_count = static_cast<int>(images.size());
    report.template_count = static_cast<int>(templates.size());
    report.logs.reserve(images.size() * n_kinds * n_counts * 2);

    for (std::size_t k = 0; k < n_kinds; ++k) {
        for (std::size_t c = 0; c < n_counts; ++c) {
            for (int side = 0; side < 2; ++side) {
                const EyeSide eye = side == 0 ? EyeSide::Right : EyeSide::Left;
                std::vector<double> errors;
                errors.reserve(images.size());
                for (std::size_t i = 0; i < images.size(); ++i) {
                    const Cell& cell = cells[i][(k * n_counts + c) * 2 +
                                                static_cast<std::size_t>(side)];
                    errors.push_back(cell.error);
                    report.logs.push_back({annotations[i].image_id, eye, config.kinds[k].name,
                                           config.counts[c], cell.predicted, cell.error,
                                           cell.score});
                }
                report.rates[{eye, config.kinds[k].name, config.counts[c]}] =
                    detection_rate(errors, config.threshold_px);
            }
        }
    }

    // Deltas against the kind named "uniform"; zero when no baseline exists.
    const bool has_uniform =
        std::find(report.kinds.begin(), report.kinds.end(), "uniform") != report.kinds.end();
    for (const auto& [key, rate] : report.rates) {
        const auto& [eye, kind, count] = key;
        report.deltas[key] =
            has_uniform ? rate - report.rates.at({eye, std::string("uniform"), count}) : 0.0;
    }
    return report;
}

namespace {

// Integer percent, rounded half up (0.876 -> 88, ties go toward +infinity).
long percent(double rate) { return static_cast<long>(std::floor(rate * 100.0 + 0.5)); }

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string rate_table(const EvalReport& report, const std::string& kind, bool delta) {
    constexpr std::size_t kLabel = 12;
    constexpr std::size_t kCol = 8;
    std::string out = delta ? "[" + kind + " vs uniform]\n" : "[" + kind + "]\n";
    out += pad("", kLabel);
    for (const int n : report.counts) out += pad(std::to_string(n), kCol);
    out += '\n';
    for (const EyeSide eye : {EyeSide::Right, EyeSide::Left}) {
        out += pad(eye == EyeSide::Right ? "Right eye" : "Left eye", kLabel);
        for (const int n : report.counts) {
            const EvalKey key{eye, kind, n};
            std::string cell;
            if (delta) {
                const long p = percent(report.deltas.at(key));
                cell = (p < 0 ? "-" : "+") + std::to_string(std::labs(p)) + "%";
            } else {
                cell = std::to_string(percent(report.rates.at(key))) + "%";
            }
            out += pad(cell, kCol);
        }
        out += '\n';
    }
    return out;
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string format_report(const EvalReport& report) {
    char head[160];
    std::snprintf(head, sizeof head,
                  "detection rate (error < %g px), %d images, %d templates\n"
                  "count N uses the first N templates per eye by ascending id\n\n",
                  report.threshold_px, report.image_count, report.template_count);
    std::string out = head;
    const bool has_uniform =
        std::find(report.kinds.begin(), report.kinds.end(), "uniform") != report.kinds.end();
    for (const std::string& kind : report.kinds) {
        out += rate_table(report, kind, /*delta=*/false);
        out += '\n';
    }
    if (has_uniform) {
        for (const std::string& kind : report.kinds) {
            if (kind == "uniform") continue;
            out += rate_table(report, kind, /*delta=*/true);
            out += '\n';
        }
    }
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

std::string report_csv(const EvalReport& report) {
    std::string out = "eye,kind,count,rate,delta\n";
    for (const std::string& kind : report.kinds) {
        for (const int n : report.counts) {
            for (const EyeSide eye : {EyeSide::Right, EyeSide::Left}) {
                const EvalKey key{eye, kind, n};
                out += std::string(to_string(eye)) + ',' + kind + ',' + std::to_string(n) + ',' +
                       format_full(report.rates.at(key)) + ',' +
                       format_full(report.deltas.at(key)) + '\n';
            }
        }
    }
    return out;
}

std::string matches_csv(const EvalReport& report) {
    std::string out = "image,eye,kind,count,pred_x,pred_y,error,score\n";
    for (const MatchLogRow& row : report.logs) {
        out += row.image_id + ',' + to_string(row.eye) + ',' + row.kind + ',' +
               std::to_string(row.count) + ',' + format_full(row.predicted.x) + ',' +
               format_full(row.predicted.y) + ',' + format_full(row.error) + ',' +
               format_full(row.score) + '\n';
    }
    return out;
}

}  // namespace wtm
