#pragma once

#include <map>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/synth.hpp"
#include "wtm/weightmap.hpp"

namespace wtm {

/// Experimental grid: template counts, the detection threshold in pixels
/// (strict <), and the weight-map kinds to sweep. threads = 0 means one
/// worker per hardware core.
struct ExperimentConfig {
    std::vector<int> counts{10, 45, 80};
    double threshold_px = 8.0;
    std::vector<MapSpec> kinds{MapSpec::uniform(), MapSpec::gauss_ellipse(),
                               MapSpec::gauss_circle(), MapSpec::exponential()};
    int threads = 0;
};

/// Euclidean distance between a predicted eye center and the ground truth.
double detection_error(Point predicted, PixelPoint truth);

/// Fraction of errors strictly below the threshold. An error of exactly
/// threshold pixels never counts as detected.
double detection_rate(std::span<const double> errors, double threshold);

/// One matched eye, kept for rate recomputation and debugging.
struct MatchLogRow {
    std::string image_id;
    EyeSide eye = EyeSide::Right;
    std::string kind;
    int count = 0;
    Point predicted;
    double error = 0.0;
    double score = 0.0;
};

using EvalKey = std::tuple<EyeSide, std::string, int>;  // (eye, kind, count)

struct EvalReport {
    std::vector<int> counts;          // column order
    std::vector<std::string> kinds;   // table order; first entry is the baseline if named "uniform"
    double threshold_px = 8.0;
    int image_count = 0;
    int template_count = 0;
    std::map<EvalKey, double> rates;
    std::map<EvalKey, double> deltas;  // rate(kind) - rate(uniform) at same (eye, count)
    std::vector<MatchLogRow> logs;
};

/// Runs the detection-rate protocol: for each weight-map kind and template
/// count N, the first N same-side templates (ascending id) search every image
/// with the fast matcher, the predicted center is the best window's
/// top_left + anchor, and the rate counts errors strictly below the
/// threshold. Deltas are taken against the uniform kind at the same
///eye and count. Images may be evaluated in parallel; the report is a
/// deterministic ordered reduction, independent of thread count.
EvalReport run_experiment(std::span<const GrayImage> images,
                          std::span<const Annotation> annotations,
                          std::span<const Template> templates, const ExperimentConfig& config);

/// Human-readable tables: one rate table per kind (columns = counts, rows =
/// right/left eye, integer percentages) and one signed delta table per
/// non-uniform kind. Percentages are rounded half up (0.876 -> 88%) only
/// here; stored rates keep full precision.
std::string format_report(const EvalReport& report);

/// Machine form, full precision: header then eye,kind,count,rate,delta rows.
std::string report_csv(const EvalReport& report);

/// Per-image match log: header then image,eye,kind,count,pred_x,pred_y,error,score rows.
std::string matches_csv(const EvalReport& report);

}  // namespace wtm
