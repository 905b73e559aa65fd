#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtm/core.hpp"
#include "wtm/errors.hpp"
#include "wtm/eval.hpp"
#include "wtm/fastmatch.hpp"
#include "wtm/matcher.hpp"
#include "wtm/synth.hpp"
#include "wtm/weightmap.hpp"

using namespace wtm;

namespace {

CorpusParams small_corpus(int count, std::uint64_t base_seed) {
    CorpusParams cp;
    cp.count = count;
    cp.base_seed = base_seed;
    cp.scene.placement_jitter = 3;
    cp.template_w = 24;
    cp.template_h = 12;
    return cp;
}

ExperimentConfig small_config(std::vector<int> counts) {
    ExperimentConfig config;
    config.counts = std::move(counts);
    config.threads = 1;
    return config;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (const char c : s) n += c == '\n' ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("detection_error is the Euclidean distance") {
    CHECK(detection_error({10.0, 20.0}, {10, 20}) == 0.0);
    CHECK(detection_error({3.0, 4.0}, {0, 0}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(detection_error({0.0, 0.0}, {3, 4}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(detection_error({5.5, 0.0}, {0, 0}) == doctest::Approx(5.5).epsilon(1e-12));
}

TEST_CASE("detection_rate uses a strict threshold") {
    const std::vector<double> zeros(10, 0.0);
    CHECK(detection_rate(zeros, 8.0) == 1.0);

    std::vector<double> mixed(50, 1.0);
    mixed[0] = mixed[1] = mixed[2] = 99.0;
    CHECK(detection_rate(mixed, 8.0) == doctest::Approx(0.94).epsilon(1e-12));

    const std::vector<double> edge{7.99, 8.0, 8.01};
    CHECK(detection_rate(edge, 8.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const std::vector<double> inf_miss{0.0, std::numeric_limits<double>::infinity()};
    CHECK(detection_rate(inf_miss, 8.0) == 0.5);

    CHECK_THROWS_AS(detection_rate(std::vector<double>{}, 8.0), std::invalid_argument);
}

TEST_CASE("noise-free corpus is detected perfectly at every count and kind") {
    const Corpus corpus = generate_corpus(small_corpus(4, 300));
    const ExperimentConfig config = small_config({1, 2, 4});
    const EvalReport report =
        run_experiment(corpus.images, corpus.annotations, corpus.templates, config);

    CHECK(report.image_count == 4);
    CHECK(report.template_count == 8);
    CHECK(report.counts == std::vector<int>{1, 2, 4});
    CHECK(report.kinds ==
          std::vector<std::string>{"uniform", "gauss-ellipse", "gauss-circle", "exp"});

    REQUIRE(report.rates.size() == 4 * 3 * 2);
    for (const auto& [key, rate] : report.rates) {
        CHECK(rate == 1.0);
    }
    for (const auto& [key, delta] : report.deltas) {
        CHECK(delta == 0.0);
    }
    // Every noise-free match is an exact window: error 0, score 1.
    REQUIRE(report.logs.size() == 4u * 3u * 2u * 4u);
    for (const MatchLogRow& row : report.logs) {
        CHECK(row.error == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(row.score == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("report rates equal an explicit first-N ensemble recomputation") {
    CorpusParams cp = small_corpus(5, 900);
    cp.scene.noise_sigma = 12.75;
    cp.scene.distractor_count = 2;
    cp.template_jitter = 2;
    const Corpus corpus = generate_corpus(cp);

    ExperimentConfig config = small_config({1, 3, 5});
    const EvalReport report =
        run_experiment(corpus.images, corpus.annotations, corpus.templates, config);

    for (const MapSpec& spec : config.kinds) {
        // Same-side template pools in ascending-id order, as documented.
        std::vector<const Template*> pools[2];
        for (const Template& t : corpus.templates) {
            pools[t.label == EyeSide::Right ? 0 : 1].push_back(&t);
        }
        for (int side = 0; side < 2; ++side) {
            const EyeSide eye = side == 0 ? EyeSide::Right : EyeSide::Left;
            std::vector<WeightMap> maps;
            for (const Template* t : pools[side]) {
                maps.push_back(map_for_template(*t, spec.kind, spec.params));
            }
            for (const int n : config.counts) {
                std::vector<double> errors;
                for (std::size_t i = 0; i < corpus.images.size(); ++i) {
                    std::optional<MatchResult> best;
                    for (int r = 0; r < n; ++r) {
                        const MatchResult m = fast_match(corpus.images[i],
                                                         *pools[side][static_cast<std::size_t>(r)],
                                                         maps[static_cast<std::size_t>(r)]);
                        if (!best || better_match(m, *best)) best = m;
                    }
                    REQUIRE(best.has_value());
                    const PixelPoint truth = eye == EyeSide::Right
                                                 ? corpus.annotations[i].right_eye
                                                 : corpus.annotations[i].left_eye;
                    errors.push_back(detection_error(best->center, truth));
                }
                const double expected = detection_rate(errors, config.threshold_px);
                CHECK(report.rates.at({eye, spec.name, n}) == expected);
            }
        }
    }
}

TEST_CASE("a singleton ensemble agrees with the reference-path search") {
    const Corpus corpus = generate_corpus(small_corpus(2, 41));
    const ExperimentConfig config = small_config({1});
    const EvalReport report =
        run_experiment(corpus.images, corpus.annotations, corpus.templates, config);

    // Count 1 with the uniform kind: compare against match_ensemble over the
    // lone right-eye template (the reference path). Argmax positions agree.
    const Template* first_right = nullptr;
    for (const Template& t : corpus.templates) {
        if (t.label == EyeSide::Right && (!first_right || t.id < first_right->id)) {
            first_right = &t;
        }
    }
    REQUIRE(first_right != nullptr);
    const WeightMap map = uniform_map(first_right->width(), first_right->height());
    for (std::size_t i = 0; i < corpus.images.size(); ++i) {
        const EnsembleEntry entry{first_right, &map};
        const MatchResult ref = match_ensemble(corpus.images[i], std::span{&entry, 1});
        for (const MatchLogRow& row : report.logs) {
            if (row.image_id == corpus.annotations[i].image_id && row.eye == EyeSide::Right &&
                row.kind == "uniform" && row.count == 1) {
                CHECK(row.predicted.x == doctest::Approx(ref.center.x));
                CHECK(row.predicted.y == doctest::Approx(ref.center.y));
            }
        }
    }
}

TEST_CASE("rates are recomputable from the match log") {
    CorpusParams cp = small_corpus(4, 77);
    cp.scene.noise_sigma = 20.0;
    cp.template_jitter = 2;
    const Corpus corpus = generate_corpus(cp);
    const ExperimentConfig config = small_config({2, 4});
    const EvalReport report =
        run_experiment(corpus.images, corpus.annotations, corpus.templates, config);

    for (const auto& [key, rate] : report.rates) {
        const auto& [eye, kind, count] = key;
        std::vector<double> errors;
        for (const MatchLogRow& row : report.logs) {
            if (row.eye == eye && row.kind == kind && row.count == count) {
                errors.push_back(row.error);
            }
        }
        REQUIRE(errors.size() == corpus.images.size());
        CHECK(detection_rate(errors, config.threshold_px) == rate);

        const double uniform_rate = report.rates.at({eye, std::string("uniform"), count});
        CHECK(report.deltas.at(key) == rate - uniform_rate);
    }
}

TEST_CASE("an image with no valid window is scored as a miss") {
    const Corpus corpus = generate_corpus(small_corpus(1, 15));
    std::vector<GrayImage> images = corpus.images;
    images.push_back(GrayImage::filled(96, 72, 110.0));  // constant: every window degenerate
    std::vector<Annotation> annotations = corpus.annotations;
    annotations.push_back({"flat_0001", {29, 32}, {67, 32}});

    const ExperimentConfig config = small_config({1});
    const EvalReport report = run_experiment(images, annotations, corpus.templates, config);

    for (const auto& [key, rate] : report.rates) {
        CHECK(rate == 0.5);  // the real scene hits, the flat image misses
    }
    int miss_rows = 0;
    for (const MatchLogRow& row : report.logs) {
        if (row.image_id == "flat_0001") {
            CHECK(std::isinf(row.error));
            CHECK(std::isnan(row.score));
            CHECK(row.predicted == Point{-1.0, -1.0});
            ++miss_rows;
        }
    }
    CHECK(miss_rows == 4 * 2);  // every kind and eye logs the miss
}

TEST_CASE("input validation rejects inconsistent experiments") {
    const Corpus corpus = generate_corpus(small_corpus(2, 8));
    const ExperimentConfig ok = small_config({1});

    SUBCASE("no images") {
        CHECK_THROWS_AS(run_experiment({}, {}, corpus.templates, ok), std::invalid_argument);
    }
    SUBCASE("annotation count mismatch") {
        std::vector<Annotation> annotations = corpus.annotations;
        annotations.pop_back();
        CHECK_THROWS_AS(run_experiment(corpus.images, annotations, corpus.templates, ok),
                        std::invalid_argument);
    }
    SUBCASE("count exceeds the per-eye pool") {
        CHECK_THROWS_AS(
            run_experiment(corpus.images, corpus.annotations, corpus.templates, small_config({3})),
            std::invalid_argument);
    }
    SUBCASE("counts must be positive and present") {
        CHECK_THROWS_AS(
            run_experiment(corpus.images, corpus.annotations, corpus.templates, small_config({0})),
            std::invalid_argument);
        CHECK_THROWS_AS(
            run_experiment(corpus.images, corpus.annotations, corpus.templates, small_config({})),
            std::invalid_argument);
    }
    SUBCASE("templates must arrive sorted by id") {
        std::vector<Template> shuffled(corpus.templates.rbegin(), corpus.templates.rend());
        CHECK_THROWS_AS(run_experiment(corpus.images, corpus.annotations, shuffled, ok),
                        std::invalid_argument);
    }
    SUBCASE("threshold must be positive") {
        ExperimentConfig config = ok;
        config.threshold_px = 0.0;
        CHECK_THROWS_AS(run_experiment(corpus.images, corpus.annotations, corpus.templates, config),
                        std::invalid_argument);
    }
    SUBCASE("kind names must be unique") {
        ExperimentConfig config = ok;
        config.kinds = {MapSpec::uniform(), MapSpec::uniform()};
        CHECK_THROWS_AS(run_experiment(corpus.images, corpus.annotations, corpus.templates, config),
                        std::invalid_argument);
    }
}

TEST_CASE("the report is independent of the worker count") {
    CorpusParams cp = small_corpus(5, 1234);
    cp.scene.noise_sigma = 12.75;
    cp.template_jitter = 1;
    const Corpus corpus = generate_corpus(cp);

    ExperimentConfig config = small_config({1, 5});
    const EvalReport serial =
        run_experiment(corpus.images, corpus.annotations, corpus.templates, config);
    config.threads = 4;
    const EvalReport parallel =
        run_experiment(corpus.images, corpus.annotations, corpus.templates, config);

    CHECK(format_report(serial) == format_report(parallel));
    CHECK(report_csv(serial) == report_csv(parallel));
    CHECK(matches_csv(serial) == matches_csv(parallel));
}

TEST_CASE("format_report renders half-up integer percentages") {
    EvalReport report;
    report.counts = {1};
    report.kinds = {"uniform", "exp"};
    report.threshold_px = 8.0;
    report.image_count = 8;
    report.template_count = 16;
    report.rates[{EyeSide::Right, "uniform", 1}] = 0.875;  // 87.5 rounds half up to 88
    report.rates[{EyeSide::Left, "uniform", 1}] = 0.5;
    report.rates[{EyeSide::Right, "exp", 1}] = 1.0;
    report.rates[{EyeSide::Left, "exp", 1}] = 0.375;
    report.deltas[{EyeSide::Right, "uniform", 1}] = 0.0;
    report.deltas[{EyeSide::Left, "uniform", 1}] = 0.0;
    report.deltas[{EyeSide::Right, "exp", 1}] = 0.125;    // +12.5 -> +13
    report.deltas[{EyeSide::Left, "exp", 1}] = -0.125;    // -12.5 -> -12 (half up, not away)

    const std::string text = format_report(report);
    CHECK(text.find("detection rate (error < 8 px), 8 images, 16 templates") != std::string::npos);
    CHECK(text.find("[uniform]") != std::string::npos);
    CHECK(text.find("[exp]") != std::string::npos);
    CHECK(text.find("[exp vs uniform]") != std::string::npos);
    CHECK(text.find("Right eye") != std::string::npos);
    CHECK(text.find("Left eye") != std::string::npos);
    CHECK(text.find("88%") != std::string::npos);
    CHECK(text.find("50%") != std::string::npos);
    CHECK(text.find("100%") != std::string::npos);
    CHECK(text.find("38%") != std::string::npos);
    CHECK(text.find("+13%") != std::string::npos);
    CHECK(text.find("-12%") != std::string::npos);
    CHECK(text.find("-13%") == std::string::npos);
}

TEST_CASE("csv outputs carry full precision and fixed headers") {
    const Corpus corpus = generate_corpus(small_corpus(3, 60));
    const ExperimentConfig config = small_config({1, 3});
    const EvalReport report =
        run_experiment(corpus.images, corpus.annotations, corpus.templates, config);

    const std::string rates = report_csv(report);
    CHECK(rates.rfind("eye,kind,count,rate,delta\n", 0) == 0);
    CHECK(count_lines(rates) == 1 + 4 * 2 * 2);  // header + kinds * counts * eyes

    // Every rate value round-trips through strtod exactly.
    std::istringstream in(rates);
    std::string line;
    std::getline(in, line);  // skip header
    int rows = 0;
    while (std::getline(in, line)) {
        const std::size_t c3 = line.find(',', line.find(',', line.find(',') + 1) + 1);
        const std::size_t c4 = line.find(',', c3 + 1);
        const std::string eye_name = line.substr(0, line.find(','));
        const double rate = std::strtod(line.c_str() + c3 + 1, nullptr);
        const double delta = std::strtod(line.c_str() + c4 + 1, nullptr);
        // Recover the key fields and compare against the in-memory report.
        std::string rest = line.substr(line.find(',') + 1);
        const std::string kind = rest.substr(0, rest.find(','));
        rest = rest.substr(rest.find(',') + 1);
        const int count = std::atoi(rest.c_str());
        const EvalKey key{eye_side_from_string(eye_name), kind, count};
        CHECK(report.rates.at(key) == rate);
        CHECK(report.deltas.at(key) == delta);
        ++rows;
    }
    CHECK(rows == 4 * 2 * 2);

    const std::string matches = matches_csv(report);
    CHECK(matches.rfind("image,eye,kind,count,pred_x,pred_y,error,score\n", 0) == 0);
    CHECK(count_lines(matches) == 1 + 4 * 2 * 2 * 3);  // header + kinds*counts*eyes*images
    CHECK(matches.find("scene_0000,") != std::string::npos);
}
