#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wtm/core.hpp"
#include "wtm/weightmap.hpp"

using namespace wtm;

TEST_CASE("uniform maps are all ones") {
    const WeightMap m = uniform_map(3, 2);
    CHECK(m.size() == 6);
    for (const double w : m.weights()) CHECK(w == 1.0);

    CHECK(uniform_map(1, 1).weights() == std::vector<double>{1.0});

    const WeightMap big = uniform_map(44, 22);
    double sum = 0.0;
    for (const double w : big.weights()) sum += w;
    CHECK(sum == 968.0);

    CHECK_THROWS_AS(uniform_map(0, 5), std::invalid_argument);
}

TEST_CASE("gaussian map values match independent scalar evaluation") {
    // 44x22 at the published parameters A=5, sigma_x=16, sigma_y=8; the
    // default center is the geometric center (21.5, 10.5).
    const WeightMap m = gaussian_map(44, 22, {});

    // Scalar oracle: 5*exp(-((21-21.5)^2/512 + (10-10.5)^2/128)), frozen.
    CHECK(m.at(21, 10) == doctest::Approx(4.987807857791996).epsilon(1e-12));
    // The mirrored neighbor across the half-integer center is identical.
    CHECK(m.at(22, 11) == doctest::Approx(4.987807857791996).epsilon(1e-12));

    // Corner raw value 5*exp(-(21.5^2/512 + 10.5^2/128)) = 0.8566530851339481,
    // which is below 1, so the floor clamps it to exactly 1.0.
    CHECK(m.at(0, 0) == 1.0);
    CHECK(m.at(43, 21) == 1.0);
}

TEST_CASE("gaussian center weight equals the amplitude at odd dimensions") {
    const WeightMap m = gaussian_map(5, 5, {});
    CHECK(m.at(2, 2) == 5.0);
}

TEST_CASE("exponential map values match independent scalar evaluation") {
    const WeightMap m = exponential_map(44, 22, {});
    // 5*exp(-(0.5/10 + 0.5/10)) = 5*exp(-0.1), frozen scalar evaluation.
    CHECK(m.at(21, 10) == doctest::Approx(4.524187090179797).epsilon(1e-12));

    const WeightMap odd = exponential_map(5, 5, {});
    CHECK(odd.at(2, 2) == 5.0);
}

TEST_CASE("literal-abs-sum exponential peaks along the anti-diagonal ridge") {
    ExponentialParams p;
    p.literal_abs_sum = true;
    const WeightMap m = exponential_map(44, 22, p);
    // (x-21.5)/10 = -(y-10.5)/10  <=>  x + y = 32: the exponent cancels.
    CHECK(m.at(22, 10) == 5.0);
    CHECK(m.at(21, 11) == 5.0);
    CHECK(m.at(30, 2) == 5.0);
    // Off the ridge the weight drops.
    CHECK(m.at(22, 11) < 5.0);
}

TEST_CASE("generated maps are symmetric about a default center") {
    const WeightMap g = gaussian_map(44, 22, {});
    const WeightMap e = exponential_map(44, 22, {});
    for (int y = 0; y < 22; ++y) {
        for (int x = 0; x < 44; ++x) {
            // mirror of x across 21.5 is 43-x; mirror of y across 10.5 is 21-y
            CHECK(g.at(x, y) == doctest::Approx(g.at(43 - x, y)).epsilon(1e-12));
            CHECK(g.at(x, y) == doctest::Approx(g.at(x, 21 - y)).epsilon(1e-12));
            CHECK(e.at(x, y) == doctest::Approx(e.at(43 - x, y)).epsilon(1e-12));
            CHECK(e.at(x, y) == doctest::Approx(e.at(x, 21 - y)).epsilon(1e-12));
        }
    }
}

TEST_CASE("generated weights lie in [1, A] and decay monotonically from the center") {
    for (const WeightMap& m : {gaussian_map(44, 22, {}), exponential_map(44, 22, {}),
                               gaussian_map(44, 22, {5.0, 8.0, 8.0, std::nullopt})}) {
        for (const double w : m.weights()) {
            CHECK(w >= 1.0);
            CHECK(w <= 5.0);
        }
        // non-increasing to the right of the center along the center rows
        for (const int y : {10, 11}) {
            for (int x = 22; x + 1 < 44; ++x) {
                CHECK(m.at(x + 1, y) <= m.at(x, y) + 1e-15);
            }
        }
    }
}

TEST_CASE("map_for_template follows template dims and centers on the anchor") {
    const Template tpl(GrayImage::filled(10, 10, 3.0), Point{2.0, 3.0}, EyeSide::Right, 0);

    const WeightMap u = map_for_template(tpl, WeightKind::Uniform, std::monostate{});
    CHECK(u.size() == 100);
    for (const double w : u.weights()) CHECK(w == 1.0);

    const WeightMap g = map_for_template(tpl, WeightKind::Gaussian, GaussianParams{});
    CHECK(g.width() == 10);
    CHECK(g.height() == 10);
    CHECK(g.at(2, 3) == 5.0);  // integer anchor -> the peak sits on a pixel
    CHECK(g.at(9, 9) < 5.0);

    const WeightMap e = map_for_template(tpl, WeightKind::Exponential, ExponentialParams{});
    CHECK(e.at(2, 3) == 5.0);

    // A values-only (custom) map has no generator.
    CHECK_THROWS_AS(map_for_template(tpl, WeightKind::Custom, std::monostate{}),
                    std::invalid_argument);
}

TEST_CASE("generator parameter validation") {
    CHECK_THROWS_AS(gaussian_map(4, 4, {5.0, 0.0, 8.0, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_map(4, 4, {5.0, 16.0, -1.0, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_map(4, 4, {0.5, 16.0, 8.0, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(exponential_map(4, 4, {5.0, 0.0, 10.0, std::nullopt, false}),
                    std::invalid_argument);
    CHECK_THROWS_AS(exponential_map(4, 4, {5.0, 10.0, 0.0, std::nullopt, false}),
                    std::invalid_argument);
    CHECK_THROWS_AS(gaussian_map(0, 4, {}), std::invalid_argument);
}

TEST_CASE("WeightMap rejects non-positive or non-finite weights") {
    CHECK_THROWS_AS(WeightMap(2, 1, {1.0, 0.0}, WeightKind::Custom), std::invalid_argument);
    CHECK_THROWS_AS(WeightMap(2, 1, {1.0, -2.0}, WeightKind::Custom), std::invalid_argument);
    CHECK_THROWS_AS(WeightMap(2, 1, {1.0, std::nan("")}, WeightKind::Custom),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightMap(2, 1, {1.0}, WeightKind::Custom), std::invalid_argument);
}

TEST_CASE("MapSpec::from_name covers the experimental grid") {
    CHECK(MapSpec::from_name("uniform").kind == WeightKind::Uniform);

    const MapSpec ge = MapSpec::from_name("gauss-ellipse");
    CHECK(std::get<GaussianParams>(ge.params).sigma_x == 16.0);
    CHECK(std::get<GaussianParams>(ge.params).sigma_y == 8.0);

    const MapSpec gc = MapSpec::from_name("gauss-circle");
    CHECK(std::get<GaussianParams>(gc.params).sigma_x == 8.0);
    CHECK(std::get<GaussianParams>(gc.params).sigma_y == 8.0);

    const MapSpec ex = MapSpec::from_name("exp");
    CHECK(std::get<ExponentialParams>(ex.params).b == 10.0);
    CHECK(std::get<ExponentialParams>(ex.params).c == 10.0);
    CHECK_FALSE(std::get<ExponentialParams>(ex.params).literal_abs_sum);

    CHECK_THROWS_AS(MapSpec::from_name("gaussian-ellipse"), std::invalid_argument);
}
