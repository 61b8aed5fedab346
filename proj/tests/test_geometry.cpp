#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fcgtrack/geometry.hpp"
#include "oracles.hpp"

using fcgtrack::BBox;
using fcgtrack::LengthMode;
using fcgtrack::SpatialMode;

namespace {

constexpr double kExact = 1e-9;

BBox random_lattice_box(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pos(0, 6 * 32);
    std::uniform_int_distribution<int> size(1, 3 * 32);
    return {pos(rng) * oracle::kLattice, pos(rng) * oracle::kLattice, size(rng) * oracle::kLattice,
            size(rng) * oracle::kLattice};
}

BBox random_box(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-50.0, 50.0);
    std::uniform_real_distribution<double> size(0.5, 40.0);
    return {pos(rng), pos(rng), size(rng), size(rng)};
}

constexpr LengthMode kLengthModes[] = {LengthMode::kDiagonal, LengthMode::kWidth, LengthMode::kHeight,
                                       LengthMode::kNone};

}  // namespace

TEST(Iou, HandExamples) {
    EXPECT_NEAR(fcgtrack::iou({0, 0, 2, 2}, {0, 0, 2, 2}), 1.0, kExact);
    EXPECT_NEAR(fcgtrack::iou({0, 0, 2, 2}, {10, 10, 2, 2}), 0.0, kExact);
    EXPECT_NEAR(fcgtrack::iou({0, 0, 2, 2}, {1, 1, 2, 2}), 1.0 / 7.0, kExact);
}

TEST(Iou, ZeroUnionIsZero) {
    EXPECT_EQ(fcgtrack::iou({3, 3, 0, 0}, {3, 3, 0, 0}), 0.0);
}

TEST(Giou, HandExamples) {
    EXPECT_NEAR(fcgtrack::giou({0, 0, 2, 2}, {0, 0, 2, 2}), 1.0, kExact);
    EXPECT_NEAR(fcgtrack::giou({0, 0, 2, 2}, {1, 1, 2, 2}), 1.0 / 7.0 - 2.0 / 9.0, kExact);
    EXPECT_NEAR(fcgtrack::giou({0, 0, 1, 1}, {1e6, 0, 1, 1}), -1.0, 1e-5);
}

TEST(Giou, DegenerateHullIsFlagged) {
    const auto s = fcgtrack::giou_checked({5, 5, 0, 0}, {5, 5, 0, 0});
    EXPECT_TRUE(s.degenerate);
    EXPECT_EQ(s.value, 0.0);
}

TEST(ModulatedGiou, HandExamples) {
    EXPECT_NEAR(fcgtrack::modulated_giou({0, 0, 2, 2}, {0, 0, 2, 2}, LengthMode::kDiagonal), 0.0, kExact);
    EXPECT_NEAR(fcgtrack::modulated_giou({0, 0, 2, 2}, {1, 1, 2, 2}, LengthMode::kDiagonal), 68.0 / 63.0, kExact);
    EXPECT_NEAR(fcgtrack::modulated_giou({0, 0, 4, 2}, {0, 0, 2, 2}, LengthMode::kWidth), 0.75, kExact);
}

TEST(ModulatedGiou, ZeroLengthUsesUnitRatio) {
    const auto s = fcgtrack::modulated_giou_checked({0, 0, 0, 2}, {1, 0, 0, 2}, LengthMode::kWidth);
    EXPECT_TRUE(s.degenerate);
    EXPECT_NEAR(s.value, 1.0 - fcgtrack::giou({0, 0, 0, 2}, {1, 0, 0, 2}), kExact);
}

TEST(SpatialModulation, HandExamples) {
    EXPECT_NEAR(fcgtrack::spatial_modulation(0.0, 0.525), 0.525, kExact);
    EXPECT_NEAR(fcgtrack::spatial_modulation(2.0, 0.1), 1.0, kExact);
    EXPECT_NEAR(fcgtrack::spatial_modulation(1.0, 0.1), 0.6, kExact);
}

TEST(SpatialModulation, MonotoneAndSaturating) {
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double v = fcgtrack::spatial_modulation(i / 100.0, 0.3);
        EXPECT_GE(v, prev);
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
}

TEST(SpatialDistance, ModesMapToFormulas) {
    const BBox a{0, 0, 4, 2}, b{1, 0, 2, 3};
    EXPECT_DOUBLE_EQ(fcgtrack::spatial_distance(a, b, SpatialMode::kIou), 1.0 - fcgtrack::iou(a, b));
    EXPECT_DOUBLE_EQ(fcgtrack::spatial_distance(a, b, SpatialMode::kGiou), 1.0 - fcgtrack::giou(a, b));
    EXPECT_DOUBLE_EQ(fcgtrack::spatial_distance(a, b, SpatialMode::kWgiou),
                     fcgtrack::modulated_giou(a, b, LengthMode::kWidth));
    EXPECT_DOUBLE_EQ(fcgtrack::spatial_distance(a, b, SpatialMode::kHgiou),
                     fcgtrack::modulated_giou(a, b, LengthMode::kHeight));
    EXPECT_DOUBLE_EQ(fcgtrack::spatial_distance(a, b, SpatialMode::kDgiou),
                     fcgtrack::modulated_giou(a, b, LengthMode::kDiagonal));
}

TEST(SpatialDistance, ModeNamesRoundTrip) {
    for (auto m : {SpatialMode::kIou, SpatialMode::kGiou, SpatialMode::kWgiou, SpatialMode::kHgiou,
                   SpatialMode::kDgiou}) {
        EXPECT_EQ(fcgtrack::parse_spatial_mode(fcgtrack::to_string(m)), m);
    }
    EXPECT_THROW(fcgtrack::parse_spatial_mode("ciou"), std::invalid_argument);
}

TEST(RasterOracle, MatchesClosedForms) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const BBox a = random_lattice_box(rng), b = random_lattice_box(rng);
        const auto r = oracle::raster_areas(a, b);
        EXPECT_NEAR(fcgtrack::iou(a, b), oracle::raster_iou(r), 1e-3);
        EXPECT_NEAR(fcgtrack::giou(a, b), oracle::raster_giou(r), 1e-3);
        for (LengthMode m : kLengthModes) {
            const double ratio = fcgtrack::length_ratio(a, b, m).value;
            EXPECT_NEAR(fcgtrack::modulated_giou(a, b, m), 1.0 - ratio * oracle::raster_giou(r), 1e-3);
        }
    }
}

TEST(GeometryProperties, SymmetryAndBounds) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 2000; ++k) {
        const BBox a = random_box(rng), b = random_box(rng);
        const double i = fcgtrack::iou(a, b), g = fcgtrack::giou(a, b);
        EXPECT_DOUBLE_EQ(i, fcgtrack::iou(b, a));
        EXPECT_DOUBLE_EQ(g, fcgtrack::giou(b, a));
        EXPECT_GE(i, 0.0);
        EXPECT_LE(i, 1.0);
        EXPECT_GE(g, -1.0);
        EXPECT_LE(g, i + 1e-12);
        for (LengthMode m : kLengthModes) {
            const double d = fcgtrack::modulated_giou(a, b, m);
            EXPECT_DOUBLE_EQ(d, fcgtrack::modulated_giou(b, a, m));
            EXPECT_GE(d, 0.0);
            EXPECT_LE(d, 2.0);
            EXPECT_NEAR(fcgtrack::modulated_giou(a, a, m), 0.0, 1e-12);
        }
    }
}

TEST(GeometryProperties, TranslationAwayNeverIncreasesGiou) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> step(0.0, 5.0);
    for (int k = 0; k < 300; ++k) {
        const BBox a = random_box(rng);
        BBox b = random_box(rng);
        // Move b's centre radially away from a's centre along one axis-aligned
        // direction per component sign.
        const double dx = b.center_x() - a.center_x(), dy = b.center_y() - a.center_y();
        const double sx = dx >= 0 ? 1.0 : -1.0, sy = dy >= 0 ? 1.0 : -1.0;
        const double th = angle(rng);
        const double ux = sx * std::abs(std::cos(th)), uy = sy * std::abs(std::sin(th));
        double prev = fcgtrack::giou(a, b);
        for (int s = 0; s < 20; ++s) {
            const double t = step(rng);
            b.left += ux * t;
            b.top += uy * t;
            const double g = fcgtrack::giou(a, b);
            EXPECT_LE(g, prev + 1e-12);
            prev = g;
        }
    }
}

TEST(GeometryProperties, RatioNeutralForEqualShapes) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 200; ++k) {
        const BBox a = random_box(rng);
        BBox b = random_box(rng);
        b.width = a.width;
        b.height = a.height;
        const double ref = fcgtrack::modulated_giou(a, b, LengthMode::kNone);
        for (LengthMode m : kLengthModes) EXPECT_DOUBLE_EQ(fcgtrack::modulated_giou(a, b, m), ref);
    }
}

TEST(GeometryProperties, ShrinkingNestedBoxIncreasesDiagonalDistance) {
    const BBox a{0, 0, 10, 6};
    double prev_ratio = 2.0, prev_d = -1.0;
    for (int k = 0; k < 9; ++k) {
        const double s = 1.0 - 0.1 * k;  // b shrinks inside a, GIoU = s^2 > 0
        const BBox b{0, 0, 10 * s, 6 * s};
        const double r = fcgtrack::length_ratio(a, b, LengthMode::kDiagonal).value;
        const double d = fcgtrack::modulated_giou(a, b, LengthMode::kDiagonal);
        ASSERT_GT(fcgtrack::giou(a, b), 0.0);
        EXPECT_LT(r, prev_ratio);
        EXPECT_GT(d, prev_d);
        prev_ratio = r;
        prev_d = d;
    }
}
