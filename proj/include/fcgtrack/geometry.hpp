#pragma once

#include <string_view>

namespace fcgtrack {

/// Axis-aligned box in continuous pixel coordinates, (left, top, width, height)
/// as in MOT Challenge files. Width and height are never negative.
struct BBox {
    double left = 0.0;
    double top = 0.0;
    double width = 0.0;
    double height = 0.0;

    static BBox from_center(double cx, double cy, double w, double h);

    double right() const { return left + width; }
    double bottom() const { return top + height; }
    double center_x() const { return left + 0.5 * width; }
    double center_y() const { return top + 0.5 * height; }
    double area() const { return width * height; }
    double diagonal() const;
    bool valid() const;

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// A metric value plus a flag raised when the inputs were degenerate
/// (zero-area enclosing box, zero-length modulation ratio).
struct SpatialScore {
    double value = 0.0;
    bool degenerate = false;
};

/// Per-box length used for the ratio that modulates GIoU.
enum class LengthMode { kDiagonal, kWidth, kHeight, kNone };

/// Spatial distance used by stage-2 association. kIou is the MOT_FCG
/// compatibility switch (1 - IoU); the rest are 1 - r * GIoU with r taken
/// from the matching LengthMode.
enum class SpatialMode { kIou, kGiou, kWgiou, kHgiou, kDgiou };

std::string_view to_string(SpatialMode mode);
SpatialMode parse_spatial_mode(std::string_view name);

double intersection_area(const BBox& a, const BBox& b);
BBox enclosing_box(const BBox& a, const BBox& b);

/// Intersection over union; 0 when the union is empty.
double iou(const BBox& a, const BBox& b);

/// Generalized IoU in [-1, 1]. A zero-area enclosing box gives 0, flagged.
SpatialScore giou_checked(const BBox& a, const BBox& b);
inline double giou(const BBox& a, const BBox& b) { return giou_checked(a, b).value; }

/// min(l_a, l_b) / max(l_a, l_b) for the chosen per-box length; 1 for kNone
/// and for two zero-length boxes (flagged).
SpatialScore length_ratio(const BBox& a, const BBox& b, LengthMode mode);

/// Distance 1 - r * GIoU(a, b) in [0, 2].
SpatialScore modulated_giou_checked(const BBox& a, const BBox& b, LengthMode mode);
inline double modulated_giou(const BBox& a, const BBox& b, LengthMode mode) {
    return modulated_giou_checked(a, b, mode).value;
}

/// Dispatches on SpatialMode; kIou yields 1 - IoU in [0, 1].
double spatial_distance(const BBox& a, const BBox& b, SpatialMode mode);

/// lambda = min(1, d / 2 + off).
double spatial_modulation(double distance, double off);

}  // namespace fcgtrack
