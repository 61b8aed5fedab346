#include "fcgtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fcgtrack {

BBox BBox::from_center(double cx, double cy, double w, double h) {
    w = std::max(w, 0.0);
    h = std::max(h, 0.0);
    return BBox{cx - 0.5 * w, cy - 0.5 * h, w, h};
}

double BBox::diagonal() const { return std::hypot(width, height); }

bool BBox::valid() const {
    return std::isfinite(left) && std::isfinite(top) && std::isfinite(width) &&
           std::isfinite(height) && width >= 0.0 && height >= 0.0;
}

std::string_view to_string(SpatialMode mode) {
    switch (mode) {
        case SpatialMode::kIou: return "iou";
        case SpatialMode::kGiou: return "giou";
        case SpatialMode::kWgiou: return "wgiou";
        case SpatialMode::kHgiou: return "hgiou";
        case SpatialMode::kDgiou: return "dgiou";
    }
    return "?";
}

SpatialMode parse_spatial_mode(std::string_view name) {
    for (auto m : {SpatialMode::kIou, SpatialMode::kGiou, SpatialMode::kWgiou, SpatialMode::kHgiou,
                   SpatialMode::kDgiou}) {
        if (name == to_string(m)) return m;
    }
    throw std::invalid_argument("unknown spatial mode '" + std::string(name) +
                                "' (expected iou|giou|wgiou|hgiou|dgiou)");
}

double intersection_area(const BBox& a, const BBox& b) {
    const double w = std::min(a.right(), b.right()) - std::max(a.left, b.left);
    const double h = std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

BBox enclosing_box(const BBox& a, const BBox& b) {
    const double l = std::min(a.left, b.left);
    const double t = std::min(a.top, b.top);
    return BBox{l, t, std::max(a.right(), b.right()) - l, std::max(a.bottom(), b.bottom()) - t};
}

double iou(const BBox& a, const BBox& b) {
    const double inter = intersection_area(a, b);
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

SpatialScore giou_checked(const BBox& a, const BBox& b) {
    const double hull = enclosing_box(a, b).area();
    if (hull <= 0.0) return {0.0, true};
    const double inter = intersection_area(a, b);
    const double uni = a.area() + b.area() - inter;
    const double overlap = uni > 0.0 ? inter / uni : 0.0;
    return {std::clamp(overlap - (hull - uni) / hull, -1.0, 1.0), false};
}

namespace {

double box_length(const BBox& box, LengthMode mode) {
    switch (mode) {
        case LengthMode::kDiagonal: return box.diagonal();
        case LengthMode::kWidth: return box.width;
        case LengthMode::kHeight: return box.height;
        case LengthMode::kNone: break;
    }
    return 1.0;
}

}  // namespace

SpatialScore length_ratio(const BBox& a, const BBox& b, LengthMode mode) {
    if (mode == LengthMode::kNone) return {1.0, false};
    const double la = box_length(a, mode);
    const double lb = box_length(b, mode);
    const double hi = std::max(la, lb);
    if (hi <= 0.0) return {1.0, true};
    return {std::min(la, lb) / hi, false};
}

SpatialScore modulated_giou_checked(const BBox& a, const BBox& b, LengthMode mode) {
    const SpatialScore g = giou_checked(a, b);
    const SpatialScore r = length_ratio(a, b, mode);
    return {std::clamp(1.0 - r.value * g.value, 0.0, 2.0), g.degenerate || r.degenerate};
}

double spatial_distance(const BBox& a, const BBox& b, SpatialMode mode) {
    switch (mode) {
        case SpatialMode::kIou: return 1.0 - iou(a, b);
        case SpatialMode::kGiou: return modulated_giou(a, b, LengthMode::kNone);
        case SpatialMode::kWgiou: return modulated_giou(a, b, LengthMode::kWidth);
        case SpatialMode::kHgiou: return modulated_giou(a, b, LengthMode::kHeight);
        case SpatialMode::kDgiou: return modulated_giou(a, b, LengthMode::kDiagonal);
    }
    return 1.0;
}

double spatial_modulation(double distance, double off) {
    return std::min(1.0, 0.5 * distance + off);
}

}  // namespace fcgtrack
