#include "fcgtrack/motion.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace fcgtrack {

Velocity average_velocity(std::span<const MotionSample> samples, int window) {
    if (samples.empty()) throw std::invalid_argument("average_velocity of an empty trajectory");
    if (window < 1) throw std::invalid_argument("velocity window must be positive");
    if (samples.size() == 1) return Velocity{0.0, 0.0, 0.0, 0.0, 0, true};

    const MotionSample& last = samples.back();
    const long long target = static_cast<long long>(last.frame) - window;
    std::size_t ref = 0;
    long long best_gap = -1;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const long long gap = std::llabs(samples[i].frame - target);
        // Frames increase, so on equal gaps the earlier sample is kept.
        if (best_gap < 0 || gap < best_gap) {
            ref = i;
            best_gap = gap;
        }
    }
    const MotionSample& from = samples[ref];
    const int span = last.frame - from.frame;
    const double dt = span;
    const BBox& a = from.box;
    const BBox& b = last.box;
    return Velocity{(b.center_x() - a.center_x()) / dt, (b.center_y() - a.center_y()) / dt,
                    (b.width - a.width) / dt, (b.height - a.height) / dt, span, false};
}

BBox predict(std::span<const MotionSample> samples, int window, int frames_ahead,
             bool freeze_size) {
    if (samples.empty()) throw std::invalid_argument("predict on an empty trajectory");
    const BBox& last = samples.back().box;
    if (frames_ahead == 0) return last;
    const Velocity v = average_velocity(samples, window);
    const double p = frames_ahead;
    const double w = freeze_size ? last.width : last.width + v.vw * p;
    const double h = freeze_size ? last.height : last.height + v.vh * p;
    return BBox::from_center(last.center_x() + v.vx * p, last.center_y() + v.vy * p, w, h);
}

MotionState::MotionState(int window) : window_(window) {
    if (window < 2) throw std::invalid_argument("velocity window N must be at least 2");
}

void MotionState::observe(int frame, const BBox& box) {
    if (!samples_.empty() && frame <= samples_.back().frame) {
        throw std::invalid_argument("motion observations must have increasing frames");
    }
    samples_.push_back({frame, box});
}

}  // namespace fcgtrack
