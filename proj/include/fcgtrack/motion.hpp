#pragma once

#include <span>
#include <vector>

#include "fcgtrack/geometry.hpp"

namespace fcgtrack {

struct MotionSample {
    int frame = 0;
    BBox box;
};

/// Per-frame rates of center and size.
struct Velocity {
    double vx = 0.0;
    double vy = 0.0;
    double vw = 0.0;
    double vh = 0.0;
    int span = 0;                 // frames between the two samples used
    bool low_confidence = false;  // single observation, velocity forced to zero
};

/// Average constant velocity over the last `window` frames:
///   v = (x_t - x_ref) / (t - ref)
/// where ref is the sample nearest to frame t - window (earlier on ties).
/// For a gapless trajectory of at least window + 1 samples this is
/// (x_t - x_{t-N}) / N; shorter trajectories use their full span.
/// `samples` must be non-empty with strictly increasing frames.
Velocity average_velocity(std::span<const MotionSample> samples, int window);

/// Linear extrapolation `frames_ahead` frames past the last sample (negative
/// values extrapolate backwards). Sizes are floored at zero.
BBox predict(std::span<const MotionSample> samples, int window, int frames_ahead,
             bool freeze_size = false);

class MotionState {
public:
    explicit MotionState(int window = 9);

    /// Appends an observation; throws std::invalid_argument unless frame is
    /// past the last one.
    void observe(int frame, const BBox& box);

    int window() const { return window_; }
    bool empty() const { return samples_.empty(); }
    std::span<const MotionSample> samples() const { return samples_; }
    const MotionSample& last() const { return samples_.back(); }
    const MotionSample& first() const { return samples_.front(); }

    Velocity velocity() const { return average_velocity(samples_, window_); }
    BBox predict(int frames_ahead, bool freeze_size = false) const {
        return fcgtrack::predict(samples_, window_, frames_ahead, freeze_size);
    }

private:
    int window_;
    std::vector<MotionSample> samples_;
};

}  // namespace fcgtrack
