#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fcgtrack/appearance.hpp"
#include "fcgtrack/config.hpp"
#include "fcgtrack/geometry.hpp"
#include "fcgtrack/motion.hpp"

namespace fcgtrack {

struct Detection {
    int frame = 0;
    BBox box;
    double confidence = 0.0;
    Embedding embedding;
    int source_index = 0;  // 0-based data row in the detection file
};

/// Time-ordered run of detections for one tentative identity, with the
/// appearance and motion summaries built from them.
class Tracklet {
public:
    /// Sorts by frame; throws std::invalid_argument on an empty list or two
    /// detections in the same frame.
    Tracklet(int id, std::vector<Detection> detections, const TrackerConfig& config);

    int id() const { return id_; }
    void set_id(int id) { id_ = id; }

    int start_frame() const { return detections_.front().frame; }
    int end_frame() const { return detections_.back().frame; }
    std::size_t size() const { return detections_.size(); }

    const std::vector<Detection>& detections() const { return detections_; }
    const AppearanceState& appearance() const { return appearance_; }
    const MotionState& motion() const { return motion_; }

    Embedding representative() const { return appearance_.representative(); }

private:
    int id_;
    std::vector<Detection> detections_;
    AppearanceState appearance_;
    MotionState motion_;
};

/// Concatenates two tracklets and rebuilds both summaries from the union
/// (dynamic appearance replays the EMA over the merged history).
Tracklet merge_tracklets(const Tracklet& a, const Tracklet& b, const TrackerConfig& config);

/// Stage 1. `detections` are one window's worth; detections in consecutive
/// frames are linked by gated minimum-cost assignment on cosine distance
/// between their embeddings. Gaps are never bridged. Ids start at first_id
/// and follow creation order.
std::vector<Tracklet> form_lifted_frames(std::span<const Detection> detections,
                                         const TrackerConfig& config, int first_id = 1);

/// Cached inputs of the stage-2 pair distance.
struct TrackletSummary {
    int start_frame = 0;
    int end_frame = 0;
    BBox first_box;
    std::vector<MotionSample> motion;
    Embedding appearance;
};

TrackletSummary summarize(const Tracklet& t);

/// Stage-2 distance: nullopt (infeasible) when the frame spans intersect;
/// otherwise lambda_C * cosine distance of the representatives, where the
/// earlier tracklet is extrapolated across the gap and compared with the
/// later tracklet's first box.
std::optional<double> tracklet_distance(const Tracklet& a, const Tracklet& b,
                                        const TrackerConfig& config);
std::optional<double> tracklet_distance(const TrackletSummary& a, const TrackletSummary& b,
                                        const TrackerConfig& config);

/// Symmetric n x n pair distances, +infinity for infeasible pairs and on the
/// diagonal.
std::vector<double> tracklet_distance_matrix(std::span<const Tracklet> tracklets,
                                             const TrackerConfig& config);

struct MergeStep {
    int first_id = 0;   // smallest tracklet id in each merged cluster
    int second_id = 0;
    double distance = 0.0;
};

struct ClusteringResult {
    std::vector<Tracklet> trajectories;
    std::vector<MergeStep> merges;
};

/// Stage 2: average-linkage (UPGMA) agglomeration over the pair distances.
/// A cluster pair is infeasible if any member pair is. Merging stops when
/// the best feasible distance is not below config.merge_cutoff. Ties go to
/// the lowest (id, id) pair. Output keeps the smallest member id.
ClusteringResult upgma_cluster(std::vector<Tracklet> tracklets, const TrackerConfig& config);
std::vector<Tracklet> upgma_merge(std::vector<Tracklet> tracklets, const TrackerConfig& config);

/// Whole offline pipeline for one sequence. Output trajectories are numbered
/// 1..K by (start frame, first source index).
std::vector<Tracklet> track_sequence(std::vector<Detection> detections, const TrackerConfig& config);

/// Splits frame-sorted detections into consecutive blocks of window_len
/// frames counted from the first frame present.
std::vector<std::span<const Detection>> split_windows(std::span<const Detection> sorted,
                                                      int window_len);

}  // namespace fcgtrack
