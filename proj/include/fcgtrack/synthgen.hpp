#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fcgtrack/kv_file.hpp"
#include "fcgtrack/mot_io.hpp"

namespace fcgtrack {

enum class MotionPattern { kLinear, kSinusoidal };

/// drop: no detection for the target in the window.
/// corrupt: detection kept, embedding pulled toward the nearest other target
/// and confidence placed just above the detector threshold.
enum class OcclusionMode { kDrop, kCorrupt };

struct Occlusion {
    int target = 0;  // 0-based
    int start_frame = 1;
    int end_frame = 1;
    OcclusionMode mode = OcclusionMode::kDrop;
};

struct ConfidenceModel {
    double base = 0.9;
    double visibility_penalty = 0.5;  // subtracted in proportion to occluded fraction
    double jitter = 0.03;             // gaussian sd
    double corrupt_margin = 0.05;     // corrupt confidences land in [sigma, sigma + margin)
};

struct Scenario {
    int n_targets = 5;
    int n_frames = 100;
    MotionPattern motion = MotionPattern::kLinear;
    double det_noise_px = 0.0;
    double embed_noise = 0.0;
    std::vector<Occlusion> occlusions;

    // Extra occlusions drawn from the seed.
    int random_occlusions = 0;
    int occlusion_min_len = 3;
    int occlusion_max_len = 10;
    double corrupt_fraction = 0.5;
    double corrupt_blend = 0.6;  // weight of the foreign prototype

    ConfidenceModel confidence;
    double sigma = 0.7;
    double appearance_similarity = 0.0;  // pairwise cosine of identity prototypes
    int embed_dim = 128;
    double image_width = 1920.0;
    double image_height = 1080.0;
    double max_speed = 2.0;  // px per frame
    double sin_amplitude = 40.0;
    double sin_period = 60.0;
    std::uint64_t seed = 1;

    /// Targets are placed one per 120x240 px cell.
    int layout_capacity() const;

    /// Throws std::invalid_argument, including when n_targets exceeds the
    /// layout capacity.
    void validate() const;
};

Scenario parse_scenario(const std::vector<KvEntry>& entries, const std::string& source = {});
Scenario read_scenario(const std::filesystem::path& path);
std::string format_scenario(const Scenario& scenario);

struct SyntheticData {
    std::vector<MotRow> ground_truth;  // 9 columns used: conf=1, class=1, visibility
    std::vector<MotRow> detections;    // id = -1, frame order
    std::vector<int> detection_truth;  // gt id behind each detection row
    EmbeddingTable embeddings;         // keyed by (frame, rank within frame)
    std::vector<std::vector<float>> prototypes;
};

/// Deterministic in the scenario (including its seed).
SyntheticData generate(const Scenario& scenario);

struct SyntheticFiles {
    std::filesystem::path ground_truth;
    std::filesystem::path detections;
    std::filesystem::path embeddings;
};

/// Writes gt.txt, det.txt and det.emb into `directory` (created if needed).
SyntheticFiles write_synthetic(const SyntheticData& data, const std::filesystem::path& directory);

}  // namespace fcgtrack
