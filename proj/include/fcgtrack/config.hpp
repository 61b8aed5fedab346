#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fcgtrack/appearance.hpp"
#include "fcgtrack/geometry.hpp"
#include "fcgtrack/kv_file.hpp"

namespace fcgtrack {

/// Every tracker hyperparameter. Defaults are the MOT17 preset.
struct TrackerConfig {
    int window_len = 6;            // stage-1 sliding window, frames
    double det_threshold = 0.7;    // ingest filter on detection confidence
    double ema_sigma = 0.7;        // confidence floor of the adaptive EMA
    double beta_f = 0.822;
    double off = 0.525;
    int velocity_window = 9;       // N, frames averaged by the velocity model
    AppearanceMode appearance = AppearanceMode::kDynamic;
    SpatialMode spatial = SpatialMode::kDgiou;
    double merge_cutoff = 0.5;     // UPGMA stops when no pair is below this
    double stage1_gate = 0.4;      // max cosine distance for adjacent-frame links
    bool freeze_size = false;      // extrapolate only the box center

    EmaParams ema() const { return {beta_f, ema_sigma}; }

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;

    friend bool operator==(const TrackerConfig&, const TrackerConfig&) = default;
};

/// Named presets: "mot17", "mot20", "dancetrack", and "baseline" (median
/// appearance, plain IoU, two-frame velocity).
TrackerConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

/// Overrides fields from key/value entries (keys as in to_kv_entries).
/// Unknown keys are a ParseError.
void apply_kv(TrackerConfig& config, const std::vector<KvEntry>& entries,
              const std::string& source = {});

/// Sets a single field by key; returns false for an unknown key.
bool set_config_value(TrackerConfig& config, std::string_view key, std::string_view value);

std::vector<std::pair<std::string, std::string>> to_kv_entries(const TrackerConfig& config);

}  // namespace fcgtrack
